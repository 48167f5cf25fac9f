import math

import numpy as np
import pytest

from ringcav.figures import (
    ARM_LENGTH,
    CAVITY_DECAY,
    MECH_FREQ,
    QUALITY_FACTOR,
    WAVELENGTH,
)
from ringcav.model import Effective, PhysicalParams


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def reference_point(
    mass=50e-12,
    power=3.8e-3,
    temperature=3e-3,
    detuning_ratio=1.0,
    ring_angle=0.0,
) -> PhysicalParams:
    """Reference-device parameters with explicit working-point knobs."""
    return PhysicalParams(
        arm_length=ARM_LENGTH,
        wavelength=WAVELENGTH,
        power=power,
        mech_freq=MECH_FREQ,
        quality_factor=QUALITY_FACTOR,
        mass=mass,
        cavity_decay=CAVITY_DECAY,
        temperature=temperature,
        ring_angle=ring_angle,
        detuning=Effective(detuning_ratio * MECH_FREQ),
    )


def _rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, s], [-s, c]])


def _squeeze(r: float) -> np.ndarray:
    return np.diag([math.exp(r), math.exp(-r)])


def random_local_symplectic(rng: np.random.Generator, max_squeeze: float = 1.0) -> np.ndarray:
    """Random single-mode symplectic (rotation-squeeze-rotation)."""
    return (
        _rotation(rng.uniform(0.0, 2.0 * math.pi))
        @ _squeeze(rng.uniform(-max_squeeze, max_squeeze))
        @ _rotation(rng.uniform(0.0, 2.0 * math.pi))
    )


def random_local_pair(rng: np.random.Generator, max_squeeze: float = 1.0) -> np.ndarray:
    s = np.zeros((4, 4))
    s[:2, :2] = random_local_symplectic(rng, max_squeeze)
    s[2:, 2:] = random_local_symplectic(rng, max_squeeze)
    return s


def _two_mode_squeezer(r: float) -> np.ndarray:
    ch, sh = math.cosh(r), math.sinh(r)
    z = np.diag([1.0, -1.0])
    s = np.zeros((4, 4))
    s[:2, :2] = ch * np.eye(2)
    s[2:, 2:] = ch * np.eye(2)
    s[:2, 2:] = sh * z
    s[2:, :2] = sh * z
    return s


def random_physical_covariance(rng: np.random.Generator, hot: bool = False) -> np.ndarray:
    """Random physical two-mode covariance matrix (vacuum variance 1/2).

    Built as S diag(nu1, nu1, nu2, nu2) S^T with nu >= 1/2 and S a random
    symplectic composed of local operations and a two-mode squeezer, so
    physicality holds by construction.
    """
    scale = 50.0 if hot else 2.0
    nu1 = 0.5 + rng.exponential(scale)
    nu2 = 0.5 + rng.exponential(scale)
    d = np.diag([nu1, nu1, nu2, nu2])
    s = (
        random_local_pair(rng, max_squeeze=0.8)
        @ _two_mode_squeezer(rng.uniform(-1.2, 1.2))
        @ random_local_pair(rng, max_squeeze=0.8)
    )
    v = s @ d @ s.T
    return 0.5 * (v + v.T)
