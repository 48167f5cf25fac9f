"""Physical parameters, derived constants and the classical working point.

All quantities are SI with angular frequencies (rad/s) throughout; any
conversion from linear Hz happens at the configuration boundary, never here.
The model is a triangular ring cavity with one fixed input coupler and two
movable, perfectly reflecting mirrors.  The two mirrors enter only through
their relative coordinate, so the mechanics reduce to a single oscillator
coupled to the field with strength scaled by ``cos^2(theta/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NonPhysicalParameter

# CODATA fixed values.
HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J/K
C_LIGHT = 299792458.0  # m/s

# Below this quality factor the Markovian treatment of the mechanical bath
# is not defensible.
_MIN_QUALITY_FACTOR = 10.0


@dataclass(frozen=True)
class Effective:
    """Detuning given directly as the effective cavity detuning (rad/s)."""

    delta: float


@dataclass(frozen=True)
class Bare:
    """Detuning given as the bare cavity-laser detuning (rad/s).

    The effective detuning then follows from the radiation-pressure
    displacement of the mirrors and is found by solving a cubic in the
    intracavity photon number.
    """

    delta0: float


DetuningSpec = Effective | Bare


@dataclass(frozen=True)
class PhysicalParams:
    """Complete experimental description of the driven ring cavity.

    Parameters
    ----------
    arm_length : float
        Cavity arm length L (m).
    wavelength : float
        Drive laser wavelength (m).
    power : float
        Input laser power (W).  Zero is allowed (undriven cavity).
    mech_freq : float
        Mechanical angular frequency of each movable mirror (rad/s).
    quality_factor : float
        Mechanical quality factor, ``mech_freq / damping``.  Must be at
        least 10 for the Markovian bath treatment to hold.
    mass : float
        Effective mass of each movable mirror (kg).
    cavity_decay : float
        Total optical amplitude decay rate kappa (rad/s).
    temperature : float
        Mechanical bath temperature (K).  Zero is allowed.
    ring_angle : float
        Ring opening angle theta (rad), in [0, pi).  The radiation-pressure
        coupling is scaled by ``cos^2(theta/2)``; theta = 0 maximises it.
    detuning : Effective or Bare
        Cavity-laser detuning specification.  May be negative.
    """

    arm_length: float
    wavelength: float
    power: float
    mech_freq: float
    quality_factor: float
    mass: float
    cavity_decay: float
    temperature: float
    ring_angle: float = 0.0
    detuning: DetuningSpec = Effective(0.0)

    def __post_init__(self):
        strictly_positive = {
            "arm_length": self.arm_length,
            "wavelength": self.wavelength,
            "mech_freq": self.mech_freq,
            "quality_factor": self.quality_factor,
            "mass": self.mass,
            "cavity_decay": self.cavity_decay,
        }
        for name, value in strictly_positive.items():
            if not (value > 0.0) or not math.isfinite(value):
                raise NonPhysicalParameter(f"{name} must be strictly positive, got {value!r}")
        # power/temperature admit the exact zero limits (undriven cavity,
        # zero-temperature bath) the model is routinely evaluated at.
        for name, value in (("power", self.power), ("temperature", self.temperature)):
            if value < 0.0 or not math.isfinite(value):
                raise NonPhysicalParameter(f"{name} must be non-negative, got {value!r}")
        if not 0.0 <= self.ring_angle < math.pi:
            raise NonPhysicalParameter(
                f"ring_angle must lie in [0, pi), got {self.ring_angle!r}"
            )
        if self.quality_factor < _MIN_QUALITY_FACTOR:
            raise NonPhysicalParameter(
                f"quality_factor {self.quality_factor!r} < {_MIN_QUALITY_FACTOR}: "
                "the Markovian mechanical-bath assumption breaks down"
            )
        if not isinstance(self.detuning, (Effective, Bare)):
            raise NonPhysicalParameter(f"unsupported detuning spec {self.detuning!r}")
        if not math.isfinite(_detuning_value(self.detuning)):
            raise NonPhysicalParameter("detuning must be finite")

    def with_(self, **changes) -> "PhysicalParams":
        """Return a copy with the given fields replaced."""
        return replace(self, **changes)


def _detuning_value(spec: DetuningSpec) -> float:
    return spec.delta if isinstance(spec, Effective) else spec.delta0


@dataclass(frozen=True)
class DerivedConstants:
    """Constants derived from :class:`PhysicalParams`.

    ``coupling`` is the single-photon optomechanical rate
    ``(omega_c / L) * sqrt(hbar / (m * omega_m))`` and ``drive_amplitude``
    the input field amplitude ``sqrt(2 * kappa * P / (hbar * omega_L))``.
    The laser frequency in the drive amplitude is approximated by the
    cavity frequency; the detuning is at most a few mechanical frequencies
    (~1e6 rad/s) against an optical frequency of ~2e15 rad/s, so the
    relative error is below 1e-8.
    """

    cavity_freq: float  # omega_c, rad/s
    coupling: float  # g, rad/s
    drive_amplitude: float  # E, 1/s
    finesse: float
    mech_damping: float  # gamma_m, rad/s
    thermal_occupancy: float  # n_th
    coupling_factor: float  # cos^2(theta/2)


def thermal_occupancy(mech_freq: float, temperature: float) -> float:
    """Mean bath phonon number ``1 / (exp(hbar w / kB T) - 1)``.

    Evaluated through ``expm1`` so that the microkelvin regime neither
    overflows nor loses precision; below the representable threshold the
    occupancy is exactly zero.
    """
    if temperature <= 0.0:
        return 0.0
    x = HBAR * mech_freq / (K_B * temperature)
    if x > 700.0:  # exp would overflow; occupancy below ~1e-304
        return 0.0
    return 1.0 / math.expm1(x)


def derive_constants(params: PhysicalParams) -> DerivedConstants:
    """Compute all derived constants for a parameter set.

    Parameters
    ----------
    params : PhysicalParams
        Validated parameter set.

    Returns
    -------
    DerivedConstants
    """
    omega_c = 2.0 * math.pi * C_LIGHT / params.wavelength
    coupling = (omega_c / params.arm_length) * math.sqrt(
        HBAR / (params.mass * params.mech_freq)
    )
    drive_amplitude = math.sqrt(2.0 * params.cavity_decay * params.power / (HBAR * omega_c))
    finesse = math.pi * C_LIGHT / (params.cavity_decay * params.arm_length)
    mech_damping = params.mech_freq / params.quality_factor
    n_th = thermal_occupancy(params.mech_freq, params.temperature)
    coupling_factor = math.cos(params.ring_angle / 2.0) ** 2
    return DerivedConstants(
        cavity_freq=omega_c,
        coupling=coupling,
        drive_amplitude=drive_amplitude,
        finesse=finesse,
        mech_damping=mech_damping,
        thermal_occupancy=n_th,
        coupling_factor=coupling_factor,
    )


@dataclass(frozen=True)
class SteadyState:
    """Classical working point of the driven cavity.

    ``alpha`` is the intracavity field amplitude, ``position`` the static
    displacement of the relative mechanical coordinate (dimensionless
    oscillator units) and ``detuning`` the effective cavity detuning after
    the radiation-pressure shift.  ``branch_count`` reports how many real
    roots the steady-state cubic had (1, or 3 in the bistable regime); the
    returned branch is always the one continuously connected to the
    low-power solution.
    """

    alpha: complex
    position: float
    momentum: float
    detuning: float
    photon_number: float
    branch_count: int

    @property
    def bistable(self) -> bool:
        return self.branch_count > 1


def solve_steady_state(params: PhysicalParams, consts: DerivedConstants) -> SteadyState:
    """Solve the classical steady-state equations.

    With an effective detuning the field amplitude follows in closed form,
    ``alpha = E / (kappa + i Delta)``.  With a bare detuning the photon
    number ``n = |alpha|^2`` satisfies a real cubic obtained by substituting
    the radiation-pressure detuning shift into ``n (kappa^2 + Delta^2) = E^2``;
    among its real non-negative roots the smallest is returned, matching an
    adiabatic power ramp from the undriven cavity.

    Returns
    -------
    SteadyState

    Raises
    ------
    NoRealRoot
        Defensive only; a real cubic always has a real root.
    """
    kappa = params.cavity_decay
    g_eff = consts.coupling * consts.coupling_factor  # g cos^2(theta/2)
    e_amp = consts.drive_amplitude

    if isinstance(params.detuning, Effective):
        delta = params.detuning.delta
        alpha = e_amp / (kappa + 1j * delta)
        n_cav = abs(alpha) ** 2
        branch_count = 1
    else:
        delta0 = params.detuning.delta0
        # beta scales the detuning shift: Delta = Delta0 - beta * n
        beta = 2.0 * g_eff**2 / params.mech_freq
        # beta^2 n^3 - 2 Delta0 beta n^2 + (kappa^2 + Delta0^2) n - E^2 = 0
        coeffs = [beta**2, -2.0 * delta0 * beta, kappa**2 + delta0**2, -(e_amp**2)]
        roots = np.roots(coeffs)
        real = roots.real[np.abs(roots.imag) <= 1e-9 * np.abs(roots).max(initial=1.0)]
        candidates = sorted(n for n in real if n >= 0.0)
        if not candidates:
            from .errors import NoRealRoot

            raise NoRealRoot("steady-state cubic produced no real non-negative root")
        n_cav = _polish_photon_root(candidates[0], beta, delta0, kappa, e_amp)
        branch_count = len(candidates)
        delta = delta0 - beta * n_cav
        alpha = e_amp / (kappa + 1j * delta)

    position = -2.0 * g_eff * n_cav / params.mech_freq
    return SteadyState(
        alpha=alpha,
        position=position,
        momentum=0.0,
        detuning=delta,
        photon_number=n_cav,
        branch_count=branch_count,
    )


def _polish_photon_root(n: float, beta: float, delta0: float, kappa: float, e_amp: float) -> float:
    """Newton-polish a cubic root to full double precision.

    ``numpy.roots`` works through an eigenvalue problem whose relative
    accuracy (~1e-10) is not enough for the 1e-12 steady-state residual
    contract, so refine against f(n) = n (kappa^2 + (Delta0 - beta n)^2) - E^2.
    """
    if e_amp == 0.0:
        return 0.0
    for _ in range(4):
        delta = delta0 - beta * n
        f = n * (kappa**2 + delta**2) - e_amp**2
        df = kappa**2 + delta**2 - 2.0 * n * beta * delta
        if df == 0.0:
            break
        step = f / df
        n -= step
        if abs(step) <= 1e-16 * abs(n):
            break
    return max(n, 0.0)
