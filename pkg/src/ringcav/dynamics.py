"""Linearized fluctuation dynamics: drift/diffusion, stability, covariance.

The fluctuation vector is ordered ``(dq, dp, dx, dy)`` with ``dq, dp`` the
relative mechanical quadratures and ``dx, dy`` the optical amplitude/phase
quadratures.  Vacuum quadrature variance is 1/2 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import HorizonTooShort, SingularSystem, UnstableDynamics
from .model import DerivedConstants, PhysicalParams, SteadyState

# Relative bound on the stationary residual ||A V + V A^T + D||_max.
LYAPUNOV_RESIDUAL_RTOL = 1e-9


@dataclass(frozen=True)
class DriftDiffusion:
    """Real drift matrix A and diagonal diffusion matrix D (both 4x4)."""

    drift: np.ndarray
    diffusion: np.ndarray


@dataclass(frozen=True)
class StabilityReport:
    """Routh-Hurwitz verdict plus the independent eigenvalue cross-check.

    ``char_coeffs`` are (a1, a2, a3, a4) of the monic characteristic
    polynomial ``s^4 + a1 s^3 + a2 s^2 + a3 s + a4`` of the drift matrix.
    ``routh_hurwitz`` and ``spectral_abscissa < 0`` must agree; they are
    computed through independent routes and a disagreement is a bug.
    """

    routh_hurwitz: bool
    spectral_abscissa: float
    char_coeffs: tuple[float, float, float, float]


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric 4x4 steady-state covariance matrix with 2x2 block views."""

    matrix: np.ndarray
    residual: float  # ||A V + V A^T + D||_max of the returned solution

    @property
    def mech_block(self) -> np.ndarray:
        return self.matrix[:2, :2]

    @property
    def optical_block(self) -> np.ndarray:
        return self.matrix[2:, 2:]

    @property
    def cross_block(self) -> np.ndarray:
        return self.matrix[:2, 2:]


def build_drift(
    ss: SteadyState,
    consts: DerivedConstants,
    params: PhysicalParams,
    relative_bath_factor: float = 1.0,
) -> DriftDiffusion:
    """Assemble the real drift and diffusion matrices at a working point.

    The drift matrix is the real form of the linearized Langevin equations,
    with the field amplitude split into real and imaginary parts::

        dq: [      0,     w_m,       0,      0 ]
        dp: [   -w_m, -gamma_m,  -G Re,  -G Im ]
        dx: [   G Im,        0,  -kappa, Delta ]
        dy: [  -G Re,        0,  -Delta, -kappa]

    with ``G = 2 g cos^2(theta/2)`` and ``Re/Im`` those of ``alpha``.

    ``relative_bath_factor`` scales the mechanical diffusion entry: the
    default 1 treats the relative-coordinate bath as a single bath of the
    stated occupancy; 2 accounts for the two mirrors' independent baths
    adding their noise powers.
    """
    w_m = params.mech_freq
    kappa = params.cavity_decay
    gamma = consts.mech_damping
    delta = ss.detuning
    g2 = 2.0 * consts.coupling * consts.coupling_factor
    a_re = ss.alpha.real
    a_im = ss.alpha.imag

    drift = np.array(
        [
            [0.0, w_m, 0.0, 0.0],
            [-w_m, -gamma, -g2 * a_re, -g2 * a_im],
            [g2 * a_im, 0.0, -kappa, delta],
            [-g2 * a_re, 0.0, -delta, -kappa],
        ]
    )
    diffusion = np.diag(
        [
            0.0,
            relative_bath_factor * gamma * (2.0 * consts.thermal_occupancy + 1.0),
            kappa,
            kappa,
        ]
    )
    return DriftDiffusion(drift=drift, diffusion=diffusion)


def _characteristic_coefficients(a: np.ndarray) -> tuple[float, float, float, float]:
    """Coefficients (a1..a4) of det(sI - A) via the Faddeev-LeVerrier
    trace recursion -- no eigendecomposition involved, so the result is
    independent of the spectral route used for the abscissa."""
    p1 = np.trace(a)
    a2_ = a @ a
    p2 = np.trace(a2_)
    a3_ = a2_ @ a
    p3 = np.trace(a3_)
    p4 = np.trace(a3_ @ a)
    e1 = p1
    e2 = (e1 * p1 - p2) / 2.0
    e3 = (e2 * p1 - e1 * p2 + p3) / 3.0
    e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0
    # det(sI - A) = s^4 - e1 s^3 + e2 s^2 - e3 s + e4
    return (-e1, e2, -e3, e4)


def check_stability(dd: DriftDiffusion) -> StabilityReport:
    """Classify stability of the drift matrix.

    The Routh-Hurwitz conditions for the quartic are ``a1 > 0, a3 > 0,
    a4 > 0`` and ``a1 a2 a3 > a3^2 + a1^2 a4``; the spectral abscissa is
    computed separately from the eigenvalues as a cross-check.
    """
    a1, a2, a3, a4 = _characteristic_coefficients(dd.drift)
    rh = a1 > 0.0 and a3 > 0.0 and a4 > 0.0 and a1 * a2 * a3 > a3**2 + a1**2 * a4
    abscissa = float(np.linalg.eigvals(dd.drift).real.max())
    return StabilityReport(
        routh_hurwitz=rh,
        spectral_abscissa=abscissa,
        char_coeffs=(a1, a2, a3, a4),
    )


def solve_lyapunov(dd: DriftDiffusion) -> CovarianceMatrix:
    """Solve ``A V + V A^T = -D`` for the stationary covariance matrix.

    The 4x4 problem is vectorized into the dense 16x16 linear system
    ``(I (x) A + A (x) I) vec(V) = -vec(D)`` and solved directly; the
    result is symmetrized and its residual checked against
    ``LYAPUNOV_RESIDUAL_RTOL * ||D||_max``.

    Raises
    ------
    UnstableDynamics
        If the Routh-Hurwitz conditions fail (no stationary state).
    SingularSystem
        If a pair of drift eigenvalues sums to (numerically) zero, or the
        solved residual exceeds its bound: marginal dynamics have no
        stationary covariance and are reported, never regularized.
    """
    a = dd.drift
    d = dd.diffusion
    if not check_stability(dd).routh_hurwitz:
        raise UnstableDynamics("drift matrix is not strictly stable")

    eigs = np.linalg.eigvals(a)
    pair_sums = np.abs(eigs[:, None] + eigs[None, :])
    scale = np.abs(eigs).max()
    if pair_sums.min() <= 1e-13 * scale:
        raise SingularSystem("drift eigenvalue pair sums to zero; dynamics are marginal")

    eye = np.eye(4)
    system = np.kron(eye, a) + np.kron(a, eye)
    v = np.linalg.solve(system, -d.flatten(order="F")).reshape(4, 4, order="F")
    v = 0.5 * (v + v.T)

    residual = float(np.abs(a @ v + v @ a.T + d).max())
    bound = LYAPUNOV_RESIDUAL_RTOL * float(np.abs(d).max())
    if residual > bound:
        raise SingularSystem(
            f"Lyapunov residual {residual:.3e} exceeds bound {bound:.3e}; "
            "dynamics are too close to marginal"
        )
    return CovarianceMatrix(matrix=v, residual=residual)


def stationarity_horizon(dd: DriftDiffusion, decay_factor: float = 40.0) -> float:
    """Integration horizon ``decay_factor / |spectral abscissa|``.

    The covariance relaxes with rates given by pairwise eigenvalue sums of
    the drift, so the slowest transient decays like twice the abscissa;
    the default factor leaves it at ~1e-35 of its initial size.
    """
    report = check_stability(dd)
    if not report.routh_hurwitz:
        raise UnstableDynamics("no stationary state to integrate towards")
    return decay_factor / abs(report.spectral_abscissa)


def integrate_covariance_ode(
    dd: DriftDiffusion,
    horizon: float,
    tol: float = 1e-8,
    rtol: float = 1e-11,
    atol: float = 1e-12,
) -> CovarianceMatrix:
    """Integrate ``dV/dt = A V + V A^T + D`` from ``V(0) = 0`` to ``horizon``.

    This is the independent oracle for :func:`solve_lyapunov`: an explicit
    adaptive Runge-Kutta integration of the moment equations, sharing no
    code with the algebraic solve.

    Raises
    ------
    HorizonTooShort
        If ``||dV/dt||_max`` at the end of the integration exceeds
        ``tol * ||D||_max`` (the natural rate scale), i.e. the dynamics
        have not yet settled.
    """
    a = dd.drift
    d = dd.diffusion

    def rhs(_t, y):
        v = y.reshape(4, 4)
        dv = a @ v + v @ a.T + d
        return dv.reshape(-1)

    sol = solve_ivp(
        rhs,
        (0.0, horizon),
        np.zeros(16),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=False,
    )
    if not sol.success:
        raise HorizonTooShort(f"covariance integration failed: {sol.message}")
    v = sol.y[:, -1].reshape(4, 4)
    v = 0.5 * (v + v.T)
    rate = float(np.abs(a @ v + v @ a.T + d).max())
    if rate > tol * float(np.abs(d).max()):
        raise HorizonTooShort(
            f"||dV/dt|| = {rate:.3e} at horizon {horizon:.3e} exceeds "
            f"tol {tol:.1e} * ||D||"
        )
    return CovarianceMatrix(matrix=v, residual=rate)
