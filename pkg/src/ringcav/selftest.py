"""Independent oracle cross-checks, runnable as ``ringcav selftest``.

Everything here deliberately re-derives results through routes that share
no code with the production path: symplectic eigenvalues come from an
eigendecomposition of ``i Omega V`` instead of the invariant formulas, the
stationary covariance from explicit time integration instead of the
algebraic solve, and stability from the spectral abscissa instead of the
Routh-Hurwitz coefficients.  The same helpers back the test suite.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .dynamics import (
    DriftDiffusion,
    build_drift,
    check_stability,
    integrate_covariance_ode,
    solve_lyapunov,
    stationarity_horizon,
)
from .measures import (
    correlation_report,
    pt_symplectic_eigenvalues,
    symplectic_eigenvalues,
    symplectic_invariants,
)
from .model import Effective, PhysicalParams, derive_constants, solve_steady_state

# Two-mode symplectic form in the (q1, p1, q2, p2) ordering.
OMEGA = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)

# Momentum flip of the second (optical) mode: partial transposition.
PT_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])


def symplectic_spectrum_oracle(v: np.ndarray) -> tuple[float, float]:
    """(nu_plus, nu_minus) from the eigenvalues of ``i Omega V``."""
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * OMEGA @ v)))
    return float(moduli[2:].mean()), float(moduli[:2].mean())


def pt_spectrum_oracle(v: np.ndarray) -> tuple[float, float]:
    """Partial-transpose symplectic eigenvalues via the momentum flip."""
    return symplectic_spectrum_oracle(PT_FLIP @ v @ PT_FLIP)


def tmsv_covariance(r: float) -> np.ndarray:
    """Two-mode squeezed vacuum covariance matrix (vacuum variance 1/2)."""
    c = 0.5 * math.cosh(2.0 * r)
    s = 0.5 * math.sinh(2.0 * r)
    return np.array(
        [
            [c, 0.0, s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, -s, 0.0, c],
        ]
    )


def draw_drift_diffusion(rng: np.random.Generator) -> DriftDiffusion:
    """Random drift/diffusion pair of the optomechanical form, scaled so
    the mechanical frequency is 1 (the pipeline is invariant under a
    common rescaling of all rates).  The damping ceiling keeps draws inside
    the Markovian-bath validity domain (quality factor >= 20): beyond it
    the delta-correlated mechanical noise admits stationary states that
    genuinely violate the uncertainty bound by O(gamma)."""
    kappa = math.exp(rng.uniform(math.log(0.05), math.log(3.0)))
    gamma = math.exp(rng.uniform(math.log(1e-4), math.log(0.05)))
    delta = rng.uniform(-1.5, 2.5)
    g_mag = math.exp(rng.uniform(math.log(0.01), math.log(1.2)))
    phase = rng.uniform(0.0, 2.0 * math.pi)
    g_re = g_mag * math.cos(phase)
    g_im = g_mag * math.sin(phase)
    n_th = math.exp(rng.uniform(math.log(0.01), math.log(100.0)))
    drift = np.array(
        [
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, -gamma, -g_re, -g_im],
            [g_im, 0.0, -kappa, delta],
            [-g_re, 0.0, -delta, -kappa],
        ]
    )
    diffusion = np.diag([0.0, gamma * (2.0 * n_th + 1.0), kappa, kappa])
    return DriftDiffusion(drift=drift, diffusion=diffusion)


def draw_stable_drift_diffusion(
    rng: np.random.Generator,
    max_stiffness: float | None = None,
) -> DriftDiffusion:
    """Random stable draw; ``max_stiffness`` bounds the ratio of the fastest
    eigenfrequency to the relaxation rate, keeping explicit time integration
    affordable when the draw feeds the ODE oracle."""
    while True:
        dd = draw_drift_diffusion(rng)
        report = check_stability(dd)
        if not report.routh_hurwitz:
            continue
        if max_stiffness is not None:
            radius = float(np.abs(np.linalg.eigvals(dd.drift)).max())
            if radius / abs(report.spectral_abscissa) > max_stiffness:
                continue
        return dd


def draw_params(rng: np.random.Generator, red_side_only: bool = False) -> PhysicalParams:
    """Random SI parameter set in the neighbourhood of the reference device."""
    mech_freq = 2.0 * math.pi * rng.uniform(0.2e6, 3e6)
    lo = 0.3 if red_side_only else -1.5
    return PhysicalParams(
        arm_length=rng.uniform(5e-3, 50e-3),
        wavelength=rng.uniform(500e-9, 1600e-9),
        power=rng.uniform(0.0, 20e-3),
        mech_freq=mech_freq,
        quality_factor=math.exp(rng.uniform(math.log(50.0), math.log(1e5))),
        mass=rng.uniform(10e-12, 500e-12),
        cavity_decay=2.0 * math.pi * rng.uniform(50e3, 800e3),
        temperature=rng.uniform(0.1e-3, 50e-3),
        ring_angle=rng.uniform(0.0, math.pi - 1e-6),
        detuning=Effective(rng.uniform(lo, 2.5) * mech_freq),
    )


def draw_stable_params(rng: np.random.Generator) -> PhysicalParams:
    while True:
        params = draw_params(rng, red_side_only=True)
        consts = derive_constants(params)
        ss = solve_steady_state(params, consts)
        if check_stability(build_drift(ss, consts, params)).routh_hurwitz:
            return params


def _agree(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


class _Suite:
    def __init__(self):
        self.results: list[tuple[str, bool, str]] = []

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.results.append((name, bool(ok), detail))

    @property
    def all_ok(self) -> bool:
        return all(ok for _, ok, _ in self.results)


def run_selftest(seed: int = 20260810, verbose: bool = True) -> int:
    """Run every cross-check; print one line per check; 0 when all pass."""
    rng = np.random.default_rng(seed)
    suite = _Suite()

    # Vacuum and two-mode squeezed fixtures against closed forms.
    vac = correlation_report(0.5 * np.eye(4))
    suite.check(
        "vacuum fixture",
        max(vac.log_negativity, vac.discord, vac.mutual_information) == 0.0
        and _agree(vac.nu_plus, 0.5, 1e-12)
        and _agree(vac.nu_minus, 0.5, 1e-12),
    )
    worst = 0.0
    for r in (0.1, 0.5, 1.0, 2.0):
        rep = correlation_report(tmsv_covariance(r))
        worst = max(
            worst,
            abs(rep.log_negativity - 2.0 * r),
            abs(rep.nu_tilde_minus - 0.5 * math.exp(-2.0 * r)),
        )
    suite.check("two-mode squeezed fixtures", worst < 1e-8, f"worst |err| = {worst:.2e}")

    # Routh-Hurwitz verdict vs spectral abscissa.
    draws, disagreements = 2000, 0
    for _ in range(draws):
        report = check_stability(draw_drift_diffusion(rng))
        if report.routh_hurwitz != (report.spectral_abscissa < 0.0):
            disagreements += 1
    suite.check(
        "routh-hurwitz vs spectral abscissa",
        disagreements == 0,
        f"{disagreements}/{draws} disagreements",
    )

    # Invariant-formula symplectic eigenvalues vs the eigendecomposition of
    # i Omega V, plus the determinant product rule.
    worst = 0.0
    for _ in range(500):
        dd = draw_stable_drift_diffusion(rng)
        v = solve_lyapunov(dd).matrix
        inv = symplectic_invariants(v)
        nu = symplectic_eigenvalues(inv)
        nu_o = symplectic_spectrum_oracle(v)
        pt = pt_symplectic_eigenvalues(inv)
        pt_o = pt_spectrum_oracle(v)
        scale = max(1.0, nu[0])
        worst = max(
            worst,
            abs(nu[0] - nu_o[0]) / scale,
            abs(nu[1] - nu_o[1]) / scale,
            abs(pt[0] - pt_o[0]) / scale,
            abs(pt[1] - pt_o[1]) / scale,
            abs(nu[0] * nu[1] - math.sqrt(max(inv.det_total, 0.0))) / scale**2,
        )
    suite.check("symplectic eigen-oracle", worst < 1e-10, f"worst err = {worst:.2e}")

    # Algebraic Lyapunov solution vs explicit time integration.
    worst = 0.0
    for _ in range(20):
        dd = draw_stable_drift_diffusion(rng, max_stiffness=100.0)
        v = solve_lyapunov(dd).matrix
        v_ode = integrate_covariance_ode(dd, stationarity_horizon(dd)).matrix
        worst = max(worst, float(np.abs(v - v_ode).max()))
    suite.check("lyapunov vs time integration", worst < 1e-6, f"worst |dV| = {worst:.2e}")

    # Classical working point residuals.
    worst = 0.0
    for _ in range(300):
        params = draw_params(rng)
        consts = derive_constants(params)
        ss = solve_steady_state(params, consts)
        resid = abs((1j * ss.detuning + params.cavity_decay) * ss.alpha - consts.drive_amplitude)
        worst = max(worst, resid / max(consts.drive_amplitude, 1.0))
    suite.check("steady-state residual", worst < 1e-12, f"worst rel = {worst:.2e}")

    # Rotating the field phase must not move any scalar measure.
    worst = 0.0
    for _ in range(100):
        params = draw_stable_params(rng)
        consts = derive_constants(params)
        ss = solve_steady_state(params, consts)
        rep = correlation_report(solve_lyapunov(build_drift(ss, consts, params)).matrix)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        rotated = dataclasses.replace(ss, alpha=ss.alpha * complex(math.cos(phase), math.sin(phase)))
        rep2 = correlation_report(solve_lyapunov(build_drift(rotated, consts, params)).matrix)
        worst = max(
            worst,
            abs(rep.log_negativity - rep2.log_negativity),
            abs(rep.discord - rep2.discord),
            abs(rep.mutual_information - rep2.mutual_information),
        )
    suite.check("field phase invariance", worst < 1e-9, f"worst |delta| = {worst:.2e}")

    if verbose:
        for name, ok, detail in suite.results:
            status = "PASS" if ok else "FAIL"
            suffix = f"  ({detail})" if detail else ""
            print(f"selftest: {name}: {status}{suffix}")
    return 0 if suite.all_ok else 1
