"""Steady-state quantum correlations of a driven triangular ring cavity.

The pipeline: :mod:`ringcav.model` solves the classical working point,
:mod:`ringcav.dynamics` builds the linearized drift/diffusion matrices and
the stationary covariance, :mod:`ringcav.measures` turns a covariance
matrix into entanglement/discord/mutual-information numbers, and
:mod:`ringcav.sweep` maps the whole chain over parameter grids.
"""

from .dynamics import (
    CovarianceMatrix,
    DriftDiffusion,
    StabilityReport,
    build_drift,
    check_stability,
    integrate_covariance_ode,
    solve_lyapunov,
    stationarity_horizon,
)
from .measures import (
    CorrelationReport,
    SymplecticInvariants,
    WBranch,
    correlation_report,
    entropy_g,
    gaussian_discord,
    log_negativity,
    mutual_information,
    pt_symplectic_eigenvalues,
    symplectic_eigenvalues,
    symplectic_invariants,
)
from .model import (
    Bare,
    DerivedConstants,
    Effective,
    PhysicalParams,
    SteadyState,
    derive_constants,
    solve_steady_state,
    thermal_occupancy,
)
from .sweep import (
    Axis,
    Overlay,
    PointResult,
    PointStatus,
    SweepRecord,
    SweepSpec,
    evaluate_point,
    find_threshold,
    run_sweep,
)

__version__ = "0.1.0"
