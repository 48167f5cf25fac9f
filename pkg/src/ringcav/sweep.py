"""Grid evaluation of the full pipeline (model -> dynamics -> measures).

A sweep is a pure map over an immutable grid specification: every grid point
is evaluated independently and the records are assembled in deterministic
row-major order (overlay outermost, then axes in declaration order),
regardless of how many workers computed them.  Unstable or unphysical points
are reported with an explicit status, never dropped or interpolated over.
"""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    CovarianceMatrix,
    StabilityReport,
    build_drift,
    check_stability,
    integrate_covariance_ode,
    solve_lyapunov,
    stationarity_horizon,
)
from .errors import CapExceeded, NoCrossing, UnphysicalInvariants, DomainError
from .measures import CorrelationReport, correlation_report
from .model import Effective, PhysicalParams, SteadyState, derive_constants, solve_steady_state

DEFAULT_POINT_CAP = 1_000_000

# Axis name -> (unit label, how to apply a value to the base parameters).
_AXIS_APPLIERS = {
    "temperature": ("K", lambda p, v: p.with_(temperature=v)),
    "power": ("W", lambda p, v: p.with_(power=v)),
    "mass": ("kg", lambda p, v: p.with_(mass=v)),
    "detuning_ratio": ("omega_m", lambda p, v: p.with_(detuning=Effective(v * p.mech_freq))),
}

AXIS_NAMES = tuple(_AXIS_APPLIERS)


def axis_unit(name: str) -> str:
    return _AXIS_APPLIERS[name][0]


@dataclass(frozen=True)
class Axis:
    """One swept parameter: an inclusive range with linear or log spacing."""

    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.name not in _AXIS_APPLIERS:
            raise ValueError(f"unknown sweep axis {self.name!r}; choose from {AXIS_NAMES}")
        if self.count < 2:
            raise ValueError(f"axis {self.name!r} needs count >= 2, got {self.count}")
        if not self.start < self.stop:
            raise ValueError(f"axis {self.name!r} needs start < stop")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"axis {self.name!r} spacing must be 'linear' or 'log'")
        if self.spacing == "log" and self.start <= 0.0:
            raise ValueError(f"log-spaced axis {self.name!r} needs start > 0")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class Overlay:
    """Discrete values of one extra parameter, one series per value."""

    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in _AXIS_APPLIERS:
            raise ValueError(f"unknown overlay parameter {self.name!r}")
        if not self.values:
            raise ValueError("overlay needs at least one value")


@dataclass(frozen=True)
class SweepSpec:
    """Immutable description of a sweep grid over a base parameter set."""

    base: PhysicalParams
    axes: tuple[Axis, ...]
    overlay: Overlay | None = None
    point_cap: int = DEFAULT_POINT_CAP

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("a sweep needs one or two axes")
        names = [a.name for a in self.axes]
        if self.overlay is not None:
            names.append(self.overlay.name)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate swept parameter in {names}")

    @property
    def varied_names(self) -> tuple[str, ...]:
        names = [self.overlay.name] if self.overlay is not None else []
        names.extend(a.name for a in self.axes)
        return tuple(names)

    def grid(self) -> list[dict[str, float]]:
        """All grid points in row-major order, overlay outermost."""
        dims = []
        if self.overlay is not None:
            dims.append([(self.overlay.name, v) for v in self.overlay.values])
        for ax in self.axes:
            dims.append([(ax.name, float(v)) for v in ax.values()])
        return [dict(combo) for combo in itertools.product(*dims)]


class PointStatus(enum.Enum):
    OK = "ok"
    UNSTABLE = "unstable"
    UNPHYSICAL = "unphysical"


@dataclass(frozen=True)
class PointResult:
    """Outcome of the full pipeline at a single parameter set."""

    steady_state: SteadyState
    stability: StabilityReport
    covariance: CovarianceMatrix | None
    report: CorrelationReport | None
    status: PointStatus


@dataclass(frozen=True)
class SweepRecord:
    """One grid point: the varied values plus the pipeline outcome."""

    varied: dict[str, float]
    photon_number: float
    detuning: float
    detuning_ratio: float
    stable: bool
    report: CorrelationReport | None
    status: PointStatus

    def measure(self, name: str) -> float:
        """A measure column as a float, NaN where the point failed."""
        if self.report is None:
            return float("nan")
        return float(getattr(self.report, name))


def apply_assignment(base: PhysicalParams, assignment: dict[str, float]) -> PhysicalParams:
    """Apply axis/overlay values to the base parameter set."""
    params = base
    for name, value in assignment.items():
        params = _AXIS_APPLIERS[name][1](params, value)
    return params


def evaluate_point(
    params: PhysicalParams,
    relative_bath_factor: float = 1.0,
    use_ode_oracle: bool = False,
) -> PointResult:
    """Run model -> dynamics -> measures for one parameter set.

    Never raises for unstable or unphysical points; those come back with
    the corresponding status and no measures.  With ``use_ode_oracle`` the
    covariance is obtained by integrating the moment equations instead of
    the algebraic solve (slower; used for cross-checks).
    """
    consts = derive_constants(params)
    ss = solve_steady_state(params, consts)
    dd = build_drift(ss, consts, params, relative_bath_factor=relative_bath_factor)
    stability = check_stability(dd)
    if not stability.routh_hurwitz:
        return PointResult(ss, stability, None, None, PointStatus.UNSTABLE)
    if use_ode_oracle:
        cov = integrate_covariance_ode(dd, stationarity_horizon(dd))
    else:
        cov = solve_lyapunov(dd)
    try:
        report = correlation_report(cov)
    except (UnphysicalInvariants, DomainError):
        return PointResult(ss, stability, cov, None, PointStatus.UNPHYSICAL)
    return PointResult(ss, stability, cov, report, PointStatus.OK)


def _record_for(
    base: PhysicalParams,
    assignment: dict[str, float],
    relative_bath_factor: float,
    use_ode_oracle: bool,
) -> SweepRecord:
    params = apply_assignment(base, assignment)
    result = evaluate_point(
        params,
        relative_bath_factor=relative_bath_factor,
        use_ode_oracle=use_ode_oracle,
    )
    ss = result.steady_state
    return SweepRecord(
        varied=assignment,
        photon_number=ss.photon_number,
        detuning=ss.detuning,
        detuning_ratio=ss.detuning / params.mech_freq,
        stable=result.status is not PointStatus.UNSTABLE,
        report=result.report,
        status=result.status,
    )


def _worker(args) -> SweepRecord:
    return _record_for(*args)


def run_sweep(
    spec: SweepSpec,
    workers: int = 1,
    relative_bath_factor: float = 1.0,
    use_ode_oracle: bool = False,
) -> list[SweepRecord]:
    """Evaluate every grid point of a sweep.

    Records come back in the deterministic grid order of ``spec.grid()``
    whatever the worker count; every point is evaluated independently, so
    parallel and serial runs produce identical results.

    Raises
    ------
    CapExceeded
        If the grid is larger than ``spec.point_cap``.
    """
    grid = spec.grid()
    if len(grid) > spec.point_cap:
        raise CapExceeded(f"sweep has {len(grid)} points, cap is {spec.point_cap}")
    tasks = [(spec.base, a, relative_bath_factor, use_ode_oracle) for a in grid]
    if workers <= 1:
        return [_worker(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_worker, tasks, chunksize=chunk))


def find_threshold(records: list[SweepRecord], quantity: str, axis: str) -> float:
    """Axis value where a measure first drops to zero, by linear interpolation.

    Scans consecutive OK records in grid order for the first sign change of
    ``quantity`` from positive to non-positive; unstable or unphysical
    points break the scan rather than being bridged.

    Raises
    ------
    NoCrossing
        If the quantity never reaches zero from above along the records.
    """
    prev = None
    for rec in records:
        if rec.status is not PointStatus.OK:
            prev = None
            continue
        x = rec.varied[axis]
        q = rec.measure(quantity)
        if prev is not None:
            x0, q0 = prev
            if q0 > 0.0 and q <= 0.0:
                return x0 + (x - x0) * q0 / (q0 - q)
        prev = (x, q)
    raise NoCrossing(f"{quantity} never crosses zero along {axis}")
