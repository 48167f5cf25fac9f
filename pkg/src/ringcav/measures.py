"""Correlation measures of a two-mode Gaussian state.

Everything here is a pure function of the 4x4 covariance matrix through its
four symplectic invariants (the block determinants).  Vacuum quadrature
variance is 1/2, so a physical single mode has block determinant >= 1/4 and
both symplectic eigenvalues of a physical state satisfy ``nu >= 1/2``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import CovarianceMatrix
from .errors import DomainError, UnphysicalInvariants

logger = logging.getLogger(__name__)

# Round-off slack on physicality checks.
_INVARIANT_SLACK = 1e-9
# Negative measure values larger than this are an error, not round-off.
_MEASURE_CLAMP = 1e-9
# Discriminants of the symplectic-eigenvalue formula may round below zero
# by this much (relative to their natural scale) before being rejected.
_DISCRIMINANT_SLACK = 1e-12
# Two discord branches differing by more than this get flagged in the log.
_BRANCH_SENSITIVITY = 1e-6


class WBranch(enum.Enum):
    """Which case of the conditional-variance formula produced W."""

    CLOSED_FORM = "closed_form"
    GENERAL = "general"


@dataclass(frozen=True)
class SymplecticInvariants:
    """Block determinants of the covariance matrix.

    ``det_mech``/``det_opt`` are the local (single-mode) determinants,
    ``det_cross`` the determinant of the off-diagonal correlation block and
    ``det_total`` that of the full matrix.
    """

    det_mech: float
    det_opt: float
    det_cross: float
    det_total: float


@dataclass(frozen=True)
class CorrelationReport:
    """All scalar correlation measures for one covariance matrix."""

    nu_plus: float
    nu_minus: float
    nu_tilde_minus: float
    log_negativity: float
    discord: float
    mutual_information: float
    discord_branch: WBranch


def symplectic_invariants(v: CovarianceMatrix | np.ndarray) -> SymplecticInvariants:
    """Compute the four block determinants, validating physicality.

    Raises
    ------
    UnphysicalInvariants
        If a local determinant falls below the vacuum value 1/4 or the
        total determinant below zero, beyond round-off slack.
    """
    m = v.matrix if isinstance(v, CovarianceMatrix) else np.asarray(v, dtype=float)
    i1 = float(np.linalg.det(m[:2, :2]))
    i2 = float(np.linalg.det(m[2:, 2:]))
    i3 = float(np.linalg.det(m[:2, 2:]))
    i4 = float(np.linalg.det(m))
    if i1 < 0.25 - _INVARIANT_SLACK or i2 < 0.25 - _INVARIANT_SLACK:
        raise UnphysicalInvariants(
            f"single-mode determinants ({i1!r}, {i2!r}) below the vacuum value 1/4"
        )
    if i4 < -_DISCRIMINANT_SLACK * max(1.0, i1 * i2):
        raise UnphysicalInvariants(f"total determinant {i4!r} is negative")
    return SymplecticInvariants(det_mech=i1, det_opt=i2, det_cross=i3, det_total=i4)


# Discriminants below this (relative to gamma^2) are round-off of an exact
# degeneracy: a pure state evaluated through determinants.  sqrt would blow
# such noise up to ~1e-8 eigenvalue splits, which the entropy function then
# amplifies through its log singularity at 1/2, so collapse them instead.
_DEGENERACY_COLLAPSE = 64.0 * 2.220446049250313e-16


def _eigenvalue_pair(gamma: float, det_total: float, scale: float) -> tuple[float, float]:
    """Solve ``nu^4 - gamma nu^2 + det_total = 0`` for the two symplectic
    eigenvalues ``sqrt((gamma +/- sqrt(gamma^2 - 4 det_total)) / 2)``.

    ``scale`` is the cancellation magnitude ``I1 + I2 + 2 |I3|`` that
    produced gamma: discriminants below round-off at that scale are an
    exact degeneracy (pure state) and are collapsed to zero, since four
    doubles carry no finer eigenvalue-split information.  The small
    eigenvalue is evaluated through the product rule
    ``nu_minus = sqrt(det_total) / nu_plus`` (same formula, rearranged),
    which avoids the cancellation of ``gamma - sqrt(...)``.
    """
    disc = gamma**2 - 4.0 * det_total
    collapse = _DEGENERACY_COLLAPSE * (scale**2 + 4.0 * abs(det_total))
    if disc < -max(_DISCRIMINANT_SLACK * max(1.0, gamma**2), collapse):
        raise UnphysicalInvariants(
            f"negative discriminant {disc!r} in symplectic eigenvalue formula"
        )
    if disc < collapse:
        disc = 0.0
    nu_plus = math.sqrt(max((gamma + math.sqrt(disc)) / 2.0, 0.0))
    if nu_plus == 0.0:
        return 0.0, 0.0
    return nu_plus, math.sqrt(max(det_total, 0.0)) / nu_plus


def symplectic_eigenvalues(inv: SymplecticInvariants) -> tuple[float, float]:
    """Symplectic eigenvalues (nu_plus, nu_minus) of the covariance matrix.

    Uses ``Gamma = I1 + I2 + 2 I3``; vacuum gives exactly (1/2, 1/2).
    """
    gamma = inv.det_mech + inv.det_opt + 2.0 * inv.det_cross
    scale = inv.det_mech + inv.det_opt + 2.0 * abs(inv.det_cross)
    return _eigenvalue_pair(gamma, inv.det_total, scale)


def pt_symplectic_eigenvalues(inv: SymplecticInvariants) -> tuple[float, float]:
    """Symplectic eigenvalues of the partially transposed state.

    Partial transposition flips the sign of the cross determinant, so
    ``Gamma_tilde = I1 + I2 - 2 I3``.  Entanglement shows up as the smaller
    eigenvalue dropping below 1/2.
    """
    gamma = inv.det_mech + inv.det_opt - 2.0 * inv.det_cross
    scale = inv.det_mech + inv.det_opt + 2.0 * abs(inv.det_cross)
    return _eigenvalue_pair(gamma, inv.det_total, scale)


def log_negativity(nu_tilde_minus: float) -> float:
    """Logarithmic negativity ``max(0, -ln(2 nu))`` (natural log)."""
    if nu_tilde_minus <= 0.0:
        raise DomainError(f"partial-transpose eigenvalue must be positive, got {nu_tilde_minus!r}")
    return max(0.0, -math.log(2.0 * nu_tilde_minus))


def entropy_g(x: float) -> float:
    """Thermal entropy kernel ``(x+1/2) ln(x+1/2) - (x-1/2) ln(x-1/2)``.

    The limit at x = 1/2 is zero and is taken analytically: below
    ``x - 1/2 = 1e-12`` the second term is dropped.  For larger arguments
    the expression is rewritten as ``(x+1/2) log1p(1/(x-1/2)) + ln(x-1/2)``
    which avoids the cancellation of two large terms.
    """
    if x < 0.5 - _INVARIANT_SLACK:
        raise DomainError(f"entropy argument {x!r} below the vacuum value 1/2")
    b = x - 0.5
    a = x + 0.5
    if b < 1e-12:
        return a * math.log(a) if a > 0.0 else 0.0
    if b < 1.0:
        return a * math.log(a) - b * math.log(b)
    return a * math.log1p(1.0 / b) + math.log(b)


def _clamped(value: float, name: str) -> float:
    """Clamp round-off negativity to zero; reject anything larger."""
    if value >= 0.0:
        return value
    if value >= -_MEASURE_CLAMP:
        logger.debug("%s = %.3e clamped to 0", name, value)
        return 0.0
    raise UnphysicalInvariants(f"{name} = {value!r} is negative beyond round-off")


def _w_closed_form(inv: SymplecticInvariants) -> float:
    i1, i2, i3, i4 = inv.det_mech, inv.det_opt, inv.det_cross, inv.det_total
    term = (4.0 * i2 - 1.0) * (4.0 * i4 - i1)
    arg = 4.0 * i3**2 + term
    scale = 4.0 * i3**2 + abs(term)
    if arg < -_DISCRIMINANT_SLACK * max(1.0, scale):
        raise UnphysicalInvariants(f"negative root argument {arg!r} in conditional variance")
    if abs(arg) < _DEGENERACY_COLLAPSE * scale:
        arg = 0.0  # pure-state degeneracy, noise only
    return ((2.0 * abs(i3) + math.sqrt(max(arg, 0.0))) / (4.0 * i2 - 1.0)) ** 2


def _w_general(inv: SymplecticInvariants) -> float:
    i1, i2, i3, i4 = inv.det_mech, inv.det_opt, inv.det_cross, inv.det_total
    s = i1 * i2 + i4 - i3**2
    # (s^2 - 4 I1 I2 I4) rewritten so the product-state case reduces to an
    # exact square instead of a catastrophic cancellation.
    arg = (i1 * i2 - i4) ** 2 - 2.0 * i3**2 * (i1 * i2 + i4) + i3**4
    scale = (i1 * i2 - i4) ** 2 + 2.0 * i3**2 * (i1 * i2 + i4) + i3**4
    if arg < -_DISCRIMINANT_SLACK * max(1.0, s**2):
        raise UnphysicalInvariants(f"negative root argument {arg!r} in conditional variance")
    if abs(arg) < _DEGENERACY_COLLAPSE * scale:
        arg = 0.0  # pure-state degeneracy, noise only
    return (s - math.sqrt(max(arg, 0.0))) / (2.0 * i2)


def conditional_variance(inv: SymplecticInvariants) -> tuple[float, WBranch]:
    """Minimal conditional determinant W after a Gaussian measurement on
    the optical mode, with the branch that produced it.

    The closed-form branch applies when
    ``4 (I1 I2 - I4)^2 <= (I1 + 4 I4)(1 + 4 I2) I3^2``;
    a vanishing cross determinant (product state) bypasses the test and
    takes the general branch, where W reduces to I1 and the discord to
    zero identically.
    """
    i1, i2, i3, i4 = inv.det_mech, inv.det_opt, inv.det_cross, inv.det_total
    # i2 = 1/4 with correlations present is unphysical (a pure local block
    # cannot be correlated); route the degenerate denominator to the
    # general branch rather than dividing by zero.
    if i3 == 0.0 or 4.0 * i2 - 1.0 <= 0.0:
        return _w_general(inv), WBranch.GENERAL
    ratio = 4.0 * (i1 * i2 - i4) ** 2 / ((i1 + 4.0 * i4) * (1.0 + 4.0 * i2) * i3**2)
    if ratio <= 1.0:
        return _w_closed_form(inv), WBranch.CLOSED_FORM
    return _w_general(inv), WBranch.GENERAL


def gaussian_discord(
    inv: SymplecticInvariants,
    nus: tuple[float, float] | None = None,
) -> tuple[float, WBranch]:
    """Gaussian quantum discord with measurement on the optical mode.

    ``D = g(sqrt(I2)) - g(nu_plus) - g(nu_minus) + g(sqrt(W))`` with W from
    :func:`conditional_variance`.  Negative round-off is clamped to zero
    (and logged); genuinely negative values raise.
    """
    if nus is None:
        nus = symplectic_eigenvalues(inv)
    nu_plus, nu_minus = nus
    w, branch = conditional_variance(inv)
    discord = (
        entropy_g(math.sqrt(inv.det_opt))
        - entropy_g(nu_plus)
        - entropy_g(nu_minus)
        + entropy_g(math.sqrt(max(w, 0.0)))
    )
    _flag_branch_sensitivity(inv, branch, discord, nus)
    return _clamped(discord, "gaussian discord"), branch


def _flag_branch_sensitivity(
    inv: SymplecticInvariants,
    branch: WBranch,
    discord: float,
    nus: tuple[float, float],
) -> None:
    """Log points where the two conditional-variance branches disagree by
    more than the sensitivity threshold, so the convention dependence of
    the branch condition is observable in sweeps."""
    if inv.det_cross == 0.0 or not logger.isEnabledFor(logging.DEBUG):
        return
    try:
        w_alt = _w_general(inv) if branch is WBranch.CLOSED_FORM else _w_closed_form(inv)
        alt = (
            entropy_g(math.sqrt(inv.det_opt))
            - entropy_g(nus[0])
            - entropy_g(nus[1])
            + entropy_g(math.sqrt(max(w_alt, 0.0)))
        )
    except (UnphysicalInvariants, DomainError, ZeroDivisionError, ValueError):
        return
    if abs(alt - discord) > _BRANCH_SENSITIVITY:
        logger.debug(
            "discord branch sensitivity: %s gives %.9g, alternative gives %.9g "
            "(invariants %.6g %.6g %.6g %.6g)",
            branch.value,
            discord,
            alt,
            inv.det_mech,
            inv.det_opt,
            inv.det_cross,
            inv.det_total,
        )


def mutual_information(
    inv: SymplecticInvariants,
    nus: tuple[float, float] | None = None,
) -> float:
    """Quantum mutual information
    ``g(sqrt(I1)) + g(sqrt(I2)) - g(nu_plus) - g(nu_minus)``."""
    if nus is None:
        nus = symplectic_eigenvalues(inv)
    total = (
        entropy_g(math.sqrt(inv.det_mech))
        + entropy_g(math.sqrt(inv.det_opt))
        - entropy_g(nus[0])
        - entropy_g(nus[1])
    )
    return _clamped(total, "mutual information")


def correlation_report(v: CovarianceMatrix | np.ndarray) -> CorrelationReport:
    """Compute every correlation measure for one covariance matrix."""
    inv = symplectic_invariants(v)
    nus = symplectic_eigenvalues(inv)
    _, nu_tilde_minus = pt_symplectic_eigenvalues(inv)
    discord, branch = gaussian_discord(inv, nus)
    return CorrelationReport(
        nu_plus=nus[0],
        nu_minus=nus[1],
        nu_tilde_minus=nu_tilde_minus,
        log_negativity=log_negativity(nu_tilde_minus),
        discord=discord,
        mutual_information=mutual_information(inv, nus),
        discord_branch=branch,
    )
