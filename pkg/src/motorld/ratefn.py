"""Large-deviation rate functions from the renewal transforms.

``J_pm(u)`` is the Legendre transform of ``log phi_pm``, the rate for the
per-level hitting times; the position rate function folds the two:

    I(theta) = theta * J_plus(1/theta)     (theta > 0)
    I(0)     = lambda_c
    I(theta) = |theta| * J_minus(1/|theta|) (theta < 0)

Because ``(log phi)'`` increases strictly from alpha (the minimal cycle
duration with that sign) to +infinity as the tilt approaches the critical
point, the supremum is pinned by a monotone bisection on the derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BracketFailure, DomainError, InternalInconsistency
from .laws import CycleLaw, DiscreteLaw, GraphLaw
from .renewal import (
    alpha_pm,
    atom_mass_at_alpha,
    lambda_c,
    log_phi,
    log_phi_deriv,
    mgf_summary,
    p_pm,
    velocity,
)

__all__ = [
    "tilde_lambda",
    "J",
    "I",
    "RateCurve",
    "rate_curve",
    "QualSummary",
    "qualitative_summary",
]

_INF = math.inf
_ATOM_WINDOW = 1e-13


def _alpha_of(law: CycleLaw, sign: int) -> float:
    pair = alpha_pm(law)
    return pair[1] if sign > 0 else pair[0]


def tilde_lambda(law: CycleLaw, sign: int, u: float, rtol: float = 1e-9) -> float:
    """Tilt at which ``(log phi_sign)'`` equals ``u``; requires ``u > alpha_sign``.

    The derivative is strictly increasing below the critical tilt, so the root
    is bracketed by stepping toward the critical point on one side and
    doubling away from it on the other, then bisected until the residual
    drops below ``rtol * max(1, u)``.  The slope diverges at the critical
    tilt, so for extreme targets the root can sit closer to it than float
    spacing resolves; once the search is pinned against that resolution the
    pinned tilt is the root to machine precision and is returned as such (the
    Legendre value built from it is off by at most ~u ulps, which is
    ulp-level relative error there).
    """
    alpha = _alpha_of(law, sign)
    if not u > alpha:
        raise DomainError(f"slope target {u} not above the minimal duration {alpha}")
    lc = lambda_c(law)
    span = max(1.0, abs(lc))

    def deriv(lam: float) -> float:
        return log_phi_deriv(law, sign, lam)

    hi = lc - 1e-6 * span if math.isfinite(lc) else 1.0
    for _ in range(200):
        if deriv(hi) > u:
            break
        nxt = lc - 0.125 * (lc - hi) if math.isfinite(lc) else hi * 2.0
        if math.isfinite(lc) and (nxt <= hi or nxt >= lc):
            return hi  # pinned against the critical tilt at float resolution
        hi = nxt
    else:
        raise BracketFailure(f"no upper bracket for slope {u}")
    lo = hi - span
    for _ in range(200):
        if deriv(lo) < u:
            break
        lo = hi - 2.0 * (hi - lo)
    else:
        raise BracketFailure(f"no lower bracket for slope {u}")
    tol = rtol * max(1.0, abs(u))
    mid = 0.5 * (lo + hi)
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        d = deriv(mid)
        if abs(d - u) < tol:
            return mid
        if d < u:
            lo = mid
        else:
            hi = mid
    if abs(deriv(mid) - u) < tol:
        return mid
    if hi - lo <= 4.0 * math.ulp(max(abs(lo), abs(hi), 1.0)):
        return mid  # interval collapsed: the root is pinched between floats
    raise BracketFailure(f"slope bisection stalled at {mid} for target {u}")


def _discrete_sign_support(law: DiscreteLaw, sign: int) -> tuple[float, float, float]:
    """(min duration, max duration, mass at max duration) for one sign."""
    durs = [d for (s, d, _) in law.atoms if s == sign]
    if not durs:
        return _INF, -_INF, 0.0
    top = max(durs)
    mass = math.fsum(p for (s, d, p) in law.atoms if s == sign and d == top)
    return min(durs), top, mass


def J(law: CycleLaw, sign: int, u: float) -> float:
    """Hitting-time rate function at mean cycle duration ``u``; +inf off-domain.

    At ``u`` equal to the minimal duration the value is ``-log P(tau = alpha,
    w = sign)`` when that atom exists, +inf otherwise; below it the rate is
    +inf.  Values are clamped at 0 against roundoff (the transform is
    nonnegative because ``phi(0) <= 1``).
    """
    alpha = _alpha_of(law, sign)
    window = _ATOM_WINDOW * max(1.0, abs(alpha)) if math.isfinite(alpha) else 0.0
    if math.isinf(alpha) or u < alpha - window:
        return _INF
    if abs(u - alpha) <= window:
        mass = atom_mass_at_alpha(law, sign)
        return max(0.0, -math.log(mass)) if mass > 0.0 else _INF
    if isinstance(law, DiscreteLaw):
        p = p_pm(law)
        opposite = p.minus if sign > 0 else p.plus
        if opposite <= 0.0:
            # One-sided law: the ladder is deterministic in direction, so the
            # slope range is capped by the largest duration of this sign.
            _, top, top_mass = _discrete_sign_support(law, sign)
            tw = _ATOM_WINDOW * max(1.0, abs(top))
            if u > top + tw:
                return _INF
            if abs(u - top) <= tw:
                return max(0.0, -math.log(top_mass))
    lam = tilde_lambda(law, sign, u)
    val = lam * u - log_phi(law, sign, lam)
    if val < -1e-9:
        raise InternalInconsistency(f"negative rate {val} at u={u}")
    return max(val, 0.0)


def I(law: CycleLaw, theta: float) -> float:
    """Position-level rate function; equals the critical tilt at zero."""
    if theta == 0.0:
        return lambda_c(law)
    if theta > 0.0:
        return theta * J(law, 1, 1.0 / theta)
    return -theta * J(law, -1, -1.0 / theta)


@dataclass
class RateCurve:
    """A rate function tabulated on a grid; values may be +inf off-domain."""

    abscissae: np.ndarray
    values: np.ndarray
    kind: str  # "I", "J+", "J-"
    route: str  # "renewal" or "spectral"
    meta: dict = field(default_factory=dict)


def rate_curve(
    law: CycleLaw,
    kind: str,
    grid: Sequence[float],
    route: str = "renewal",
) -> RateCurve:
    """Tabulate I, J+ or J- over a grid via the requested route.

    The spectral route applies to graph laws and the position rate function
    only; it goes through the tilted cell matrix instead of the renewal
    transforms, which makes it a genuinely independent computation.
    """
    grid = np.asarray(list(grid), dtype=float)
    if kind not in ("I", "J+", "J-"):
        raise DomainError(f"unknown curve kind {kind!r}")
    if route == "renewal":
        if kind == "I":
            vals = [I(law, float(t)) for t in grid]
        else:
            sign = 1 if kind == "J+" else -1
            vals = [J(law, sign, float(u)) for u in grid]
    elif route == "spectral":
        if kind != "I":
            raise DomainError("spectral route computes the position rate function only")
        if not isinstance(law, GraphLaw):
            raise DomainError("spectral route requires a graph law")
        from .spectral import I_spectral

        vals = [I_spectral(law.graph, law.rate_map, float(t)) for t in grid]
    else:
        raise DomainError(f"unknown route {route!r}")
    return RateCurve(
        abscissae=grid,
        values=np.array(vals, dtype=float),
        kind=kind,
        route=route,
    )


@dataclass(frozen=True)
class QualSummary:
    """Shape facts about the position rate function."""

    velocity: float
    lambda_c: float
    alpha_minus: float
    alpha_plus: float
    theta_c_minus: float
    theta_c_plus: float
    domain_lower: float
    domain_upper: float
    boundary_lower: float
    boundary_upper: float


def qualitative_summary(law: CycleLaw) -> QualSummary:
    """Velocity, critical tilt, finiteness domain and endpoint behavior.

    The domain of finiteness is (-1/alpha_minus, 1/alpha_plus); at an endpoint
    the rate stays finite exactly when the corresponding extremal cycle atom
    carries mass, and the finite value is then reported.  The per-sign
    critical points theta_c are where J_pm turns from falling to rising; they
    are infinite when the critical tilt is zero (J then decreases throughout).
    """
    summ = mgf_summary(law)
    lc = summ.lambda_c
    if lc > 0.0:
        theta_c_plus = log_phi_deriv(law, 1, 0.0)
        theta_c_minus = log_phi_deriv(law, -1, 0.0)
    else:
        theta_c_plus = _INF
        theta_c_minus = _INF
    dom_up = 1.0 / summ.alpha_plus if summ.alpha_plus > 0.0 else _INF
    dom_lo = -1.0 / summ.alpha_minus if summ.alpha_minus > 0.0 else -_INF

    def endpoint(sign: int, alpha: float) -> float:
        if alpha <= 0.0:
            return _INF
        mass = atom_mass_at_alpha(law, sign)
        return -math.log(mass) / alpha if mass > 0.0 else _INF

    return QualSummary(
        velocity=summ.velocity,
        lambda_c=lc,
        alpha_minus=summ.alpha_minus,
        alpha_plus=summ.alpha_plus,
        theta_c_minus=theta_c_minus,
        theta_c_plus=theta_c_plus,
        domain_lower=dom_lo,
        domain_upper=dom_up,
        boundary_lower=endpoint(-1, summ.alpha_minus),
        boundary_upper=endpoint(1, summ.alpha_plus),
    )
