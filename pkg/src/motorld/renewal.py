"""Moment generating functions of regeneration cycles and hitting times.

The skeleton of the lattice walk regenerates each time it visits a new gate:
cycles (sign, duration) are i.i.d.  Writing ``f_pm(lam) = E[exp(lam * tau);
sign = +-1]``, the gate hitting-time transforms ``phi_pm`` solve the renewal
fixed point

    phi_plus = f_plus + f_minus * phi_plus**2

whose admissible branch is ``phi_pm = (1 - sqrt(1 - 4 f_minus f_plus)) /
(2 f_mp)``, finite up to the critical point ``lambda_c`` where
``4 f_minus f_plus = 1``.  For graph laws, ``f`` comes from the splitting of
the first excursion off a gate: a linear system over the interior vertices of
the two cells adjacent to the gate (``tilde_f``), plus the one-step renewal
``f_pm = tilde_f_pm / (1 - tilde_f_0)``.  A truncated sum over lattice paths
(``tilde_f_pathsum``) provides an independent check of the linear solve deep
in the left tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from ._linalg import perron_root
from .errors import (
    BracketFailure,
    DomainError,
    InternalInconsistency,
    SingularSystem,
)
from .graph import (
    FundamentalGraph,
    LatticeVertex,
    RateMap,
    gate_exit_rate,
    lattice_out_edges,
    vertex_exit_rate,
)
from .laws import CycleLaw, DiscreteLaw, ExponentialLaw, GammaLaw, GraphLaw

__all__ = [
    "TildeTriple",
    "FPair",
    "MgfSummary",
    "tilde_f",
    "tilde_f_pathsum",
    "pathsum_truncation_length",
    "lambda_interior",
    "f_pm",
    "lambda_c",
    "phi_pm",
    "log_phi",
    "log_phi_deriv",
    "alpha_pm",
    "p_pm",
    "mean_tau",
    "velocity",
    "mgf_summary",
]

_INF = math.inf


class TildeTriple(NamedTuple):
    """First-excursion transforms split by the gate hit first: -1, 0 (return), +1."""

    minus: float
    zero: float
    plus: float


class FPair(NamedTuple):
    """A per-sign pair, minus first."""

    minus: float
    plus: float


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return _INF


# ---------------------------------------------------------------------------
# graph laws: interior linear system
# ---------------------------------------------------------------------------


def interior_states(graph: FundamentalGraph) -> list[LatticeVertex]:
    """Lattice vertices strictly between gates -1 and +1, reachable from gate 0."""
    names = graph.interior_names()
    return [LatticeVertex(0, v) for v in names] + [LatticeVertex(-1, v) for v in names]


def _rates_key(rates: RateMap) -> tuple:
    return tuple(sorted(rates.items()))


@lru_cache(maxsize=256)
def _interior_system(graph: FundamentalGraph, rkey: tuple):
    """Static parts of the excursion solve: adjacency among interior states,
    exit rates, and the per-gate absorption rate columns."""
    rates = dict(rkey)
    states = interior_states(graph)
    index = {x: i for i, x in enumerate(states)}
    k = len(states)
    gates = {-1: LatticeVertex(-1, graph.source), 0: LatticeVertex(0, graph.source),
             1: LatticeVertex(1, graph.source)}
    adj = np.zeros((k, k))
    absorb = np.zeros((k, 3))  # columns: gates -1, 0, +1
    exits = np.zeros(k)
    for x, i in index.items():
        exits[i] = vertex_exit_rate(graph, rates, x.name)
        for y, r in lattice_out_edges(graph, rates, x):
            if y in index:
                adj[index[y], i] += r  # column i collects flow out of state i
            else:
                for g, gv in gates.items():
                    if y == gv:
                        absorb[i, g + 1] += r
                        break
                else:
                    raise InternalInconsistency(f"excursion left its two-cell range at {y}")
    first = []  # (rate, interior index or None, gate column or None)
    gate0 = LatticeVertex(0, graph.source)
    for y, r in lattice_out_edges(graph, rates, gate0):
        if y in index:
            first.append((r, index[y], None))
        elif y == gates[1]:
            first.append((r, None, 2))
        elif y == gates[-1]:
            first.append((r, None, 0))
        else:
            raise InternalInconsistency(f"gate jump target {y} outside range")
    return states, adj, absorb, exits, tuple(first)


@lru_cache(maxsize=256)
def _lambda_interior_cached(graph: FundamentalGraph, rkey: tuple) -> float:
    states, adj, absorb, exits, first = _interior_system(graph, rkey)
    k = len(states)
    if k == 0:
        return _INF
    # Sub-generator of the walk killed on the gates; its spectral abscissa
    # bounds the exponential moments of the excursion length.
    sub = adj.T - np.diag(exits)
    kappa = float(exits.max())
    rho = perron_root(sub + (kappa + 1.0) * np.eye(k)) - (kappa + 1.0)
    return -rho


def lambda_interior(graph: FundamentalGraph, rates: RateMap) -> float:
    """Largest tilt at which excursion transforms stay finite; +inf if no interior."""
    return _lambda_interior_cached(graph, _rates_key(rates))


def _tilde_f_and_deriv(
    graph: FundamentalGraph, rates: RateMap, lam: float
) -> tuple[TildeTriple, TildeTriple]:
    rkey = _rates_key(rates)
    states, adj, absorb, exits, first = _interior_system(graph, rkey)
    gate_rate = gate_exit_rate(graph, rates)
    bound = min(_lambda_interior_cached(graph, rkey), gate_rate)
    if lam >= bound:
        inf3 = TildeTriple(_INF, _INF, _INF)
        return inf3, inf3
    k = len(states)
    if k:
        m = np.diag(exits - lam) - adj.T
        try:
            u = np.linalg.solve(m, absorb)
            du = np.linalg.solve(m, u)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(f"excursion system singular at lam={lam}") from exc
        resid = np.abs(m @ u - absorb).max()
        scale = np.abs(m).sum(axis=1).max() * max(1.0, np.abs(u).max())
        if not np.isfinite(u).all() or resid > 1e-8 * scale:
            raise SingularSystem(f"excursion system unreliable at lam={lam}")
    vals = [0.0, 0.0, 0.0]
    ders = [0.0, 0.0, 0.0]
    h = gate_rate - lam
    for r, idx, gcol in first:
        if gcol is not None:
            vals[gcol] += r / h
            ders[gcol] += r / h**2
        else:
            for g in range(3):
                vals[g] += r * u[idx, g] / h
                ders[g] += r * (u[idx, g] / h**2 + du[idx, g] / h)
    return TildeTriple(*vals), TildeTriple(*ders)


def tilde_f(graph: FundamentalGraph, rates: RateMap, lam: float) -> TildeTriple:
    """Split transforms of the first excursion off a gate.

    Entry ``g`` is ``E[exp(lam * J1); first gate hit is g]`` for g in
    {-1, 0, +1}.  All three are +inf once ``lam`` reaches the smaller of the
    interior spectral bound and the gate exit rate.
    """
    return _tilde_f_and_deriv(graph, rates, lam)[0]


def pathsum_truncation_length(
    graph: FundamentalGraph, rates: RateMap, lam: float, tol: float
) -> int:
    """Walk length after which the path-sum tail is below ``tol``.

    Extending any walk by one step multiplies the summed weight by at most
    ``q = max_v r(v) / |lam|``, so the tail after length L is at most
    ``q**(L+1) / (1 - q)``.
    """
    _require_pathsum_domain(graph, rates, lam)
    rmax = max(vertex_exit_rate(graph, rates, v) for v in graph.vertices)
    q = rmax / abs(lam)
    if not 0.0 < q < 1.0:
        raise DomainError(f"no geometric tail bound at lam={lam}")
    n = math.log(tol * (1.0 - q)) / math.log(q)
    return max(1, int(math.ceil(n)))


def _require_pathsum_domain(graph: FundamentalGraph, rates: RateMap, lam: float) -> None:
    rmax = max(vertex_exit_rate(graph, rates, v) for v in graph.vertices)
    if not lam < -(3.0 * rmax + 1.0):
        raise DomainError(
            f"path sum guaranteed to converge only for lam < {-(3.0 * rmax + 1.0)}, got {lam}"
        )


def tilde_f_pathsum(graph: FundamentalGraph, rates: RateMap, lam: float, max_len: int) -> float:
    """Truncated sum over cell walks source -> sink for the plus excursion transform.

    Walks may repeat interior vertices but never revisit source or touch sink
    before the end; each walk contributes the product of its edge rates over
    the product of (exit rate - lam) along its visited vertices.  Partial sums
    are nondecreasing in ``max_len`` within the guaranteed domain.
    """
    if max_len < 1:
        raise DomainError("max_len must be at least 1")
    _require_pathsum_domain(graph, rates, lam)
    rates = dict(rates)
    names = graph.interior_names()
    idx = {v: i for i, v in enumerate(names)}
    k = len(names)
    start_rate = gate_exit_rate(graph, rates) - lam
    exits = np.array([vertex_exit_rate(graph, rates, v) - lam for v in names])
    step = np.zeros((k, k))
    hit = np.zeros(k)
    for (x, y) in graph.edges:
        if x in idx:
            if y in idx:
                step[idx[y], idx[x]] += rates[(x, y)]
            elif y == graph.sink:
                hit[idx[x]] += rates[(x, y)]
    total = 0.0
    if (graph.source, graph.sink) in rates:
        total += rates[(graph.source, graph.sink)] / start_rate
    if k == 0:
        return total
    h = np.zeros(k)
    for (x, y) in graph.edges:
        if x == graph.source and y in idx:
            h[idx[y]] += rates[(x, y)] / start_rate
    for _ in range(2, max_len + 1):
        total += float(h @ (hit / exits))
        h = step @ (h / exits)
    return total


# ---------------------------------------------------------------------------
# cycle transforms per family
# ---------------------------------------------------------------------------


def _f_and_deriv(law: CycleLaw, lam: float) -> tuple[FPair, FPair]:
    """(f_minus, f_plus) and their lam-derivatives; infinite pairs when divergent."""
    if isinstance(law, GraphLaw):
        t, dt = _tilde_f_and_deriv(law.graph, law.rate_map, lam)
        if not math.isfinite(t.zero) or t.zero >= 1.0:
            return FPair(_INF, _INF), FPair(_INF, _INF)
        den = 1.0 - t.zero
        f = FPair(t.minus / den, t.plus / den)
        df = FPair(
            (dt.minus * den + t.minus * dt.zero) / den**2,
            (dt.plus * den + t.plus * dt.zero) / den**2,
        )
        return f, df
    if isinstance(law, DiscreteLaw):
        v = {1: 0.0, -1: 0.0}
        d = {1: 0.0, -1: 0.0}
        for sign, dur, prob in law.atoms:
            w = prob * _exp(lam * dur)
            v[sign] += w
            d[sign] += w * dur
        if not (math.isfinite(v[1]) and math.isfinite(v[-1])):
            return FPair(_INF, _INF), FPair(_INF, _INF)
        return FPair(v[-1], v[1]), FPair(d[-1], d[1])
    if isinstance(law, ExponentialLaw):
        if lam >= min(law.beta_plus, law.beta_minus):
            return FPair(_INF, _INF), FPair(_INF, _INF)
        fp = law.p * law.beta_plus / (law.beta_plus - lam)
        fm = (1.0 - law.p) * law.beta_minus / (law.beta_minus - lam)
        dfp = law.p * law.beta_plus / (law.beta_plus - lam) ** 2
        dfm = (1.0 - law.p) * law.beta_minus / (law.beta_minus - lam) ** 2
        return FPair(fm, fp), FPair(dfm, dfp)
    if isinstance(law, GammaLaw):
        if lam >= min(law.beta_plus, law.beta_minus):
            return FPair(_INF, _INF), FPair(_INF, _INF)
        fp = law.p * (law.beta_plus / (law.beta_plus - lam)) ** law.k_plus
        fm = (1.0 - law.p) * (law.beta_minus / (law.beta_minus - lam)) ** law.k_minus
        dfp = fp * law.k_plus / (law.beta_plus - lam)
        dfm = fm * law.k_minus / (law.beta_minus - lam)
        return FPair(fm, fp), FPair(dfm, dfp)
    raise InternalInconsistency(f"unknown law {law!r}")


def f_pm(law: CycleLaw, lam: float) -> FPair:
    """Per-sign cycle transforms ``E[exp(lam * tau); sign]``, minus first."""
    return _f_and_deriv(law, lam)[0]


def _finite_boundary(law: CycleLaw) -> float:
    """Supremum of the lam-domain where f is guaranteed finite."""
    if isinstance(law, GraphLaw):
        return min(
            lambda_interior(law.graph, law.rate_map),
            gate_exit_rate(law.graph, law.rate_map),
        )
    if isinstance(law, DiscreteLaw):
        return _INF
    if isinstance(law, (ExponentialLaw, GammaLaw)):
        return min(law.beta_plus, law.beta_minus)
    raise InternalInconsistency(f"unknown law {law!r}")


def _crit_gap(law: CycleLaw, lam: float) -> float:
    f = f_pm(law, lam)
    if not (math.isfinite(f.minus) and math.isfinite(f.plus)):
        return _INF
    return 4.0 * f.minus * f.plus - 1.0


@lru_cache(maxsize=512)
def lambda_c(law: CycleLaw) -> float:
    """Critical tilt: the root of ``4 f_minus f_plus = 1``; zero iff velocity is zero.

    The gap function is strictly increasing and nonpositive at 0, so a
    bisection over a bracket grown toward the finiteness boundary pins the
    root to machine precision.  Laws with all mass on one sign never cross
    (one factor is identically zero), so their critical tilt is +inf.
    """
    p = f_pm(law, 0.0)
    if p.minus == 0.0 or p.plus == 0.0:
        return _INF
    g0 = _crit_gap(law, 0.0)
    if g0 > 1e-12:
        raise InternalInconsistency("cycle transforms exceed 1/4 at lam=0")
    if abs(g0) <= 1e-14:
        return 0.0
    bound = _finite_boundary(law)
    hi = None
    if math.isinf(bound):
        step = 1.0
        for _ in range(200):
            if _crit_gap(law, step) > 0.0:
                hi = step
                break
            step *= 2.0
    else:
        for k_ in range(1, 80):
            cand = bound * (1.0 - 0.5**k_)  # bound is a positive rate or spectral gap
            if _crit_gap(law, cand) > 0.0:
                hi = cand
                break
    if hi is None:
        raise BracketFailure("could not bracket the critical tilt")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _crit_gap(law, mid) > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-15 * max(1.0, abs(hi)):
            break
    root = 0.5 * (lo + hi)
    if not (abs(_crit_gap(law, root)) < 1e-12 or hi - lo < 1e-14 * max(1.0, abs(hi))):
        raise BracketFailure("critical tilt bisection did not meet tolerance")
    return root


_CRIT_SLACK = 1e-12


def phi_pm(law: CycleLaw, lam: float) -> FPair:
    """Hitting-time transforms of gates -1 and +1; +inf beyond the critical tilt.

    On the admissible branch ``phi_plus * phi_minus <= 1`` with equality at the
    critical tilt.  Tiny negative discriminants (within 1e-12 of zero) are
    clamped to zero; anything more negative indicates broken inputs.
    """
    lc = lambda_c(law)
    if lam > lc + _CRIT_SLACK * max(1.0, abs(lc)):
        return FPair(_INF, _INF)
    f = f_pm(law, min(lam, lc))
    if not (math.isfinite(f.minus) and math.isfinite(f.plus)):
        return FPair(_INF, _INF)
    s = 1.0 - 4.0 * f.minus * f.plus
    if s < -1e-12:
        raise InternalInconsistency(f"discriminant {s} below clamp window at lam={lam}")
    root = math.sqrt(max(s, 0.0))
    # (1 - root) / (2 f_opp) rewritten through the conjugate: no cancellation
    # at deep-negative tilts where 4 f+ f- underflows, and the one-sided case
    # (f_opp = 0, root = 1) lands on the correct fixed point f_sign for free.
    plus = 2.0 * f.plus / (1.0 + root)
    minus = 2.0 * f.minus / (1.0 + root)
    return FPair(minus, plus)


def log_phi(law: CycleLaw, sign: int, lam: float) -> float:
    pair = phi_pm(law, lam)
    val = pair.plus if sign > 0 else pair.minus
    if val == 0.0:
        return -_INF
    return math.log(val) if math.isfinite(val) else _INF


def log_phi_deriv(law: CycleLaw, sign: int, lam: float) -> float:
    """Exact derivative of log phi, from the differentiated renewal fixed point.

    Differentiating ``phi_plus = f_plus + f_minus phi_plus**2`` gives
    ``phi_plus' = (f_plus' + f_minus' phi_plus**2) / sqrt(1 - 4 f_minus
    f_plus)``; diverges at the critical tilt, so callers stay strictly below.
    """
    lc = lambda_c(law)
    if lam >= lc:
        raise DomainError(f"log phi derivative only defined below the critical tilt {lc}")
    f, df = _f_and_deriv(law, lam)
    s = 1.0 - 4.0 * f.minus * f.plus
    if s <= 0.0:
        if s < -_CRIT_SLACK:
            raise InternalInconsistency(f"discriminant {s} below clamp window at lam={lam}")
        # lam sits within rounding of the critical tilt, where the slope has
        # already diverged; report the limit instead of failing.
        return _INF
    root = math.sqrt(s)
    pair = phi_pm(law, lam)
    if sign > 0:
        dphi = (df.plus + df.minus * pair.plus**2) / root
        return dphi / pair.plus
    dphi = (df.minus + df.plus * pair.minus**2) / root
    return dphi / pair.minus


def alpha_pm(law: CycleLaw) -> tuple[float, float]:
    """Minimal durations carrying mass, per sign (minus, plus); zero unless discrete."""
    if isinstance(law, DiscreteLaw):
        minus = min((d for (s, d, _) in law.atoms if s == -1), default=_INF)
        plus = min((d for (s, d, _) in law.atoms if s == 1), default=_INF)
        return (minus, plus)
    return (0.0, 0.0)


def atom_mass_at_alpha(law: CycleLaw, sign: int) -> float:
    """P(tau = alpha_sign, w = sign); zero for laws with continuous durations."""
    if not isinstance(law, DiscreteLaw):
        return 0.0
    alpha = alpha_pm(law)[1 if sign > 0 else 0]
    if math.isinf(alpha):
        return 0.0
    return math.fsum(p for (s, d, p) in law.atoms if s == sign and d == alpha)


def p_pm(law: CycleLaw) -> FPair:
    return f_pm(law, 0.0)


def mean_tau(law: CycleLaw) -> float:
    """Mean cycle duration; for graph laws this rides the differentiated solve."""
    _, df = _f_and_deriv(law, 0.0)
    return df.minus + df.plus


def velocity(law: CycleLaw) -> float:
    p = p_pm(law)
    return (p.plus - p.minus) / mean_tau(law)


@dataclass(frozen=True)
class MgfSummary:
    lambda_c: float
    alpha_minus: float
    alpha_plus: float
    p_minus: float
    p_plus: float
    velocity: float
    lambda_interior: float


@lru_cache(maxsize=512)
def mgf_summary(law: CycleLaw) -> MgfSummary:
    p = p_pm(law)
    a_minus, a_plus = alpha_pm(law)
    if isinstance(law, GraphLaw):
        li = lambda_interior(law.graph, law.rate_map)
    else:
        li = _INF
    return MgfSummary(
        lambda_c=lambda_c(law),
        alpha_minus=a_minus,
        alpha_plus=a_plus,
        p_minus=p.minus,
        p_plus=p.plus,
        velocity=velocity(law),
        lambda_interior=li,
    )
