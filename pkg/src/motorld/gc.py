"""Fluctuation symmetry: analytic checks, structural predictions, sample tests.

The position rate function satisfies ``I(theta) = I(-theta) + c * theta``
exactly when the hitting transforms are proportional, ``phi_plus = C *
phi_minus`` below the critical tilt, with ``c = -log C``; independence of
cycle sign and duration forces it.  For graph laws the symmetry is structural:
a minimal cell (symmetric support, unique gate path) guarantees it with
``c = -Delta``, the log ratio of forward to backward rates along the path,
while non-minimal cells generically break it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.stats

from .errors import AsymmetricGrid, AsymmetricSupport, DomainError, InsufficientSamples
from .graph import FundamentalGraph, RateMap, gc_delta, minimality_report, validate
from .laws import CycleLaw, DiscreteLaw, GraphLaw
from .ratefn import I, RateCurve
from .renewal import alpha_pm, lambda_c, mgf_summary, phi_pm, tilde_f

__all__ = [
    "GcReport",
    "TestReport",
    "gc_check_analytic",
    "gc_predict",
    "independence_test",
    "gc_symmetry_residual",
]


@dataclass
class GcReport:
    """Outcome of the analytic proportionality check.

    ``verdict`` is "holds" when the transform ratio is constant within ``tol``
    over the tilt grid, "fails" beyond ten times that, "inconclusive" between.
    ``C``/``c`` are only meaningful when the symmetry holds; ``delta`` is the
    structural log ratio for minimal graph laws.
    """

    verdict: str
    max_ratio_deviation: float
    C: float | None
    c: float | None
    delta: float | None
    symmetry_residual: float | None
    tilde_ratio_deviation: float | None
    lambda_c: float
    p_plus: float
    p_minus: float
    tol: float
    grid_size: int


def _default_theta_grid(law: CycleLaw, points: int = 21) -> np.ndarray:
    summ = mgf_summary(law)
    tmax = 0.8 * abs(summ.velocity)
    if tmax == 0.0:
        tmax = 0.5
    a_minus, a_plus = alpha_pm(law)
    if a_plus > 0.0:
        tmax = min(tmax, 0.9 / a_plus)
    if a_minus > 0.0:
        tmax = min(tmax, 0.9 / a_minus)
    return np.linspace(-tmax, tmax, points)


def gc_check_analytic(law: CycleLaw, lambda_grid_size: int = 64, tol: float = 1e-8) -> GcReport:
    """Test proportionality of the hitting transforms on a tilt grid.

    The grid spans ``[lambda_c - 10 (1 + |lambda_c|), lambda_c]``; the ratio is
    normalized by its value at the critical tilt, where both transforms are
    finite by construction.  For graph laws the excursion-transform ratio is
    checked as well (a sharper, solver-level view of the same symmetry), and
    when the symmetry holds the rate-function residual over a velocity-scaled
    grid is reported.
    """
    if lambda_grid_size < 2:
        raise DomainError("need at least two grid points")
    lc = lambda_c(law)
    if not math.isfinite(lc):
        raise DomainError("analytic check requires a finite critical tilt")
    grid = np.linspace(lc - 10.0 * (1.0 + abs(lc)), lc, lambda_grid_size)
    ratios = np.empty(lambda_grid_size)
    for i, lam in enumerate(grid):
        pair = phi_pm(law, float(lam))
        ratios[i] = pair.plus / pair.minus
    ref = ratios[-1]
    dev = float(np.abs(ratios / ref - 1.0).max())

    tilde_dev = None
    if isinstance(law, GraphLaw):
        tr = np.empty(lambda_grid_size)
        for i, lam in enumerate(grid):
            t = tilde_f(law.graph, law.rate_map, float(lam))
            tr[i] = t.plus / t.minus
        tilde_dev = float(np.abs(tr / tr[-1] - 1.0).max())

    if dev < tol:
        verdict = "holds"
    elif dev >= 10.0 * tol:
        verdict = "fails"
    else:
        verdict = "inconclusive"

    delta = None
    if isinstance(law, GraphLaw) and minimality_report(law.graph).minimal:
        delta = gc_delta(law.graph, law.rate_map)

    C = c = residual = None
    if verdict == "holds":
        C = float(ref)
        c = -math.log(C)
        thetas = _default_theta_grid(law)
        residual = float(
            max(abs(I(law, float(t)) - I(law, float(-t)) - c * float(t)) for t in thetas)
        )
    summ = mgf_summary(law)
    return GcReport(
        verdict=verdict,
        max_ratio_deviation=dev,
        C=C,
        c=c,
        delta=delta,
        symmetry_residual=residual,
        tilde_ratio_deviation=tilde_dev,
        lambda_c=lc,
        p_plus=summ.p_plus,
        p_minus=summ.p_minus,
        tol=tol,
        grid_size=lambda_grid_size,
    )


def gc_predict(graph: FundamentalGraph, rates: RateMap) -> tuple[str, float | None]:
    """Structural prediction: ("holds", Delta) for minimal cells, else generic failure.

    Requires edge support closed under reversal; the non-minimal verdict is a
    Lebesgue-almost-every statement over rate assignments, so a measure-zero
    rate choice can still satisfy the symmetry.
    """
    report = validate(graph, rates)
    if not report.support_symmetric:
        raise AsymmetricSupport("prediction requires (x,y) in E iff (y,x) in E")
    m = minimality_report(graph)
    if m.minimal:
        return "holds", gc_delta(graph, rates)
    return "generically_fails", None


@dataclass
class TestReport:
    method: str
    statistic: float
    p_value: float
    reject: bool
    significance: float
    n_plus: int
    n_minus: int


def _as_arrays(samples) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(samples, tuple) and len(samples) == 2:
        signs, durs = samples
        return np.asarray(signs, dtype=int), np.asarray(durs, dtype=float)
    signs = np.array([s.sign for s in samples], dtype=int)
    durs = np.array([s.duration for s in samples], dtype=float)
    return signs, durs


def independence_test(
    samples,
    significance: float = 0.01,
    method: str = "auto",
    n_permutations: int = 2000,
    seed: int = 0,
) -> TestReport:
    """Test independence of cycle sign and duration on sampled cycles.

    ``samples`` is either a (signs, durations) array pair or an iterable of
    cycle samples.  Continuous durations get a two-sample KS test (asymptotic
    p-value) between the per-sign duration samples; heavily tied durations
    (at most 16 distinct values, as in a discrete law) get a permutation
    chi-square test on the sign-by-duration contingency table instead, since
    KS p-values are unreliable under ties.
    """
    signs, durs = _as_arrays(samples)
    dplus = durs[signs > 0]
    dminus = durs[signs < 0]
    if min(dplus.size, dminus.size) < 5:
        raise InsufficientSamples("need at least 5 cycles of each sign")
    if method == "auto":
        method = "permutation" if np.unique(durs).size <= 16 else "ks"
    if method == "ks":
        stat, p = scipy.stats.ks_2samp(dplus, dminus, method="asymp")
    elif method == "permutation":
        stat, p = _permutation_contingency(signs, durs, n_permutations, seed)
    else:
        raise DomainError(f"unknown method {method!r}")
    return TestReport(
        method=method,
        statistic=float(stat),
        p_value=float(p),
        reject=bool(p < significance),
        significance=significance,
        n_plus=int(dplus.size),
        n_minus=int(dminus.size),
    )


def _chi2_stat(table: np.ndarray) -> float:
    total = table.sum()
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / total
    mask = expected > 0
    return float((((table - expected) ** 2)[mask] / expected[mask]).sum())


def _permutation_contingency(
    signs: np.ndarray, durs: np.ndarray, n_permutations: int, seed: int
) -> tuple[float, float]:
    values, codes = np.unique(durs, return_inverse=True)
    k = values.size
    plus = signs > 0

    def table(p: np.ndarray) -> np.ndarray:
        t = np.zeros((2, k))
        np.add.at(t[0], codes[p], 1)
        np.add.at(t[1], codes[~p], 1)
        return t

    obs = _chi2_stat(table(plus))
    rng = np.random.default_rng(seed)
    hits = 0
    p = plus.copy()
    for _ in range(n_permutations):
        rng.shuffle(p)
        if _chi2_stat(table(p)) >= obs - 1e-12:
            hits += 1
    return obs, (1.0 + hits) / (1.0 + n_permutations)


def gc_symmetry_residual(curve: RateCurve, c: float) -> float:
    """Largest violation of ``I(theta) - I(-theta) - c*theta`` over a symmetric grid."""
    if curve.kind != "I":
        raise DomainError("symmetry residual is defined for position rate curves")
    grid = np.asarray(curve.abscissae, dtype=float)
    vals = np.asarray(curve.values, dtype=float)
    order = np.argsort(grid)
    grid, vals = grid[order], vals[order]
    scale = max(1.0, float(np.abs(grid).max()))
    if not np.allclose(grid, -grid[::-1], rtol=0.0, atol=1e-12 * scale):
        raise AsymmetricGrid("grid must be symmetric about zero")
    if not np.isfinite(vals).all():
        raise DomainError("rate values must be finite on the tested grid")
    residual = np.abs(vals - vals[::-1] - c * grid)
    return float(residual.max())
