"""Monte Carlo confrontation of analytic rate functions with simulation.

Binned frequencies of the scaled position (or hitting time) give pointwise
estimates ``-(1/t) log(count/n)`` with percentile bootstrap bands from
multinomial resampling of the histogram.  At finite t the empirical curve sits
a slowly varying ``(1/t) log(...)`` normalization above the rate function, an
offset no band around raw estimates can absorb, so each curve also carries
bands for its *aligned* form (the curve minus its own minimum, the natural
normalization for rate functions, which vanish at the velocity).  The aligned
bands come from aligning every bootstrap replicate separately, so the noise of
the anchoring minimum is priced in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InsufficientSamples, NoOverlap
from .laws import CycleLaw
from .ratefn import RateCurve
from .simulate import sample_hitting_times, sample_positions, spawn_rngs

__all__ = [
    "EmpiricalCurve",
    "ComparisonReport",
    "empirical_rate_position",
    "empirical_rate_hitting",
    "compare_curves",
]

MIN_BIN_COUNT = 5


@dataclass
class EmpiricalCurve:
    """Binned rate estimates with bootstrap bands.

    Only bins with at least ``MIN_BIN_COUNT`` hits get an estimate.  ``scale``
    is the large parameter of the decay (the horizon t, or |level| for hitting
    times).  ``lower``/``upper`` band the raw estimates; ``lower_aligned``/
    ``upper_aligned`` band the aligned curve ``estimates - estimates.min()``.
    All bands are 95% percentile intervals, widened if needed so they bracket
    the corresponding point estimate.
    """

    abscissae: np.ndarray
    estimates: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    lower_aligned: np.ndarray
    upper_aligned: np.ndarray
    counts: np.ndarray
    n_samples: int
    scale: float
    kind: str
    bin_width: float
    censored_fraction: float | None = None
    meta: dict = field(default_factory=dict)

    @property
    def estimates_aligned(self) -> np.ndarray:
        return self.estimates - self.estimates.min()


def _boot_bands(
    counts: np.ndarray,
    n_total: int,
    scale: float,
    n_boot: int,
    rng: np.random.Generator,
):
    """Point estimates and 95% multinomial bootstrap bands from bin counts."""
    probs = counts / n_total
    spare = max(1.0 - probs.sum(), 0.0)  # censored mass plus dropped bins
    pvec = np.concatenate([probs, [spare]])
    pvec = pvec / pvec.sum()
    boots = rng.multinomial(n_total, pvec, size=n_boot)[:, : len(counts)]
    est = -np.log(counts / n_total) / scale
    # Raw bands: the estimate is a decreasing function of the count, so its
    # percentiles are the transformed opposite percentiles of the counts.
    c_hi = np.percentile(boots, 97.5, axis=0)
    c_lo = np.percentile(boots, 2.5, axis=0)
    with np.errstate(divide="ignore"):
        lo = -np.log(c_hi / n_total) / scale
        hi = -np.log(np.maximum(c_lo, 0.0) / n_total) / scale
        bcurves = -np.log(boots / n_total) / scale  # +inf where a count is 0
    lo = np.minimum(lo, est)
    hi = np.maximum(hi, est)
    # Aligned bands: each replicate is shifted by its own minimum, so the
    # fluctuation of the anchoring bin is part of every bin's band.  The
    # order-statistic percentile methods avoid arithmetic between infinities.
    aligned = bcurves - bcurves.min(axis=1, keepdims=True)
    lo_a = np.percentile(aligned, 2.5, axis=0, method="lower")
    hi_a = np.percentile(aligned, 97.5, axis=0, method="higher")
    est_a = est - est.min()
    lo_a = np.minimum(lo_a, est_a)
    hi_a = np.maximum(hi_a, est_a)
    return est, lo, hi, lo_a, hi_a


def _keep_big_bins(uniq: np.ndarray, counts: np.ndarray):
    keep = counts >= MIN_BIN_COUNT
    if not keep.any():
        raise InsufficientSamples("no bin collected the minimum number of hits")
    return uniq[keep], counts[keep]


def _split_counts(n_samples: int, workers: int) -> list[int]:
    base, extra = divmod(n_samples, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def empirical_rate_position(
    law: CycleLaw,
    t: float,
    n_samples: int,
    bin_width: float | None = None,
    seed: int = 0,
    workers: int = 1,
    n_boot: int = 1000,
) -> EmpiricalCurve:
    """Empirical rate curve of the scaled position at horizon ``t``.

    Sampling is split over ``workers`` independent substreams of ``seed``;
    results depend only on (seed, workers).  Positions are integer lattice
    atoms, so the requested width is snapped to a whole number of atoms per
    bin (default two, i.e. width 2/t) and samples are grouped by exact integer
    division; the abscissa of a bin is the mean of its atom positions.
    """
    if t <= 0.0 or n_samples < 1 or workers < 1:
        raise DomainError("need positive horizon, samples and workers")
    width = bin_width if bin_width is not None else 2.0 / t
    if width <= 0.0:
        raise DomainError("bin width must be positive")
    atoms_per_bin = max(1, int(round(width * t)))
    width = atoms_per_bin / t
    rngs = spawn_rngs(seed, workers + 1)
    chunks = [
        sample_positions(law, t, m, rng)
        for m, rng in zip(_split_counts(n_samples, workers), rngs[:workers])
        if m > 0
    ]
    z = np.concatenate(chunks)
    uniq, counts = np.unique(z // atoms_per_bin, return_counts=True)
    uniq, counts = _keep_big_bins(uniq, counts)
    centers = (uniq * atoms_per_bin + (atoms_per_bin - 1) / 2.0) / t
    est, lo, hi, lo_a, hi_a = _boot_bands(counts, n_samples, t, n_boot, rngs[workers])
    return EmpiricalCurve(
        abscissae=centers,
        estimates=est,
        lower=lo,
        upper=hi,
        lower_aligned=lo_a,
        upper_aligned=hi_a,
        counts=counts,
        n_samples=n_samples,
        scale=t,
        kind="position",
        bin_width=width,
        censored_fraction=None,
        meta={"seed": seed, "workers": workers, "t": t, "n_boot": n_boot},
    )


def empirical_rate_hitting(
    law: CycleLaw,
    level: int,
    n_samples: int,
    t_cap: float,
    bin_width: float | None = None,
    seed: int = 0,
    workers: int = 1,
    n_boot: int = 1000,
) -> EmpiricalCurve:
    """Empirical rate curve of the scaled hitting time of ``level``.

    Censored walks (time passed ``t_cap`` before the level) count in the
    denominator and in ``censored_fraction`` but produce no abscissa.
    """
    if level == 0:
        raise DomainError("target level must be a nonzero integer")
    if n_samples < 1 or workers < 1 or t_cap <= 0.0:
        raise DomainError("need positive samples, workers and cap")
    speed = float(abs(level))
    width = bin_width if bin_width is not None else 2.0 / speed
    rngs = spawn_rngs(seed, workers + 1)
    chunks = [
        sample_hitting_times(law, level, m, rng, t_cap)
        for m, rng in zip(_split_counts(n_samples, workers), rngs[:workers])
        if m > 0
    ]
    times = np.concatenate(chunks)
    finite = times[~np.isnan(times)]
    censored_fraction = 1.0 - finite.size / n_samples
    if finite.size == 0:
        raise InsufficientSamples("all walks were censored before reaching the level")
    idx = np.floor(finite / speed / width).astype(np.int64)
    uniq, counts = np.unique(idx, return_counts=True)
    uniq, counts = _keep_big_bins(uniq, counts)
    centers = (uniq + 0.5) * width
    est, lo, hi, lo_a, hi_a = _boot_bands(counts, n_samples, speed, n_boot, rngs[workers])
    return EmpiricalCurve(
        abscissae=centers,
        estimates=est,
        lower=lo,
        upper=hi,
        lower_aligned=lo_a,
        upper_aligned=hi_a,
        counts=counts,
        n_samples=n_samples,
        scale=speed,
        kind="hitting",
        bin_width=width,
        censored_fraction=censored_fraction,
        meta={"seed": seed, "workers": workers, "level": level, "t_cap": t_cap,
              "n_boot": n_boot},
    )


@dataclass
class ComparisonReport:
    """Coverage of an analytic curve by empirical bands after alignment."""

    coverage: float
    n_bins: int
    n_covered: int
    abscissae: np.ndarray
    covered: np.ndarray
    max_gap_covered: float
    empirical_offset: float
    analytic_offset: float
    align: str


def compare_curves(
    analytic: RateCurve,
    empirical: EmpiricalCurve,
    align: str = "shift",
    window: tuple[float, float] | None = None,
) -> ComparisonReport:
    """Score the analytic curve against empirical bands bin by bin.

    The analytic curve is interpolated onto the empirical bin centers inside
    the shared range (raising when there is none); ``window`` restricts which
    bins are scored.  A finite-horizon empirical curve sees the rate function
    only up to a normalization constant, so by default (``align="shift"``)
    that one scalar is treated as a nuisance parameter, fit by count-weighted
    least squares over the scored bins, and the analytic curve is compared to
    the raw bands after adding it.  ``align="min"`` instead normalizes both
    curves to minimum zero (over the analytic grid and over all kept bins,
    regardless of the window) and uses the aligned bootstrap bands;
    ``align="none"`` compares raw levels.
    """
    if align not in ("shift", "min", "none"):
        raise DomainError(f"unknown alignment {align!r}")
    agrid = np.asarray(analytic.abscissae, dtype=float)
    avals = np.asarray(analytic.values, dtype=float)
    order = np.argsort(agrid)
    agrid, avals = agrid[order], avals[order]
    mask = (empirical.abscissae >= agrid[0]) & (empirical.abscissae <= agrid[-1])
    if window is not None:
        mask &= (empirical.abscissae >= window[0]) & (empirical.abscissae <= window[1])
    if not mask.any():
        raise NoOverlap("no empirical bin falls inside the analytic grid")
    x = empirical.abscissae[mask]
    a = np.interp(x, agrid, avals)
    if align == "min":
        finite = np.isfinite(avals)
        if not finite.any():
            raise DomainError("analytic curve has no finite values")
        a_off = float(avals[finite].min())
        e_off = float(empirical.estimates.min())
        est = empirical.estimates[mask] - e_off
        lo = empirical.lower_aligned[mask]
        hi = empirical.upper_aligned[mask]
    elif align == "shift":
        est = empirical.estimates[mask]
        lo = empirical.lower[mask]
        hi = empirical.upper[mask]
        w = empirical.counts[mask].astype(float)
        ok = np.isfinite(a) & (w > 0)
        if not ok.any():
            raise DomainError("analytic curve has no finite values on the scored bins")
        a_off = -float(np.average(est[ok] - a[ok], weights=w[ok]))
        e_off = 0.0
    else:
        a_off = e_off = 0.0
        est = empirical.estimates[mask]
        lo = empirical.lower[mask]
        hi = empirical.upper[mask]
    a = a - a_off
    covered = (a >= lo) & (a <= hi)
    gaps = np.abs(a - est)
    max_gap = float(gaps[covered].max()) if covered.any() else 0.0
    if not np.isfinite(max_gap):
        max_gap = math.nan
    return ComparisonReport(
        coverage=float(covered.mean()),
        n_bins=int(mask.sum()),
        n_covered=int(covered.sum()),
        abscissae=x,
        covered=covered,
        max_gap_covered=max_gap,
        empirical_offset=e_off,
        analytic_offset=a_off,
        align=align,
    )
