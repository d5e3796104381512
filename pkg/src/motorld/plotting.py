"""Figure rendering for rate curves and Monte Carlo comparisons.

All functions save PNG files and never open a window; the Agg backend is
forced before pyplot is imported so the package works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .mc import ComparisonReport, EmpiricalCurve
from .ratefn import RateCurve

__all__ = ["plot_rate_curve", "plot_mc_comparison"]

_KIND_LABEL = {
    "I": r"$I(\theta)$",
    "J+": r"$J_+(u)$",
    "J-": r"$J_-(u)$",
}


def _finite_mask(values: np.ndarray) -> np.ndarray:
    return np.isfinite(np.asarray(values, dtype=float))


def plot_rate_curve(
    curves: list[RateCurve],
    path: str | Path,
    title: str | None = None,
) -> Path:
    """Draw one or more rate curves on a shared axis and save a PNG."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for curve in curves:
        x = np.asarray(curve.abscissae, dtype=float)
        y = np.asarray(curve.values, dtype=float)
        ok = _finite_mask(y)
        label = _KIND_LABEL.get(curve.kind, curve.kind)
        if curve.route != "renewal":
            label += f" [{curve.route}]"
        ax.plot(x[ok], y[ok], lw=1.5, label=label)
    ax.set_xlabel("scaled displacement" if curves and curves[0].kind == "I"
                  else "cycle duration")
    ax.set_ylabel("decay rate")
    ax.grid(True, alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    out = Path(path)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def plot_mc_comparison(
    analytic: RateCurve,
    empirical: EmpiricalCurve,
    report: ComparisonReport,
    path: str | Path,
    title: str | None = None,
) -> Path:
    """Overlay the aligned analytic curve on empirical points with bands."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    x = np.asarray(analytic.abscissae, dtype=float)
    y = np.asarray(analytic.values, dtype=float) - report.analytic_offset
    ok = _finite_mask(y)
    ax.plot(x[ok], y[ok], lw=1.5, color="C0", label="analytic")
    if report.align == "min":
        pts = empirical.estimates_aligned
        lo, hi = empirical.lower_aligned, empirical.upper_aligned
    else:
        pts = empirical.estimates
        lo, hi = empirical.lower, empirical.upper
    err = np.vstack([pts - lo, hi - pts])
    cap = 10.0 * max(float(pts.max()), 1e-3)
    err = np.where(np.isfinite(err), err, cap)
    ax.errorbar(
        empirical.abscissae,
        pts,
        yerr=err,
        fmt="o",
        ms=3,
        lw=0.8,
        color="C1",
        label=f"simulation (n={empirical.n_samples})",
    )
    ax.set_xlabel("scaled displacement" if empirical.kind == "position"
                  else "scaled hitting time")
    ax.set_ylabel("decay rate (aligned)" if report.align == "min" else "decay rate")
    ax.grid(True, alpha=0.3)
    ax.legend()
    cov = 100.0 * report.coverage
    ax.set_title(title or f"coverage {cov:.1f}% over {report.n_bins} bins")
    out = Path(path)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
