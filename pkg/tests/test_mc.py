"""Empirical rate curves from simulation and their comparison with the
analytic curves: binning, bootstrap bands, alignment, coverage."""

from __future__ import annotations

import numpy as np
import pytest

from motorld import (
    DomainError,
    GraphLaw,
    InsufficientSamples,
    NoOverlap,
    compare_curves,
    empirical_rate_hitting,
    empirical_rate_position,
    rate_curve,
    velocity,
)


class TestPositionCurve:
    def test_deterministic_in_seed_and_workers(self, two_vertex_law):
        a = empirical_rate_position(two_vertex_law, 10.0, 4000, seed=7, workers=2)
        b = empirical_rate_position(two_vertex_law, 10.0, 4000, seed=7, workers=2)
        assert np.array_equal(a.abscissae, b.abscissae)
        assert np.array_equal(a.estimates, b.estimates)
        assert np.array_equal(a.lower, b.lower)
        assert np.array_equal(a.upper, b.upper)

    def test_worker_split_changes_stream(self, two_vertex_law):
        a = empirical_rate_position(two_vertex_law, 10.0, 4000, seed=7, workers=1)
        b = empirical_rate_position(two_vertex_law, 10.0, 4000, seed=7, workers=2)
        assert not np.array_equal(a.estimates, b.estimates)

    def test_bands_bracket_estimates(self, tooth_law):
        curve = empirical_rate_position(tooth_law, 20.0, 8000, seed=2)
        assert np.all(curve.lower <= curve.estimates + 1e-12)
        assert np.all(curve.estimates <= curve.upper + 1e-12)
        aligned = curve.estimates_aligned
        assert np.all(curve.lower_aligned <= aligned + 1e-12)
        assert np.all(aligned <= curve.upper_aligned + 1e-12)
        assert aligned.min() == pytest.approx(0.0, abs=0.0)

    def test_kept_bins_have_minimum_count(self, two_vertex_law):
        curve = empirical_rate_position(two_vertex_law, 15.0, 3000, seed=4)
        assert np.all(curve.counts >= 5)
        assert curve.counts.sum() <= curve.n_samples

    def test_bins_are_integer_groups(self, two_vertex_law):
        t = 12.0
        curve = empirical_rate_position(two_vertex_law, t, 5000, seed=5)
        # Default width 2/t means two lattice atoms per bin; each center is
        # the mean of its two atoms, so center*t - 1/2 is an even integer.
        assert curve.bin_width == pytest.approx(2.0 / t)
        k = curve.abscissae * t - 0.5
        assert np.allclose(k, 2.0 * np.round(k / 2.0), atol=1e-9)

    def test_width_snaps_to_whole_atoms(self, two_vertex_law):
        curve = empirical_rate_position(
            two_vertex_law, 30.0, 2000, bin_width=0.137, seed=6
        )
        assert curve.bin_width == pytest.approx(4.0 / 30.0)

    def test_curve_metadata(self, chain3_law):
        curve = empirical_rate_position(chain3_law, 8.0, 2000, seed=9, workers=3)
        assert curve.kind == "position"
        assert curve.scale == 8.0
        assert curve.n_samples == 2000
        assert curve.censored_fraction is None
        assert curve.meta["seed"] == 9
        assert curve.meta["workers"] == 3

    def test_minimum_sits_near_velocity(self, two_vertex_law):
        curve = empirical_rate_position(two_vertex_law, 30.0, 20000, seed=3)
        argmin = curve.abscissae[np.argmin(curve.estimates)]
        assert argmin == pytest.approx(velocity(two_vertex_law), abs=0.5)

    def test_bad_arguments(self, two_vertex_law):
        with pytest.raises(DomainError):
            empirical_rate_position(two_vertex_law, 0.0, 100)
        with pytest.raises(DomainError):
            empirical_rate_position(two_vertex_law, 5.0, 0)
        with pytest.raises(DomainError):
            empirical_rate_position(two_vertex_law, 5.0, 100, workers=0)
        with pytest.raises(DomainError):
            empirical_rate_position(two_vertex_law, 5.0, 100, bin_width=-1.0)

    def test_too_few_samples(self, two_vertex_law):
        with pytest.raises(InsufficientSamples):
            empirical_rate_position(two_vertex_law, 5.0, 4, seed=1)


class TestHittingCurve:
    def test_uncensored_when_cap_is_generous(self, two_vertex_law):
        curve = empirical_rate_hitting(two_vertex_law, 30, 4000, t_cap=1000.0, seed=2)
        assert curve.kind == "hitting"
        assert curve.scale == 30.0
        assert curve.censored_fraction == 0.0
        assert np.all(curve.abscissae > 0.0)
        assert np.all(curve.counts >= 5)
        # Centers are midpoints of width-sized cells of the scaled time axis.
        frac = curve.abscissae / curve.bin_width - 0.5
        assert np.allclose(frac, np.round(frac), atol=1e-9)

    def test_mass_concentrates_at_inverse_velocity(self, two_vertex_law):
        curve = empirical_rate_hitting(two_vertex_law, 25, 8000, t_cap=1000.0, seed=8)
        argmin = curve.abscissae[np.argmin(curve.estimates)]
        assert argmin == pytest.approx(1.0 / velocity(two_vertex_law), abs=0.25)

    def test_censoring_recorded(self, two_vertex_law):
        curve = empirical_rate_hitting(two_vertex_law, 20, 3000, t_cap=5.0, seed=3)
        assert 0.0 < curve.censored_fraction < 1.0
        assert curve.meta["t_cap"] == 5.0

    def test_all_censored(self, two_vertex_law):
        with pytest.raises(InsufficientSamples):
            empirical_rate_hitting(two_vertex_law, 20, 50, t_cap=1e-9, seed=4)

    def test_bad_arguments(self, two_vertex_law):
        with pytest.raises(DomainError):
            empirical_rate_hitting(two_vertex_law, 0, 100, t_cap=10.0)
        with pytest.raises(DomainError):
            empirical_rate_hitting(two_vertex_law, 5, 100, t_cap=0.0)
        with pytest.raises(DomainError):
            empirical_rate_hitting(two_vertex_law, 5, 0, t_cap=10.0)


class TestCompareCurves:
    def analytic(self, law, lo=0.0, hi=6.0, n=241):
        return rate_curve(law, "I", np.linspace(lo, hi, n))

    def test_no_alignment_keeps_levels(self, two_vertex_law):
        emp = empirical_rate_position(two_vertex_law, 20.0, 8000, seed=1)
        report = compare_curves(self.analytic(two_vertex_law), emp, align="none")
        assert report.align == "none"
        assert report.analytic_offset == 0.0
        assert report.empirical_offset == 0.0
        assert report.n_bins == report.covered.size == report.abscissae.size
        assert report.n_covered == int(report.covered.sum())
        assert 0.0 <= report.coverage <= 1.0

    def test_min_alignment_offsets(self, two_vertex_law):
        emp = empirical_rate_position(two_vertex_law, 20.0, 8000, seed=1)
        curve = self.analytic(two_vertex_law)
        report = compare_curves(curve, emp, align="min")
        vals = np.asarray(curve.values, dtype=float)
        assert report.analytic_offset == pytest.approx(
            float(vals[np.isfinite(vals)].min())
        )
        assert report.empirical_offset == pytest.approx(float(emp.estimates.min()))

    def test_shift_alignment_is_weighted_least_squares(self, two_vertex_law):
        emp = empirical_rate_position(two_vertex_law, 20.0, 8000, seed=1)
        curve = self.analytic(two_vertex_law)
        report = compare_curves(curve, emp)
        assert report.align == "shift"
        assert report.empirical_offset == 0.0
        grid = np.asarray(curve.abscissae, dtype=float)
        vals = np.asarray(curve.values, dtype=float)
        mask = (emp.abscissae >= grid.min()) & (emp.abscissae <= grid.max())
        a = np.interp(emp.abscissae[mask], grid, vals)
        w = emp.counts[mask].astype(float)
        want = -np.average(emp.estimates[mask] - a, weights=w)
        assert report.analytic_offset == pytest.approx(want, rel=1e-12)

    def test_window_restricts_scored_bins(self, two_vertex_law):
        emp = empirical_rate_position(two_vertex_law, 20.0, 8000, seed=1)
        curve = self.analytic(two_vertex_law)
        full = compare_curves(curve, emp)
        v = velocity(two_vertex_law)
        windowed = compare_curves(curve, emp, window=(v - 1.0, v + 1.0))
        assert windowed.n_bins < full.n_bins
        assert np.all(windowed.abscissae >= v - 1.0)
        assert np.all(windowed.abscissae <= v + 1.0)

    def test_no_overlap(self, two_vertex_law):
        emp = empirical_rate_position(two_vertex_law, 20.0, 8000, seed=1)
        far = rate_curve(two_vertex_law, "I", np.linspace(40.0, 50.0, 5))
        with pytest.raises(NoOverlap):
            compare_curves(far, emp)
        with pytest.raises(NoOverlap):
            compare_curves(self.analytic(two_vertex_law), emp, window=(90.0, 99.0))

    def test_unknown_alignment(self, two_vertex_law):
        emp = empirical_rate_position(two_vertex_law, 20.0, 8000, seed=1)
        with pytest.raises(DomainError):
            compare_curves(self.analytic(two_vertex_law), emp, align="scale")

    def test_coverage_near_velocity(self, two_vertex_law):
        """The analytic curve should thread the bootstrap bands through the
        well-populated bins around the typical position."""
        emp = empirical_rate_position(two_vertex_law, 30.0, 20000, seed=3)
        curve = self.analytic(two_vertex_law)
        v = velocity(two_vertex_law)
        report = compare_curves(curve, emp, window=(v - 2.0, v + 2.0))
        assert report.coverage >= 0.6

    def test_hitting_curve_tracks_time_rate_function(self, two_vertex_law):
        """P(T_L = sL) decays at rate J+(s) in L, so the empirical hitting
        curve (abscissa: scaled time) estimates J+ up to an O(log L / L)
        prefactor.  At L = 30 that correction dwarfs the n = 20000 bootstrap
        bands, so coverage is not the right score here; instead the curve
        must match J+ pointwise to the finite-size tolerance after fitting
        the single nuisance offset."""
        emp = empirical_rate_hitting(two_vertex_law, 30, 20000, t_cap=1000.0, seed=2)
        analytic = rate_curve(two_vertex_law, "J+", np.linspace(0.05, 1.5, 300))
        report = compare_curves(analytic, emp, window=(0.15, 0.65))
        grid = np.asarray(analytic.abscissae, float)
        vals = np.asarray(analytic.values, float)
        a = np.interp(report.abscissae, grid, vals) - report.analytic_offset
        keep = (emp.abscissae >= 0.15) & (emp.abscissae <= 0.65)
        gaps = np.abs(a - emp.estimates[keep])
        assert gaps.max() < 0.05
