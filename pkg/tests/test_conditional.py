"""Tests for distance laws conditioned on one known neighbour distance."""

from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.stats as st

from bppdist import (
    BeaconCondition,
    BeaconConditionedLaw,
    NetworkSpec,
    NthNeighborQuery,
    cond_cdf,
    cond_ccdf,
    cond_moment,
    cond_moment_report,
    cond_pdf,
    cond_pdf_given_nearest,
    integrate,
    mean_rn,
    pdf_rn,
    pochhammer_rising,
    sample_bpp_distances,
    SimConfig,
)

SPEC = NetworkSpec(2, 1.0, 10)
COND = BeaconCondition(4, 0.4)


class TestValidation:
    def test_degenerate_rank_rejected(self):
        with pytest.raises(ValueError):
            cond_pdf(SPEC, COND, 4, 0.5)
        with pytest.raises(ValueError):
            cond_cdf(SPEC, COND, 4, 0.5)

    def test_beacon_distance_inside_window(self):
        with pytest.raises(ValueError):
            cond_pdf(SPEC, BeaconCondition(4, 1.0), 2, 0.5)
        with pytest.raises(ValueError):
            cond_pdf(SPEC, BeaconCondition(4, 0.0), 2, 0.5)

    def test_rank_bounds(self):
        with pytest.raises(ValueError):
            cond_pdf(SPEC, BeaconCondition(11, 0.4), 2, 0.5)
        with pytest.raises(ValueError):
            cond_pdf(SPEC, COND, 11, 0.5)
        with pytest.raises(ValueError):
            cond_pdf(SPEC, COND, 0, 0.5)

    def test_distance_window(self):
        with pytest.raises(ValueError):
            cond_pdf(SPEC, COND, 2, -0.1)
        with pytest.raises(ValueError):
            cond_pdf(SPEC, COND, 2, 1.1)

    def test_degenerate_rank_moment_is_point_mass(self):
        assert float(cond_moment(SPEC, COND, 4, 2.0)) == pytest.approx(0.16, rel=1e-14)


class TestInnerBranch:
    def test_reduces_to_smaller_network(self):
        # Conditioned on the k-th neighbour at s, the closer ranks follow the
        # plain rank law of k-1 uniform nodes in the ball of radius s.
        for n in (1, 2, 3):
            reduced = NthNeighborQuery(NetworkSpec(2, 0.4, 3), n)
            for r in np.linspace(0.0, 0.4, 17):
                ours = cond_pdf(SPEC, COND, n, float(r))
                ref = pdf_rn(reduced, float(r))
                assert ours == pytest.approx(ref, rel=1e-12, abs=1e-12)

    def test_vanishes_beyond_beacon(self):
        assert cond_pdf(SPEC, COND, 2, 0.7) == 0.0
        assert cond_cdf(SPEC, COND, 2, 0.7) == 1.0
        assert cond_ccdf(SPEC, COND, 2, 0.7) == 0.0

    def test_normalization(self):
        for n in (1, 3):
            mass = integrate(
                lambda r: np.asarray(cond_pdf(SPEC, COND, n, r)), 0.0, 0.4
            )
            assert mass == pytest.approx(1.0, abs=1e-8)

    def test_cdf_saturates_at_beacon(self):
        assert cond_cdf(SPEC, COND, 3, 0.4) == pytest.approx(1.0, abs=1e-12)


class TestOuterBranch:
    def test_two_node_interval_uniform(self):
        # One node total beyond the beacon on an interval: conditioned on the
        # nearest at 0.5, the second node is uniform on (0.5, 1).
        spec = NetworkSpec(1, 1.0, 2)
        cond = BeaconCondition(1, 0.5)
        for r in (0.55, 0.7, 0.95):
            assert cond_pdf(spec, cond, 2, r) == pytest.approx(2.0, rel=1e-12)
        assert cond_cdf(spec, cond, 2, 0.75) == pytest.approx(0.5, rel=1e-12)

    def test_vanishes_below_beacon(self):
        assert cond_pdf(SPEC, COND, 7, 0.2) == 0.0
        assert cond_cdf(SPEC, COND, 7, 0.2) == 0.0
        assert cond_ccdf(SPEC, COND, 7, 0.2) == 1.0

    def test_normalization(self):
        for n in (5, 7, 10):
            mass = integrate(
                lambda r: np.asarray(cond_pdf(SPEC, COND, n, r)), 0.4, 1.0
            )
            assert mass == pytest.approx(1.0, abs=1e-8)

    def test_cdf_finite_difference(self):
        h = 1e-7
        for r in np.linspace(0.45, 0.95, 11):
            fd = (cond_cdf(SPEC, COND, 7, r + h) - cond_cdf(SPEC, COND, 7, r - h)) / (2 * h)
            assert fd == pytest.approx(cond_pdf(SPEC, COND, 7, float(r)), rel=1e-5, abs=1e-6)

    def test_edges(self):
        assert cond_cdf(SPEC, COND, 7, 0.4) == 0.0
        assert cond_cdf(SPEC, COND, 7, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_complement(self):
        rs = np.linspace(0.0, 1.0, 33)
        total = np.asarray(cond_cdf(SPEC, COND, 7, rs)) + np.asarray(
            cond_ccdf(SPEC, COND, 7, rs)
        )
        np.testing.assert_allclose(total, 1.0, atol=1e-12)


class TestGivenNearest:
    def test_matches_rank_one_beacon(self):
        for r in np.linspace(0.25, 0.95, 9):
            ours = cond_pdf_given_nearest(SPEC, 0.2, 5, float(r))
            ref = cond_pdf(SPEC, BeaconCondition(1, 0.2), 5, float(r))
            assert ours == pytest.approx(ref, rel=1e-14)

    def test_interval_shell_beta(self):
        # d=1, N=3, nearest at 0.2: the second neighbour follows a rescaled
        # Beta(1, 2) on the shell (0.2, 1).
        spec = NetworkSpec(1, 1.0, 3)
        for r in (0.3, 0.6, 0.9):
            q = (r - 0.2) / 0.8
            ref = 2.0 * (1.0 - q) / 0.8
            assert cond_pdf_given_nearest(spec, 0.2, 2, r) == pytest.approx(ref, rel=1e-12)

    def test_requires_rank_at_least_two(self):
        with pytest.raises(ValueError):
            cond_pdf_given_nearest(SPEC, 0.2, 1, 0.5)


class TestMoments:
    def test_inner_closed_form_tracks_quadrature(self):
        # E[R_n^g | R_k=s] = s^g (n)^[g/d] / (k)^[g/d] on the inner branch.
        for n, gamma in [(1, 1.0), (2, 2.0), (3, 0.5)]:
            got = float(cond_moment(SPEC, COND, n, gamma))
            expected = (
                0.4**gamma
                * float(pochhammer_rising(float(n), gamma / 2.0))
                / float(pochhammer_rising(4.0, gamma / 2.0))
            )
            assert got == pytest.approx(expected, rel=1e-9)

    def test_inner_report_reference_point(self):
        report = cond_moment_report(NetworkSpec(1, 1.0, 5), BeaconCondition(2, 0.6), 1, 1.0)
        assert report.branch == "inner"
        assert report.quadrature == pytest.approx(0.3, rel=1e-10)
        assert report.closed_form_corrected == pytest.approx(0.3, rel=1e-12)
        # The alternative normalization constant is measurably wrong here
        # (0.2 vs the true 0.3); keeping it visible is deliberate.
        assert report.closed_form_shifted == pytest.approx(0.2, rel=1e-12)
        assert abs(report.closed_form_shifted / report.quadrature - 1.0) > 0.1

    def test_outer_reference_point(self):
        report = cond_moment_report(SPEC, COND, 7, 1.0)
        assert report.branch == "outer"
        # Independent high-precision quadrature of the shell density.
        assert report.quadrature == pytest.approx(0.7136347065458235, rel=1e-12)
        assert report.closed_form_corrected == pytest.approx(0.7136347065458235, rel=1e-10)
        assert report.closed_form_corrected == report.closed_form_shifted

    def test_outer_quadrature_vs_hypergeometric(self):
        for n, gamma in [(5, 1.0), (7, 2.0), (10, 1.0), (7, 3.7)]:
            report = cond_moment_report(SPEC, COND, n, gamma)
            assert report.closed_form_corrected == pytest.approx(
                report.quadrature, rel=1e-6
            )

    def test_inner_infinite_branch(self):
        # Inner rank n=1 in d=2 with gamma=-2 sits exactly on the divergence
        # boundary n + gamma/d = 0.
        assert not cond_moment(SPEC, COND, 1, -2.0).is_finite
        assert cond_moment(SPEC, COND, 1, -1.9).is_finite

    def test_moment_monotone_in_rank(self):
        vals = [float(cond_moment(SPEC, COND, n, 1.0)) for n in (1, 2, 3, 5, 6, 7)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestBeaconConditionedLaw:
    def test_support_property(self):
        assert BeaconConditionedLaw(SPEC, COND, 2).support == (0.0, 0.4)
        assert BeaconConditionedLaw(SPEC, COND, 7).support == (0.4, 1.0)

    @pytest.mark.parametrize("rank", [2, 7])
    def test_sampling_matches_cdf(self, rank):
        law = BeaconConditionedLaw(SPEC, COND, rank)
        rng = np.random.default_rng(100 + rank)
        samples = np.sort(law.sample(rng, 20_000))
        lo, hi = law.support
        assert samples.min() >= lo and samples.max() <= hi
        stat = st.kstest(samples, lambda r: np.asarray(law.cdf(r))).statistic
        assert stat <= 1.63 / math.sqrt(samples.size)

    def test_quantile_roundtrip(self):
        law = BeaconConditionedLaw(SPEC, COND, 7)
        for u in (0.05, 0.5, 0.95):
            assert law.cdf(law.quantile(u)) == pytest.approx(u, abs=1e-9)

    def test_law_mean_matches_moment(self):
        law = BeaconConditionedLaw(SPEC, COND, 7)
        rng = np.random.default_rng(21)
        samples = law.sample(rng, 50_000)
        expected = float(cond_moment(SPEC, COND, 7, 1.0))
        se = samples.std(ddof=1) / math.sqrt(samples.size)
        assert abs(samples.mean() - expected) <= 4.0 * se


class TestSlicedSimulationOracle:
    """Condition by brute force: keep network draws whose rank-k distance
    lands in a thin bin around s, then compare the other ranks' empirical
    laws against the analytic conditional ones."""

    def test_both_branches(self):
        s, ds = 0.40, 0.01
        matrix = sample_bpp_distances(SPEC, SimConfig(seed=2024, trials=300_000))
        keep = (matrix[:, 3] >= s) & (matrix[:, 3] < s + ds)
        sliced = matrix[keep]
        assert sliced.shape[0] > 3000
        # Evaluate the analytic law at the bin centre to cancel the
        # first-order slicing bias.
        centre = BeaconCondition(4, s + 0.5 * ds)
        for rank, column in [(2, 1), (7, 6)]:
            samples = np.sort(sliced[:, column])
            stat = st.kstest(
                samples, lambda r: np.asarray(cond_cdf(SPEC, centre, rank, r))
            ).statistic
            assert stat <= 1.63 / math.sqrt(samples.size)

    def test_total_expectation_interval_case(self):
        # Averaging the conditional mean over the beacon's own law recovers
        # the unconditional mean (interval case, cheap closed forms).
        spec = NetworkSpec(1, 1.0, 9)
        k = 4

        def integrand(svals):
            out = []
            for s in np.atleast_1d(svals):
                cond = BeaconCondition(k, float(s))
                out.append(
                    float(cond_moment(spec, cond, 6, 1.0))
                    * pdf_rn(NthNeighborQuery(spec, k), float(s))
                )
            return np.asarray(out)

        total = integrate(integrand, 0.0, 1.0)
        assert total == pytest.approx(mean_rn(NthNeighborQuery(spec, 6)), rel=1e-8)
