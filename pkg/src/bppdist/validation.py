"""Named check suites pitting the Monte Carlo engine against closed forms.

Each check is a row (name, statistic, threshold, pass/fail) with the
uniform convention that a check passes when ``statistic <= threshold``.
Stochastic thresholds scale with the trial count: Kolmogorov-Smirnov
checks use the asymptotic 1% critical value ``1.63 / sqrt(trials)`` and
mean checks use a 4-standard-error band.  Below 1000 trials every
stochastic threshold is additionally widened by the factor 1.5 and an
``underpowered-warning`` row is emitted, because the asymptotics behind
the thresholds are unreliable that small.

All rows are pure functions of (suite, seed, trials, workers): no
wall-clock data enters, so repeated runs are byte-identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conditional import BeaconCondition, cond_moment_report
from .distance import (
    ConditionedPppQuery,
    NthNeighborQuery,
    cdf_rn,
    conditioned_ppp_pdf,
    mean_rn,
)
from .geometry import NetworkSpec
from .metrics import MetricConfig, gamma_ratio_partial_sum, mean_interference, outage_lower_bound
from .montecarlo import (
    SimConfig,
    ks_test,
    sample_bpp_distances,
    simulate_conditioned_ppp,
    simulate_interference,
    simulate_outage,
    trimmed_mean,
)
from .specfun import integrate, ln_gamma

SUITES = ("distances", "interference", "outage", "cond-ppp")

_UNDERPOWERED_TRIALS = 1000
_UNDERPOWERED_FACTOR = 1.5
_KS_CRITICAL_1PCT = 1.63


@dataclass(frozen=True)
class CheckResult:
    """One validation row; passes when ``statistic <= threshold``."""

    name: str
    statistic: float
    threshold: float
    passed: bool


def _check(name: str, statistic: float, threshold: float) -> CheckResult:
    return CheckResult(name, statistic, threshold, bool(statistic <= threshold))


def _widen(trials: int) -> float:
    return _UNDERPOWERED_FACTOR if trials < _UNDERPOWERED_TRIALS else 1.0


def _ks_threshold(count: int, trials: int) -> float:
    return _KS_CRITICAL_1PCT / math.sqrt(count) * _widen(trials)


def _suite_distances(seed: int, trials: int, workers: int) -> list[CheckResult]:
    rows = []
    for dim in (1, 2, 3):
        spec = NetworkSpec(dim, 1.0, 10)
        # Offset the seed per dimension: with a shared seed the underlying
        # uniforms coincide and the KS rows would repeat verbatim (the
        # statistic is invariant under the monotone radius map).
        sim = SimConfig(seed=seed + dim, trials=trials, workers=workers)
        matrix = sample_bpp_distances(spec, sim)
        for rank in (1, 5, 10):
            query = NthNeighborQuery(spec, rank)
            column = np.sort(matrix[:, rank - 1])
            ks = ks_test(column, lambda r: cdf_rn(query, r))
            rows.append(
                _check(f"bpp-ks-d{dim}-N10-n{rank}", ks, _ks_threshold(trials, trials))
            )
            se = float(np.std(column, ddof=1)) / math.sqrt(trials)
            z = abs(float(np.mean(column)) - mean_rn(query)) / se
            rows.append(
                _check(f"bpp-mean-z-d{dim}-N10-n{rank}", z, 4.0 * _widen(trials))
            )
    # Conditional-moment closed forms are deterministic, but they belong in
    # the validation report: the corrected inner denominator (rank k)
    # matches the quadrature moment, while the rank-shifted variant (k+1)
    # does not (second row passes exactly when the shifted form is the
    # worse one).
    report = cond_moment_report(NetworkSpec(1, 1.0, 5), BeaconCondition(2, 0.6), 1, 1.0)
    dev_corrected = abs(report.closed_form_corrected / report.quadrature - 1.0)
    dev_shifted = abs(report.closed_form_shifted / report.quadrature - 1.0)
    rows.append(_check("cond-inner-moment-quad-vs-corrected-k", dev_corrected, 1e-6))
    rows.append(
        _check(
            "cond-inner-moment-corrected-beats-shifted-k1",
            dev_corrected - dev_shifted,
            -0.01,
        )
    )
    return rows


def _suite_interference(seed: int, trials: int, workers: int) -> list[CheckResult]:
    rows = []
    spec = NetworkSpec(3, 1.0, 10)
    cfg = MetricConfig(transmit_prob=0.5, pathloss_exponent=2.0, pathloss="singular")
    sim = SimConfig(seed=seed, trials=trials, workers=workers)
    summary, samples = simulate_interference(spec, cfg, sim, return_samples=True)
    closed = mean_interference(spec, cfg).value
    se = math.sqrt(summary.variance / trials)
    tol = max(0.02, 4.0 * se / closed) * _widen(trials)
    rows.append(_check("interference-singular-mean-vs-closed", abs(summary.mean / closed - 1.0), tol))
    rows.append(
        _check(
            "interference-trimmed-below-untrimmed",
            trimmed_mean(samples, 0.01) - summary.mean,
            0.0,
        )
    )
    silent = MetricConfig(transmit_prob=0.0, pathloss_exponent=2.0, pathloss="singular")
    quiet = simulate_interference(spec, silent, SimConfig(seed=seed, trials=min(trials, 1000), workers=workers))
    rows.append(_check("interference-p0-exactly-zero", abs(quiet.mean), 0.0))
    bounded_spec = NetworkSpec(2, 2.0, 20)
    bounded_cfg = MetricConfig(transmit_prob=0.1, pathloss_exponent=4.0, pathloss="bounded")
    bounded = simulate_interference(bounded_spec, bounded_cfg, sim)
    bounded_closed = mean_interference(bounded_spec, bounded_cfg).value
    bounded_se = math.sqrt(bounded.variance / trials)
    rows.append(
        _check(
            "interference-bounded-mean-vs-closed",
            abs(bounded.mean / bounded_closed - 1.0),
            max(0.02, 4.0 * bounded_se / bounded_closed) * _widen(trials),
        )
    )
    worst = 0.0
    for x in (0.1, 0.3, 0.5, 0.7, 0.9):
        direct = sum(math.exp(ln_gamma(n - x) - ln_gamma(float(n))) for n in range(1, 201))
        worst = max(worst, abs(gamma_ratio_partial_sum(200, x) / direct - 1.0))
    rows.append(_check("interference-gamma-sum-identity-k200", worst, 1e-10))
    return rows


def _suite_outage(seed: int, trials: int, workers: int) -> list[CheckResult]:
    rows = []
    thetas = np.logspace(-3.0, 2.0, 6)
    tight_gap = None
    for idx, num_nodes in enumerate((5, 10)):
        spec = NetworkSpec(2, 1.0, num_nodes)
        sim = SimConfig(seed=seed + idx, trials=trials, workers=workers)
        for theta in thetas:
            cfg = MetricConfig(
                transmit_prob=0.35,
                pathloss_exponent=4.0,
                sinr_threshold=float(theta),
                pathloss="singular",
            )
            summary = simulate_outage(spec, cfg, sim)
            bound = outage_lower_bound(spec, cfg)
            sigma = math.sqrt(summary.variance / trials)
            rows.append(
                _check(
                    f"outage-bound-holds-N{num_nodes}-theta{theta:g}",
                    bound - summary.mean - 2.0 * sigma * _widen(trials),
                    0.0,
                )
            )
            if num_nodes == 5 and theta == thetas[0]:
                tight_gap = summary.mean - bound
    rows.append(_check("outage-bound-tight-smallest-N-theta", float(tight_gap), 0.05))
    return rows


def _suite_cond_ppp(seed: int, trials: int, workers: int) -> list[CheckResult]:
    rows = []
    spec = NetworkSpec(2, 1.0, 10)
    for rank in (1, 5, 10):
        query = ConditionedPppQuery(spec, rank, 3.18)
        sim = SimConfig(seed=seed, trials=trials, workers=workers)
        summary, _ = simulate_conditioned_ppp(query, sim)
        rows.append(
            _check(
                f"cond-ppp-ks-n{rank}",
                float(summary.ks_statistic),
                _ks_threshold(summary.count, trials),
            )
        )
        norm = integrate(lambda r: np.asarray(conditioned_ppp_pdf(query, r)), 0.0, spec.radius)
        rows.append(_check(f"cond-ppp-normalization-n{rank}", abs(norm - 1.0), 1e-8))
    return rows


def run_suite(suite: str, seed: int, trials: int, workers: int) -> list[CheckResult]:
    """All checks of one named suite (or of every suite for "all").

    Raises:
        ValueError: For an unknown suite name or invalid sizes.
    """
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    runners = {
        "distances": _suite_distances,
        "interference": _suite_interference,
        "outage": _suite_outage,
        "cond-ppp": _suite_cond_ppp,
    }
    names = SUITES if suite == "all" else (suite,)
    rows: list[CheckResult] = []
    if trials < _UNDERPOWERED_TRIALS:
        rows.append(
            CheckResult("underpowered-warning", float(trials), float(_UNDERPOWERED_TRIALS), True)
        )
    for name in names:
        rows.extend(runners[name](seed, trials, workers))
    return rows
