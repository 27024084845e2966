"""Seeded stochastic oracle for the analytic modules.

Every simulation here is a pure function of ``(seed, trials, workers)``:
trials are partitioned into contiguous blocks, one independent random
stream is derived per block from the master seed, and blocks are reduced
in fixed order.  Identical configurations therefore reproduce
bit-identical results; changing the worker count changes the partition
(and thus the draws) while remaining statistically equivalent.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .distance import ConditionedPppLaw, ConditionedPppQuery, conditioned_ppp_cdf
from .geometry import NetworkSpec, spawn_streams
from .metrics import MetricConfig

# Cap on the number of floats materialized by one sampling call, to fail
# loudly instead of exhausting memory.
_MAX_MATRIX_FLOATS = 200_000_000


class ResourceLimitError(RuntimeError):
    """Raised when a simulation would exceed the in-memory sample cap."""


@dataclass(frozen=True)
class SimConfig:
    """Simulation size and determinism contract.

    Attributes:
        seed: Master seed; all randomness derives from it.
        trials: Total number of independent trials, >= 1.
        workers: Number of contiguous trial blocks with independent
            streams, >= 1.
    """

    seed: int
    trials: int
    workers: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ValueError(f"trials must be an integer >= 1, got {self.trials!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ValueError(f"workers must be an integer >= 1, got {self.workers!r}")


@dataclass(frozen=True)
class EmpiricalSummary:
    """Summary statistics of one simulation run.

    ``ks_statistic`` is present only for runs that compare an empirical
    sample against an analytic distribution function.
    """

    count: int
    mean: float
    variance: float
    ks_statistic: float | None
    seed: int
    elapsed_seconds: float

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if not (self.variance >= 0.0 or math.isnan(self.variance)):
            raise ValueError(f"variance must be >= 0, got {self.variance}")
        if self.ks_statistic is not None and not 0.0 <= self.ks_statistic <= 1.0:
            raise ValueError(f"ks_statistic must lie in [0, 1], got {self.ks_statistic}")


def _block_sizes(trials: int, workers: int) -> list[int]:
    """Contiguous per-worker trial counts (earlier blocks get the remainder)."""
    base, extra = divmod(trials, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def _sample_variance(x: np.ndarray) -> float:
    return float(np.var(x, ddof=1)) if x.size > 1 else 0.0


def sample_bpp_distances(spec: NetworkSpec, sim: SimConfig) -> np.ndarray:
    """Ordered distance matrix of ``trials`` independent networks.

    Row t holds the sorted distances of one realization: N radii drawn as
    ``R * U**(1/d)``, ascending, so column n - 1 is the rank-n distance.

    Raises:
        ResourceLimitError: If ``trials * N`` exceeds the memory cap.
    """
    if sim.trials * spec.num_nodes > _MAX_MATRIX_FLOATS:
        raise ResourceLimitError(
            f"trials x num_nodes = {sim.trials * spec.num_nodes} exceeds the "
            f"sample cap of {_MAX_MATRIX_FLOATS}"
        )
    blocks = _block_sizes(sim.trials, sim.workers)
    streams = spawn_streams(sim.seed, sim.workers)
    parts = []
    for rows, rng in zip(blocks, streams):
        if rows == 0:
            continue
        radii = spec.radius * rng.random((rows, spec.num_nodes)) ** (1.0 / spec.dim)
        radii.sort(axis=1)
        parts.append(radii)
    return np.vstack(parts)


def ks_test(samples, cdf) -> float:
    """Kolmogorov-Smirnov statistic of a sorted sample against a cdf.

    Returns ``sup_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|)``.  The cdf
    callable may be vectorized (called once with the whole array) or
    scalar (called per point).

    Raises:
        ValueError: On an empty or unsorted sample.
    """
    xs = np.asarray(samples, dtype=float)
    if xs.size == 0:
        raise ValueError("ks_test requires at least one sample")
    if xs.size > 1 and np.any(np.diff(xs) < 0.0):
        raise ValueError("samples must be sorted ascending")
    try:
        ref = np.asarray(cdf(xs), dtype=float)
        if ref.shape != xs.shape:
            raise TypeError
    except TypeError:
        ref = np.array([float(cdf(float(x))) for x in xs])
    n = xs.size
    steps = np.arange(1, n + 1) / n
    return float(np.max(np.maximum(np.abs(steps - ref), np.abs(steps - 1.0 / n - ref))))


def _interference_samples(spec: NetworkSpec, cfg: MetricConfig, sim: SimConfig) -> np.ndarray:
    """Aggregate interference per trial.

    Per trial: a fresh network realization plus independent transmit
    marks; the sum of the path-loss values of the marked nodes.  Within
    each block the radii are drawn before the marks.
    """
    if sim.trials * spec.num_nodes > _MAX_MATRIX_FLOATS:
        raise ResourceLimitError(
            f"trials x num_nodes = {sim.trials * spec.num_nodes} exceeds the "
            f"sample cap of {_MAX_MATRIX_FLOATS}"
        )
    blocks = _block_sizes(sim.trials, sim.workers)
    streams = spawn_streams(sim.seed, sim.workers)
    alpha = cfg.pathloss_exponent
    parts = []
    for rows, rng in zip(blocks, streams):
        if rows == 0:
            continue
        radii = spec.radius * rng.random((rows, spec.num_nodes)) ** (1.0 / spec.dim)
        marks = rng.random((rows, spec.num_nodes)) < cfg.transmit_prob
        with np.errstate(divide="ignore"):
            loss = radii**-alpha
        if cfg.pathloss == "bounded":
            loss = np.minimum(loss, 1.0)
        parts.append(np.sum(loss, axis=1, where=marks))
    return np.concatenate(parts)


def simulate_interference(
    spec: NetworkSpec,
    cfg: MetricConfig,
    sim: SimConfig,
    return_samples: bool = False,
):
    """Empirical mean and variance of the aggregate interference.

    Under the singular path-loss law the summand of the nearest node is
    heavy-tailed: the mean is finite for d > alpha but the sample
    variance is large, so tight comparisons against the closed-form mean
    need large trial counts.  Samples are returned on request so callers
    can additionally report trimmed statistics.
    """
    start = time.perf_counter()
    samples = _interference_samples(spec, cfg, sim)
    summary = EmpiricalSummary(
        count=sim.trials,
        mean=float(np.mean(samples)),
        variance=_sample_variance(samples),
        ks_statistic=None,
        seed=sim.seed,
        elapsed_seconds=time.perf_counter() - start,
    )
    return (summary, samples) if return_samples else summary


def trimmed_mean(samples, fraction: float) -> float:
    """Mean after discarding the top ``fraction`` of the sorted sample.

    One-sided trim, aimed at the heavy right tail of singular-path-loss
    interference.
    """
    if not 0.0 <= fraction < 1.0:
        raise ValueError(f"fraction must lie in [0, 1), got {fraction}")
    xs = np.sort(np.asarray(samples, dtype=float))
    keep = xs.size - int(fraction * xs.size)
    if keep < 1:
        raise ValueError("trim fraction leaves no samples")
    return float(np.mean(xs[:keep]))


def simulate_outage(spec: NetworkSpec, cfg: MetricConfig, sim: SimConfig) -> EmpiricalSummary:
    """Empirical outage frequency of an interference-limited link.

    The desired transmitter sits at unit distance with unit power and is
    not part of the interfering network; outage in a slot means the
    aggregate interference exceeds ``1 / sinr_threshold``.  The ``mean``
    field carries the outage frequency and ``variance`` the sample
    variance of the outage indicator.
    """
    start = time.perf_counter()
    samples = _interference_samples(spec, cfg, sim)
    outage = (samples > 1.0 / cfg.sinr_threshold).astype(float)
    return EmpiricalSummary(
        count=sim.trials,
        mean=float(np.mean(outage)),
        variance=_sample_variance(outage),
        ks_statistic=None,
        seed=sim.seed,
        elapsed_seconds=time.perf_counter() - start,
    )


def simulate_conditioned_ppp(
    query: ConditionedPppQuery,
    sim: SimConfig,
) -> tuple[EmpiricalSummary, np.ndarray]:
    """Rejection-sampled rank-n distances of the conditioned process.

    Process realizations are drawn until the conditioning event (at
    least N points in the ball) holds, ``trials`` times; the rank-n
    distance of each accepted realization is recorded.  The summary's
    ``ks_statistic`` compares the sample against the analytic
    conditional law; the accepted samples are returned sorted ascending.

    Raises:
        ValueError: If the conditioning event has probability below 1e-6
            (rejection would be impractical).
        RuntimeError: If the rejection budget is exhausted.
    """
    start = time.perf_counter()
    law = ConditionedPppLaw(query)
    blocks = _block_sizes(sim.trials, sim.workers)
    streams = spawn_streams(sim.seed, sim.workers)
    parts = [law.sample(rng, rows) for rows, rng in zip(blocks, streams) if rows > 0]
    samples = np.sort(np.concatenate(parts))
    ks = ks_test(samples, lambda r: conditioned_ppp_cdf(query, r))
    summary = EmpiricalSummary(
        count=sim.trials,
        mean=float(np.mean(samples)),
        variance=_sample_variance(samples),
        ks_statistic=ks,
        seed=sim.seed,
        elapsed_seconds=time.perf_counter() - start,
    )
    return summary, samples
