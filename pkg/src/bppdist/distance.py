"""Exact distance laws for ranked neighbours in finite random networks.

Three families are covered, all for distances measured from the centre of
a d-dimensional ball of radius R:

* the n-th nearest of N independently uniform nodes (a generalized beta
  law in the normalised variable (r/R)^d),
* the n-th nearest point of a Poisson process of known intensity
  conditioned to have at least N points in the ball,
* the infinite-network Poisson limit (a generalized gamma law).

Scalar or array ``r`` arguments are accepted interchangeably; array in,
array of the same shape out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import NetworkSpec, unit_ball_volume
from .specfun import (
    MomentValue,
    ln_beta,
    pochhammer_rising,
    reg_inc_beta,
)


@dataclass(frozen=True)
class NthNeighborQuery:
    """A ranked-neighbour distance question: which network, which rank.

    Attributes:
        network: The finite network the distance lives in.
        rank: Neighbour rank n, with 1 <= n <= network.num_nodes
            (1 is the nearest node, num_nodes the farthest).
    """

    network: NetworkSpec
    rank: int

    def __post_init__(self) -> None:
        if not isinstance(self.rank, int) or not 1 <= self.rank <= self.network.num_nodes:
            raise ValueError(
                f"rank must be an integer in [1, {self.network.num_nodes}], "
                f"got {self.rank!r}"
            )


@dataclass(frozen=True)
class ConditionedPppQuery:
    """Ranked-neighbour question for a conditioned Poisson process.

    The process has known ``intensity`` on the ball described by
    ``network`` and is conditioned on containing at least
    ``network.num_nodes`` points there; ``rank`` indexes the n-th nearest
    of those points.
    """

    network: NetworkSpec
    rank: int
    intensity: float

    def __post_init__(self) -> None:
        if not isinstance(self.rank, int) or not 1 <= self.rank <= self.network.num_nodes:
            raise ValueError(
                f"rank must be an integer in [1, {self.network.num_nodes}], "
                f"got {self.rank!r}"
            )
        if not (self.intensity > 0.0 and math.isfinite(self.intensity)):
            raise ValueError(f"intensity must be a positive finite float, got {self.intensity!r}")


def _as_flat(r) -> tuple[np.ndarray, tuple, bool]:
    """Coerce scalar-or-array input to a flat float array.

    Returns the flat array, the original shape, and a scalar flag.
    """
    arr = np.asarray(r, dtype=float)
    return arr.reshape(-1), arr.shape, arr.ndim == 0


def _restore(flat: np.ndarray, shape: tuple, scalar: bool):
    return float(flat[0]) if scalar else flat.reshape(shape)


def _check_window(flat: np.ndarray, radius: float) -> None:
    if flat.size and (not np.all(np.isfinite(flat)) or flat.min() < 0.0 or flat.max() > radius):
        raise ValueError(f"distances must lie in [0, {radius}]")


def ccdf_rn(query: NthNeighborQuery, r):
    """P(distance to the rank-n node > r).

    Equals the regularized incomplete beta function
    ``I_{1-p}(N - n + 1, n)`` with ``p = (r/R)^d``: the event that fewer
    than n of the N nodes fall inside radius r.
    """
    net = query.network
    flat, shape, scalar = _as_flat(r)
    _check_window(flat, net.radius)
    p = (flat / net.radius) ** net.dim
    a = net.num_nodes - query.rank + 1.0
    b = float(query.rank)
    out = np.array([reg_inc_beta(v, a, b) for v in 1.0 - p])
    return _restore(out, shape, scalar)


def cdf_rn(query: NthNeighborQuery, r):
    """P(distance to the rank-n node <= r)."""
    net = query.network
    flat, shape, scalar = _as_flat(r)
    _check_window(flat, net.radius)
    p = (flat / net.radius) ** net.dim
    a = net.num_nodes - query.rank + 1.0
    b = float(query.rank)
    out = np.array([1.0 - reg_inc_beta(v, a, b) for v in 1.0 - p])
    return _restore(out, shape, scalar)


def pdf_rn(query: NthNeighborQuery, r):
    """Density of the rank-n distance.

    In the normalised variable ``p = (r/R)^d`` the distance follows a
    Beta(n, N - n + 1) law; transforming back gives

        f(r) = (d / R) (1 - p)^(N - n) p^(n - 1/d) / B(N - n + 1, n).

    Evaluated in log space so that large ``N`` and extreme ``r`` stay
    accurate; boundary values use the exact one-sided limits.
    """
    net = query.network
    n, N, d, R = query.rank, net.num_nodes, net.dim, net.radius
    flat, shape, scalar = _as_flat(r)
    _check_window(flat, R)
    p = (flat / R) ** d
    p_exp = n - 1.0 / d
    lnB = ln_beta(N - n + 1.0, float(n))
    out = np.zeros_like(p)
    interior = (p > 0.0) & (p < 1.0)
    pi = p[interior]
    out[interior] = (d / R) * np.exp(
        (N - n) * np.log1p(-pi) + p_exp * np.log(pi) - lnB
    )
    if p_exp == 0.0:  # only rank 1 in one dimension: positive density at 0
        out[p == 0.0] = (d / R) * math.exp(-lnB)
    if n == N:  # the farthest node has positive density at the boundary
        out[p == 1.0] = (d / R) * math.exp(-lnB)
    return _restore(out, shape, scalar)


def quantile_rn(query: NthNeighborQuery, u: float) -> float:
    """Inverse of ``cdf_rn`` at probability ``u`` in [0, 1].

    Monotone bisection to a relatively tiny bracket, then a couple of
    Newton steps for a final polish.
    """
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {u}")
    net = query.network
    if u == 0.0:
        return 0.0
    if u == 1.0:
        return net.radius
    lo, hi = 0.0, net.radius
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if cdf_rn(query, mid) < u:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    for _ in range(2):
        slope = pdf_rn(query, root)
        if slope <= 0.0:
            break
        step = (cdf_rn(query, root) - u) / slope
        candidate = root - step
        if not lo <= candidate <= hi:
            break
        root = candidate
    return root


def moment_rn(query: NthNeighborQuery, gamma: float) -> MomentValue:
    """Moment E[distance^gamma] of the rank-n law.

    Closed form in terms of rising factorials:

        R^gamma * n^[gamma/d] / (N + 1)^[gamma/d],

    finite exactly when ``n + gamma/d > 0``; otherwise the defining
    integral diverges at the origin and the result is infinite.
    """
    net = query.network
    n, N, d, R = query.rank, net.num_nodes, net.dim, net.radius
    q = gamma / d
    if n + q <= 0.0:
        return MomentValue.infinite()
    num = pochhammer_rising(float(n), q)
    den = pochhammer_rising(N + 1.0, q)
    return MomentValue(R**gamma * num.value / den.value)


def mean_rn(query: NthNeighborQuery) -> float:
    """Mean rank-n distance (always finite)."""
    return moment_rn(query, 1.0).value


def variance_rn(query: NthNeighborQuery) -> float:
    """Variance of the rank-n distance, from the first two moments."""
    m1 = moment_rn(query, 1.0).value
    m2 = moment_rn(query, 2.0).value
    return m2 - m1 * m1


def mean_internodal(spec: NetworkSpec, i: int, j: int) -> float:
    """Mean gap E[distance_j - distance_i] between two ranks ``i < j``.

    By linearity this is R (j^[1/d] - i^[1/d]) / (N + 1)^[1/d].
    """
    if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= spec.num_nodes):
        raise ValueError(
            f"ranks must satisfy 1 <= i < j <= {spec.num_nodes}, got i={i!r}, j={j!r}"
        )
    q = 1.0 / spec.dim
    gap = pochhammer_rising(float(j), q).value - pochhammer_rising(float(i), q).value
    return spec.radius * gap / pochhammer_rising(spec.num_nodes + 1.0, q).value


def void_probability(spec: NetworkSpec, r):
    """P(no node within radius r) = (1 - (r/R)^d)^N."""
    flat, shape, scalar = _as_flat(r)
    _check_window(flat, spec.radius)
    p = (flat / spec.radius) ** spec.dim
    out = np.zeros_like(p)
    inner = p < 1.0
    out[inner] = np.exp(spec.num_nodes * np.log1p(-p[inner]))
    return _restore(out, shape, scalar)


def nearest_pdf(spec: NetworkSpec, r):
    """Density of the distance to the nearest node.

    Specialization of the rank-n law at n = 1:
    ``d N r^(d-1) / R^d * (1 - (r/R)^d)^(N - 1)``.
    """
    flat, shape, scalar = _as_flat(r)
    _check_window(flat, spec.radius)
    d, R, N = spec.dim, spec.radius, spec.num_nodes
    p = (flat / R) ** d
    out = np.zeros_like(p)
    inner = p < 1.0
    out[inner] = (
        d * N * flat[inner] ** (d - 1) / R**d * np.exp((N - 1) * np.log1p(-p[inner]))
    )
    if N == 1:
        out[p == 1.0] = d / R
    return _restore(out, shape, scalar)


def farthest_pdf(spec: NetworkSpec, r):
    """Density of the distance to the farthest node.

    Specialization of the rank-n law at n = N:
    ``d N r^(N d - 1) / R^(N d)``.
    """
    flat, shape, scalar = _as_flat(r)
    _check_window(flat, spec.radius)
    d, R, N = spec.dim, spec.radius, spec.num_nodes
    out = np.zeros_like(flat)
    top = N * d - 1.0
    positive = flat > 0.0
    out[positive] = d * N * np.exp(top * np.log(flat[positive]) - N * d * math.log(R))
    if top == 0.0:  # a single node in one dimension: uniform density
        out[flat == 0.0] = 1.0 / R
    return _restore(out, shape, scalar)


def _log_poisson_sf(j: int, mu: np.ndarray) -> np.ndarray:
    """log P(Poisson(mu) >= j), elementwise, without linear-space underflow.

    For ``mu < j`` the upper tail is summed directly: the series starts at
    its largest term k = j, and successive terms shrink by the factor
    ``mu / (k + 1) < 1``.  For ``mu >= j`` the complement of the (at most
    j-term) lower tail is used; there the upper tail is at least ~0.4, so
    the final ``log1p`` is well conditioned.
    """
    mu = np.asarray(mu, dtype=float)
    out = np.zeros(mu.shape)
    if j <= 0:
        return out
    positive = mu > 0.0
    out[~positive] = -np.inf
    if not np.any(positive):
        return out
    m = mu[positive]
    res = np.empty_like(m)
    small = m < j
    if np.any(small):
        ms = m[small]
        log_first = j * np.log(ms) - ms - math.lgamma(j + 1.0)
        term = np.ones_like(ms)
        acc = np.ones_like(ms)
        k = float(j)
        while True:
            term = term * ms / (k + 1.0)
            acc += term
            k += 1.0
            if term.max() < 1e-18 or k > j + 200000:
                break
        res[small] = log_first + np.log(acc)
    if np.any(~small):
        res[~small] = _log_sf_from_lower_tail(j, m[~small])
    out[positive] = res
    return out


def _log_sf_from_lower_tail(j: int, mu: np.ndarray) -> np.ndarray:
    """log(1 - P(Poisson(mu) < j)) for mu >= j, in blocks to bound memory."""
    out = np.empty_like(mu)
    lg = np.array([math.lgamma(k + 1.0) for k in range(j)])
    ks = np.arange(j, dtype=float)
    block = max(1, int(10_000_000 // j))
    for start in range(0, mu.size, block):
        seg = mu[start:start + block]
        logpmf = np.outer(ks, np.log(seg)) - seg[None, :] - lg[:, None]
        anchor = logpmf.max(axis=0)
        log_lower = anchor + np.log(np.sum(np.exp(logpmf - anchor[None, :]), axis=0))
        out[start:start + block] = np.log1p(-np.exp(np.minimum(log_lower, -1e-300)))
    return out


def _log_acceptance(query: ConditionedPppQuery) -> float:
    """log P(at least num_nodes process points in the ball)."""
    net = query.network
    mu_total = query.intensity * unit_ball_volume(net.dim) * net.radius**net.dim
    log_denom = float(_log_poisson_sf(net.num_nodes, np.array(mu_total)))
    if not math.isfinite(log_denom):
        raise ValueError(
            "conditioning event has zero probability: intensity "
            f"{query.intensity} admits no mass on >= {net.num_nodes} points"
        )
    return log_denom


def conditioned_ppp_pdf(query: ConditionedPppQuery, r):
    """Density of the rank-n distance in the conditioned Poisson model.

    With ``mu(r)`` the mean count inside radius r, the density is the
    radial rate times the probability of exactly n - 1 points inside r
    and at least N - n points in the shell between r and R, normalised by
    the probability of the conditioning event.  All factors are combined
    in log space.

    Args:
        query: Model parameters and rank.
        r: Scalar or array of distances in [0, R].

    Raises:
        ValueError: If a distance falls outside [0, R] or the
            conditioning event has zero probability.
    """
    net = query.network
    n, N, d, R = query.rank, net.num_nodes, net.dim, net.radius
    lam = query.intensity
    c_d = unit_ball_volume(d)
    log_denom = _log_acceptance(query)
    flat, shape, scalar = _as_flat(r)
    _check_window(flat, R)
    mu_in = lam * c_d * flat**d
    mu_out = lam * c_d * (R**d - flat**d)
    with np.errstate(divide="ignore"):
        if n == 1:
            log_inner = -mu_in
        else:
            log_inner = (n - 1.0) * np.log(mu_in) - mu_in - math.lgamma(float(n))
        if d == 1:
            log_rate = np.full_like(flat, math.log(lam * c_d * d))
        else:
            log_rate = math.log(lam * c_d * d) + (d - 1.0) * np.log(flat)
    log_tail = _log_poisson_sf(N - n, mu_out)
    out = np.exp(log_rate + log_inner + log_tail - log_denom)
    return _restore(out, shape, scalar)


def conditioned_ppp_ccdf(query: ConditionedPppQuery, r):
    """P(rank-n distance > r) in the conditioned Poisson model.

    Sum over k < n of the probability of exactly k points inside r and at
    least N - k in the shell, normalised by the conditioning probability.
    Each summand is bounded by 1 after normalisation, so the terms are
    exponentiated individually and accumulated in linear space.
    """
    net = query.network
    n, N, d, R = query.rank, net.num_nodes, net.dim, net.radius
    lam = query.intensity
    c_d = unit_ball_volume(d)
    log_denom = _log_acceptance(query)
    flat, shape, scalar = _as_flat(r)
    _check_window(flat, R)
    mu_in = lam * c_d * flat**d
    mu_out = lam * c_d * (R**d - flat**d)
    acc = np.zeros_like(flat)
    with np.errstate(divide="ignore"):
        log_mu_in = np.log(mu_in)
        for k in range(n):
            if k == 0:
                log_inside = -mu_in
            else:
                log_inside = k * log_mu_in - mu_in - math.lgamma(k + 1.0)
            log_shell = _log_poisson_sf(N - k, mu_out)
            acc += np.exp(log_inside + log_shell - log_denom)
    out = np.clip(acc, 0.0, 1.0)
    return _restore(out, shape, scalar)


def conditioned_ppp_cdf(query: ConditionedPppQuery, r):
    """P(rank-n distance <= r) in the conditioned Poisson model."""
    ccdf = conditioned_ppp_ccdf(query, r)
    return 1.0 - ccdf


def ppp_limit_pdf(intensity: float, dim: int, rank: int, r):
    """Rank-n distance density in the infinite Poisson network.

    A generalized gamma law: with ``mu(r)`` the mean count within radius
    r, ``f(r) = exp(-mu) d mu^n / (r Gamma(n))``, supported on r >= 0.
    """
    if not (intensity > 0.0 and math.isfinite(intensity)):
        raise ValueError(f"intensity must be a positive finite float, got {intensity!r}")
    if dim < 1 or rank < 1:
        raise ValueError(f"need dim >= 1 and rank >= 1, got dim={dim}, rank={rank}")
    flat, shape, scalar = _as_flat(r)
    if flat.size and (not np.all(np.isfinite(flat)) or flat.min() < 0.0):
        raise ValueError("distances must be finite and nonnegative")
    lam_cd = intensity * unit_ball_volume(dim)
    top = rank * dim - 1.0
    out = np.zeros_like(flat)
    positive = flat > 0.0
    rp = flat[positive]
    out[positive] = dim * np.exp(
        rank * math.log(lam_cd) + top * np.log(rp) - lam_cd * rp**dim - math.lgamma(float(rank))
    )
    if top == 0.0:  # rank 1 in one dimension
        out[flat == 0.0] = dim * lam_cd
    return _restore(out, shape, scalar)


def ppp_limit_cdf(intensity: float, dim: int, rank: int, r):
    """Rank-n distance distribution function in the infinite Poisson network."""
    if not (intensity > 0.0 and math.isfinite(intensity)):
        raise ValueError(f"intensity must be a positive finite float, got {intensity!r}")
    if dim < 1 or rank < 1:
        raise ValueError(f"need dim >= 1 and rank >= 1, got dim={dim}, rank={rank}")
    flat, shape, scalar = _as_flat(r)
    if flat.size and (not np.all(np.isfinite(flat)) or flat.min() < 0.0):
        raise ValueError("distances must be finite and nonnegative")
    mu = intensity * unit_ball_volume(dim) * flat**dim
    out = np.exp(_log_poisson_sf(rank, mu))
    return _restore(out, shape, scalar)


def matched_radius(intensity: float, dim: int, num_nodes: int) -> float:
    """Ball radius at which ``num_nodes`` nodes have the given mean density."""
    if intensity <= 0.0 or num_nodes < 1 or dim < 1:
        raise ValueError(
            f"need intensity > 0, num_nodes >= 1, dim >= 1; got "
            f"{intensity}, {num_nodes}, {dim}"
        )
    return (num_nodes / (unit_ball_volume(dim) * intensity)) ** (1.0 / dim)


def _bisect_cdf(cdf, lo: float, hi: float, u: float, iters: int = 100) -> float:
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < u:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _beta_rank_cdf(p: np.ndarray, rank: int, num: int, ln_binom: np.ndarray) -> np.ndarray:
    """Rank-law cdf in p-space, sum_{j>=rank} C(num,j) p^j (1-p)^(num-j).

    All terms are positive, so a max-factored log-space sum is stable; this
    vectorizes over ``p`` where the scalar continued fraction cannot.
    """
    j = np.arange(rank, num + 1, dtype=float)
    ln_terms = (
        ln_binom[None, :]
        + j[None, :] * np.log(p)[:, None]
        + (num - j)[None, :] * np.log1p(-p)[:, None]
    )
    peak = ln_terms.max(axis=1, keepdims=True)
    return np.exp(peak[:, 0]) * np.exp(ln_terms - peak).sum(axis=1)


def _beta_rank_quantile(u: np.ndarray, rank: int, num: int) -> np.ndarray:
    """Invert the rank-law cdf in p-space for a whole vector of probabilities."""
    ln_binom = np.array(
        [
            math.lgamma(num + 1.0) - math.lgamma(j + 1.0) - math.lgamma(num - j + 1.0)
            for j in range(rank, num + 1)
        ]
    )
    tiny, cap = 1e-300, 1.0 - 1e-16
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    for _ in range(20):
        mid = 0.5 * (lo + hi)
        below = _beta_rank_cdf(np.clip(mid, tiny, cap), rank, num, ln_binom) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    p = 0.5 * (lo + hi)
    ln_b = ln_beta(float(rank), float(num - rank + 1))
    for _ in range(3):
        clipped = np.clip(p, tiny, cap)
        gap = _beta_rank_cdf(clipped, rank, num, ln_binom) - u
        dens = np.exp(
            (rank - 1.0) * np.log(clipped)
            + (num - rank) * np.log1p(-clipped)
            - ln_b
        )
        step = np.where(dens > 0.0, gap / np.maximum(dens, 1e-300), 0.0)
        p = np.clip(p - step, lo, hi)
    return p


@dataclass(frozen=True)
class BppNeighborLaw:
    """Distribution object for the rank-n distance in a finite network."""

    query: NthNeighborQuery

    def pdf(self, r):
        return pdf_rn(self.query, r)

    def cdf(self, r):
        return cdf_rn(self.query, r)

    def ccdf(self, r):
        return ccdf_rn(self.query, r)

    def quantile(self, u: float) -> float:
        return quantile_rn(self.query, u)

    def moment(self, gamma: float) -> MomentValue:
        return moment_rn(self.query, gamma)

    def sample(self, rng: np.random.Generator, size: int, method: str = "order") -> np.ndarray:
        """Draw rank-n distances.

        ``method="order"`` places all N nodes and extracts the rank-n
        radius (the defining construction); ``method="quantile"`` inverts
        the distribution function on uniform draws.  Both are exact; the
        order construction is the default because it is much faster.
        """
        if size < 0:
            raise ValueError(f"size must be nonnegative, got {size}")
        net = self.query.network
        n, N, d, R = self.query.rank, net.num_nodes, net.dim, net.radius
        if method == "quantile":
            u = rng.random(size)
            terms = N - n + 1
            if terms > 4096:
                # The vectorized tail sum would need too many terms; fall
                # back to per-sample scalar inversion.
                return np.array([quantile_rn(self.query, float(v)) for v in u])
            out = np.empty(size)
            block = max(1, int(4_000_000 // terms))
            for start in range(0, size, block):
                seg = u[start : start + block]
                out[start : start + len(seg)] = (
                    R * _beta_rank_quantile(seg, n, N) ** (1.0 / d)
                )
            return out
        if method != "order":
            raise ValueError(f"unknown sampling method {method!r}")
        out = np.empty(size)
        block = max(1, int(20_000_000 // N))
        for start in range(0, size, block):
            count = min(block, size - start)
            u = rng.random((count, N))
            kth = np.partition(u, n - 1, axis=1)[:, n - 1]
            out[start:start + count] = R * kth ** (1.0 / d)
        return out


@dataclass(frozen=True)
class ConditionedPppLaw:
    """Distribution object for the rank-n distance under conditioning."""

    query: ConditionedPppQuery

    def pdf(self, r):
        return conditioned_ppp_pdf(self.query, r)

    def cdf(self, r):
        return conditioned_ppp_cdf(self.query, r)

    def ccdf(self, r):
        return conditioned_ppp_ccdf(self.query, r)

    def quantile(self, u: float) -> float:
        if not 0.0 <= u <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {u}")
        R = self.query.network.radius
        if u == 0.0:
            return 0.0
        if u == 1.0:
            return R
        return _bisect_cdf(lambda r: conditioned_ppp_cdf(self.query, r), 0.0, R, u)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw by rejection: realize the process until the conditioning
        event holds, then read off the rank-n radius.

        Raises:
            RuntimeError: If the attempt budget (50x the expected number
                needed) is exhausted, which indicates a conditioning event
                too rare to sample.
        """
        if size < 0:
            raise ValueError(f"size must be nonnegative, got {size}")
        net = self.query.network
        n, N, d, R = self.query.rank, net.num_nodes, net.dim, net.radius
        mu_total = self.query.intensity * unit_ball_volume(d) * R**d
        accept_prob = math.exp(_log_acceptance(self.query))
        if accept_prob < 1e-6:
            raise ValueError(
                f"conditioning event probability {accept_prob:.3e} is below "
                f"1e-6; rejection sampling would be impractical"
            )
        budget = int(50.0 * max(size, 1) / accept_prob) + 1000
        out = np.empty(size)
        filled = 0
        attempts = 0
        while filled < size:
            batch = min(budget - attempts, int((size - filled) / accept_prob * 1.2) + 16)
            if batch <= 0:
                raise RuntimeError(
                    f"rejection budget of {budget} process realisations "
                    f"exhausted after {filled} accepted samples"
                )
            counts = rng.poisson(mu_total, batch)
            attempts += batch
            for m in counts:
                if m < N or filled >= size:
                    continue
                u = rng.random(int(m))
                out[filled] = R * np.partition(u, n - 1)[n - 1] ** (1.0 / d)
                filled += 1
        return out


@dataclass(frozen=True)
class PppLimitLaw:
    """Distribution object for the rank-n distance in the Poisson limit."""

    intensity: float
    dim: int
    rank: int

    def __post_init__(self) -> None:
        if not (self.intensity > 0.0 and math.isfinite(self.intensity)):
            raise ValueError(f"intensity must be a positive finite float, got {self.intensity!r}")
        if self.dim < 1 or self.rank < 1:
            raise ValueError(
                f"need dim >= 1 and rank >= 1, got dim={self.dim}, rank={self.rank}"
            )

    def pdf(self, r):
        return ppp_limit_pdf(self.intensity, self.dim, self.rank, r)

    def cdf(self, r):
        return ppp_limit_cdf(self.intensity, self.dim, self.rank, r)

    def ccdf(self, r):
        return 1.0 - self.cdf(r)

    def quantile(self, u: float) -> float:
        if not 0.0 <= u <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {u}")
        if u == 0.0:
            return 0.0
        if u == 1.0:
            return math.inf
        hi = matched_radius(self.intensity, self.dim, max(self.rank, 1))
        while self.cdf(hi) < u:
            hi *= 2.0
        return _bisect_cdf(lambda r: self.cdf(r), 0.0, hi, u)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Exact draws: the mean count within the rank-n distance is an
        Erlang(rank) variable, inverted through the volume map."""
        if size < 0:
            raise ValueError(f"size must be nonnegative, got {size}")
        lam_cd = self.intensity * unit_ball_volume(self.dim)
        erlang = rng.gamma(shape=float(self.rank), scale=1.0, size=size)
        return (erlang / lam_cd) ** (1.0 / self.dim)
