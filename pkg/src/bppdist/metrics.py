"""Network-level quantities built on the distance laws.

Covers the mean energy cost of reaching a ranked neighbour under
power-law path loss, the mean aggregate interference at the centre under
a slotted-ALOHA transmit rule (for both the singular path-loss law
``r^-alpha`` and the bounded law ``min(1, r^-alpha)``), the probability
that a ranked node clears an SNR threshold, and a closed-form lower
bound on the outage probability of an interference-limited link.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .distance import NthNeighborQuery, cdf_rn, moment_rn
from .geometry import NetworkSpec
from .specfun import MomentValue, ln_gamma


@dataclass(frozen=True)
class MetricConfig:
    """Link-layer parameters shared by the interference and SINR metrics.

    Attributes:
        transmit_prob: ALOHA contention probability p in [0, 1]; each node
            transmits independently with this probability in a slot.
        pathloss_exponent: Power-law decay rate alpha > 0 of received
            power with distance.
        noise_power: Noise power (unit-normalized watts), >= 0.
        sinr_threshold: Minimum signal-to-(interference-and-)noise ratio
            for successful reception, > 0.
        pathloss: "singular" for ``r^-alpha``, "bounded" for
            ``min(1, r^-alpha)``.
    """

    transmit_prob: float = 1.0
    pathloss_exponent: float = 2.0
    noise_power: float = 0.0
    sinr_threshold: float = 1.0
    pathloss: str = "singular"

    def __post_init__(self) -> None:
        if not 0.0 <= self.transmit_prob <= 1.0:
            raise ValueError(f"transmit_prob must lie in [0, 1], got {self.transmit_prob}")
        if not (self.pathloss_exponent > 0.0 and math.isfinite(self.pathloss_exponent)):
            raise ValueError(
                f"pathloss_exponent must be a positive finite float, got {self.pathloss_exponent}"
            )
        if not (self.noise_power >= 0.0 and math.isfinite(self.noise_power)):
            raise ValueError(f"noise_power must be >= 0, got {self.noise_power}")
        if not (self.sinr_threshold > 0.0 and math.isfinite(self.sinr_threshold)):
            raise ValueError(f"sinr_threshold must be positive, got {self.sinr_threshold}")
        if self.pathloss not in ("singular", "bounded"):
            raise ValueError(
                f"pathloss must be 'singular' or 'bounded', got {self.pathloss!r}"
            )


def mean_hop_energy(spec: NetworkSpec, n: int, alpha: float) -> MomentValue:
    """Mean energy to reach the rank-n node under path-loss exponent alpha.

    Proportional (unit constant) to E[distance^alpha], which is always
    finite for alpha > 0 and grows roughly like ``n^(alpha/d)`` in the
    rank.
    """
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be a positive finite float, got {alpha}")
    return moment_rn(NthNeighborQuery(spec, n), alpha)


def mean_interference(spec: NetworkSpec, cfg: MetricConfig) -> MomentValue:
    """Mean aggregate interference at the centre under slotted ALOHA.

    Singular law: infinite when d <= alpha (the nearest-node contribution
    has a divergent mean), otherwise ``N p d R^-alpha / (d - alpha)``.
    Bounded law (requires R > 1): ``(N p d / R^d) [1/d +
    (R^(d-alpha) - 1)/(d - alpha)]``, with the limiting logarithmic form
    ``(N p d / R^d) [1/d + ln R]`` at alpha = d.

    Raises:
        ValueError: For the bounded law with R <= 1, where the formula's
            standing assumption fails (no extrapolation is attempted).
    """
    d, R, N = spec.dim, spec.radius, spec.num_nodes
    p = cfg.transmit_prob
    alpha = cfg.pathloss_exponent
    if cfg.pathloss == "singular":
        if d <= alpha:
            return MomentValue.infinite()
        return MomentValue(N * p * d * R**-alpha / (d - alpha))
    if R <= 1.0:
        raise ValueError(
            f"bounded path-loss mean interference requires R > 1, got R={R}"
        )
    if alpha == d:
        bracket = 1.0 / d + math.log(R)
    else:
        # expm1 keeps the difference quotient accurate as alpha -> d.
        bracket = 1.0 / d + math.expm1((d - alpha) * math.log(R)) / (d - alpha)
    return MomentValue(N * p * d / R**d * bracket)


def gamma_ratio_partial_sum(k: int, x: float) -> float:
    """Closed form of the partial sum of gamma-function ratios.

    Computes ``sum_{n=1}^{k} Gamma(n - x) / Gamma(n)`` through the
    telescoped identity ``[Gamma(k - x) / Gamma(k)] (k - x) / (1 - x)``,
    valid for ``x < 1`` (every gamma argument positive, no pole at the
    prefactor).

    Raises:
        ValueError: If ``k < 1`` or ``x >= 1``.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k!r}")
    if x >= 1.0:
        raise ValueError(f"x must be < 1, got {x}")
    return math.exp(ln_gamma(k - x) - ln_gamma(float(k))) * (k - x) / (1.0 - x)


def connectivity_prob(spec: NetworkSpec, cfg: MetricConfig, n: int) -> float:
    """Probability that the rank-n node clears the SNR threshold.

    Noise-only link budget: the node at distance r is connected when
    ``r^-alpha / noise_power >= sinr_threshold``, so the probability is
    the chance that the rank-n distance is within the critical radius
    ``(noise_power * sinr_threshold)^(-1/alpha)``.  Equal to 1 whenever
    the critical radius covers the whole ball (including the zero-noise
    case); nonincreasing in the rank and in the threshold.
    """
    query = NthNeighborQuery(spec, n)  # validates n against the network
    noise = cfg.noise_power
    theta = cfg.sinr_threshold
    alpha = cfg.pathloss_exponent
    if noise == 0.0:
        return 1.0
    if theta <= spec.radius**-alpha / noise:
        return 1.0
    critical = (noise * theta) ** (-1.0 / alpha)
    return cdf_rn(query, critical)


def outage_lower_bound(spec: NetworkSpec, cfg: MetricConfig) -> float:
    """Lower bound on outage probability of an interference-limited link.

    The receiver at the centre listens to a desired transmitter at unit
    distance with unit power; outage happens when the signal-to-
    interference ratio ``1/I`` falls below the threshold.  Keeping only
    the nearest interferer's contribution yields the bound
    ``p (1 - (1 - theta^(d/alpha) / R^d)^N)`` for ``theta <= R^alpha``
    and ``p`` beyond (where a single transmitting node anywhere in the
    ball already causes outage).  Defined for the singular path-loss law.

    Raises:
        ValueError: If ``cfg.pathloss`` is not "singular"; the bound's
            derivation does not cover the bounded law.
    """
    if cfg.pathloss != "singular":
        raise ValueError("outage lower bound is defined for the singular path-loss law")
    d, R, N = spec.dim, spec.radius, spec.num_nodes
    p = cfg.transmit_prob
    theta = cfg.sinr_threshold
    x = theta ** (d / cfg.pathloss_exponent) / R**d
    if x >= 1.0:
        return p
    return p * -math.expm1(N * math.log1p(-x))
