"""Exact distance distributions and derived metrics for finite uniformly
random networks, with a seeded Monte Carlo validation engine."""
from __future__ import annotations

from .conditional import (
    BeaconCondition,
    BeaconConditionedLaw,
    ConditionalMomentReport,
    cond_cdf,
    cond_ccdf,
    cond_moment,
    cond_moment_report,
    cond_pdf,
    cond_pdf_given_nearest,
)
from .distance import (
    BppNeighborLaw,
    ConditionedPppLaw,
    ConditionedPppQuery,
    NthNeighborQuery,
    PppLimitLaw,
    ccdf_rn,
    cdf_rn,
    conditioned_ppp_ccdf,
    conditioned_ppp_cdf,
    conditioned_ppp_pdf,
    farthest_pdf,
    matched_radius,
    mean_internodal,
    mean_rn,
    moment_rn,
    nearest_pdf,
    pdf_rn,
    ppp_limit_cdf,
    ppp_limit_pdf,
    quantile_rn,
    variance_rn,
    void_probability,
)
from .geometry import (
    NetworkSpec,
    Point,
    density,
    sample_uniform_in_ball,
    spawn_streams,
    unit_ball_volume,
)
from .metrics import (
    MetricConfig,
    connectivity_prob,
    gamma_ratio_partial_sum,
    mean_hop_energy,
    mean_interference,
    outage_lower_bound,
)
from .montecarlo import (
    EmpiricalSummary,
    ResourceLimitError,
    SimConfig,
    ks_test,
    sample_bpp_distances,
    simulate_conditioned_ppp,
    simulate_interference,
    simulate_outage,
    trimmed_mean,
)
from .specfun import (
    DEFAULT_QUADRATURE,
    MomentValue,
    QuadratureNonConvergence,
    QuadratureSpec,
    appell_f1,
    beta_density,
    integrate,
    ln_beta,
    ln_gamma,
    pochhammer_rising,
    reg_inc_beta,
)
from .validation import SUITES, CheckResult, run_suite

__version__ = "0.1.0"
