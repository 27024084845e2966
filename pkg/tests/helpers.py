"""Shared numerical helpers for the test suite.

Everything here is deliberately independent of the package under test:
plain trapezoid sums, a textbook KS statistic, and thin wrappers around
scipy/mpmath reference implementations used as oracles.
"""

from __future__ import annotations

import numpy as np


def trapezoid_mass(fn, lo: float, hi: float, num: int = 20001) -> float:
    """Trapezoid integral of ``fn`` on [lo, hi] over a uniform grid."""
    xs = np.linspace(lo, hi, num)
    ys = np.asarray(fn(xs), dtype=float)
    return float(np.trapezoid(ys, xs))


def empirical_ks(sorted_samples: np.ndarray, cdf_values: np.ndarray) -> float:
    """Two-sided KS statistic from sorted samples and cdf values at them."""
    x = np.asarray(sorted_samples, dtype=float)
    f = np.asarray(cdf_values, dtype=float)
    n = x.size
    i = np.arange(1, n + 1, dtype=float)
    return float(np.max(np.maximum(np.abs(i / n - f), np.abs((i - 1) / n - f))))


def binomial_se(p: float, trials: int) -> float:
    """Standard error of an empirical frequency with true probability ``p``."""
    return float(np.sqrt(max(p * (1.0 - p), 1e-300) / trials))
