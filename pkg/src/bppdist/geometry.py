"""Network geometry: the observation ball, node density, and uniform sampling.

The model throughout the package is a fixed number of nodes placed
independently and uniformly in a d-dimensional ball centred at the origin,
with distances always measured from that origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# A point is a length-d float array; batches are (count, d) arrays.
Point = np.ndarray


@dataclass(frozen=True)
class NetworkSpec:
    """A finite uniformly random network.

    Attributes:
        dim: Spatial dimension d >= 1.
        radius: Radius R > 0 of the ball containing the nodes.
        num_nodes: Number of nodes N >= 1 placed uniformly in the ball.
    """

    dim: int
    radius: float
    num_nodes: int

    def __post_init__(self) -> None:
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"dim must be an integer >= 1, got {self.dim!r}")
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be a positive finite float, got {self.radius!r}")
        if not isinstance(self.num_nodes, int) or self.num_nodes < 1:
            raise ValueError(f"num_nodes must be an integer >= 1, got {self.num_nodes!r}")


def unit_ball_volume(dim: int) -> float:
    """Volume of the unit ball in ``dim`` dimensions: pi^(d/2) / Gamma(d/2 + 1).

    Evaluated through the recurrence c_d = c_{d-2} * 2*pi/d, which keeps the
    familiar low-dimensional values (2, pi, 4*pi/3, ...) exact to the ulp.
    """
    if not isinstance(dim, int) or dim < 1:
        raise ValueError(f"dim must be an integer >= 1, got {dim!r}")
    volume = 2.0 if dim % 2 else 1.0
    for k in range(2 + dim % 2, dim + 1, 2):
        volume *= 2.0 * math.pi / k
    return volume


def density(spec: NetworkSpec) -> float:
    """Expected number of nodes per unit volume, N / (c_d R^d)."""
    return spec.num_nodes / (unit_ball_volume(spec.dim) * spec.radius**spec.dim)


def sample_uniform_in_ball(
    dim: int,
    radius: float,
    rng: np.random.Generator,
    size: int | None = None,
) -> Point:
    """Uniform random points in the d-ball of the given radius.

    The radial coordinate is ``radius * U**(1/d)`` and the direction is an
    isotropic unit vector obtained by normalising a standard Gaussian draw.

    Args:
        dim: Spatial dimension, >= 1.
        radius: Ball radius, > 0.
        rng: Source of randomness.
        size: Number of points; ``None`` returns a single point of shape
            ``(dim,)``, an integer returns shape ``(size, dim)``.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if radius <= 0.0:
        raise ValueError(f"radius must be positive, got {radius}")
    count = 1 if size is None else int(size)
    if count < 0:
        raise ValueError(f"size must be nonnegative, got {size}")
    radii = radius * rng.random(count) ** (1.0 / dim)
    gauss = rng.standard_normal((count, dim))
    norms = np.linalg.norm(gauss, axis=1, keepdims=True)
    np.maximum(norms, 1e-300, out=norms)
    points = gauss / norms * radii[:, None]
    return points[0] if size is None else points


def spawn_streams(seed: int, workers: int) -> list[np.random.Generator]:
    """Independent per-worker random streams derived from one master seed.

    Streams are spawned from a ``numpy.random.SeedSequence``, so the full
    collection is a pure function of ``(seed, workers)``: the same pair
    always yields bit-identical streams, and different workers never share
    state.

    Raises:
        ValueError: If ``workers < 1``.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    root = np.random.SeedSequence(seed)
    return [np.random.default_rng(child) for child in root.spawn(workers)]
