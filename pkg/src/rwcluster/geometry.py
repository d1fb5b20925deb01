"""Exponential pair distances, R-neighborhood topology and range selection."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial.distance import cdist

VARIANTS = ("rw1", "rw2", "naive")


@dataclass
class ModelParams:
    """Parameters of one clustering run.

    The interaction range may be given directly (``interaction_range``) or
    derived from the ``b``-th order statistic of the initial distances.
    ``epsilon`` defaults to 1e-3 * N when left unset.
    """

    sigma: float = 1.0
    theta: float = 1.1
    b: int | None = None
    interaction_range: float | None = None
    epsilon: float | None = None
    max_iters: int = 1000
    variant: str = "rw1"
    seed: int = 0
    include_self: bool = True

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.theta < 1.0:
            raise ValueError("theta below 1 can never trigger (distances are >= 1)")
        if self.b is None and self.interaction_range is None:
            raise ValueError("either b or interaction_range must be set")
        if self.b is not None and self.b < 1:
            raise ValueError("b must be a positive integer")
        if self.interaction_range is not None and self.interaction_range < 1.0:
            raise ValueError("interaction_range must be >= 1")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")

    def resolve_epsilon(self, n_points: int) -> float:
        return self.epsilon if self.epsilon is not None else 1e-3 * n_points


@dataclass
class TopologySnapshot:
    """Distance matrix, adjacency, neighbor sets and degrees at one iteration."""

    distance: np.ndarray
    adjacency: np.ndarray
    neighbors: list[np.ndarray]
    degree: np.ndarray


def pair_distance(a, b, sigma: float = 1.0) -> float:
    """exp(||a - b|| / (2 sigma^2)); symmetric, minimum 1 at a == b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError("non-finite coordinates")
    return float(np.exp(np.linalg.norm(a - b) / (2.0 * sigma**2)))


def distance_matrix(positions, sigma: float = 1.0) -> np.ndarray:
    """Full pairwise exponential-distance matrix with an exact unit diagonal."""
    positions = np.asarray(positions, dtype=float)
    if positions.ndim != 2:
        raise ValueError("positions must be an N x m matrix")
    if not np.isfinite(positions).all():
        raise ValueError("non-finite coordinates")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    with np.errstate(over="ignore"):
        dist = np.exp(cdist(positions, positions) / (2.0 * sigma**2))
    np.fill_diagonal(dist, 1.0)
    # cdist may leave tiny asymmetries; the topology code assumes none
    return (dist + dist.T) / 2.0


def build_topology(distance: np.ndarray, interaction_range: float,
                   include_self: bool = True) -> TopologySnapshot:
    """Adjacency within the interaction range (boundary ties count as adjacent)."""
    adjacency = distance <= interaction_range
    if not include_self:
        np.fill_diagonal(adjacency, False)
    neighbors = [np.flatnonzero(row) for row in adjacency]
    degree = adjacency.sum(axis=1)
    return TopologySnapshot(distance=distance, adjacency=adjacency,
                            neighbors=neighbors, degree=degree)


def select_interaction_range(initial_distance: np.ndarray, b: int) -> float:
    """Median over rows of the b-th smallest initial distance (1-indexed).

    The self-distance 1 occupies position 1 of every sorted row, so b = 1
    always yields 1.0. Even row counts take the midpoint of the two central
    order statistics.
    """
    n = initial_distance.shape[0]
    if not 1 <= b <= n:
        raise ValueError(f"b must be in [1, {n}], got {b}")
    column = np.sort(initial_distance, axis=1)[:, b - 1]
    return float(np.median(column))


@dataclass
class ParticleSystem:
    """N particles in m-dimensional feature space plus the frozen initial state.

    The initial distance matrix, degree vector and neighbor sets are captured
    once at construction and reused by the transition-probability rule on
    every later iteration.
    """

    positions: np.ndarray
    initial_positions: np.ndarray
    initial_distance: np.ndarray
    initial_topology: TopologySnapshot
    interaction_range: float
    labels: np.ndarray | None = None

    @property
    def n_points(self) -> int:
        return self.positions.shape[0]

    @property
    def initial_degree(self) -> np.ndarray:
        return self.initial_topology.degree

    @property
    def initial_neighbors(self) -> list[np.ndarray]:
        return self.initial_topology.neighbors

    @classmethod
    def from_points(cls, points, params: ModelParams, labels=None) -> "ParticleSystem":
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[0] < 2 or points.shape[1] < 1:
            raise ValueError("points must be an N x m matrix with N >= 2, m >= 1")
        if labels is not None:
            labels = np.asarray(labels)
            if labels.shape[0] != points.shape[0]:
                raise ValueError("labels length must match the number of points")
        d0 = distance_matrix(points, params.sigma)
        if params.interaction_range is not None:
            rng_ = params.interaction_range
        else:
            rng_ = select_interaction_range(d0, params.b)
        topo0 = build_topology(d0, rng_, params.include_self)
        return cls(positions=points.copy(), initial_positions=points.copy(),
                   initial_distance=d0, initial_topology=topo0,
                   interaction_range=rng_, labels=labels)

    def with_positions(self, positions: np.ndarray) -> "ParticleSystem":
        """Copy of the system at new particle positions; the frozen state is shared."""
        return replace(self, positions=positions)
