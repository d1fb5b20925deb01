"""Full clustering runs: iteration loop, extraction, merging, accuracy, b-sweeps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .dynamics import iterate
from .geometry import ModelParams, ParticleSystem, distance_matrix

BRUTE_FORCE_MAPPING_LIMIT = 8


@dataclass
class RunConfig:
    params: ModelParams
    target_clusters: int | None = None
    trace: bool = True

    def __post_init__(self):
        if self.target_clusters is not None and self.target_clusters < 1:
            raise ValueError("target_clusters must be >= 1")


@dataclass
class ClusterResult:
    assignments: np.ndarray
    raw_cluster_count: int
    merged_cluster_count: int
    iterations: int
    convergence_trace: list[float]
    final_positions: np.ndarray
    converged: bool
    accuracy: float | None = None
    interaction_range: float | None = None
    seed: int | None = None


def extract_clusters(final_positions: np.ndarray, params: ModelParams) -> np.ndarray:
    """Connected components of the graph with edges wherever d <= theta."""
    dist = distance_matrix(final_positions, params.sigma)
    adjacency = dist <= params.theta
    _, labels = connected_components(csr_matrix(adjacency), directed=False)
    return labels


def merge_to_k(assignments: np.ndarray, final_positions: np.ndarray, k: int) -> np.ndarray:
    """Absorb the smallest cluster into its nearest-centroid neighbor until k remain.

    Ties on size resolve to the lowest cluster id; centroid distances are
    Euclidean in the converged position space.
    """
    assignments = np.asarray(assignments).copy()
    ids = list(np.unique(assignments))
    if len(ids) < k:
        raise ValueError(f"cannot reach {k} clusters by merging {len(ids)}")
    while len(ids) > k:
        sizes = {c: int(np.sum(assignments == c)) for c in ids}
        smallest = min(ids, key=lambda c: (sizes[c], c))
        centroids = {c: final_positions[assignments == c].mean(axis=0) for c in ids}
        others = [c for c in ids if c != smallest]
        nearest = min(others,
                      key=lambda c: (np.linalg.norm(centroids[c] - centroids[smallest]), c))
        assignments[assignments == smallest] = nearest
        ids.remove(smallest)
    # compress ids to 0..k-1 preserving ascending order
    remap = {c: i for i, c in enumerate(sorted(ids))}
    return np.vectorize(remap.get)(assignments)


def clustering_accuracy(assignments, labels) -> float:
    """Best one-to-one cluster/class mapping accuracy.

    Exhaustive over permutations for small contingency tables, optimal
    assignment on the contingency matrix otherwise.
    """
    assignments = np.asarray(assignments)
    labels = np.asarray(labels)
    if assignments.shape[0] != labels.shape[0]:
        raise ValueError("assignments and labels must have equal length")
    n = assignments.shape[0]
    _, a_codes = np.unique(assignments, return_inverse=True)
    _, l_codes = np.unique(labels, return_inverse=True)
    n_a = a_codes.max() + 1
    n_l = l_codes.max() + 1
    side = max(n_a, n_l)
    table = np.zeros((side, side), dtype=np.int64)
    np.add.at(table, (a_codes, l_codes), 1)
    if side <= BRUTE_FORCE_MAPPING_LIMIT:
        best = max(sum(table[i, perm[i]] for i in range(side))
                   for perm in itertools.permutations(range(side)))
    else:
        rows, cols = linear_sum_assignment(-table)
        best = int(table[rows, cols].sum())
    return best / n


def run_clustering(system: ParticleSystem, config: RunConfig,
                   seed: int | None = None) -> ClusterResult:
    """Iterate the particle dynamics until the total walk length drops below epsilon."""
    params = config.params
    eps = params.resolve_epsilon(system.n_points)
    run_seed = params.seed if seed is None else seed
    current = system
    trace: list[float] = []
    converged = False
    iterations = 0
    for it in range(params.max_iters):
        new_positions, omega, _ = iterate(current, params, iteration=it, seed=run_seed)
        current = current.with_positions(new_positions)
        total = float(omega.sum())
        iterations = it + 1
        if config.trace:
            trace.append(total)
        if total < eps:
            converged = True
            break
    assignments = extract_clusters(current.positions, params)
    raw_count = int(assignments.max()) + 1
    if config.target_clusters is not None and raw_count > config.target_clusters:
        assignments = merge_to_k(assignments, current.positions, config.target_clusters)
    merged_count = int(assignments.max()) + 1
    accuracy = None
    if system.labels is not None:
        accuracy = clustering_accuracy(assignments, system.labels)
    return ClusterResult(assignments=assignments, raw_cluster_count=raw_count,
                         merged_cluster_count=merged_count, iterations=iterations,
                         convergence_trace=trace, final_positions=current.positions,
                         converged=converged, accuracy=accuracy,
                         interaction_range=system.interaction_range, seed=run_seed)


@dataclass
class SweepEntry:
    """All runs at one b value plus accuracy statistics across trials."""

    b: int
    interaction_range: float
    results: list[ClusterResult]
    accuracy_mean: float | None = None
    accuracy_var: float | None = None
    accuracy_max: float | None = None

    @property
    def raw_cluster_count(self) -> int:
        return self.results[0].raw_cluster_count

    @property
    def merged_cluster_count(self) -> int:
        return self.results[0].merged_cluster_count


def _system_for_b(system: ParticleSystem, params: ModelParams, b: int) -> tuple[ParticleSystem, ModelParams]:
    params_b = replace(params, b=b, interaction_range=None)
    rebuilt = ParticleSystem.from_points(system.initial_positions, params_b,
                                         labels=system.labels)
    return rebuilt, params_b


def sweep_b(system: ParticleSystem, base_config: RunConfig, b_values,
            n_trials: int = 20) -> list[SweepEntry]:
    """One full run per b; the nondeterministic variant is repeated n_trials times."""
    entries = []
    for b in b_values:
        sys_b, params_b = _system_for_b(system, base_config.params, b)
        config_b = replace(base_config, params=params_b)
        if params_b.variant == "rw2":
            results = [run_clustering(sys_b, config_b, seed=params_b.seed + trial)
                       for trial in range(n_trials)]
        else:
            results = [run_clustering(sys_b, config_b)]
        entry = SweepEntry(b=b, interaction_range=sys_b.interaction_range, results=results)
        accs = [r.accuracy for r in results if r.accuracy is not None]
        if accs:
            entry.accuracy_mean = float(np.mean(accs))
            entry.accuracy_var = float(np.var(accs))
            entry.accuracy_max = float(np.max(accs))
        entries.append(entry)
    return entries
