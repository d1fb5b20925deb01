"""Transition probabilities, event generation and the synchronous position update."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ModelParams, ParticleSystem, TopologySnapshot, build_topology, distance_matrix


@dataclass
class TransitionRow:
    """One particle's transition probabilities over its current neighbor set."""

    probs: np.ndarray
    support: np.ndarray
    isolated: bool = False


@dataclass
class EventVector:
    """The single transition target chosen for a particle, or no event."""

    target: int | None
    one_hot: np.ndarray


@dataclass
class StepOutcome:
    omega: float
    new_position: np.ndarray


@dataclass
class DiceCounts:
    """Per-face tallies of the biased dice thrown by the nondeterministic rule."""

    counts: np.ndarray
    rolls: int


def transition_matrix(topo: TopologySnapshot, system: ParticleSystem) -> np.ndarray:
    """Row-stochastic matrix combining current/initial degrees and distances.

    Row i weighs each current neighbor j by
    (K_j / sum_neighbors K) * (K0_j / sum_initial_neighbors K0) / (d_ij * d0_ij)
    and normalizes. The initial-state factors always come from the frozen
    snapshot, even for neighbors that were not initially adjacent. Rows with
    empty support come back all-zero.
    """
    adj = topo.adjacency
    deg = topo.degree.astype(float)
    deg0 = system.initial_topology.degree.astype(float)
    sum_deg = adj @ deg
    sum_deg0 = system.initial_topology.adjacency @ deg0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        weight = (deg[None, :] / sum_deg[:, None]) * (deg0[None, :] / sum_deg0[:, None])
        weight = weight / (topo.distance * system.initial_distance)
        weight = np.where(adj, weight, 0.0)
        weight = np.nan_to_num(weight, nan=0.0, posinf=0.0, neginf=0.0)
        row_sums = weight.sum(axis=1)
        probs = np.where(row_sums[:, None] > 0, weight / row_sums[:, None], 0.0)
    return np.nan_to_num(probs, nan=0.0)


def naive_transition_matrix(topo: TopologySnapshot) -> np.ndarray:
    """Distance-only rule: probabilities proportional to 1/d over the neighbor set."""
    weight = np.where(topo.adjacency, 1.0 / topo.distance, 0.0)
    row_sums = weight.sum(axis=1)
    with np.errstate(invalid="ignore"):
        probs = np.where(row_sums[:, None] > 0, weight / row_sums[:, None], 0.0)
    return np.nan_to_num(probs, nan=0.0)


def _row(probs_row: np.ndarray, support: np.ndarray) -> TransitionRow:
    return TransitionRow(probs=probs_row, support=support,
                         isolated=support.size == 0 or probs_row.sum() == 0.0)


def transition_row(i: int, topo: TopologySnapshot, system: ParticleSystem) -> TransitionRow:
    return _row(transition_matrix(topo, system)[i], topo.neighbors[i])


def naive_transition_row(i: int, topo: TopologySnapshot) -> TransitionRow:
    return _row(naive_transition_matrix(topo)[i], topo.neighbors[i])


def _no_event(n: int) -> EventVector:
    return EventVector(target=None, one_hot=np.zeros(n, dtype=np.int8))


def _event_for(target: int, n: int) -> EventVector:
    one_hot = np.zeros(n, dtype=np.int8)
    one_hot[target] = 1
    return EventVector(target=int(target), one_hot=one_hot)


def generate_event_rw1(i: int, row: TransitionRow, distance_row: np.ndarray,
                       theta: float) -> EventVector:
    """Deterministic rule: highest-probability neighbor farther than theta.

    Ties break toward the lowest particle index; with no admissible neighbor
    no event is generated.
    """
    n = row.probs.shape[0]
    admissible = row.support[distance_row[row.support] > theta]
    if admissible.size == 0:
        return _no_event(n)
    target = admissible[np.argmax(row.probs[admissible])]
    return _event_for(target, n)


def generate_event_rw2(i: int, row: TransitionRow, distance_row: np.ndarray,
                       theta: float, rolls: int,
                       rng: np.random.Generator) -> tuple[EventVector, DiceCounts]:
    """Nondeterministic rule: roll a biased dice and pick the admissible mode.

    The unit interval is split into one subinterval per neighbor (in ascending
    index order) with lengths equal to the transition probabilities; ``rolls``
    uniform variates are binned to produce the counts. The target is the
    admissible neighbor with the most hits, ties toward the lowest index.
    """
    n = row.probs.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    support = row.support
    if support.size == 0 or row.isolated:
        return _no_event(n), DiceCounts(counts=counts, rolls=0)
    p_support = row.probs[support]
    edges = np.cumsum(p_support)
    draws = rng.random(rolls)
    bins = np.searchsorted(edges, draws, side="right")
    bins = np.minimum(bins, support.size - 1)  # guard cumsum rounding at 1.0
    counts[support] = np.bincount(bins, minlength=support.size)
    admissible = support[distance_row[support] > theta]
    if admissible.size == 0:
        return _no_event(n), DiceCounts(counts=counts, rolls=int(rolls))
    target = admissible[np.argmax(counts[admissible])]
    return _event_for(target, n), DiceCounts(counts=counts, rolls=int(rolls))


def apply_step(i: int, event: EventVector, row: TransitionRow,
               distance_row: np.ndarray, positions: np.ndarray) -> StepOutcome:
    """Walk length and new position for one particle (no event leaves it in place)."""
    if event.target is None:
        return StepOutcome(omega=0.0, new_position=positions[i].copy())
    k = event.target
    p = float(row.probs[k])
    omega = p * float(distance_row[k])
    new_position = positions[i] + (positions[k] - positions[i]) * p
    return StepOutcome(omega=omega, new_position=new_position)


def particle_rng(seed: int, iteration: int, index: int) -> np.random.Generator:
    """Stream derived from (master seed, iteration, particle); scheduling-independent."""
    return np.random.default_rng(np.random.SeedSequence([seed, iteration, index]))


def iterate(system: ParticleSystem, params: ModelParams, iteration: int = 0,
            seed: int | None = None) -> tuple[np.ndarray, np.ndarray, TopologySnapshot]:
    """One synchronous model iteration from the system's current positions.

    Rebuilds the topology, generates one event per particle under the
    configured variant and commits all moves against the pre-step position
    matrix. Returns (new positions, per-particle walk lengths, topology).
    """
    positions = system.positions
    n = system.n_points
    dist = distance_matrix(positions, params.sigma)
    topo = build_topology(dist, system.interaction_range, params.include_self)
    if params.variant == "naive":
        probs = naive_transition_matrix(topo)
    else:
        probs = transition_matrix(topo, system)

    omega = np.zeros(n)
    new_positions = positions.copy()
    if params.variant in ("rw1", "naive"):
        admissible = topo.adjacency & (dist > params.theta)
        scores = np.where(admissible, probs, -np.inf)
        targets = scores.argmax(axis=1)
        fired = admissible[np.arange(n), targets]
        idx = np.flatnonzero(fired)
        p_sel = probs[idx, targets[idx]]
        omega[idx] = p_sel * dist[idx, targets[idx]]
        new_positions[idx] = positions[idx] + (positions[targets[idx]] - positions[idx]) * p_sel[:, None]
    else:  # rw2
        master = params.seed if seed is None else seed
        for i in range(n):
            row = _row(probs[i], topo.neighbors[i])
            event, _ = generate_event_rw2(i, row, dist[i], params.theta,
                                          int(topo.degree[i]),
                                          particle_rng(master, iteration, i))
            out = apply_step(i, event, row, dist[i], positions)
            omega[i] = out.omega
            new_positions[i] = out.new_position
    return new_positions, omega, topo
