"""Particle random-walk clustering with a convergence-theory Monte Carlo oracle."""

from .data import (Dataset, DatasetError, builtin_dataset, load_dataset, minmax_scale,
                   standard_scale)
from .dynamics import (DiceCounts, EventVector, StepOutcome, TransitionRow, apply_step,
                       generate_event_rw1, generate_event_rw2, iterate,
                       naive_transition_row, transition_row)
from .estimator import RandomWalkClustering
from .geometry import (ModelParams, ParticleSystem, TopologySnapshot, build_topology,
                       distance_matrix, pair_distance, select_interaction_range)
from .pipeline import (ClusterResult, RunConfig, SweepEntry, clustering_accuracy,
                       extract_clusters, merge_to_k, run_clustering, sweep_b)
from .theory import (LineWalkSpec, MCEstimate, PairWalkSpec, absorbing_probability,
                     encounter_probability, simulate_line_walk, simulate_pair_walk,
                     z_walk_transitions)

__version__ = "0.1.0"

__all__ = [
    "Dataset", "DatasetError", "builtin_dataset", "load_dataset", "minmax_scale",
    "standard_scale",
    "DiceCounts", "EventVector", "StepOutcome", "TransitionRow", "apply_step",
    "generate_event_rw1", "generate_event_rw2", "iterate",
    "naive_transition_row", "transition_row",
    "RandomWalkClustering",
    "ModelParams", "ParticleSystem", "TopologySnapshot", "build_topology",
    "distance_matrix", "pair_distance", "select_interaction_range",
    "ClusterResult", "RunConfig", "SweepEntry", "clustering_accuracy",
    "extract_clusters", "merge_to_k", "run_clustering", "sweep_b",
    "LineWalkSpec", "MCEstimate", "PairWalkSpec", "absorbing_probability",
    "encounter_probability", "simulate_line_walk", "simulate_pair_walk",
    "z_walk_transitions",
]
