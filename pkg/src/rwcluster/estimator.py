"""scikit-learn style estimator wrapping the particle random-walk clustering."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .geometry import ModelParams, ParticleSystem
from .pipeline import RunConfig, run_clustering


class RandomWalkClustering(ClusterMixin, BaseEstimator):
    """Cluster data points by letting them perform a modified random walk.

    Each sample is a particle taking probability-weighted steps toward
    neighbors within an interaction range until the total motion per
    iteration falls below a threshold; co-located particles form clusters.

    Parameters
    ----------
    variant : {"rw1", "rw2", "naive"}
        "rw1" picks the highest-probability admissible neighbor
        deterministically, "rw2" samples it with a biased dice, "naive" is
        the distance-only baseline rule.
    b : int or None
        Order statistic used to derive the interaction range from the
        initial distances. Ignored when interaction_range is given.
    interaction_range : float or None
        Neighborhood radius in exponential-distance units (>= 1).
    n_clusters : int or None
        When set, emergent clusters are merged down to this count.
    epsilon : float or None
        Stopping threshold on the summed walk length; defaults to 1e-3 * N.
    """

    def __init__(self, variant="rw1", b=10, interaction_range=None, sigma=1.0,
                 theta=1.1, epsilon=None, max_iters=1000, n_clusters=None,
                 include_self=True, random_state=0):
        self.variant = variant
        self.b = b
        self.interaction_range = interaction_range
        self.sigma = sigma
        self.theta = theta
        self.epsilon = epsilon
        self.max_iters = max_iters
        self.n_clusters = n_clusters
        self.include_self = include_self
        self.random_state = random_state

    def _model_params(self) -> ModelParams:
        return ModelParams(sigma=self.sigma, theta=self.theta, b=self.b,
                           interaction_range=self.interaction_range,
                           epsilon=self.epsilon, max_iters=self.max_iters,
                           variant=self.variant, seed=self.random_state,
                           include_self=self.include_self)

    def fit(self, X, y=None):
        """Run the dynamics to convergence and extract cluster labels."""
        X = check_array(X, ensure_min_samples=2)
        params = self._model_params()
        system = ParticleSystem.from_points(X, params)
        config = RunConfig(params=params, target_clusters=self.n_clusters)
        result = run_clustering(system, config)
        self.labels_ = result.assignments
        self.raw_cluster_count_ = result.raw_cluster_count
        self.n_clusters_ = result.merged_cluster_count
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        self.convergence_trace_ = result.convergence_trace
        self.final_positions_ = result.final_positions
        self.interaction_range_ = result.interaction_range
        self.n_features_in_ = X.shape[1]
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_
