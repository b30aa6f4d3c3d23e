"""Scikit-learn style estimator wrapping the clustering search."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .costs import _log_density
from .optimize import FitConfig, fit
from .partitions import SideInfo
from .stats import model_of
from .validation import as_label_vector, as_matrix


class CECIB(ClusterMixin, BaseEstimator):
    """Semi-supervised model-based clustering with automatic cluster count.

    Fits a max-of-weighted-Gaussians model by single-point moves, starting
    from ``k_init`` clusters and deleting clusters whose mass drops below
    ``epsilon``. Labels passed to :meth:`fit` act as partition-level side
    information: points sharing a category are pushed into pure clusters
    with strength ``beta``, while one category may still spread over
    several clusters. Use -1 (or None/NaN) for unlabeled points.

    Parameters mirror :class:`cecib.optimize.FitConfig`; ``random_state``
    seeds the whole multi-restart search.

    Examples
    --------
    >>> import numpy as np
    >>> from cecib import CECIB
    >>> x = np.concatenate([np.random.default_rng(0).normal(0, 1, (50, 2)),
    ...                     np.random.default_rng(1).normal(8, 1, (50, 2))])
    >>> model = CECIB(beta=1.0, k_init=4, random_state=0).fit(x)
    >>> model.n_clusters_ <= 4
    True
    """

    def __init__(
        self,
        beta: float = 1.0,
        k_init: int = 10,
        epsilon: float = 0.02,
        restarts: int = 10,
        max_epochs: int = 100,
        ridge: float | None = None,
        min_cluster_points: int | None = None,
        random_state: int = 0,
    ):
        self.beta = beta
        self.k_init = k_init
        self.epsilon = epsilon
        self.restarts = restarts
        self.max_epochs = max_epochs
        self.ridge = ridge
        self.min_cluster_points = min_cluster_points
        self.random_state = random_state

    def _config(self) -> FitConfig:
        return FitConfig(
            beta=self.beta,
            k_init=self.k_init,
            epsilon=self.epsilon,
            restarts=self.restarts,
            max_epochs=self.max_epochs,
            seed=self.random_state,
            ridge=self.ridge,
            min_cluster_points=self.min_cluster_points,
        )

    def fit(self, X, y=None):
        """Cluster X, optionally guided by partial labels y."""
        x = as_matrix(X)
        side = None
        if y is not None:
            labels = as_label_vector(y, x.shape[0])
            m = int(labels.max()) + 1 if (labels >= 0).any() else 0
            side = SideInfo(labels=labels, m=m)
        report = fit(x, side, self._config())
        self.report_ = report
        self.labels_ = report.clustering.assignment.copy()
        self.n_clusters_ = report.clustering.k
        self.cost_ = report.cost
        self.n_iter_ = report.epochs_run
        self.n_features_in_ = x.shape[1]
        self.weights_ = report.clustering.sizes() / report.clustering.n
        self.models_ = [model_of(s, report.ridge) for s in report.cluster_stats]
        return self

    def predict(self, X):
        """Assign new points to the cluster with the highest weighted density."""
        if not hasattr(self, "models_"):
            raise AttributeError("this estimator is not fitted yet; call fit first")
        x = as_matrix(X)
        if x.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {x.shape[1]}"
            )
        scores = np.empty((x.shape[0], len(self.models_)))
        for i, (weight, model) in enumerate(zip(self.weights_, self.models_)):
            scores[:, i] = np.log(weight) + _log_density(model, x)
        return np.argmax(scores, axis=1)
