"""Per-cluster Gaussian sufficient statistics and their entropies.

A cluster is summarised by (count, mean, scatter) where scatter is the sum
of centered outer products, so covariance = scatter / count. Keeping the
raw scatter makes single-point insertion and removal exact rank-one
updates, which is what the single-point-move optimizer relies on. Labeled
members are tracked alongside as per-category counts.

All entropies are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateModelError, EmptyClusterError
from .validation import as_vector

LOG_2PI_E = float(np.log(2.0 * np.pi) + 1.0)


@dataclass
class ClusterStats:
    """Incremental sufficient statistics of one cluster.

    Value type: ``add`` and ``remove`` return new instances and never
    mutate their receiver, so instances can be shared freely.
    """

    dim: int
    n_categories: int = 0
    count: int = 0
    mean: np.ndarray = field(default=None)
    scatter: np.ndarray = field(default=None)
    labeled_count: int = 0
    category_counts: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.mean is None:
            self.mean = np.zeros(self.dim)
        if self.scatter is None:
            self.scatter = np.zeros((self.dim, self.dim))
        if self.category_counts is None:
            self.category_counts = np.zeros(self.n_categories, dtype=np.int64)

    @classmethod
    def from_points(cls, points, labels=None, n_categories: int = 0) -> "ClusterStats":
        """Batch-accumulate statistics over a (count, dim) point matrix."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        count, dim = pts.shape
        if count == 0:
            return cls(dim=dim, n_categories=n_categories)
        mean = pts.mean(axis=0)
        centered = pts - mean
        scatter = centered.T @ centered
        cat = np.zeros(n_categories, dtype=np.int64)
        labeled = 0
        if labels is not None:
            lab = np.asarray(labels, dtype=np.int64)
            mask = lab >= 0
            labeled = int(mask.sum())
            if labeled:
                np.add.at(cat, lab[mask], 1)
        return cls(
            dim=dim,
            n_categories=n_categories,
            count=count,
            mean=mean,
            scatter=scatter,
            labeled_count=labeled,
            category_counts=cat,
        )

    def add(self, x, label: int | None = None) -> "ClusterStats":
        """Insert one point (optionally labeled) and return the new stats."""
        v = as_vector(x, self.dim)
        count = self.count + 1
        delta = v - self.mean
        mean = self.mean + delta / count
        # outer(delta, delta) * count_old/count_new is the exact rank-one term
        scatter = self.scatter + np.outer(delta, delta) * (self.count / count)
        labeled = self.labeled_count
        cat = self.category_counts
        if label is not None and label >= 0:
            if label >= self.n_categories:
                raise ValueError(f"label {label} outside {self.n_categories} categories")
            cat = cat.copy()
            cat[label] += 1
            labeled += 1
        return ClusterStats(
            dim=self.dim,
            n_categories=self.n_categories,
            count=count,
            mean=mean,
            scatter=scatter,
            labeled_count=labeled,
            category_counts=cat,
        )

    def remove(self, x, label: int | None = None) -> "ClusterStats":
        """Remove one previously inserted point and return the new stats."""
        if self.count == 0:
            raise EmptyClusterError("cannot remove a point from an empty cluster")
        v = as_vector(x, self.dim)
        count = self.count - 1
        if count == 0:
            # reset exactly to the empty state; kills accumulated drift
            return ClusterStats(dim=self.dim, n_categories=self.n_categories)
        delta = v - self.mean
        mean = self.mean - delta / count
        scatter = self.scatter - np.outer(delta, delta) * (self.count / count)
        labeled = self.labeled_count
        cat = self.category_counts
        if label is not None and label >= 0:
            if label >= self.n_categories or cat[label] == 0:
                raise ValueError(f"label {label} was never inserted")
            cat = cat.copy()
            cat[label] -= 1
            labeled -= 1
        return ClusterStats(
            dim=self.dim,
            n_categories=self.n_categories,
            count=count,
            mean=mean,
            scatter=scatter,
            labeled_count=labeled,
            category_counts=cat,
        )

    def covariance(self) -> np.ndarray:
        if self.count == 0:
            raise EmptyClusterError("covariance of an empty cluster is undefined")
        return self.scatter / self.count


@dataclass(frozen=True)
class GaussianModel:
    """A fitted Gaussian: mean, positive-definite covariance, cached log-det."""

    mean: np.ndarray
    covariance: np.ndarray
    log_det: float
    cholesky: np.ndarray

    @classmethod
    def from_covariance(cls, mean, covariance) -> "GaussianModel":
        mean = np.asarray(mean, dtype=float).reshape(-1)
        cov = np.asarray(covariance, dtype=float)
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:
            raise DegenerateModelError("covariance is not positive definite") from exc
        log_det = 2.0 * float(np.log(np.diag(chol)).sum())
        return cls(mean=mean, covariance=cov, log_det=log_det, cholesky=chol)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def model_of(stats: ClusterStats, ridge: float = 0.0) -> GaussianModel:
    """Maximum-likelihood Gaussian for a cluster, ridge-regularised.

    The covariance is scatter/count + ridge * I. Needs at least two
    members; with fewer the scale of the model is pure regulariser noise.
    """
    if stats.count < 2:
        raise DegenerateModelError(
            f"need at least 2 points to fit a Gaussian, cluster has {stats.count}"
        )
    cov = stats.scatter / stats.count
    if ridge:
        cov = cov + ridge * np.eye(stats.dim)
    return GaussianModel.from_covariance(stats.mean, cov)


def gaussian_entropy(model: GaussianModel) -> float:
    """Differential entropy of the Gaussian, in nats."""
    return entropy_from_log_det(model.log_det, model.dim)


def entropy_from_log_det(log_det, dim: int):
    """Gaussian entropy dim/2 * ln(2*pi*e) + log_det/2; broadcasts over arrays."""
    return 0.5 * dim * LOG_2PI_E + 0.5 * log_det
