"""Clustering cost functions.

The total cost of a clustering is

    H(Y) + sum_i |Y_i|/n * (gaussian entropy of cluster i
                            + beta * category entropy of cluster i's labels)

which decomposes over clusters: each cluster of mass w contributes
w * (-ln w + model entropy + beta * side entropy). beta = 0 recovers the
pure model-based cost; larger beta buys consistency with the labeling at
the expense of model fit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import DegenerateModelError, EmptyClusterError, UnsupportedSettingError
from .partitions import Clustering, SideInfo, contingency, entropy_of_counts
from .stats import ClusterStats, GaussianModel, entropy_from_log_det, model_of
from .validation import as_matrix


@dataclass
class CostBreakdown:
    """The three cost terms and their weighted sum."""

    partition_term: float
    model_term: float
    side_term: float
    beta: float
    total: float = field(init=False)

    def __post_init__(self):
        self.total = self.partition_term + self.model_term + self.beta * self.side_term


def _cluster_models(data, clustering: Clustering, ridge: float) -> list[GaussianModel]:
    """Fit the per-cluster Gaussians, failing loudly on degenerate clusters."""
    x = as_matrix(data)
    if x.shape[0] != clustering.n:
        raise ValueError("data and clustering cover different numbers of points")
    models = []
    for i in range(clustering.k):
        members = x[clustering.assignment == i]
        if members.shape[0] == 0:
            raise EmptyClusterError(f"cluster {i} is empty")
        if members.shape[0] < 2:
            raise DegenerateModelError(f"cluster {i} has a single point")
        stats = ClusterStats.from_points(members)
        try:
            models.append(model_of(stats, ridge))
        except DegenerateModelError as exc:
            raise DegenerateModelError(f"cluster {i}: {exc}") from exc
    return models


def cecib_cost(
    data,
    clustering: Clustering,
    side: SideInfo | None = None,
    beta: float = 0.0,
    ridge: float = 0.0,
) -> CostBreakdown:
    """Full cost of a clustering under partial labeling.

    With no labeled points the side term is zero and the result reduces to
    the unsupervised cost.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    models = _cluster_models(data, clustering, ridge)
    masses = clustering.sizes() / clustering.n
    model_term = float(
        sum(m * entropy_from_log_det(g.log_det, g.dim) for m, g in zip(masses, models))
    )
    partition_term = entropy_of_counts(clustering.sizes())
    side_term = 0.0
    if side is not None and side.n_labeled > 0:
        table = contingency(clustering, side)
        for i in range(clustering.k):
            if table[i].sum() > 0:
                side_term += masses[i] * entropy_of_counts(table[i])
    return CostBreakdown(
        partition_term=partition_term,
        model_term=model_term,
        side_term=side_term,
        beta=beta,
    )


def cec_cost(data, clustering: Clustering, ridge: float = 0.0) -> CostBreakdown:
    """Unsupervised cost: partition entropy plus weighted model entropies."""
    return cecib_cost(data, clustering, side=None, beta=0.0, ridge=ridge)


def cluster_cost_from_stats(
    stats: ClusterStats, *, n_total: int, beta: float = 0.0, ridge: float = 0.0
) -> float:
    """Cost contribution of one cluster given its sufficient statistics."""
    if stats.count < 2:
        raise DegenerateModelError("a cluster needs at least 2 points to be costed")
    mass = stats.count / n_total
    model = model_of(stats, ridge)
    side_entropy = (
        entropy_of_counts(stats.category_counts) if stats.labeled_count > 0 else 0.0
    )
    return mass * (
        -np.log(mass) + entropy_from_log_det(model.log_det, model.dim) + beta * side_entropy
    )


def cluster_cost(
    points,
    labels=None,
    *,
    n_total: int,
    beta: float = 0.0,
    ridge: float = 0.0,
    n_categories: int = 0,
) -> float:
    """Cost of a single cluster given its member points and their labels.

    Summing this over all clusters of a partition reproduces the total
    returned by :func:`cecib_cost`.
    """
    pts = as_matrix(points)
    if labels is not None and n_categories == 0:
        lab = np.asarray(labels, dtype=np.int64)
        n_categories = int(lab.max()) + 1 if (lab >= 0).any() else 0
    stats = ClusterStats.from_points(pts, labels=labels, n_categories=n_categories)
    return cluster_cost_from_stats(stats, n_total=n_total, beta=beta, ridge=ridge)


def _log_density(model: GaussianModel, points: np.ndarray) -> np.ndarray:
    centered = points - model.mean
    white = solve_triangular(model.cholesky, centered.T, lower=True)
    return (
        -0.5 * model.dim * np.log(2.0 * np.pi)
        - 0.5 * model.log_det
        - 0.5 * (white * white).sum(axis=0)
    )


def conditional_cross_entropy(
    data, clustering: Clustering, side: SideInfo, ridge: float = 0.0
) -> float:
    """Per-category cross-entropy of the data against the fitted model.

    Each category is modeled by the cluster Gaussians reweighted by the
    within-category cluster proportions; the result is the labeled-mass
    weighted average of the categories' empirical cross-entropies. Defined
    only when every point is labeled, and then it equals the beta = 1 cost
    total minus the category entropy.
    """
    x = as_matrix(data)
    if side.n_labeled != side.n or side.n != clustering.n:
        raise UnsupportedSettingError(
            "conditional cross-entropy requires every point to be labeled"
        )
    models = _cluster_models(x, clustering, ridge)
    table = contingency(clustering, side)
    category_sizes = table.sum(axis=0)

    total = 0.0
    for i in range(clustering.k):
        members = clustering.assignment == i
        log_pdf = _log_density(models[i], x[members])
        member_labels = side.labels[members]
        # ln of the category-conditional weight |Z_j ^ Y_i| / |Z_j| per point
        weights = table[i, member_labels] / category_sizes[member_labels]
        total += float((np.log(weights) + log_pdf).sum())
    return -total / clustering.n
