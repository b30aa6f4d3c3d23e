"""Critical consistency-weight values for merge/split decisions.

For a cluster that side information wants split into sub-clusters, there
is a weight beta_0 at which the merged and the split configurations cost
the same; above it the split wins. The value depends only on the cluster
masses and the covariance determinant ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateModelError, DegenerateScenarioError
from .partitions import Clustering, entropy_of_counts
from .stats import ClusterStats
from .validation import as_matrix


@dataclass
class MergeScenario:
    """Weights and covariances of clusters considered for one merge."""

    weights: np.ndarray
    covariances: list
    merged_covariance: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        self.covariances = [np.asarray(c, dtype=float) for c in self.covariances]
        self.merged_covariance = np.asarray(self.merged_covariance, dtype=float)
        if len(self.covariances) != self.weights.shape[0]:
            raise ValueError("one covariance per weight is required")
        if len(self.covariances) < 2:
            raise DegenerateScenarioError("a merge scenario needs at least 2 clusters")
        if (self.weights <= 0).any():
            raise ValueError("weights must be positive")


def _log_det_pd(matrix: np.ndarray) -> float:
    sign, log_det = np.linalg.slogdet(matrix)
    if sign <= 0 or not np.isfinite(log_det):
        raise DegenerateModelError("covariance is not positive definite")
    return float(log_det)


def beta_threshold(scenario: MergeScenario) -> float:
    """Weight at which splitting the merged block becomes cost-neutral.

    Returns 1 + sum_i p_i/(2q) * ln(det S_i / det S) / H(p_i/q), where q is
    the total block weight. Equal sub-cluster and merged covariances give
    exactly 1; tighter sub-clusters push the threshold below 1.
    """
    q = float(scenario.weights.sum())
    denom = entropy_of_counts(scenario.weights)
    if denom <= 0.0:
        raise DegenerateScenarioError("merged block carries no split entropy")
    log_det_merged = _log_det_pd(scenario.merged_covariance)
    numer = 0.0
    for w, cov in zip(scenario.weights, scenario.covariances):
        numer += w / (2.0 * q) * (_log_det_pd(cov) - log_det_merged)
    return 1.0 + numer / denom


def beta0_gaussian_halves() -> float:
    """Threshold for splitting one 1-d Gaussian into its two halves.

    Each half of a Gaussian, split at the mean, has variance
    sigma^2 * (1 - 2/pi); plugging that into the threshold formula gives
    the closed form 1 + ln(sqrt(1 - 2/pi)) / ln(2).
    """
    return 1.0 + 0.5 * math.log(1.0 - 2.0 / math.pi) / math.log(2.0)


def empirical_beta_threshold(
    data,
    clustering: Clustering,
    merged_block,
    ridge: float = 0.0,
) -> float:
    """Threshold computed from sample statistics of the named clusters.

    ``merged_block`` lists the cluster indices whose merge is considered.
    The same ridge must be used here and in any cost evaluation the result
    is compared against, or the crossing point will drift.
    """
    x = as_matrix(data)
    block = sorted(int(i) for i in merged_block)
    if len(block) < 2:
        raise DegenerateScenarioError("merged block must contain at least 2 clusters")
    eye = np.eye(x.shape[1])
    weights = []
    covariances = []
    union_mask = np.zeros(clustering.n, dtype=bool)
    for i in block:
        members = clustering.assignment == i
        count = int(members.sum())
        if count < 2:
            raise DegenerateModelError(f"cluster {i} has fewer than 2 points")
        weights.append(count / clustering.n)
        covariances.append(ClusterStats.from_points(x[members]).covariance() + ridge * eye)
        union_mask |= members
    merged_cov = ClusterStats.from_points(x[union_mask]).covariance() + ridge * eye
    scenario = MergeScenario(
        weights=np.asarray(weights), covariances=covariances, merged_covariance=merged_cov
    )
    return beta_threshold(scenario)
