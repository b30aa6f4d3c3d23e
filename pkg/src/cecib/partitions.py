"""Hard partitions, partition-level side information, discrete entropies.

Side information is a partial labeling: a subset of points carries a
category index in {0..m-1}; the rest are unlabeled (-1). The conditional
entropy of the categories given a clustering is estimated from the labeled
members of each cluster and weighted by the full cluster mass, which is
the extrapolation that makes partial labels usable at all.

Conventions: natural logs throughout, 0*ln(0) = 0, and clusters without
any labeled member contribute zero conditional entropy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import as_label_vector


@dataclass
class Clustering:
    """Assignment of n points to clusters {0..k-1}."""

    assignment: np.ndarray
    k: int

    def __post_init__(self):
        self.assignment = np.asarray(self.assignment, dtype=np.int64)
        if self.assignment.ndim != 1:
            raise ValueError("assignment must be a flat index vector")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.assignment.size and (
            self.assignment.min() < 0 or self.assignment.max() >= self.k
        ):
            raise ValueError("cluster indices must lie in [0, k)")

    @property
    def n(self) -> int:
        return self.assignment.shape[0]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)


@dataclass
class SideInfo:
    """Partial labeling: label[i] in {0..m-1}, or -1 for unlabeled."""

    labels: np.ndarray
    m: int

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.labels.ndim != 1:
            raise ValueError("labels must be a flat vector")
        if self.labels.size and self.labels.max() >= max(self.m, 0):
            raise ValueError("category indices must lie below m")
        if self.m < 1 and (self.labels >= 0).any():
            raise ValueError("m must be at least 1 when labels are present")

    @classmethod
    def empty(cls, n: int) -> "SideInfo":
        return cls(labels=np.full(n, -1, dtype=np.int64), m=0)

    @classmethod
    def from_labels(cls, y, n: int | None = None) -> "SideInfo":
        """Build from a sequence where None/NaN/negative mean unlabeled."""
        seq = list(y)
        labels = as_label_vector(seq, n if n is not None else len(seq))
        m = int(labels.max()) + 1 if (labels >= 0).any() else 0
        return cls(labels=labels, m=m)

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def n_labeled(self) -> int:
        return int((self.labels >= 0).sum())

    def labeled_mask(self) -> np.ndarray:
        return self.labels >= 0


def entropy_of_counts(counts) -> float:
    """Shannon entropy (nats) of a non-negative count or weight vector."""
    c = np.asarray(counts, dtype=float).ravel()
    total = c.sum()
    if total <= 0:
        return 0.0
    p = c[c > 0] / total
    return float(-(p * np.log(p)).sum())


def contingency(clustering: Clustering, side: SideInfo) -> np.ndarray:
    """(k, m) table of labeled counts |Y_i intersect Z_j|."""
    if clustering.n != side.n:
        raise ValueError("clustering and side information cover different points")
    table = np.zeros((clustering.k, max(side.m, 0)), dtype=np.int64)
    mask = side.labeled_mask()
    if mask.any():
        np.add.at(table, (clustering.assignment[mask], side.labels[mask]), 1)
    return table


def partition_entropy(clustering: Clustering) -> float:
    """Entropy of the cluster mass distribution, in [0, ln k]."""
    if clustering.n == 0:
        raise ValueError("partition entropy of an empty clustering is undefined")
    return entropy_of_counts(clustering.sizes())


def conditional_entropy(clustering: Clustering, side: SideInfo) -> float:
    """Category entropy given the clustering, from labeled members only.

    Each cluster contributes its labeled-conditional entropy weighted by
    the full cluster mass; clusters with no labeled member contribute 0.
    """
    if side.n_labeled == 0:
        raise ValueError("conditional entropy needs at least one labeled point")
    table = contingency(clustering, side)
    masses = clustering.sizes() / clustering.n
    total = 0.0
    for i in range(clustering.k):
        if table[i].sum() > 0:
            total += masses[i] * entropy_of_counts(table[i])
    return total


def is_consistent(clustering: Clustering, side: SideInfo) -> bool:
    """True iff every cluster intersects at most one category."""
    if side.m == 0 or side.n_labeled == 0:
        return True
    table = contingency(clustering, side)
    return bool(((table > 0).sum(axis=1) <= 1).all())


def is_proportional(clustering: Clustering, side: SideInfo, tol: float = 1e-9) -> bool:
    """True iff each cluster's point mass equals its labeled mass within tol."""
    n_labeled = side.n_labeled
    if n_labeled == 0:
        raise ValueError("proportionality needs at least one labeled point")
    masses = clustering.sizes() / clustering.n
    table = contingency(clustering, side)
    labeled_masses = table.sum(axis=1) / n_labeled
    return bool(np.abs(masses - labeled_masses).max() <= tol)


def is_coarsening(coarse: Clustering, fine: Clustering) -> bool:
    """True iff every nonempty fine cluster lies inside one coarse cluster."""
    if coarse.n != fine.n:
        raise ValueError("partitions cover different numbers of points")
    for j in range(fine.k):
        members = coarse.assignment[fine.assignment == j]
        if members.size and np.unique(members).size > 1:
            return False
    return True


def joint_entropy_check(clustering: Clustering, side: SideInfo) -> tuple[float, float]:
    """Both sides of H(Y) + H(Z|Y) = H(Z,Y) for a proportional clustering.

    The joint entropy is taken over the labeled contingency table. Returns
    (lhs, rhs); the identity only holds under proportionality, so that is
    a precondition here.
    """
    if not is_proportional(clustering, side, tol=1e-9):
        raise ValueError("clustering is not proportional to the side information")
    lhs = partition_entropy(clustering) + conditional_entropy(clustering, side)
    rhs = entropy_of_counts(contingency(clustering, side))
    return lhs, rhs
