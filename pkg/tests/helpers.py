"""Shared instance generators and independent oracles for the tests."""

import numpy as np

from cecib import Clustering, SideInfo


def batch_mean_cov(points):
    """Reference mean/covariance computed the slow, direct way."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    mean = pts.mean(axis=0)
    centered = pts - mean
    return mean, centered.T @ centered / pts.shape[0]


def gaussian_entropy_direct(cov):
    """Entropy formula evaluated straight from a covariance matrix."""
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    dim = cov.shape[0]
    return 0.5 * dim * np.log(2 * np.pi * np.e) + 0.5 * np.log(np.linalg.det(cov))


def random_proportional_instance(rng, max_clusters=4, max_categories=3):
    """Clustering exactly proportional to a partial labeling.

    Cluster i gets c_i * u points of which c_i * v are labeled, so the point
    mass and labeled mass fractions agree exactly.
    """
    k = int(rng.integers(2, max_clusters + 1))
    units = rng.integers(1, 5, size=k)
    v = int(rng.integers(1, 4))
    u = v + int(rng.integers(0, 4))
    m = int(rng.integers(1, max_categories + 1))
    assignment = []
    labels = []
    for i in range(k):
        size = int(units[i]) * u
        n_labeled = int(units[i]) * v
        assignment += [i] * size
        cluster_labels = [int(rng.integers(0, m)) for _ in range(n_labeled)]
        cluster_labels += [-1] * (size - n_labeled)
        labels += cluster_labels
    clustering = Clustering(assignment=np.asarray(assignment), k=k)
    side = SideInfo(labels=np.asarray(labels), m=m)
    return clustering, side


def random_coarsening_instance(rng, dim=None):
    """Fully labeled data with a fine clustering that groups whole categories.

    Returns (x, side, fine, coarse): ``fine`` is a coarsening of the
    categories (so proportional, since labeling is complete) and ``coarse``
    merges some of fine's clusters further.
    """
    if dim is None:
        dim = int(rng.integers(1, 4))
    m = int(rng.integers(2, 5))
    sizes = rng.integers(dim + 2, 20, size=m)
    labels = np.repeat(np.arange(m), sizes)
    n = labels.shape[0]
    x = rng.standard_normal((n, dim)) + 3.0 * rng.standard_normal((m, dim))[labels]

    k_fine = int(rng.integers(1, m + 1))
    to_fine = _surjection(rng, m, k_fine)
    fine = Clustering(assignment=to_fine[labels], k=k_fine)
    k_coarse = int(rng.integers(1, k_fine + 1))
    to_coarse = _surjection(rng, k_fine, k_coarse)
    coarse = Clustering(assignment=to_coarse[fine.assignment], k=k_coarse)
    side = SideInfo(labels=labels.copy(), m=m)
    return x, side, fine, coarse


def _surjection(rng, n_from, n_to):
    """Random onto map {0..n_from-1} -> {0..n_to-1} as an index array."""
    mapping = np.concatenate(
        [np.arange(n_to), rng.integers(0, n_to, size=n_from - n_to)]
    )
    return rng.permutation(mapping)


def random_labeled_clustering(rng, dim=None, max_clusters=3, max_categories=3):
    """Fully labeled random data with an arbitrary valid clustering."""
    if dim is None:
        dim = int(rng.integers(1, 4))
    k = int(rng.integers(1, max_clusters + 1))
    m = int(rng.integers(1, max_categories + 1))
    sizes = rng.integers(dim + 2, 15, size=k)
    assignment = np.repeat(np.arange(k), sizes)
    n = assignment.shape[0]
    x = rng.standard_normal((n, dim)) + 2.0 * rng.standard_normal((k, dim))[assignment]
    labels = rng.integers(0, m, size=n)
    clustering = Clustering(assignment=assignment, k=k)
    side = SideInfo(labels=labels, m=m)
    return x, clustering, side
