"""Clustering evaluation and side-information sampling protocols.

Covers the normalized-mutual-information score, seeded samplers that turn
a reference partition into partial (possibly noisy) labelings, a seeded
Gaussian-mixture generator, and a grid runner that averages fit quality
over repeated side-information draws.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dataio import Dataset
from .exceptions import DegenerateModelError
from .optimize import FitConfig, fit
from .partitions import Clustering, SideInfo, entropy_of_counts
from .validation import as_matrix


def nmi(a: Clustering, b: Clustering) -> float:
    """Normalized mutual information 2 I(a;b) / (H(a) + H(b)), in [0, 1].

    Symmetric and invariant to relabeling. Two single-cluster partitions
    are identical, so that corner is defined as 1.
    """
    if a.n != b.n:
        raise ValueError("partitions cover different numbers of points")
    if a.n == 0:
        raise ValueError("NMI of empty partitions is undefined")
    table = np.zeros((a.k, b.k), dtype=np.int64)
    np.add.at(table, (a.assignment, b.assignment), 1)
    n = a.n
    h_a = entropy_of_counts(table.sum(axis=1))
    h_b = entropy_of_counts(table.sum(axis=0))
    if h_a + h_b == 0.0:
        return 1.0
    p = table / n
    pa = table.sum(axis=1, keepdims=True) / n
    pb = table.sum(axis=0, keepdims=True) / n
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(table > 0, p * np.log(p / (pa * pb)), 0.0)
    # sorted summation keeps nmi(a, b) == nmi(b, a) bit for bit
    mutual = float(np.sort(terms.ravel()).sum())
    value = 2.0 * mutual / (h_a + h_b)
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class LabelProtocol:
    """How to sample side information from a reference partition."""

    labeled_fraction: float
    noise_fraction: float = 0.0
    class_subset: frozenset | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.labeled_fraction <= 1.0:
            raise ValueError("labeled_fraction must lie in [0, 1]")
        if not 0.0 <= self.noise_fraction <= 1.0:
            raise ValueError("noise_fraction must lie in [0, 1]")
        if self.class_subset is not None:
            subset = frozenset(int(c) for c in self.class_subset)
            if not subset:
                raise ValueError("class_subset must be nonempty when given")
            object.__setattr__(self, "class_subset", subset)


def sample_side_info(true_labels: Clustering, protocol: LabelProtocol) -> SideInfo:
    """Draw a partial labeling of the data from its reference partition.

    Picks floor(labeled_fraction * n) points uniformly without replacement
    (from the chosen classes only, if a subset is given), labels them with
    their reference class, then flips floor(noise_fraction * labeled) of
    those labels to a uniformly random *different* category. Categories
    are the eligible reference classes, renumbered in sorted order.
    """
    n = true_labels.n
    rng = np.random.default_rng(protocol.seed)
    if protocol.class_subset is not None:
        eligible_classes = sorted(protocol.class_subset)
        pool = np.flatnonzero(np.isin(true_labels.assignment, eligible_classes))
        if pool.size == 0:
            raise ValueError("class_subset covers no points")
    else:
        eligible_classes = sorted(np.unique(true_labels.assignment).tolist())
        pool = np.arange(n)
    n_labeled = int(np.floor(protocol.labeled_fraction * n))
    labels = np.full(n, -1, dtype=np.int64)
    category_of = {cls: idx for idx, cls in enumerate(eligible_classes)}
    m = len(eligible_classes)
    if n_labeled == 0:
        return SideInfo(labels=labels, m=0)
    if n_labeled > pool.size:
        raise ValueError(
            f"cannot label {n_labeled} points from a pool of {pool.size}"
        )
    chosen = rng.choice(pool, size=n_labeled, replace=False)
    for i in chosen:
        labels[i] = category_of[int(true_labels.assignment[i])]
    n_flip = int(np.floor(protocol.noise_fraction * n_labeled))
    if n_flip > 0:
        present = np.unique(labels[chosen])
        if present.size < 2:
            raise ValueError("label noise needs at least two categories present")
        flip_points = rng.choice(chosen, size=n_flip, replace=False)
        for i in flip_points:
            others = present[present != labels[i]]
            labels[i] = rng.choice(others)
    return SideInfo(labels=labels, m=m)


def gaussian_mixture_sample(components, n: int, seed: int = 0):
    """Sample a labeled dataset from a Gaussian mixture.

    ``components`` is a sequence of (weight, mean, covariance) triples with
    positive weights summing to one. Returns the (n, dims) sample matrix
    and the ground-truth component assignment as a Clustering.
    """
    weights = np.asarray([w for w, _, _ in components], dtype=float)
    if (weights <= 0).any() or abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError("component weights must be positive and sum to 1")
    means = [np.asarray(mu, dtype=float).reshape(-1) for _, mu, _ in components]
    dim = means[0].shape[0]
    chols = []
    for _, mu, cov in components:
        cov = np.atleast_2d(np.asarray(cov, dtype=float))
        if cov.shape != (dim, dim):
            raise ValueError("component covariances must all be dims x dims")
        try:
            chols.append(np.linalg.cholesky(cov))
        except np.linalg.LinAlgError as exc:
            raise DegenerateModelError("component covariance is not positive definite") from exc
    rng = np.random.default_rng(seed)
    if n == 0:
        empty = Clustering(assignment=np.empty(0, dtype=np.int64), k=len(components))
        return Dataset(values=np.empty((0, dim))), empty
    which = rng.choice(len(components), size=n, p=weights)
    noise = rng.standard_normal((n, dim))
    x = np.empty((n, dim))
    for i, (mu, chol) in enumerate(zip(means, chols)):
        mask = which == i
        x[mask] = mu + noise[mask] @ chol.T
    return Dataset(values=x), Clustering(assignment=which.astype(np.int64), k=len(components))


def run_protocol_grid(
    data,
    true_labels: Clustering,
    protocols,
    betas,
    config: FitConfig | None = None,
    n_samples: int = 10,
    master_seed: int = 0,
):
    """Average fit quality over repeated side-information draws.

    For every (protocol, beta) cell, draws ``n_samples`` labelings with
    seeds derived from (master_seed, cell index, repeat index), fits each,
    and records the mean/sd NMI against the reference partition plus the
    mean final cluster count and mean epochs. Returns a list of row dicts.
    """
    x = as_matrix(data)
    if config is None:
        config = FitConfig()
    protocols = list(protocols)
    betas = list(betas)
    rows = []
    for cell, protocol in enumerate(protocols):
        for beta in betas:
            scores, ks, epochs = [], [], []
            for rep in range(n_samples):
                # seeds depend on the protocol cell only, so different betas
                # see identical side-information draws and restart randomness
                derived = np.random.SeedSequence(
                    entropy=master_seed, spawn_key=(cell, rep)
                )
                sample_seed, fit_seed = derived.generate_state(2).tolist()
                side = sample_side_info(true_labels, replace(protocol, seed=sample_seed))
                report = fit(x, side, replace(config, beta=float(beta), seed=fit_seed))
                scores.append(nmi(report.clustering, true_labels))
                ks.append(report.clustering.k)
                epochs.append(report.epochs_run)
            rows.append(
                {
                    "fraction": protocol.labeled_fraction,
                    "noise": protocol.noise_fraction,
                    "beta": float(beta),
                    "mean_nmi": float(np.mean(scores)),
                    "sd_nmi": float(np.std(scores, ddof=1)) if len(scores) > 1 else 0.0,
                    "mean_k": float(np.mean(ks)),
                    "mean_epochs": float(np.mean(epochs)),
                }
            )
    return rows
