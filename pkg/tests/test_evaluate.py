import numpy as np
import pytest
from sklearn.metrics import normalized_mutual_info_score

from cecib import (
    Clustering,
    FitConfig,
    LabelProtocol,
    gaussian_mixture_sample,
    nmi,
    run_protocol_grid,
    sample_side_info,
)
from cecib.exceptions import DegenerateModelError


def clustering(*assignment, k=None):
    arr = np.asarray(assignment)
    return Clustering(assignment=arr, k=k if k is not None else int(arr.max()) + 1)


def test_nmi_identical_partitions():
    a = clustering(0, 1, 2, 0, 1, 2)
    assert nmi(a, a) == 1.0


def test_nmi_crossing_partitions_zero():
    a = clustering(0, 0, 1, 1)
    b = clustering(0, 1, 0, 1)
    assert nmi(a, b) == 0.0


def test_nmi_refined_partition_exact_value():
    a = clustering(0, 0, 1, 1)
    b = clustering(0, 0, 1, 2)
    assert nmi(a, b) == pytest.approx(0.8, abs=1e-12)


def test_nmi_both_trivial_is_one():
    a = clustering(0, 0, 0)
    assert nmi(a, a) == 1.0


def test_nmi_one_trivial_is_zero():
    a = clustering(0, 0, 0, 0)
    b = clustering(0, 0, 1, 1)
    assert nmi(a, b) == 0.0


def test_nmi_symmetry_exact():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(2, 40))
        a = Clustering(assignment=rng.integers(0, 4, n), k=4)
        b = Clustering(assignment=rng.integers(0, 3, n), k=3)
        assert nmi(a, b) == nmi(b, a)


def test_nmi_relabeling_invariance():
    rng = np.random.default_rng(1)
    n = 30
    a = Clustering(assignment=rng.integers(0, 3, n), k=3)
    b = Clustering(assignment=rng.integers(0, 3, n), k=3)
    perm = np.array([2, 0, 1])
    a_permuted = Clustering(assignment=perm[a.assignment], k=3)
    assert nmi(a, b) == pytest.approx(nmi(a_permuted, b), abs=0)


def test_nmi_below_one_when_cluster_counts_differ():
    rng = np.random.default_rng(2)
    for _ in range(30):
        n = int(rng.integers(6, 40))
        a = Clustering(assignment=rng.integers(0, 2, n), k=2)
        b_labels = rng.integers(0, 3, n)
        if np.unique(b_labels).size < 3:
            continue
        b = Clustering(assignment=b_labels, k=3)
        assert nmi(a, b) < 1.0


def test_nmi_matches_reference_implementation():
    rng = np.random.default_rng(3)
    for _ in range(40):
        n = int(rng.integers(3, 60))
        a = rng.integers(0, 4, n)
        b = rng.integers(0, 3, n)
        ours = nmi(Clustering(assignment=a, k=4), Clustering(assignment=b, k=3))
        reference = normalized_mutual_info_score(a, b, average_method="arithmetic")
        assert ours == pytest.approx(reference, abs=1e-9)


def test_sample_side_info_zero_fraction():
    truth = clustering(0, 1, 0, 1)
    side = sample_side_info(truth, LabelProtocol(labeled_fraction=0.0))
    assert side.n_labeled == 0


def test_sample_side_info_full_noiseless():
    rng = np.random.default_rng(4)
    truth = Clustering(assignment=rng.integers(0, 3, 50), k=3)
    side = sample_side_info(truth, LabelProtocol(labeled_fraction=1.0, seed=7))
    assert side.n_labeled == 50
    assert (side.labels == truth.assignment).all()


def test_sample_side_info_counts_and_flips():
    rng = np.random.default_rng(5)
    truth = Clustering(assignment=rng.integers(0, 4, 100), k=4)
    protocol = LabelProtocol(labeled_fraction=0.3, noise_fraction=0.5, seed=11)
    side = sample_side_info(truth, protocol)
    labeled = side.labels >= 0
    assert labeled.sum() == 30
    flipped = labeled & (side.labels != truth.assignment)
    assert flipped.sum() == 15


def test_sample_side_info_deterministic():
    truth = Clustering(assignment=np.arange(20) % 3, k=3)
    protocol = LabelProtocol(labeled_fraction=0.4, noise_fraction=0.25, seed=3)
    first = sample_side_info(truth, protocol)
    second = sample_side_info(truth, protocol)
    assert (first.labels == second.labels).all()


def test_sample_side_info_class_subset():
    truth = Clustering(assignment=np.array([0] * 40 + [1] * 40 + [2] * 20), k=3)
    protocol = LabelProtocol(labeled_fraction=0.3, class_subset=frozenset({0, 2}), seed=1)
    side = sample_side_info(truth, protocol)
    assert side.n_labeled == 30
    assert side.m == 2
    # labels only on points of classes 0 and 2; categories renumbered 0, 1
    labeled_classes = truth.assignment[side.labels >= 0]
    assert set(labeled_classes.tolist()) <= {0, 2}
    assert set(side.labels[side.labels >= 0].tolist()) <= {0, 1}


def test_sample_side_info_empty_subset_pool():
    truth = clustering(0, 0, 1, 1)
    protocol = LabelProtocol(labeled_fraction=0.5, class_subset=frozenset({5}), seed=0)
    with pytest.raises(ValueError):
        sample_side_info(truth, protocol)


def test_mixture_sample_covariance_converges():
    cov = np.array([[2.0, 0.6], [0.6, 1.0]])
    data, truth = gaussian_mixture_sample([(1.0, [1.0, -1.0], cov)], 10_000, seed=9)
    assert truth.k == 1
    estimate = np.cov(data.values.T, bias=True)
    assert np.abs(estimate - cov).max() <= 0.05 * np.abs(cov).max()


def test_mixture_sample_separated_components_recoverable():
    comps = [(0.5, [0.0, 0.0], np.eye(2)), (0.5, [20.0, 0.0], np.eye(2))]
    data, truth = gaussian_mixture_sample(comps, 1000, seed=2)
    centroids = np.array([[0.0, 0.0], [20.0, 0.0]])
    nearest = np.argmin(
        ((data.values[:, None, :] - centroids[None]) ** 2).sum(-1), axis=1
    )
    assert (nearest == truth.assignment).mean() >= 0.99


def test_mixture_sample_empty():
    data, truth = gaussian_mixture_sample([(1.0, [0.0], [[1.0]])], 0, seed=0)
    assert data.rows == 0
    assert truth.n == 0


def test_mixture_sample_bad_covariance():
    with pytest.raises(DegenerateModelError):
        gaussian_mixture_sample([(1.0, [0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])], 5)


def test_grid_unlabeled_cells_are_beta_free():
    comps = [(0.5, [0.0, 0.0], np.eye(2)), (0.5, [7.0, 0.0], np.eye(2))]
    data, truth = gaussian_mixture_sample(comps, 120, seed=4)
    rows = run_protocol_grid(
        data,
        truth,
        [LabelProtocol(labeled_fraction=0.0)],
        betas=[0.0, 1.0],
        config=FitConfig(k_init=3, epsilon=0.05, restarts=2),
        n_samples=3,
        master_seed=5,
    )
    assert len(rows) == 2
    assert rows[0]["mean_nmi"] == rows[1]["mean_nmi"]
    assert rows[0]["mean_k"] == rows[1]["mean_k"]


def test_grid_nmi_improves_with_labels():
    comps = [
        (1 / 3, [0.0, 0.0], np.eye(2)),
        (1 / 3, [5.0, 0.0], np.eye(2)),
        (1 / 3, [2.5, 4.5], np.eye(2)),
    ]
    data, truth = gaussian_mixture_sample(comps, 240, seed=6)
    protocols = [LabelProtocol(labeled_fraction=f) for f in (0.0, 0.3)]
    rows = run_protocol_grid(
        data,
        truth,
        protocols,
        betas=[1.0],
        config=FitConfig(k_init=6, epsilon=0.04, restarts=2),
        n_samples=4,
        master_seed=7,
    )
    by_fraction = {row["fraction"]: row["mean_nmi"] for row in rows}
    assert by_fraction[0.3] >= by_fraction[0.0] - 0.05


def test_grid_empty():
    data, truth = gaussian_mixture_sample([(1.0, [0.0], [[1.0]])], 30, seed=1)
    assert run_protocol_grid(data, truth, [], betas=[1.0]) == []
