import numpy as np
import pytest

from cecib import (
    Clustering,
    SideInfo,
    conditional_entropy,
    is_coarsening,
    is_consistent,
    is_proportional,
    joint_entropy_check,
    partition_entropy,
)

from helpers import random_proportional_instance

LN2 = np.log(2.0)


def clustering(*assignment, k=None):
    arr = np.asarray(assignment)
    return Clustering(assignment=arr, k=k if k is not None else int(arr.max()) + 1)


def side(*labels, m=None):
    arr = np.asarray(labels)
    if m is None:
        m = int(arr.max()) + 1 if (arr >= 0).any() else 0
    return SideInfo(labels=arr, m=m)


def test_partition_entropy_single_cluster():
    assert partition_entropy(clustering(0, 0, 0)) == 0.0


def test_partition_entropy_two_equal():
    assert partition_entropy(clustering(0, 0, 1, 1)) == pytest.approx(LN2, abs=1e-12)


def test_partition_entropy_one_three():
    expected = -(0.25 * np.log(0.25) + 0.75 * np.log(0.75))
    assert partition_entropy(clustering(0, 1, 1, 1)) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.5623351446188083, abs=1e-12)


def test_partition_entropy_bounds():
    c = clustering(0, 1, 2, 0, k=3)
    assert 0.0 <= partition_entropy(c) <= np.log(3)


def test_partition_entropy_empty_fails():
    with pytest.raises(ValueError):
        partition_entropy(Clustering(assignment=np.empty(0, dtype=int), k=1))


def test_conditional_entropy_consistent_is_zero():
    c = clustering(0, 0, 1, 1)
    z = side(0, 0, 1, 1)
    assert conditional_entropy(c, z) == 0.0
    assert is_consistent(c, z)


def test_conditional_entropy_eight_point_example():
    # cluster 0: labels {a, b}; cluster 1: labels {a, a}; 8 points total
    c = clustering(0, 0, 0, 0, 1, 1, 1, 1)
    z = side(0, 1, -1, -1, 0, 0, -1, -1)
    assert conditional_entropy(c, z) == pytest.approx(0.5 * LN2, abs=1e-12)
    assert conditional_entropy(c, z) == pytest.approx(0.34657359027997264, abs=1e-12)


def test_conditional_entropy_single_category():
    c = clustering(0, 1, 0, 1)
    z = side(0, 0, 0, 0)
    assert conditional_entropy(c, z) == 0.0


def test_conditional_entropy_requires_labels():
    with pytest.raises(ValueError):
        conditional_entropy(clustering(0, 1), side(-1, -1))


def test_consistency_cases():
    assert is_consistent(clustering(0, 1), side(-1, -1))
    assert is_consistent(clustering(0, 0, 1, 1), side(0, 0, 1, 1))
    assert not is_consistent(clustering(0, 0), side(0, 1))


def test_proportionality_cases():
    c = clustering(0, 0, 1, 1)
    assert is_proportional(c, side(0, 1, 0, 1))  # fully labeled
    assert is_proportional(c, side(0, -1, 1, -1))  # half of each cluster labeled
    assert not is_proportional(c, side(0, 1, -1, -1))  # all labels in one cluster


def test_coarsening_cases():
    a = clustering(0, 0, 1, 1)
    assert is_coarsening(a, a)
    singleton = clustering(0, 0, 0, 0)
    assert is_coarsening(singleton, a)
    crossed = clustering(0, 1, 0, 1)
    assert not is_coarsening(crossed, a)


def test_coarsening_consistency_equivalence_full_labels():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(2, 13))
        k = int(rng.integers(1, 4))
        m = int(rng.integers(1, 4))
        y = Clustering(assignment=rng.integers(0, k, n), k=k)
        labels = rng.integers(0, m, n)
        z = SideInfo(labels=labels, m=m)
        z_as_clustering = Clustering(assignment=labels.copy(), k=m)
        assert is_coarsening(z_as_clustering, y) == is_consistent(y, z)


def test_conditional_entropy_zero_iff_consistent():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(2, 13))
        k = int(rng.integers(1, 4))
        m = int(rng.integers(1, 4))
        y = Clustering(assignment=rng.integers(0, k, n), k=k)
        labels = np.where(rng.random(n) < 0.6, rng.integers(0, m, n), -1)
        if not (labels >= 0).any():
            labels[0] = 0
        z = SideInfo(labels=labels, m=m)
        assert (conditional_entropy(y, z) == 0.0) == is_consistent(y, z)


def test_joint_entropy_fully_labeled_any_clustering():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n = int(rng.integers(2, 20))
        k = int(rng.integers(1, 4))
        m = int(rng.integers(1, 4))
        y = Clustering(assignment=rng.integers(0, k, n), k=k)
        z = SideInfo(labels=rng.integers(0, m, n), m=m)
        lhs, rhs = joint_entropy_check(y, z)
        assert abs(lhs - rhs) <= 1e-10


def test_joint_entropy_consistent_clustering_reduces_to_partition_entropy():
    y = clustering(0, 0, 1, 1)
    z = side(0, 0, 1, 1)
    lhs, rhs = joint_entropy_check(y, z)
    assert lhs == pytest.approx(partition_entropy(y), abs=1e-12)
    assert rhs == pytest.approx(partition_entropy(y), abs=1e-12)


def test_joint_entropy_proportional_half_labeled():
    # two clusters of 4, two labels in each: exactly proportional
    y = clustering(0, 0, 0, 0, 1, 1, 1, 1)
    z = side(0, 1, -1, -1, 1, 1, -1, -1)
    lhs, rhs = joint_entropy_check(y, z)
    assert abs(lhs - rhs) <= 1e-10


def test_joint_entropy_rejects_non_proportional():
    with pytest.raises(ValueError):
        joint_entropy_check(clustering(0, 0, 1, 1), side(0, 1, -1, -1))


def test_joint_entropy_on_random_proportional_instances():
    rng = np.random.default_rng(40)
    for _ in range(100):
        y, z = random_proportional_instance(rng)
        lhs, rhs = joint_entropy_check(y, z)
        assert abs(lhs - rhs) <= 1e-10


def test_coarsening_entropy_never_larger():
    rng = np.random.default_rng(9)
    for _ in range(100):
        n = int(rng.integers(2, 30))
        k = int(rng.integers(1, 5))
        fine = Clustering(assignment=rng.integers(0, k, n), k=k)
        k_coarse = int(rng.integers(1, k + 1))
        mapping = rng.integers(0, k_coarse, k)
        coarse = Clustering(assignment=mapping[fine.assignment], k=k_coarse)
        assert partition_entropy(coarse) <= partition_entropy(fine) + 1e-12
