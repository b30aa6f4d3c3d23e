"""Single-point-move minimization of the clustering cost.

Each run starts from a random assignment into ``k_init`` clusters, then
repeatedly visits every point in a seeded shuffled order and moves it to
the cluster that lowers the total cost the most, re-parameterizing the two
affected Gaussians after every accepted move. Clusters whose mass falls
below ``epsilon * n`` are deleted and their members reassigned greedily,
which is how the final cluster count ends up below ``k_init``. A run stops
when a full pass makes no move; the best of several restarts wins.

Moves are accepted only on strict improvement and a cluster may never
shrink below ``min_cluster_points`` (at least dims + 1; fewer points give
a singular covariance no ridge value can honestly repair), so every run
terminates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .costs import CostBreakdown, cluster_cost_from_stats
from .exceptions import ConfigurationError, DegenerateModelError, EmptyClusterError
from .partitions import Clustering, SideInfo
from .stats import ClusterStats, entropy_from_log_det
from .validation import as_matrix

MOVE_TOLERANCE = 1e-12
_RECOMPUTE_INTERVAL = 10_000
_INIT_RETRIES = 1_000


@dataclass
class FitConfig:
    """Optimizer inputs.

    ``ridge=None`` resolves to 1e-6 * trace(data covariance) / dims at fit
    time; ``min_cluster_points=None`` resolves to dims + 1 (and is lifted
    to at least dims + 1 regardless).
    """

    beta: float = 1.0
    k_init: int = 10
    epsilon: float = 0.02
    restarts: int = 10
    max_epochs: int = 100
    seed: int = 0
    ridge: float | None = None
    min_cluster_points: int | None = None

    def __post_init__(self):
        if self.beta < 0:
            raise ConfigurationError("beta must be non-negative")
        if self.k_init < 1:
            raise ConfigurationError("k_init must be positive")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigurationError("epsilon must lie in (0, 1)")
        if self.restarts < 1:
            raise ConfigurationError("restarts must be positive")
        if self.max_epochs < 1:
            raise ConfigurationError("max_epochs must be positive")
        if self.ridge is not None and self.ridge < 0:
            raise ConfigurationError("ridge must be non-negative")
        if self.min_cluster_points is not None and self.min_cluster_points < 1:
            raise ConfigurationError("min_cluster_points must be positive")


@dataclass
class FitReport:
    """Outcome of a fit: winning clustering plus run diagnostics."""

    clustering: Clustering
    cost: CostBreakdown
    epochs_run: int
    moves_made: int
    clusters_deleted: int
    cost_trace: list
    restart_index: int
    epochs_per_restart: tuple
    cluster_stats: list
    ridge: float


def default_ridge(data) -> float:
    """Covariance regulariser: 1e-6 * trace(sample covariance) / dims."""
    x = as_matrix(data)
    centered = x - x.mean(axis=0)
    trace = float((centered * centered).sum()) / x.shape[0]
    return 1e-6 * trace / x.shape[1]


def _row_entropies(counts: np.ndarray) -> np.ndarray:
    """Shannon entropy of each row of a non-negative count matrix."""
    totals = counts.sum(axis=1, keepdims=True)
    safe_totals = np.where(totals > 0, totals, 1.0)
    p = counts / safe_totals
    terms = np.where(counts > 0, p * np.log(np.where(counts > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=1)


class HartiganState:
    """Mutable cluster statistics driven by single-point moves.

    Maintains, for every cluster, the member count, mean, centered scatter
    and labeled category counts, together with cached log-determinants,
    side entropies and per-cluster costs. All updates are exact rank-one
    operations; a full recomputation runs every 10 000 updates to bound
    float drift.
    """

    def __init__(
        self,
        x: np.ndarray,
        point_labels: np.ndarray,
        n_categories: int,
        assignment: np.ndarray,
        k: int,
        *,
        beta: float,
        ridge: float,
        min_points: int,
        delete_below: float,
    ):
        self.x = np.ascontiguousarray(x, dtype=float)
        self.n, self.dim = self.x.shape
        self.point_labels = np.asarray(point_labels, dtype=np.int64)
        self.m = n_categories
        self.assignment = np.asarray(assignment, dtype=np.int64).copy()
        self.k = k
        self.beta = beta
        self.ridge = ridge
        self.min_points = min_points
        self.delete_below = delete_below
        self.moves_made = 0
        self.clusters_deleted = 0
        self._updates = 0
        self._eye = np.eye(self.dim)
        self.recompute_all()

    # ------------------------------------------------------------------ state

    def recompute_all(self) -> None:
        """Rebuild all statistics from the raw data and assignment."""
        k, n, dim = self.k, self.n, self.dim
        self.counts = np.bincount(self.assignment, minlength=k).astype(np.int64)
        if (self.counts < 1).any():
            raise EmptyClusterError("assignment leaves a cluster empty")
        sums = np.zeros((k, dim))
        np.add.at(sums, self.assignment, self.x)
        self.means = sums / self.counts[:, None]
        self.scatters = np.zeros((k, dim, dim))
        for i in range(k):
            centered = self.x[self.assignment == i] - self.means[i]
            self.scatters[i] = centered.T @ centered
        self.cat_counts = np.zeros((k, max(self.m, 1)), dtype=np.int64)
        mask = self.point_labels >= 0
        if mask.any():
            np.add.at(self.cat_counts, (self.assignment[mask], self.point_labels[mask]), 1)
        self.lab_counts = self.cat_counts.sum(axis=1)
        self.log_dets = np.empty(k)
        self.hsides = np.empty(k)
        self.costs = np.empty(k)
        for i in range(k):
            self._refresh(i)
        self._updates = 0

    def _cluster_log_det(self, index: int) -> float:
        cov = self.scatters[index] / self.counts[index] + self.ridge * self._eye
        sign, log_det = np.linalg.slogdet(cov)
        if sign <= 0 or not np.isfinite(log_det):
            raise DegenerateModelError(
                f"cluster {index} has a singular covariance "
                f"({self.counts[index]} points, ridge={self.ridge:g})"
            )
        return float(log_det)

    def _refresh(self, index: int) -> None:
        self.log_dets[index] = self._cluster_log_det(index)
        self.hsides[index] = _row_entropies(self.cat_counts[index : index + 1])[0]
        mass = self.counts[index] / self.n
        self.costs[index] = mass * (
            -np.log(mass)
            + entropy_from_log_det(self.log_dets[index], self.dim)
            + self.beta * self.hsides[index]
        )

    def total_cost(self) -> float:
        return float(self.costs.sum())

    def breakdown(self) -> CostBreakdown:
        masses = self.counts / self.n
        return CostBreakdown(
            partition_term=float(-(masses * np.log(masses)).sum()),
            model_term=float((masses * entropy_from_log_det(self.log_dets, self.dim)).sum()),
            side_term=float((masses * self.hsides).sum()),
            beta=self.beta,
        )

    def to_cluster_stats(self) -> list:
        """Export the maintained statistics as value-type ClusterStats."""
        out = []
        for i in range(self.k):
            out.append(
                ClusterStats(
                    dim=self.dim,
                    n_categories=self.m,
                    count=int(self.counts[i]),
                    mean=self.means[i].copy(),
                    scatter=self.scatters[i].copy(),
                    labeled_count=int(self.lab_counts[i]),
                    category_counts=self.cat_counts[i, : self.m].copy(),
                )
            )
        return out

    # ------------------------------------------------------------------ moves

    def _insertion_costs(self, x: np.ndarray, label: int):
        """Cost of every cluster after hypothetically absorbing the point.

        Returns (costs, valid) arrays over clusters.
        """
        counts = self.counts.astype(float)
        grown = counts + 1.0
        deltas = x - self.means
        scatter_add = self.scatters + (counts / grown)[:, None, None] * (
            deltas[:, :, None] * deltas[:, None, :]
        )
        cov_add = scatter_add / grown[:, None, None] + self.ridge * self._eye
        sign, log_dets = np.linalg.slogdet(cov_add)
        valid = (sign > 0) & np.isfinite(log_dets)
        if label >= 0:
            cats = self.cat_counts.astype(float).copy()
            cats[:, label] += 1.0
            hside_add = _row_entropies(cats)
        else:
            hside_add = self.hsides
        mass = grown / self.n
        costs = mass * (
            -np.log(mass)
            + entropy_from_log_det(np.where(valid, log_dets, 0.0), self.dim)
            + self.beta * hside_add
        )
        return costs, valid

    def best_move(self, i: int):
        """Best strict-improvement target for point i, or None to stay."""
        a = int(self.assignment[i])
        c_a = int(self.counts[a])
        if c_a - 1 < self.min_points:
            return None
        x = self.x[i]
        label = int(self.point_labels[i])

        # source cluster after giving the point up
        delta = x - self.means[a]
        scatter_rm = self.scatters[a] - np.outer(delta, delta) * (c_a / (c_a - 1.0))
        cov_rm = scatter_rm / (c_a - 1.0) + self.ridge * self._eye
        sign_rm, log_det_rm = np.linalg.slogdet(cov_rm)
        if sign_rm <= 0 or not np.isfinite(log_det_rm):
            return None
        if label >= 0:
            cat = self.cat_counts[a].astype(float).copy()
            cat[label] -= 1.0
            hside_rm = _row_entropies(cat[None, :])[0]
        else:
            hside_rm = self.hsides[a]
        mass_rm = (c_a - 1.0) / self.n
        cost_rm = mass_rm * (
            -np.log(mass_rm)
            + entropy_from_log_det(log_det_rm, self.dim)
            + self.beta * hside_rm
        )

        cost_add, valid = self._insertion_costs(x, label)
        gains = (self.costs[a] - cost_rm) + (self.costs - cost_add)
        gains[a] = -np.inf
        gains[~valid] = -np.inf
        b = int(np.argmax(gains))
        if gains[b] > MOVE_TOLERANCE:
            return b, float(gains[b])
        return None

    def move_point(self, i: int, target: int) -> None:
        """Reassign point i, updating both clusters' statistics in place."""
        a = int(self.assignment[i])
        x = self.x[i]
        label = int(self.point_labels[i])

        c = int(self.counts[a])
        delta = x - self.means[a]
        self.means[a] -= delta / (c - 1)
        self.scatters[a] -= np.outer(delta, delta) * (c / (c - 1.0))
        self.counts[a] = c - 1

        c = int(self.counts[target])
        delta = x - self.means[target]
        self.means[target] += delta / (c + 1)
        self.scatters[target] += np.outer(delta, delta) * (c / (c + 1.0))
        self.counts[target] = c + 1

        if label >= 0:
            self.cat_counts[a, label] -= 1
            self.lab_counts[a] -= 1
            self.cat_counts[target, label] += 1
            self.lab_counts[target] += 1

        self.assignment[i] = target
        self.moves_made += 1
        self._updates += 2
        if self._updates >= _RECOMPUTE_INTERVAL:
            self.recompute_all()
        else:
            self._refresh(a)
            self._refresh(target)

    def _insert(self, i: int, target: int) -> None:
        x = self.x[i]
        label = int(self.point_labels[i])
        c = int(self.counts[target])
        delta = x - self.means[target]
        self.means[target] += delta / (c + 1)
        self.scatters[target] += np.outer(delta, delta) * (c / (c + 1.0))
        self.counts[target] = c + 1
        if label >= 0:
            self.cat_counts[target, label] += 1
            self.lab_counts[target] += 1
        self.assignment[i] = target
        self._updates += 1
        self._refresh(target)

    def delete_cluster(self, index: int, rng=None) -> None:
        """Remove a cluster and greedily rehome each of its members.

        Members are taken in a shuffled order when ``rng`` is given; each
        goes to the cluster whose cost grows the least by absorbing it.
        """
        if self.k <= 1:
            raise EmptyClusterError("cannot delete the only remaining cluster")
        members = np.flatnonzero(self.assignment == index)
        for name in ("counts", "means", "scatters", "cat_counts", "lab_counts",
                     "log_dets", "hsides", "costs"):
            setattr(self, name, np.delete(getattr(self, name), index, axis=0))
        self.k -= 1
        shifted = self.assignment > index
        self.assignment[shifted] -= 1
        # members keep a stale assignment until re-homed below; nothing may
        # rebuild statistics from the assignment inside this window
        order = rng.permutation(members) if rng is not None else members
        for i in order:
            cost_add, valid = self._insertion_costs(self.x[i], int(self.point_labels[i]))
            increases = cost_add - self.costs
            increases[~valid] = np.inf
            target = int(np.argmin(increases))
            if not np.isfinite(increases[target]):
                raise DegenerateModelError(
                    "no cluster can absorb a point from the deleted cluster"
                )
            self._insert(int(i), target)
        self.clusters_deleted += 1

    def sweep_small_clusters(self, rng=None) -> None:
        """Delete every cluster whose mass sits below the deletion threshold."""
        while self.k > 1:
            smallest = int(np.argmin(self.counts))
            if self.counts[smallest] >= self.delete_below:
                return
            self.delete_cluster(smallest, rng)


def move_delta(
    stats_from: ClusterStats,
    stats_to: ClusterStats,
    x,
    label: int | None = None,
    *,
    beta: float,
    n_total: int,
    ridge: float = 0.0,
    min_points: int = 1,
) -> float:
    """Cost improvement of moving a point between two clusters.

    Positive values mean the move lowers the total cost. Returns ``-inf``
    when the move is forbidden: the donor would drop below ``min_points``
    (or below the 2 points any cluster needs to be priced), or a resulting
    covariance is singular.
    """
    if stats_from is stats_to:
        return 0.0
    if stats_from.count - 1 < max(min_points, 1):
        return float("-inf")
    kwargs = dict(n_total=n_total, beta=beta, ridge=ridge)
    try:
        before = cluster_cost_from_stats(stats_from, **kwargs) + cluster_cost_from_stats(
            stats_to, **kwargs
        )
        after = cluster_cost_from_stats(
            stats_from.remove(x, label), **kwargs
        ) + cluster_cost_from_stats(stats_to.add(x, label), **kwargs)
    except DegenerateModelError:
        return float("-inf")
    return before - after


def _single_run(x, side: SideInfo, config: FitConfig, rng, ridge, min_points):
    n = x.shape[0]
    k = config.k_init
    for _ in range(_INIT_RETRIES):
        assignment = rng.integers(0, k, size=n)
        if np.bincount(assignment, minlength=k).min() >= min_points:
            break
    else:
        raise ConfigurationError(
            f"failed to seed {k} clusters with at least {min_points} points each"
        )
    state = HartiganState(
        x,
        side.labels,
        side.m,
        assignment,
        k,
        beta=config.beta,
        ridge=ridge,
        min_points=min_points,
        delete_below=config.epsilon * n,
    )
    trace = [state.total_cost()]
    epochs = 0
    for _ in range(config.max_epochs):
        moved = 0
        for i in rng.permutation(n):
            found = state.best_move(int(i))
            if found is None:
                continue
            source = int(state.assignment[i])
            state.move_point(int(i), found[0])
            moved += 1
            if state.k > 1 and state.counts[source] < state.delete_below:
                state.delete_cluster(source, rng)
        epochs += 1
        state.sweep_small_clusters(rng)
        trace.append(state.total_cost())
        if moved == 0:
            break
    return state, epochs, trace


def fit(data, side: SideInfo | None = None, config: FitConfig | None = None) -> FitReport:
    """Run the multi-restart search and return the lowest-cost result.

    Fully deterministic for a fixed (data, side, config): restart r uses
    the r-th child of the config seed, and each restart reshuffles its
    visit order from its own generator.
    """
    x = as_matrix(data)
    n, dim = x.shape
    if config is None:
        config = FitConfig()
    if side is None:
        side = SideInfo.empty(n)
    if side.n != n:
        raise ValueError("side information covers a different number of points")
    ridge = config.ridge if config.ridge is not None else default_ridge(x)
    min_points = max(config.min_cluster_points or 0, dim + 1)
    if n < config.k_init * min_points:
        raise ConfigurationError(
            f"n={n} is too small for k_init={config.k_init} clusters "
            f"of at least {min_points} points"
        )
    children = np.random.SeedSequence(config.seed).spawn(config.restarts)
    best = None
    epochs_per_restart = []
    for index, child in enumerate(children):
        rng = np.random.default_rng(child)
        state, epochs, trace = _single_run(x, side, config, rng, ridge, min_points)
        epochs_per_restart.append(epochs)
        if best is None or trace[-1] < best[0]:
            best = (trace[-1], index, state, epochs, trace)
    _, index, state, epochs, trace = best
    return FitReport(
        clustering=Clustering(assignment=state.assignment.copy(), k=state.k),
        cost=state.breakdown(),
        epochs_run=epochs,
        moves_made=state.moves_made,
        clusters_deleted=state.clusters_deleted,
        cost_trace=trace,
        restart_index=index,
        epochs_per_restart=tuple(epochs_per_restart),
        cluster_stats=state.to_cluster_stats(),
        ridge=ridge,
    )
