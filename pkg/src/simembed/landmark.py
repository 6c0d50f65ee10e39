"""Landmark selection: uniform random pairs and the greedy diversity heuristic.

The greedy rule starts from a random seed point and repeatedly adds the
remaining point with the smallest total similarity to the points already
selected (largest total distance in distance mode).  Ties break toward the
smallest point id so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, KernelSpec, kernel_matrix
from .errors import (
    ClassCoverageError,
    ConfigError,
    DegenerateDataError,
    DiversityDegenerateError,
)


@dataclass(frozen=True)
class LandmarkSet:
    ids: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.ids)

    def __post_init__(self):
        if len(set(self.ids)) != len(self.ids):
            raise ConfigError("landmark ids must be distinct")


@dataclass(frozen=True)
class LandmarkPairSet:
    pairs: tuple[tuple[int, int], ...]  # (positive id, negative id)

    @property
    def d(self) -> int:
        return len(self.pairs)

    @property
    def pos_ids(self) -> np.ndarray:
        return np.array([p for p, _ in self.pairs], dtype=np.intp)

    @property
    def neg_ids(self) -> np.ndarray:
        return np.array([q for _, q in self.pairs], dtype=np.intp)


def sample_pairs_from_pool(labels, pool_ids, d, seed) -> LandmarkPairSet:
    """d (positive, negative) pairs drawn from pool_ids with replacement."""
    if d < 1:
        raise ConfigError("need d >= 1 landmark pairs")
    pool_ids = np.asarray(pool_ids)
    pool_labels = np.asarray(labels)[pool_ids]
    pos = pool_ids[pool_labels == 1]
    neg = pool_ids[pool_labels == -1]
    if len(pos) == 0 or len(neg) == 0:
        raise ClassCoverageError("pool lacks a positive or negative point")
    rng = np.random.default_rng(seed)
    pos_draw = rng.choice(pos, size=d, replace=True)
    neg_draw = rng.choice(neg, size=d, replace=True)
    return LandmarkPairSet(tuple(zip(map(int, pos_draw), map(int, neg_draw))))


def random_pairs(dataset: Dataset, train_ids, d, seed) -> LandmarkPairSet:
    """Uniform-with-replacement landmark pairs from the training ids."""
    try:
        return sample_pairs_from_pool(dataset.labels, train_ids, d, seed)
    except ClassCoverageError:
        raise ClassCoverageError("training split lacks one of the binary classes")


def random_landmarks(dataset: Dataset, train_ids, d, seed) -> LandmarkSet:
    """d distinct training points chosen uniformly (BBS singleton landmarks)."""
    train_ids = np.asarray(train_ids)
    if d < 1 or d > len(train_ids):
        raise ConfigError(f"need 1 <= d <= {len(train_ids)} landmarks")
    rng = np.random.default_rng(seed)
    picked = rng.choice(train_ids, size=d, replace=False)
    return LandmarkSet(tuple(int(i) for i in picked))


def _greedy_order(K: np.ndarray, ids: np.ndarray, start_pos: int, d: int,
                  mode: str) -> list[int]:
    """Greedy selection over positions into ids, using kernel block K."""
    n = len(ids)
    selected = [start_pos]
    remaining = np.ones(n, dtype=bool)
    remaining[start_pos] = False
    totals = K[:, start_pos].astype(np.float64).copy()
    sign = 1.0 if mode == "similarity" else -1.0
    for _ in range(d - 1):
        cand = np.where(remaining)[0]
        scores = sign * totals[cand]
        # ties break toward the smallest point id; ids are sorted by caller
        best = cand[int(np.argmin(scores))]
        selected.append(int(best))
        remaining[best] = False
        totals += K[:, best]
    return selected


def dselect_landmarks(dataset: Dataset, kernel: KernelSpec, train_ids, d, seed,
                      mode: str = "similarity",
                      start_id: int | None = None) -> LandmarkSet:
    """Diversity-greedy landmark singletons (no pair formation)."""
    if mode not in ("similarity", "distance"):
        raise ConfigError(f"unknown dselect mode: {mode!r}")
    train_ids = np.sort(np.asarray(train_ids))
    if d < 1:
        raise ConfigError("need d >= 1 landmarks")
    if len(train_ids) < d:
        raise DegenerateDataError(f"training split smaller than d={d}")
    K = kernel_matrix(kernel, dataset, train_ids, train_ids)
    rng = np.random.default_rng(seed)
    if start_id is None:
        start_pos = int(rng.integers(len(train_ids)))
    else:
        where = np.where(train_ids == start_id)[0]
        if len(where) == 0:
            raise ConfigError(f"start id {start_id} is not a training point")
        start_pos = int(where[0])
    order = _greedy_order(K, train_ids, start_pos, d, mode)
    return LandmarkSet(tuple(int(train_ids[p]) for p in order))


def dselect(dataset: Dataset, kernel: KernelSpec, train_ids, d, seed,
            mode: str = "similarity",
            start_id: int | None = None) -> tuple[LandmarkSet, LandmarkPairSet]:
    """Greedy landmark set plus d pairs sampled from it with replacement.

    Raises DiversityDegenerateError when the greedy set ends up single-class;
    callers may fall back to random_pairs.
    """
    lset = dselect_landmarks(dataset, kernel, train_ids, d, seed,
                             mode=mode, start_id=start_id)
    pool_labels = dataset.labels[np.asarray(lset.ids)]
    if len(np.unique(pool_labels)) < 2:
        raise DiversityDegenerateError(
            "greedy landmark set is single-class; cannot form pairs"
        )
    pair_seed = np.random.default_rng(seed).integers(2**63)
    pairs = sample_pairs_from_pool(dataset.labels, lset.ids, d, pair_seed)
    return lset, pairs


def dselect_multiclass(dataset: Dataset, kernel: KernelSpec, train_ids, d,
                       seed, mode: str = "similarity") -> LandmarkSet:
    """Per-class greedy selection with quota ceil(d / num_classes).

    Quotas shrink to the class size when a class is small, with the deficit
    redistributed; the concatenated result is truncated back to exactly d by
    dropping last-selected points from the largest classes first.
    """
    train_ids = np.sort(np.asarray(train_ids))
    classes = list(dataset.class_ids())
    k = len(classes)
    if d < k:
        raise ConfigError(f"need d >= num_classes ({k})")
    members = {c: train_ids[dataset.labels[train_ids] == c] for c in classes}
    sizes = {c: len(members[c]) for c in classes}
    if sum(sizes.values()) < d:
        raise DegenerateDataError("training split smaller than d")
    base = int(np.ceil(d / k))
    quotas = {c: min(base, sizes[c]) for c in classes}
    # redistribute any deficit to classes with spare capacity, largest first
    while sum(quotas.values()) < d:
        spare = [c for c in classes if quotas[c] < sizes[c]]
        spare.sort(key=lambda c: (-(sizes[c] - quotas[c]), c))
        quotas[spare[0]] += 1
    rng = np.random.default_rng(seed)
    picked = {}
    for c in classes:
        sub_seed = int(rng.integers(2**63))
        if len(members[c]) == 0:
            raise ClassCoverageError(f"class {c} absent from training split")
        picked[c] = list(
            dselect_landmarks(dataset, kernel, members[c], quotas[c], sub_seed,
                              mode=mode).ids
        )
    # truncate overshoot: drop the last-selected landmark of the currently
    # largest class, repeatedly
    while sum(len(v) for v in picked.values()) > d:
        largest = max(classes, key=lambda c: (len(picked[c]), -classes.index(c)))
        picked[largest].pop()
    ids = [i for c in classes for i in picked[c]]
    return LandmarkSet(tuple(ids))
