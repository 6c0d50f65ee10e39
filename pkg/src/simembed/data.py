"""Dataset ingestion, kernel evaluation and train/validation/test splitting.

Points are referenced everywhere by integer id (their row index).  A dataset
carries either explicit feature vectors (Gaussian kernel) or a precomputed
dense similarity matrix, possibly both when they are consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial.distance import pdist

from .errors import (
    ConfigError,
    DataFormatError,
    DegenerateDataError,
    ParseError,
    StratificationError,
)

_STRATIFY_RETRIES = 100


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable labeled point collection.

    ``labels`` are canonical: ``{-1, +1}`` for binary problems (the larger
    original label maps to +1), contiguous ``0..num_classes-1`` otherwise.
    """

    labels: np.ndarray
    features: np.ndarray | None = None
    similarity: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def num_classes(self) -> int:
        return len(np.unique(self.labels))

    @property
    def binary(self) -> bool:
        return self.num_classes == 2

    def class_ids(self):
        return np.unique(self.labels)


@dataclass(frozen=True)
class KernelSpec:
    """Which kernel to evaluate and how to normalize it.

    ``width`` is the Gaussian sigma in exp(-||x-x'||^2 / (2 sigma^2)).
    ``norm`` fixes the normalization constant for precomputed matrices;
    when None the max absolute entry of the full matrix is used.  Pipelines
    set it from training data so test evaluations never leak.
    """

    kind: str
    width: float | None = None
    norm: float | None = None

    def __post_init__(self):
        if self.kind not in ("precomputed", "gaussian"):
            raise ConfigError(f"unknown kernel kind: {self.kind!r}")
        if self.kind == "gaussian" and (self.width is None or self.width <= 0):
            raise ConfigError("gaussian kernel requires a positive width")


@dataclass(frozen=True)
class SplitSpec:
    train_frac: float
    valid_frac: float
    test_frac: float
    seed: int

    def __post_init__(self):
        fracs = (self.train_frac, self.valid_frac, self.test_frac)
        if any(not 0.0 < f < 1.0 for f in fracs):
            raise ConfigError("split fractions must lie in (0, 1)")
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise ConfigError("split fractions must sum to 1")


def _canonical_labels(raw: np.ndarray) -> np.ndarray:
    classes = np.unique(raw)
    if len(classes) < 2:
        raise DegenerateDataError("dataset contains a single class")
    if len(classes) == 2:
        # larger original label becomes +1
        return np.where(raw == classes[1], 1, -1).astype(np.int64)
    remap = {c: k for k, c in enumerate(classes)}
    return np.array([remap[c] for c in raw], dtype=np.int64)


def make_dataset(labels, features=None, similarity=None) -> Dataset:
    """Validate arrays and build a Dataset with canonical labels."""
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise DataFormatError("labels must be one integer per point")
    n = len(labels)
    if features is not None:
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[0] != n:
            raise DataFormatError(
                f"features shape {features.shape} does not match {n} labels"
            )
        if not np.all(np.isfinite(features)):
            raise ParseError("features contain non-finite entries")
    if similarity is not None:
        similarity = np.asarray(similarity, dtype=np.float64)
        if similarity.ndim != 2 or similarity.shape[0] != similarity.shape[1]:
            raise DataFormatError("similarity matrix must be square")
        if similarity.shape[0] != n:
            raise DataFormatError(
                f"similarity side {similarity.shape[0]} does not match {n} labels"
            )
        if not np.all(np.isfinite(similarity)):
            raise ParseError("similarity matrix contains non-finite entries")
    if features is None and similarity is None:
        raise DataFormatError("need features or a similarity matrix")
    return Dataset(labels=_canonical_labels(labels), features=features,
                   similarity=similarity)


def _read_csv(path) -> np.ndarray:
    try:
        arr = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"{path}: non-finite entry")
    return arr


def load_dataset(labels_path, features_path=None, similarity_path=None) -> Dataset:
    """Load a dataset from headerless CSV files.

    Exactly one of ``features_path`` / ``similarity_path`` is typically
    given; both are accepted when consistent.
    """
    if features_path is None and similarity_path is None:
        raise ConfigError("need a features or similarity file")
    try:
        raw_labels = np.loadtxt(labels_path, dtype=np.int64, ndmin=1)
    except ValueError as exc:
        raise ParseError(f"{labels_path}: {exc}") from exc
    features = _read_csv(features_path) if features_path else None
    similarity = _read_csv(similarity_path) if similarity_path else None
    return make_dataset(raw_labels, features=features, similarity=similarity)


def gaussian_width(dataset: Dataset, ids=None) -> float:
    """Mean Euclidean distance over all unordered point pairs."""
    if dataset.features is None:
        raise ConfigError("gaussian width needs feature vectors")
    feats = dataset.features if ids is None else dataset.features[np.asarray(ids)]
    if len(feats) < 2:
        raise DegenerateDataError("need at least 2 points for a pairwise mean")
    width = float(pdist(feats).mean())
    if width <= 0.0:
        raise DegenerateDataError("all points identical: zero mean distance")
    return width


def normalization_constant(dataset: Dataset, ids=None) -> float:
    """Max absolute similarity entry over the given ids (all by default)."""
    if dataset.similarity is None:
        return 1.0
    sub = dataset.similarity
    if ids is not None:
        ids = np.asarray(ids)
        sub = sub[np.ix_(ids, ids)]
    c = float(np.abs(sub).max())
    if c == 0.0:
        raise DegenerateDataError("similarity matrix is identically zero")
    return c


def kernel_matrix(spec: KernelSpec, dataset: Dataset, rows, cols) -> np.ndarray:
    """Normalized kernel values between two id lists (len(rows) x len(cols))."""
    rows = np.asarray(rows, dtype=np.intp)
    cols = np.asarray(cols, dtype=np.intp)
    for ids in (rows, cols):
        if ids.size and (ids.min() < 0 or ids.max() >= dataset.n):
            raise IndexError("point id out of range")
    if spec.kind == "precomputed":
        if dataset.similarity is None:
            raise ConfigError("precomputed kernel requires a similarity matrix")
        norm = spec.norm if spec.norm is not None else normalization_constant(dataset)
        return dataset.similarity[np.ix_(rows, cols)] / norm
    if dataset.features is None:
        raise ConfigError("gaussian kernel requires feature vectors")
    a = dataset.features[rows]
    b = dataset.features[cols]
    sq = (
        (a * a).sum(axis=1)[:, None]
        + (b * b).sum(axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-sq / (2.0 * spec.width**2))


def kernel_eval(spec: KernelSpec, dataset: Dataset, i: int, j: int) -> float:
    return float(kernel_matrix(spec, dataset, [i], [j])[0, 0])


def with_train_normalization(spec: KernelSpec, dataset: Dataset, train_ids) -> KernelSpec:
    """Pin the precomputed normalization constant to the training block."""
    if spec.kind != "precomputed" or spec.norm is not None:
        return spec
    return replace(spec, norm=normalization_constant(dataset, train_ids))


def split(dataset: Dataset, spec: SplitSpec):
    """Disjoint, exhaustive (train, valid, test) id arrays.

    Validation and test sizes are floored (minimum 1 each), the remainder
    goes to train.  Re-draws up to a bounded retry count until every class
    appears in train.
    """
    n = dataset.n
    n_valid = max(1, int(np.floor(spec.valid_frac * n)))
    n_test = max(1, int(np.floor(spec.test_frac * n)))
    n_train = n - n_valid - n_test
    if n_train < 1:
        raise ConfigError(f"n={n} too small for non-empty splits")
    rng = np.random.default_rng(spec.seed)
    classes = dataset.class_ids()
    # coverage is only enforceable when train can hold one point per class
    enforce = n_train >= len(classes)
    for _ in range(_STRATIFY_RETRIES):
        perm = rng.permutation(n)
        train = np.sort(perm[:n_train])
        if (not enforce
                or len(np.intersect1d(dataset.labels[train], classes)) == len(classes)):
            valid = np.sort(perm[n_train:n_train + n_valid])
            test = np.sort(perm[n_train + n_valid:])
            return train, valid, test
    raise StratificationError(
        f"could not cover all classes in train after {_STRATIFY_RETRIES} draws"
    )
