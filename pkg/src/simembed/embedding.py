"""Landmarked-space embeddings and the linear decision rule on top of them.

Pair mode maps a point x to (f(K(x, p_j+) - K(x, p_j-)))_j; singleton mode
(the Balcan-Blum style baseline) uses raw similarities K(x, l_j) with no
transfer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, KernelSpec, kernel_matrix
from .landmark import LandmarkPairSet, LandmarkSet
from .transfer import TransferFunction, apply


@dataclass(frozen=True, eq=False)
class EmbeddedDataset:
    matrix: np.ndarray          # m points x d coordinates
    labels: np.ndarray
    pair_set: LandmarkPairSet | LandmarkSet
    transfer: TransferFunction | None = None

    @property
    def d(self) -> int:
        return self.matrix.shape[1]


def embed_pairs(dataset: Dataset, kernel: KernelSpec, pairs: LandmarkPairSet,
                f: TransferFunction, point_ids) -> EmbeddedDataset:
    point_ids = np.asarray(point_ids)
    k_pos = kernel_matrix(kernel, dataset, point_ids, pairs.pos_ids)
    k_neg = kernel_matrix(kernel, dataset, point_ids, pairs.neg_ids)
    matrix = apply(f, k_pos - k_neg)
    return EmbeddedDataset(matrix=matrix, labels=dataset.labels[point_ids],
                           pair_set=pairs, transfer=f)


def embed_singletons(dataset: Dataset, kernel: KernelSpec,
                     landmarks: LandmarkSet, point_ids) -> EmbeddedDataset:
    point_ids = np.asarray(point_ids)
    matrix = kernel_matrix(kernel, dataset, point_ids,
                           np.asarray(landmarks.ids))
    return EmbeddedDataset(matrix=matrix, labels=dataset.labels[point_ids],
                           pair_set=landmarks, transfer=None)


def decision_values(model, matrix: np.ndarray) -> np.ndarray:
    """(1/d) <w, row> + bias for each row."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    d = len(model.weights)
    if matrix.shape[1] != d:
        raise ValueError(
            f"row dimension {matrix.shape[1]} does not match model d={d}"
        )
    return matrix @ model.weights / d + model.bias


def decision_value(model, embedded_row) -> float:
    return float(decision_values(model, embedded_row)[0])


def classify_values(values: np.ndarray) -> np.ndarray:
    """Sign labels; exact zero maps to +1."""
    return np.where(np.asarray(values) >= 0.0, 1, -1)


def classify(model, embedded_row) -> int:
    return int(classify_values(decision_values(model, embedded_row))[0])


def margin_error(values, labels, margin: float) -> float:
    """Fraction of points whose label-signed decision value falls below margin."""
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels)
    return float(np.mean(labels * values < margin))


def dump_embedding(embedded: EmbeddedDataset, path) -> None:
    """CSV dump of the embedded coordinates, one row per point."""
    np.savetxt(path, embedded.matrix, delimiter=",")
