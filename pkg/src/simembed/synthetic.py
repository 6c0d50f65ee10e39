"""Synthetic dataset generators used by the experiment protocol and tests.

All generators are deterministic given their seed and return Dataset values
with canonical labels.
"""

from __future__ import annotations

import numpy as np

from .data import Dataset, make_dataset
from .errors import ConfigError


def make_multimodal_clusters(n: int = 800, clusters_per_class: int = 4,
                             num_classes: int = 2, radius: float = 4.0,
                             spread: float = 0.45, seed: int = 0,
                             proportions=None) -> Dataset:
    """Interleaved Gaussian clusters on a circle, several per class.

    Clusters of different classes alternate around the circle, so a small
    landmark sample that misses a cluster loses a whole mode of the class.
    ``proportions`` optionally skews the per-class mass across that class's
    clusters (one fraction per cluster, summing to 1); uniform random
    landmarking then tends to miss the light clusters entirely.
    """
    total_clusters = clusters_per_class * num_classes
    if proportions is None:
        proportions = (1.0 / clusters_per_class,) * clusters_per_class
    if len(proportions) != clusters_per_class or abs(sum(proportions) - 1.0) > 1e-9:
        raise ConfigError("proportions must give one fraction per cluster, summing to 1")
    if n % num_classes != 0:
        raise ConfigError("n must divide evenly across classes")
    per_class = n // num_classes
    sizes = [int(round(p * per_class)) for p in proportions]
    sizes[0] += per_class - sum(sizes)
    if min(sizes) < 1:
        raise ConfigError("a cluster proportion is too small for this n")
    rng = np.random.default_rng(seed)
    angles = 2.0 * np.pi * np.arange(total_clusters) / total_clusters
    centers = radius * np.column_stack([np.cos(angles), np.sin(angles)])
    feats, labels = [], []
    for c in range(total_clusters):
        size = sizes[c // num_classes]
        feats.append(centers[c] + spread * rng.standard_normal((size, 2)))
        labels.extend([c % num_classes] * size)
    return make_dataset(np.array(labels), features=np.vstack(feats))


def make_sign_favoring(n: int = 300, seed: int = 0,
                       tail_scale: float = 1.0,
                       noise_scale: float = 0.15) -> Dataset:
    """Similarity matrix whose differences are informative only in sign.

    Entries are label_i * label_j times a heavy-tailed positive magnitude,
    plus additive noise.  Landmark-pair differences then carry the point's
    label in their sign while their magnitudes are dominated by the heavy
    tail, so hard-thresholding transfers beat near-linear ones.
    """
    if n % 2 != 0:
        raise ConfigError("need even n")
    rng = np.random.default_rng(seed)
    labels = np.tile([1, -1], n // 2)
    mags = tail_scale * np.abs(rng.standard_cauchy((n, n)))
    eta = noise_scale * rng.standard_normal((n, n))
    K = np.outer(labels, labels) * mags + eta
    K = np.triu(K) + np.triu(K, 1).T
    return make_dataset(labels, similarity=K)


def make_linear_margin(n: int = 300, seed: int = 0,
                       noise_scale: float = 0.35) -> Dataset:
    """Similarity matrix whose differences carry graded margin information.

    K(i, j) is an outer product of signed latent magnitudes plus Gaussian
    noise; thresholding the differences destroys the graded signal, so
    gentle (near-identity) transfers win.
    """
    if n % 2 != 0:
        raise ConfigError("need even n")
    rng = np.random.default_rng(seed)
    labels = np.tile([1, -1], n // 2)
    z = labels * rng.uniform(0.2, 1.0, size=n)
    K = 0.5 * np.outer(z, z) + noise_scale * rng.standard_normal((n, n))
    K = np.triu(K) + np.triu(K, 1).T
    return make_dataset(labels, similarity=K)
