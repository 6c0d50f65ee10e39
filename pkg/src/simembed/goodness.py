"""Empirical goodness estimators, planted-instance generators, and
Monte-Carlo verifiers for the landmark-embedding generalization guarantees.

All expectations over the (unknown) data distribution are replaced by full
enumeration over the sample, falling back to a seeded subsample when the
same-class x other-class pair count exceeds a budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset, KernelSpec, kernel_matrix, make_dataset
from .embedding import margin_error
from .errors import ConfigError, ConstructionError, DegenerateDataError
from .seeds import derive_seed
from .trainer import LossFunction, loss_values
from .transfer import TransferFunction, apply, c_f

ENUMERATION_BUDGET = 10**6


@dataclass(frozen=True)
class GoodnessParams:
    epsilon: float
    gamma: float
    b_bound: float
    epsilon_one: float
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError("epsilon must lie in [0, 1]")
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigError("gamma must lie in (0, 1]")
        if self.b_bound <= 0 or self.epsilon_one <= 0:
            raise ConfigError("b_bound and epsilon_one must be positive")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("delta must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """Bounded weights over points or point pairs.

    ``table`` is a 1-D array for per-point weights or a 2-D array for pair
    weights; ``value`` serves the constant mode.
    """

    mode: str  # constant | table
    b_bound: float
    value: float | None = None
    table: np.ndarray | None = None

    def __post_init__(self):
        if self.mode == "constant":
            if self.value is None or abs(self.value) > self.b_bound:
                raise ConfigError("constant weight missing or exceeds bound")
        elif self.mode == "table":
            if self.table is None or np.abs(self.table).max() > self.b_bound + 1e-12:
                raise ConfigError("weight table missing or exceeds bound")
        else:
            raise ConfigError(f"unknown weight mode: {self.mode!r}")

    def pair(self, i, j) -> np.ndarray:
        """Pair weights w(x_i, x_j); broadcasts over index arrays."""
        if self.mode == "constant":
            shape = np.broadcast_shapes(np.shape(i), np.shape(j))
            return np.full(shape, self.value, dtype=np.float64)
        if self.table.ndim == 2:
            return self.table[np.asarray(i), np.asarray(j)]
        # per-point table used as a product weight
        return self.table[np.asarray(i)] * self.table[np.asarray(j)]

    def point(self, i) -> np.ndarray:
        if self.mode == "constant":
            return np.full(np.shape(i), self.value, dtype=np.float64)
        if self.table.ndim != 1:
            raise ConfigError("point weights need a 1-D table")
        return self.table[np.asarray(i)]


def constant_weight(value: float, b_bound: float | None = None) -> WeightFunction:
    bound = abs(value) if b_bound is None else b_bound
    return WeightFunction("constant", b_bound=max(bound, abs(value)), value=value)


def _check_classes(labels: np.ndarray) -> None:
    classes, counts = np.unique(labels, return_counts=True)
    if len(classes) < 2 or counts.min() < 1:
        raise DegenerateDataError("goodness estimation needs both classes")


def _full_kernel(dataset: Dataset, kernel: KernelSpec) -> np.ndarray:
    ids = np.arange(dataset.n)
    return kernel_matrix(kernel, dataset, ids, ids)


def _conditional_pair_means(K, labels, f, w, seed=0,
                            budget=ENUMERATION_BUDGET) -> np.ndarray:
    """Per-point empirical mean of w(x', x'') f(K(x,x') - K(x,x''))
    conditioned on l(x') = l(x) and l(x'') != l(x)."""
    n = len(labels)
    rng = np.random.default_rng(seed)
    values = np.empty(n)
    for x in range(n):
        same = np.where(labels == labels[x])[0]
        other = np.where(labels != labels[x])[0]
        if len(same) * len(other) <= budget:
            diffs = K[x, same][:, None] - K[x, other][None, :]
            weights = w.pair(same[:, None], other[None, :])
            values[x] = float(np.mean(weights * apply(f, diffs)))
        else:
            si = rng.choice(same, size=budget, replace=True)
            oi = rng.choice(other, size=budget, replace=True)
            diffs = K[x, si] - K[x, oi]
            values[x] = float(np.mean(w.pair(si, oi) * apply(f, diffs)))
    return values


def estimate_goodness_pairs(dataset: Dataset, kernel: KernelSpec,
                            f: TransferFunction, w: WeightFunction,
                            params: GoodnessParams, seed: int = 0):
    """Violation fraction against the C_f * gamma threshold plus the
    per-point conditional means."""
    if dataset.n < 3:
        raise DegenerateDataError("need at least 3 points")
    _check_classes(dataset.labels)
    K = _full_kernel(dataset, kernel)
    values = _conditional_pair_means(K, dataset.labels, f, w, seed=seed)
    threshold = c_f(f, K) * params.gamma
    return float(np.mean(values < threshold)), values


def estimate_goodness_bbs(dataset: Dataset, kernel: KernelSpec,
                          w: WeightFunction, gamma: float):
    """Per-point gap between weighted same-class and other-class mean
    similarity; violation fraction against gamma."""
    _check_classes(dataset.labels)
    K = _full_kernel(dataset, kernel)
    labels = dataset.labels
    n = dataset.n
    gaps = np.empty(n)
    for x in range(n):
        same = np.where(labels == labels[x])[0]
        other = np.where(labels != labels[x])[0]
        gaps[x] = (np.mean(w.point(same) * K[x, same])
                   - np.mean(w.point(other) * K[x, other]))
    return float(np.mean(gaps < gamma)), gaps


def estimate_goodness_sign(dataset: Dataset, distance_matrix,
                           w: WeightFunction, gamma: float, seed: int = 0):
    """Sign-transfer goodness on a distance matrix with product weights."""
    _check_classes(dataset.labels)
    D = np.asarray(distance_matrix, dtype=np.float64)
    if D.shape != (dataset.n, dataset.n):
        raise ConfigError("distance matrix shape does not match dataset")
    sign = TransferFunction("sign")
    # sgn(d(x,x'') - d(x,x')) == sgn(K(x,x') - K(x,x'')) for K = -d
    values = _conditional_pair_means(-D, dataset.labels, sign, w, seed=seed)
    return float(np.mean(values < gamma)), values


def estimate_surrogate_goodness(dataset: Dataset, kernel: KernelSpec,
                                f: TransferFunction, w: WeightFunction,
                                loss: LossFunction, seed: int = 0) -> float:
    """Empirical mean of L(G(x)) for the enumerated conditional mean G."""
    if not loss.is_lipschitz:
        raise ConfigError("surrogate goodness needs a Lipschitz loss")
    _check_classes(dataset.labels)
    K = _full_kernel(dataset, kernel)
    values = _conditional_pair_means(K, dataset.labels, f, w, seed=seed)
    return float(np.mean(loss_values(loss, values)))


def plant_good_similarity(n: int, params: GoodnessParams, noise_seed: int,
                          noise: float = 0.0):
    """Two-cluster similarity instance that is (epsilon, gamma, 1)-good by
    construction for w == 1 and the clipped identity transfer.

    Within/cross base similarities sit at +/-(gamma + noise) so every
    good-point term clears 2*gamma even at the noise extremes.  A floor of
    epsilon * n points get their similarity pattern flipped and become the
    planted violators.  Returns (dataset, weights, transfer).
    """
    if n < 4 or n % 2 != 0:
        raise ConfigError("planting needs even n >= 4")
    if noise < 0:
        raise ConfigError("noise amplitude must be nonnegative")
    if params.gamma + 2.0 * noise > 1.0:
        raise ConstructionError(
            f"gamma={params.gamma} with noise budget {noise} exceeds the "
            "normalized similarity range"
        )
    half = n // 2
    labels = np.concatenate([np.ones(half, dtype=np.int64),
                             -np.ones(half, dtype=np.int64)])
    s = params.gamma + noise
    agree = np.outer(labels, labels).astype(np.float64)
    m = int(np.floor(params.epsilon * n))
    bad = np.zeros(n, dtype=bool)
    # alternate classes so neither side degenerates first
    order = np.empty(n, dtype=np.intp)
    order[0::2] = np.arange(half)
    order[1::2] = np.arange(half, n)
    bad[order[:m]] = True
    flip = np.where(bad[:, None] | bad[None, :], -1.0, 1.0)
    rng = np.random.default_rng(noise_seed)
    eta = rng.uniform(-noise, noise, size=(n, n)) if noise > 0 else np.zeros((n, n))
    eta = np.triu(eta) + np.triu(eta, 1).T
    K = s * agree * flip + eta
    dataset = make_dataset(labels, similarity=K)
    weights = constant_weight(1.0)
    f = TransferFunction("identity")
    if m > 0:
        spec = KernelSpec("precomputed", norm=1.0)
        violation, _ = estimate_goodness_pairs(dataset, spec, f, weights, params)
        if violation > params.epsilon:
            raise ConstructionError(
                f"planted violation fraction {violation:.4f} exceeds "
                f"epsilon={params.epsilon}"
            )
    return dataset, weights, f


def theorem2_pair_count(params: GoodnessParams) -> int:
    """d = ceil((8 / gamma^2) * ln(2 / (delta * epsilon_one)))."""
    return math.ceil(
        (8.0 / params.gamma**2)
        * math.log(2.0 / (params.delta * params.epsilon_one))
    )


def theorem7_pair_count(params: GoodnessParams, loss: LossFunction) -> int:
    """d = ceil((16 B^2 C_L^2 / eps1^2) * ln(4 B / (delta * eps1)))."""
    b, cl = params.b_bound, loss.lipschitz_constant
    e1 = params.epsilon_one
    return math.ceil(
        (16.0 * b**2 * cl**2 / e1**2)
        * math.log(4.0 * b / (params.delta * e1))
    )


def _planted_g(dataset: Dataset, f: TransferFunction, w: WeightFunction,
               d: int, rng) -> np.ndarray:
    """Decision values g(x) from d uniformly drawn landmark pairs with the
    planted weights (unnormalized planted kernel)."""
    labels = dataset.labels
    pos = np.where(labels == 1)[0]
    neg = np.where(labels == -1)[0]
    pos_draw = rng.choice(pos, size=d, replace=True)
    neg_draw = rng.choice(neg, size=d, replace=True)
    K = dataset.similarity
    coords = apply(f, K[:, pos_draw] - K[:, neg_draw])
    return (w.pair(pos_draw, neg_draw)[None, :] * coords).mean(axis=1)


def verify_theorem2(params: GoodnessParams, trials: int, master_seed: int,
                    n: int = 200, noise: float = 0.1, d: int | None = None):
    """Monte-Carlo check of the fixed-transfer margin guarantee.

    Per trial: plant an instance, draw the prescribed number of landmark
    pairs, and measure the margin-gamma/2 error of the planted-weight
    classifier.  Passes when the fraction of trials exceeding
    epsilon + epsilon_one stays within the doubled failure budget 2*delta.
    """
    prescribed = theorem2_pair_count(params)
    d = prescribed if d is None else d
    errors = []
    for t in range(trials):
        dataset, w, f = plant_good_similarity(
            n, params, derive_seed(master_seed, t, 0), noise=noise)
        rng = np.random.default_rng(derive_seed(master_seed, t, 1))
        g = _planted_g(dataset, f, w, d, rng)
        errors.append(margin_error(g, dataset.labels, params.gamma / 2.0))
    threshold = params.epsilon + params.epsilon_one
    failures = float(np.mean(np.asarray(errors) > threshold))
    return {
        "theorem": 2,
        "prescribed_d": prescribed,
        "d": d,
        "trials": trials,
        "error_threshold": threshold,
        "per_trial_error": errors,
        "failure_fraction": failures,
        "failure_budget": 2.0 * params.delta,
        "passed": failures <= 2.0 * params.delta,
    }


def verify_theorem7(params: GoodnessParams, loss: LossFunction, trials: int,
                    master_seed: int, n: int = 200, noise: float = 0.1,
                    d: int | None = None):
    """Monte-Carlo check of the surrogate-loss guarantee.

    The planted instance's own surrogate goodness (mean L(G)) stands in for
    epsilon, so the check compares mean L(g) against that measured value
    plus epsilon_one.
    """
    if not loss.is_lipschitz:
        raise ConfigError("theorem 7 requires a Lipschitz loss")
    prescribed = theorem7_pair_count(params, loss)
    d = prescribed if d is None else d
    spec = KernelSpec("precomputed", norm=1.0)
    gaps = []
    failures = 0
    for t in range(trials):
        dataset, w, f = plant_good_similarity(
            n, params, derive_seed(master_seed, t, 0), noise=noise)
        eps_instance = estimate_surrogate_goodness(dataset, spec, f, w, loss)
        rng = np.random.default_rng(derive_seed(master_seed, t, 1))
        g = _planted_g(dataset, f, w, d, rng)
        # the label-signed value l(x)*g(x) is the pair-sample estimate of the
        # conditional mean G(x) for points of either class
        empirical = float(np.mean(loss_values(loss, dataset.labels * g)))
        gaps.append(empirical - eps_instance)
        if empirical > eps_instance + params.epsilon_one:
            failures += 1
    frac = failures / trials
    return {
        "theorem": 7,
        "prescribed_d": prescribed,
        "d": d,
        "trials": trials,
        "per_trial_loss_gap": gaps,
        "failure_fraction": frac,
        "failure_budget": 2.0 * params.delta,
        "passed": frac <= 2.0 * params.delta,
    }


def verify_lipschitz_perturbation(dataset: Dataset, kernel: KernelSpec,
                                  pairs, f: TransferFunction,
                                  f_prime: TransferFunction,
                                  w: WeightFunction, loss: LossFunction):
    """Check |g_f - g_f'| <= r*B pointwise and the C_L*r*B loss-mean bound.

    r is the sup distance between the transfers over the kernel differences
    actually observed at the given landmark pairs.
    """
    if not loss.is_lipschitz:
        raise ConfigError("the perturbation bound needs a Lipschitz loss")
    ids = np.arange(dataset.n)
    k_pos = kernel_matrix(kernel, dataset, ids, pairs.pos_ids)
    k_neg = kernel_matrix(kernel, dataset, ids, pairs.neg_ids)
    diffs = k_pos - k_neg
    delta = apply(f, diffs) - apply(f_prime, diffs)
    r = float(np.max(np.abs(delta)))
    pw = w.pair(pairs.pos_ids, pairs.neg_ids)
    g_f = (pw[None, :] * apply(f, diffs)).mean(axis=1)
    g_fp = (pw[None, :] * apply(f_prime, diffs)).mean(axis=1)
    b = w.b_bound
    # single mean of per-term gaps keeps the comparison numerically tight
    point_gap = float(np.max(np.abs((pw[None, :] * delta).mean(axis=1))))
    loss_gap = float(abs(np.mean(loss_values(loss, g_f))
                         - np.mean(loss_values(loss, g_fp))))
    point_bound = r * b
    loss_bound = loss.lipschitz_constant * r * b
    return {
        "r": r,
        "b_bound": b,
        "max_point_gap": point_gap,
        "point_bound": point_bound,
        "point_ok": point_gap <= point_bound,
        "loss_gap": loss_gap,
        "loss_bound": loss_bound,
        "loss_ok": loss_gap <= loss_bound,
        "max_slack": max(point_gap - point_bound, loss_gap - loss_bound),
    }
