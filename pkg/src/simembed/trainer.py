"""Large-margin linear classifiers on the embedded space.

Hinge training solves the L2-regularized L1-hinge objective
    0.5 ||w||^2 + C * sum_i max(0, 1 - y_i <w, z_i>)
by dual coordinate descent; logistic training uses deterministic gradient
descent with backtracking line search.  The bias is an appended, regularized
constant-1 feature.

Stored weights are pre-scaled by d so that the decision rule
(1/d) <w, row> + bias reproduces the solver's raw decision values and the
weights stay comparable across embedding dimensionalities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .embedding import EmbeddedDataset, classify_values, decision_values
from .errors import ConfigError, DegenerateDataError, NumericError

KKT_TOL = 1e-3
MAX_EPOCHS = 1000
GRAD_TOL = 1e-4
MAX_GD_ITERS = 20000


@dataclass(frozen=True)
class LossFunction:
    kind: str  # hinge | logistic | zero_one | margin_indicator
    margin: float = 1.0

    def __post_init__(self):
        if self.kind not in ("hinge", "logistic", "zero_one", "margin_indicator"):
            raise ConfigError(f"unknown loss kind: {self.kind!r}")
        if self.kind in ("hinge", "margin_indicator") and self.margin <= 0:
            raise ConfigError(f"{self.kind} loss needs a positive margin")

    @property
    def lipschitz_constant(self) -> float:
        """C_L; 0 marks the non-Lipschitz kinds."""
        if self.kind == "hinge":
            return 1.0 / self.margin
        if self.kind == "logistic":
            return 1.0
        return 0.0

    @property
    def is_lipschitz(self) -> bool:
        return self.kind in ("hinge", "logistic")


def hinge_loss(margin: float = 1.0) -> LossFunction:
    return LossFunction("hinge", margin)


def logistic_loss() -> LossFunction:
    return LossFunction("logistic")


def zero_one_loss() -> LossFunction:
    return LossFunction("zero_one")


def margin_indicator_loss(margin: float) -> LossFunction:
    return LossFunction("margin_indicator", margin)


def loss_values(loss: LossFunction, t) -> np.ndarray:
    """Elementwise loss of signed decision values t."""
    t = np.asarray(t, dtype=np.float64)
    if loss.kind == "hinge":
        return np.maximum(0.0, 1.0 - t / loss.margin)
    if loss.kind == "logistic":
        return np.logaddexp(0.0, -t)
    if loss.kind == "zero_one":
        return (t <= 0.0).astype(np.float64)
    return (t < loss.margin).astype(np.float64)


@dataclass(frozen=True, eq=False)
class LinearModel:
    weights: np.ndarray
    bias: float
    loss_kind: str
    c_penalty: float
    # training diagnostics; not part of the serialized record
    dual_objectives: tuple[float, ...] | None = field(default=None, repr=False)
    kkt_residual: float | None = field(default=None, repr=False)

    @property
    def d(self) -> int:
        return len(self.weights)


@njit(cache=True)
def _dcd_epoch(Z, y, alpha, w, qdiag, C, order):  # pragma: no cover - jitted
    max_pg = 0.0
    n, p = Z.shape
    for k in range(order.shape[0]):
        i = order[k]
        g = 0.0
        for j in range(p):
            g += Z[i, j] * w[j]
        g = y[i] * g - 1.0
        a = alpha[i]
        if a <= 0.0:
            pg = g if g < 0.0 else 0.0
        elif a >= C:
            pg = g if g > 0.0 else 0.0
        else:
            pg = g
        if abs(pg) > max_pg:
            max_pg = abs(pg)
        if pg != 0.0:
            if qdiag[i] > 0.0:
                new_a = a - g / qdiag[i]
            else:
                # zero row: dual term is linear in alpha
                new_a = C if g < 0.0 else 0.0
            if new_a < 0.0:
                new_a = 0.0
            elif new_a > C:
                new_a = C
            da = new_a - a
            if da != 0.0:
                alpha[i] = new_a
                for j in range(p):
                    w[j] += da * y[i] * Z[i, j]
    return max_pg


def _train_hinge(Z, y, C, seed):
    n = Z.shape[0]
    alpha = np.zeros(n)
    w = np.zeros(Z.shape[1])
    qdiag = (Z * Z).sum(axis=1)
    rng = np.random.default_rng(seed)
    dual_history = []
    residual = np.inf
    for _ in range(MAX_EPOCHS):
        order = rng.permutation(n).astype(np.int64)
        residual = _dcd_epoch(Z, y.astype(np.float64), alpha, w, qdiag,
                              float(C), order)
        dual_history.append(float(alpha.sum() - 0.5 * w @ w))
        if residual <= KKT_TOL:
            break
    return w, tuple(dual_history), float(residual)


def _train_logistic(Z, y, C):
    w = np.zeros(Z.shape[1])

    def objective(wv):
        margins = y * (Z @ wv)
        return 0.5 * wv @ wv + C * np.logaddexp(0.0, -margins).sum()

    def gradient(wv):
        margins = y * (Z @ wv)
        sig = 1.0 / (1.0 + np.exp(margins))
        return wv - C * Z.T @ (y * sig)

    obj = objective(w)
    for _ in range(MAX_GD_ITERS):
        grad = gradient(w)
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= GRAD_TOL:
            break
        step = 1.0
        gsq = gnorm * gnorm
        while True:
            cand = w - step * grad
            cand_obj = objective(cand)
            if cand_obj <= obj - 1e-4 * step * gsq:
                break
            step *= 0.5
            if step < 1e-16:
                raise NumericError("logistic line search stalled")
        w, obj = cand, cand_obj
    if not np.isfinite(obj):
        raise NumericError("logistic objective is non-finite")
    return w


def train(embedded: EmbeddedDataset, loss: LossFunction, c_penalty: float,
          seed: int, fit_bias: bool = True) -> LinearModel:
    if loss.kind not in ("hinge", "logistic"):
        raise ConfigError("training supports hinge and logistic losses only")
    if c_penalty <= 0:
        raise ConfigError("penalty constant must be positive")
    labels = np.asarray(embedded.labels)
    if len(np.unique(labels)) < 2:
        raise DegenerateDataError("training data contains a single class")
    Z = np.asarray(embedded.matrix, dtype=np.float64)
    d = Z.shape[1]
    if fit_bias:
        Z = np.hstack([Z, np.ones((Z.shape[0], 1))])
    y = labels.astype(np.float64)
    if loss.kind == "hinge":
        w, dual_history, residual = _train_hinge(Z, y, c_penalty, seed)
    else:
        w = _train_logistic(Z, y, c_penalty)
        dual_history, residual = None, None
    if not np.all(np.isfinite(w)):
        raise NumericError("training produced non-finite weights")
    bias = float(w[d]) if fit_bias else 0.0
    return LinearModel(weights=d * w[:d], bias=bias, loss_kind=loss.kind,
                       c_penalty=float(c_penalty),
                       dual_objectives=dual_history, kkt_residual=residual)


def accuracy(model: LinearModel, embedded: EmbeddedDataset) -> float:
    predicted = classify_values(decision_values(model, embedded.matrix))
    return float(np.mean(predicted == embedded.labels))


def eval_loss(model: LinearModel, embedded: EmbeddedDataset,
              loss: LossFunction) -> float:
    values = decision_values(model, embedded.matrix)
    return float(np.mean(loss_values(loss, embedded.labels * values)))


DEFAULT_C_GRID = (1.0, 10.0, 100.0, 1000.0)


def select_c(train_embedded: EmbeddedDataset, valid_embedded: EmbeddedDataset,
             loss: LossFunction, grid=DEFAULT_C_GRID, seed: int = 0,
             fit_bias: bool = True):
    """Train one model per C; keep the best validation accuracy.

    Ties go to the smallest C.
    """
    grid = sorted(grid)
    if not grid:
        raise ConfigError("C grid must be non-empty")
    best = None
    for c in grid:
        model = train(train_embedded, loss, c, seed, fit_bias=fit_bias)
        acc = accuracy(model, valid_embedded)
        if best is None or acc > best[0]:
            best = (acc, model, c)
    return best[1], float(best[2])


def model_to_json(model: LinearModel) -> str:
    return json.dumps({
        "weights": [float(v) for v in model.weights],
        "bias": model.bias,
        "loss_kind": model.loss_kind,
        "c_penalty": model.c_penalty,
        "d": model.d,
    })


def model_from_json(text: str) -> LinearModel:
    rec = json.loads(text)
    weights = np.asarray(rec["weights"], dtype=np.float64)
    if len(weights) != rec["d"]:
        raise ConfigError("model record d does not match weight length")
    return LinearModel(weights=weights, bias=float(rec["bias"]),
                       loss_kind=rec["loss_kind"],
                       c_penalty=float(rec["c_penalty"]))
