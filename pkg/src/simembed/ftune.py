"""Exhaustive transfer-function search with validation-based selection.

The single-transfer variant picks one function for the whole problem; the
multi variant picks one per one-vs-all subproblem.  Landmark pairs are drawn
once and shared across all candidate transfers so the search isolates the
transfer effect.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .data import Dataset, KernelSpec
from .embedding import classify_values, decision_values, embed_pairs
from .errors import SimembedError
from .seeds import derive_seed
from .landmark import LandmarkPairSet, LandmarkSet, sample_pairs_from_pool
from .trainer import LinearModel, LossFunction, accuracy, eval_loss, select_c
from .transfer import TransferFamily, TransferFunction


@dataclass(frozen=True, eq=False)
class FtuneResult:
    variant: str                         # "S" | "M"
    classes: tuple | None                # None for plain binary problems
    transfers: tuple[TransferFunction, ...]
    models: tuple[LinearModel, ...]
    c_values: tuple[float, ...]
    pair_sets: tuple[LandmarkPairSet, ...]
    validation_scores: dict
    validation_accuracy: float

    @property
    def chosen(self):
        if self.variant == "S":
            return self.transfers[0]
        return self.transfers


def _ova_view(dataset: Dataset, cls) -> Dataset:
    """Same points, labels remapped to +1 for cls and -1 for the rest."""
    ova = np.where(dataset.labels == cls, 1, -1).astype(np.int64)
    return replace(dataset, labels=ova)


def _pick(scored):
    """Argmax validation accuracy; ties by lower loss, then family order."""
    scored.sort(key=lambda rec: (-rec[1], rec[2], rec[0]))
    return scored[0]


def ftune_s(dataset: Dataset, kernel: KernelSpec, train_ids, valid_ids,
            pairs: LandmarkPairSet, family: TransferFamily,
            loss: LossFunction, c_grid, seed: int,
            fit_bias: bool = True) -> FtuneResult:
    """Single-transfer search on a binary problem with fixed landmark pairs."""
    if dataset.num_classes != 2:
        raise SimembedError("ftune_s expects binary labels; use ftune_m")
    scored = []
    scores = {}
    failures = []
    for idx, f in enumerate(family.members):
        try:
            emb_tr = embed_pairs(dataset, kernel, pairs, f, train_ids)
            emb_va = embed_pairs(dataset, kernel, pairs, f, valid_ids)
            model, c = select_c(emb_tr, emb_va, loss, c_grid, seed,
                                fit_bias=fit_bias)
        except SimembedError as exc:
            failures.append(f"{f.label}: {exc}")
            continue
        acc = accuracy(model, emb_va)
        val_loss = eval_loss(model, emb_va, loss)
        scores[f.label] = {"accuracy": acc, "loss": val_loss, "c": c}
        scored.append((idx, acc, val_loss, f, model, c))
    if not scored:
        raise SimembedError("every transfer candidate failed: " + "; ".join(failures))
    _, acc, _, f, model, c = _pick(scored)
    return FtuneResult(variant="S", classes=None, transfers=(f,),
                       models=(model,), c_values=(c,), pair_sets=(pairs,),
                       validation_scores=scores, validation_accuracy=acc)


def predict_binary(result: FtuneResult, dataset: Dataset, kernel: KernelSpec,
                   point_ids) -> np.ndarray:
    emb = embed_pairs(dataset, kernel, result.pair_sets[0],
                      result.transfers[0], point_ids)
    return classify_values(decision_values(result.models[0], emb.matrix))


def _class_pairs(dataset: Dataset, classes, pool: LandmarkSet, d: int,
                 seed: int) -> list[LandmarkPairSet]:
    out = []
    for k, cls in enumerate(classes):
        ova = _ova_view(dataset, cls)
        out.append(sample_pairs_from_pool(ova.labels, pool.ids, d,
                                          derive_seed(seed, k)))
    return out


def _ova_decision_matrix(dataset, kernel, classes, transfers, models,
                         pair_sets, point_ids) -> np.ndarray:
    cols = []
    for k in range(len(classes)):
        emb = embed_pairs(dataset, kernel, pair_sets[k], transfers[k], point_ids)
        cols.append(decision_values(models[k], emb.matrix))
    return np.column_stack(cols)


def ftune_s_ova(dataset: Dataset, kernel: KernelSpec, train_ids, valid_ids,
                pool: LandmarkSet, d: int, family: TransferFamily,
                loss: LossFunction, c_grid, seed: int,
                fit_bias: bool = True) -> FtuneResult:
    """Single shared transfer on a one-vs-all multi-class problem.

    Each candidate transfer is scored by the multi-class validation accuracy
    of its full set of one-vs-all models.
    """
    classes = tuple(int(c) for c in dataset.class_ids())
    pair_sets = _class_pairs(dataset, classes, pool, d, seed)
    true_valid = dataset.labels[np.asarray(valid_ids)]
    scored = []
    scores = {}
    failures = []
    for idx, f in enumerate(family.members):
        models, cs, losses = [], [], []
        try:
            for k, cls in enumerate(classes):
                ova = _ova_view(dataset, cls)
                emb_tr = embed_pairs(ova, kernel, pair_sets[k], f, train_ids)
                emb_va = embed_pairs(ova, kernel, pair_sets[k], f, valid_ids)
                model, c = select_c(emb_tr, emb_va, loss, c_grid, seed,
                                    fit_bias=fit_bias)
                models.append(model)
                cs.append(c)
                losses.append(eval_loss(model, emb_va, loss))
        except SimembedError as exc:
            failures.append(f"{f.label}: {exc}")
            continue
        transfers = (f,) * len(classes)
        decisions = _ova_decision_matrix(dataset, kernel, classes, transfers,
                                         models, pair_sets, valid_ids)
        predicted = np.asarray(classes)[np.argmax(decisions, axis=1)]
        acc = float(np.mean(predicted == true_valid))
        val_loss = float(np.mean(losses))
        scores[f.label] = {"accuracy": acc, "loss": val_loss}
        scored.append((idx, acc, val_loss, f, tuple(models), tuple(cs)))
    if not scored:
        raise SimembedError("every transfer candidate failed: " + "; ".join(failures))
    _, acc, _, f, models, cs = _pick(scored)
    return FtuneResult(variant="S", classes=classes,
                       transfers=(f,) * len(classes), models=models,
                       c_values=cs, pair_sets=tuple(pair_sets),
                       validation_scores=scores, validation_accuracy=acc)


def ftune_m(dataset: Dataset, kernel: KernelSpec, train_ids, valid_ids,
            pool: LandmarkSet, d: int, family: TransferFamily,
            loss: LossFunction, c_grid, seed: int,
            fit_bias: bool = True) -> FtuneResult:
    """One transfer per one-vs-all subproblem; argmax prediction."""
    classes = tuple(int(c) for c in dataset.class_ids())
    pair_sets = _class_pairs(dataset, classes, pool, d, seed)
    transfers, models, cs = [], [], []
    scores = {}
    for k, cls in enumerate(classes):
        ova = _ova_view(dataset, cls)
        sub = ftune_s(ova, kernel, train_ids, valid_ids, pair_sets[k], family,
                      loss, c_grid, seed, fit_bias=fit_bias)
        transfers.append(sub.transfers[0])
        models.append(sub.models[0])
        cs.append(sub.c_values[0])
        scores[f"class:{cls}"] = sub.validation_scores
    decisions = _ova_decision_matrix(dataset, kernel, classes, transfers,
                                     models, pair_sets, valid_ids)
    predicted = np.asarray(classes)[np.argmax(decisions, axis=1)]
    acc = float(np.mean(predicted == dataset.labels[np.asarray(valid_ids)]))
    return FtuneResult(variant="M", classes=classes, transfers=tuple(transfers),
                       models=tuple(models), c_values=tuple(cs),
                       pair_sets=tuple(pair_sets), validation_scores=scores,
                       validation_accuracy=acc)


def predict_multiclass(result: FtuneResult, dataset: Dataset,
                       kernel: KernelSpec, point_ids) -> np.ndarray:
    """Per-class decision values through each class's transfer; argmax with
    ties resolved toward the smallest class id."""
    if result.classes is None:
        raise SimembedError("result does not carry one-vs-all models")
    decisions = _ova_decision_matrix(dataset, kernel, result.classes,
                                     result.transfers, result.models,
                                     result.pair_sets, point_ids)
    return np.asarray(result.classes)[np.argmax(decisions, axis=1)]
