"""Experiment orchestration: repeated splits, method comparison, statistics.

A config drives (runs x methods x landmark counts) cells of test accuracies,
aggregated with means, standard deviations, and pairwise Welch t-tests.
Everything is deterministic given the config: per-run seeds derive from the
master seed and the run index, so adding runs never perturbs earlier ones.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from scipy.special import betainc

from . import landmark as lm
from .data import (
    Dataset,
    KernelSpec,
    SplitSpec,
    gaussian_width,
    load_dataset,
    split,
    with_train_normalization,
)
from .embedding import classify_values, decision_values, embed_pairs, embed_singletons
from .errors import ConfigError, SimembedError
from .ftune import (
    ftune_m,
    ftune_s,
    ftune_s_ova,
    predict_binary,
    predict_multiclass,
    _ova_view,
)
from .seeds import derive_seed
from .trainer import DEFAULT_C_GRID, hinge_loss, select_c
from .transfer import TransferFamily, TransferFunction, parse_family, parse_transfer

REPORT_VERSION = "v1"

KNOWN_BASE_METHODS = ("bbs", "sign-baseline", "ftune-s", "ftune-m")


@dataclass(frozen=True)
class ExperimentConfig:
    methods: tuple[str, ...]
    landmark_counts: tuple[int, ...]
    runs: int
    master_seed: int
    labels_path: str | None = None
    features_path: str | None = None
    similarity_path: str | None = None
    kernel_kind: str = "gaussian"
    kernel_width: float | str | None = "auto"
    train_frac: float = 0.7
    valid_frac: float = 0.1
    test_frac: float = 0.2
    c_grid: tuple[float, ...] = DEFAULT_C_GRID
    family: str = "default"
    fit_bias: bool = True

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if not self.methods:
            raise ConfigError("methods must be non-empty")
        if not self.landmark_counts or any(d < 1 for d in self.landmark_counts):
            raise ConfigError("landmark counts must be positive")
        for name in self.methods:
            base = name[:-2] if name.endswith("+d") else name
            if base not in KNOWN_BASE_METHODS and not base.startswith("fixed:"):
                raise ConfigError(f"unknown method: {name!r}")


def config_from_dict(raw: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig(
            methods=tuple(raw["methods"]),
            landmark_counts=tuple(int(d) for d in raw["landmark_counts"]),
            runs=int(raw["runs"]),
            master_seed=int(raw["master_seed"]),
            labels_path=raw.get("labels_path"),
            features_path=raw.get("features_path"),
            similarity_path=raw.get("similarity_path"),
            kernel_kind=raw.get("kernel_kind", "gaussian"),
            kernel_width=raw.get("kernel_width", "auto"),
            train_frac=float(raw.get("train_frac", 0.7)),
            valid_frac=float(raw.get("valid_frac", 0.1)),
            test_frac=float(raw.get("test_frac", 0.2)),
            c_grid=tuple(float(c) for c in raw.get("c_grid", DEFAULT_C_GRID)),
            family=raw.get("family", "default"),
            fit_bias=bool(raw.get("fit_bias", True)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad experiment config: {exc}") from exc


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))


def _resolve_kernel(config: ExperimentConfig, dataset: Dataset,
                    train_ids) -> KernelSpec:
    if config.kernel_kind == "gaussian":
        width = config.kernel_width
        if width in (None, "auto"):
            width = gaussian_width(dataset, train_ids)
        return KernelSpec("gaussian", width=float(width))
    return with_train_normalization(KernelSpec("precomputed"), dataset, train_ids)


def _singleton_ova_accuracy(dataset, kernel, landmarks, train_ids, valid_ids,
                            test_ids, loss, c_grid, train_seed, fit_bias):
    """BBS path for multi-class data: shared singleton embedding, one
    one-vs-all SVM per class, argmax prediction."""
    emb_tr = embed_singletons(dataset, kernel, landmarks, train_ids)
    emb_va = embed_singletons(dataset, kernel, landmarks, valid_ids)
    emb_te = embed_singletons(dataset, kernel, landmarks, test_ids)
    classes = dataset.class_ids()
    decisions = []
    for cls in classes:
        ova = _ova_view(dataset, cls)
        tr = EmbReplace(emb_tr, ova.labels[np.asarray(train_ids)])
        va = EmbReplace(emb_va, ova.labels[np.asarray(valid_ids)])
        model, _ = select_c(tr, va, loss, c_grid, train_seed, fit_bias=fit_bias)
        decisions.append(decision_values(model, emb_te.matrix))
    predicted = classes[np.argmax(np.column_stack(decisions), axis=1)]
    return float(np.mean(predicted == dataset.labels[np.asarray(test_ids)]))


class EmbReplace:
    """Embedded dataset view with substituted labels (one-vs-all retraining
    reuses the label-independent coordinate matrix)."""

    def __init__(self, base, labels):
        self.matrix = base.matrix
        self.labels = labels
        self.pair_set = base.pair_set
        self.transfer = base.transfer

    @property
    def d(self):
        return self.matrix.shape[1]


def _fixed_pair_accuracy(dataset, kernel, pairs, f: TransferFunction,
                         train_ids, valid_ids, test_ids, loss, c_grid,
                         train_seed, fit_bias):
    """Fixed-transfer pair path (the sign baseline and its relatives)."""
    emb_tr = embed_pairs(dataset, kernel, pairs, f, train_ids)
    emb_va = embed_pairs(dataset, kernel, pairs, f, valid_ids)
    emb_te = embed_pairs(dataset, kernel, pairs, f, test_ids)
    model, _ = select_c(emb_tr, emb_va, loss, c_grid, train_seed,
                        fit_bias=fit_bias)
    predicted = classify_values(decision_values(model, emb_te.matrix))
    return float(np.mean(predicted == emb_te.labels))


def run_method(method: str, dataset: Dataset, kernel: KernelSpec, train_ids,
               valid_ids, test_ids, d: int, landmark_seed: int,
               train_seed: int, family, loss, c_grid, fit_bias) -> dict:
    """One (method, landmark count) cell on one split; returns the test
    accuracy plus method-specific audit details."""
    plus_d = method.endswith("+d")
    base = method[:-2] if plus_d else method
    multiclass = dataset.num_classes > 2

    def pool():
        if plus_d:
            if multiclass:
                return lm.dselect_multiclass(dataset, kernel, train_ids, d,
                                             landmark_seed)
            return lm.dselect_landmarks(dataset, kernel, train_ids, d,
                                        landmark_seed)
        return lm.random_landmarks(dataset, train_ids, d, landmark_seed)

    if base == "bbs":
        landmarks = pool()
        if multiclass:
            acc = _singleton_ova_accuracy(dataset, kernel, landmarks,
                                          train_ids, valid_ids, test_ids,
                                          loss, c_grid, train_seed, fit_bias)
            return {"accuracy": acc, "landmark_ids": list(landmarks.ids)}
        emb_tr = embed_singletons(dataset, kernel, landmarks, train_ids)
        emb_va = embed_singletons(dataset, kernel, landmarks, valid_ids)
        emb_te = embed_singletons(dataset, kernel, landmarks, test_ids)
        model, chosen_c = select_c(emb_tr, emb_va, loss, c_grid, train_seed,
                                   fit_bias=fit_bias)
        predicted = classify_values(decision_values(model, emb_te.matrix))
        acc = float(np.mean(predicted == emb_te.labels))
        return {"accuracy": acc, "chosen_c": chosen_c,
                "landmark_ids": list(landmarks.ids)}

    def binary_pairs():
        if plus_d:
            _, pairs = lm.dselect(dataset, kernel, train_ids, d, landmark_seed)
            return pairs
        return lm.random_pairs(dataset, train_ids, d, landmark_seed)

    if base == "sign-baseline" or base.startswith("fixed:"):
        f = (TransferFunction("sign") if base == "sign-baseline"
             else parse_transfer(base.split(":", 1)[1]))
        if multiclass:
            result = ftune_s_ova(dataset, kernel, train_ids, valid_ids,
                                 pool(), d, TransferFamily((f,)), loss,
                                 c_grid, train_seed, fit_bias=fit_bias)
            predicted = predict_multiclass(result, dataset, kernel, test_ids)
            acc = float(np.mean(predicted == dataset.labels[np.asarray(test_ids)]))
            return {"accuracy": acc, "transfer": f.label}
        acc = _fixed_pair_accuracy(dataset, kernel, binary_pairs(), f,
                                   train_ids, valid_ids, test_ids, loss,
                                   c_grid, train_seed, fit_bias)
        return {"accuracy": acc, "transfer": f.label}

    if base == "ftune-s":
        if multiclass:
            result = ftune_s_ova(dataset, kernel, train_ids, valid_ids,
                                 pool(), d, family, loss, c_grid, train_seed,
                                 fit_bias=fit_bias)
            predicted = predict_multiclass(result, dataset, kernel, test_ids)
        else:
            result = ftune_s(dataset, kernel, train_ids, valid_ids,
                             binary_pairs(), family, loss, c_grid, train_seed,
                             fit_bias=fit_bias)
            predicted = predict_binary(result, dataset, kernel, test_ids)
        acc = float(np.mean(predicted == dataset.labels[np.asarray(test_ids)]))
        return {"accuracy": acc,
                "chosen_transfer": result.transfers[0].label,
                "validation_scores": result.validation_scores}

    if base == "ftune-m":
        result = ftune_m(dataset, kernel, train_ids, valid_ids, pool(), d,
                         family, loss, c_grid, train_seed, fit_bias=fit_bias)
        predicted = predict_multiclass(result, dataset, kernel, test_ids)
        acc = float(np.mean(predicted == dataset.labels[np.asarray(test_ids)]))
        return {"accuracy": acc,
                "chosen_transfers": [t.label for t in result.transfers],
                "validation_scores": result.validation_scores}

    raise ConfigError(f"unknown method: {method!r}")


def run_experiment(config: ExperimentConfig, dataset: Dataset | None = None) -> dict:
    """Execute the full protocol and return the (JSON-ready) report."""
    if dataset is None:
        if config.labels_path is None:
            raise ConfigError("config needs dataset paths or a dataset object")
        dataset = load_dataset(config.labels_path,
                               features_path=config.features_path,
                               similarity_path=config.similarity_path)
    family = parse_family(config.family)
    loss = hinge_loss()
    cells = {(m, d): {"accuracies": [], "errors": []}
             for m in config.methods for d in config.landmark_counts}
    for r in range(config.runs):
        split_seed = derive_seed(config.master_seed, r, 0)
        landmark_seed = derive_seed(config.master_seed, r, 1)
        train_seed = derive_seed(config.master_seed, r, 2)
        train_ids, valid_ids, test_ids = split(
            dataset, SplitSpec(config.train_frac, config.valid_frac,
                               config.test_frac, split_seed))
        kernel = _resolve_kernel(config, dataset, train_ids)
        for m in config.methods:
            for d in config.landmark_counts:
                try:
                    out = run_method(m, dataset, kernel, train_ids, valid_ids,
                                     test_ids, d, landmark_seed, train_seed,
                                     family, loss, config.c_grid,
                                     config.fit_bias)
                    cells[(m, d)]["accuracies"].append(out["accuracy"])
                except SimembedError as exc:
                    cells[(m, d)]["errors"].append(f"run {r}: {exc}")
    degraded = False
    cell_rows = []
    for (m, d), rec in cells.items():
        accs = rec["accuracies"]
        if not accs:
            degraded = True
        cell_rows.append({
            "method": m,
            "landmarks": d,
            "accuracies": accs,
            "mean": float(np.mean(accs)) if accs else None,
            "std": float(np.std(accs, ddof=1)) if len(accs) > 1 else 0.0,
            "errors": rec["errors"],
        })
    ttests = []
    if config.runs >= 2:
        for d in config.landmark_counts:
            for i, ma in enumerate(config.methods):
                for mb in config.methods[i + 1:]:
                    a = cells[(ma, d)]["accuracies"]
                    b = cells[(mb, d)]["accuracies"]
                    if len(a) < 2 or len(b) < 2:
                        continue
                    stat, p, sig = welch_t_test(a, b)
                    ttests.append({"method_a": ma, "method_b": mb,
                                   "landmarks": d, "statistic": stat,
                                   "p": p, "significant": sig})
    return {
        "version": REPORT_VERSION,
        "config": asdict(config),
        "cells": cell_rows,
        "ttests": ttests,
        "degraded": degraded,
    }


def welch_t_test(a, b):
    """Welch's unequal-variance two-sample t-test, two-sided.

    Degenerate rule when both samples are constant: p = 1 for equal means,
    p = 0 otherwise.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) < 2 or len(b) < 2:
        raise ConfigError("t-test needs at least 2 samples per side")
    va = float(np.var(a, ddof=1))
    vb = float(np.var(b, ddof=1))
    ma, mb = float(a.mean()), float(b.mean())
    if va == 0.0 and vb == 0.0:
        if ma == mb:
            return 0.0, 1.0, False
        return math.copysign(math.inf, ma - mb), 0.0, True
    sa, sb = va / len(a), vb / len(b)
    se = math.sqrt(sa + sb)
    stat = (ma - mb) / se
    df = (sa + sb) ** 2 / (sa**2 / (len(a) - 1) + sb**2 / (len(b) - 1))
    # two-sided p through the regularized incomplete beta function
    p = float(betainc(df / 2.0, 0.5, df / (df + stat * stat)))
    return stat, p, p < 0.05


def emit_report(report: dict, path) -> None:
    """Write the JSON report plus a flat per-run accuracy CSV next to it."""
    path = Path(path)
    path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    csv_path = path.with_suffix(".csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "landmarks", "run", "accuracy"])
        for cell in report["cells"]:
            for r, acc in enumerate(cell["accuracies"]):
                writer.writerow([cell["method"], cell["landmarks"], r, acc])


def load_report(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def curve_data(report: dict) -> list[dict]:
    """Accuracy-vs-landmark-count rows for external plotting."""
    counts = {cell["landmarks"] for cell in report["cells"]}
    if len(counts) < 2:
        raise ConfigError("curve data needs at least 2 landmark counts")
    rows = [{"method": cell["method"], "landmarks": cell["landmarks"],
             "mean": cell["mean"], "std": cell["std"]}
            for cell in report["cells"]]
    rows.sort(key=lambda row: (row["method"], row["landmarks"]))
    return rows
