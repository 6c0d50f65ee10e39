"""Command-line interface.

Subcommands: ``experiment`` (full multi-run comparison from a JSON config),
``ftune`` (one method on one split, with the validation table for audit),
``embed`` (dump embedded coordinates to CSV), ``dselect`` (print the greedy
landmark ids), and ``verify-theory`` (Monte-Carlo guarantee checks).

Exit codes: 0 success, 2 configuration error, 3 data error, 4 degraded
report (some experiment cell had zero successful runs).
"""

from __future__ import annotations

import functools
import json
import sys

import click
import numpy as np

from .data import (
    KernelSpec,
    SplitSpec,
    gaussian_width,
    load_dataset,
    split,
    with_train_normalization,
)
from .embedding import dump_embedding, embed_pairs, embed_singletons
from .errors import ConfigError, SimembedError
from .goodness import GoodnessParams, verify_theorem2, verify_theorem7
from .harness import emit_report, load_config, run_experiment, run_method
from .landmark import dselect_landmarks, random_landmarks, random_pairs
from .seeds import derive_seed
from .trainer import DEFAULT_C_GRID, hinge_loss
from .transfer import parse_family, parse_transfer


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(2)
        except (SimembedError, OSError) as exc:
            click.echo(f"data error: {exc}", err=True)
            sys.exit(3)

    return wrapper


def _dataset_options(fn):
    fn = click.option("--labels", "labels_path", required=True,
                      type=click.Path(), help="Label CSV, one integer per row.")(fn)
    fn = click.option("--features", "features_path", type=click.Path(),
                      help="Feature CSV (Gaussian kernel).")(fn)
    fn = click.option("--similarity", "similarity_path", type=click.Path(),
                      help="Dense precomputed similarity CSV.")(fn)
    fn = click.option("--width", default="auto", show_default=True,
                      help="Gaussian width, or 'auto' for the mean pairwise "
                           "distance of the reference points.")(fn)
    return fn


def _load(labels_path, features_path, similarity_path):
    if (features_path is None) == (similarity_path is None):
        raise ConfigError("give exactly one of --features / --similarity")
    return load_dataset(labels_path, features_path=features_path,
                        similarity_path=similarity_path)


def _kernel_for(dataset, width, reference_ids):
    """Kernel spec with width / normalization fixed by the reference ids."""
    if dataset.features is not None:
        if width == "auto":
            return KernelSpec("gaussian",
                              width=gaussian_width(dataset, reference_ids))
        return KernelSpec("gaussian", width=float(width))
    return with_train_normalization(KernelSpec("precomputed"), dataset,
                                    reference_ids)


def _emit_json(payload, out):
    text = json.dumps(payload, sort_keys=True, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@click.group()
def main():
    """Similarity-based classification via landmarked embeddings."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(),
              help="JSON experiment configuration.")
@click.option("--out", default="report.json", show_default=True,
              type=click.Path(), help="Report JSON path (CSV written beside it).")
@_handle_errors
def experiment(config_path, out):
    """Run the full multi-run method comparison and write the report."""
    config = load_config(config_path)
    report = run_experiment(config)
    emit_report(report, out)
    if report["degraded"]:
        click.echo("degraded report: some cell had zero successful runs",
                   err=True)
        sys.exit(4)


@main.command()
@_dataset_options
@click.option("--method", default="ftune-s", show_default=True,
              help="ftune-s | ftune-m | bbs | sign-baseline (append +d for "
                   "greedy landmark selection).")
@click.option("--transfer", default=None,
              help="Fix a single transfer (ramp:<slope> | sign | identity) "
                   "instead of searching; overrides --method.")
@click.option("--family", default="default", show_default=True,
              help="Transfer family: default | ramp:<s1,s2,...>.")
@click.option("--landmarks", default=30, show_default=True, type=int)
@click.option("--select", "selection", default="random", show_default=True,
              type=click.Choice(["random", "dselect"]))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--splits", default="0.7,0.1,0.2", show_default=True,
              help="train,valid,test fractions.")
@click.option("--out", default=None, type=click.Path(),
              help="Result JSON path (stdout when omitted).")
@_handle_errors
def ftune(labels_path, features_path, similarity_path, width, method,
          transfer, family, landmarks, selection, seed, splits, out):
    """Train and evaluate one method on a single split."""
    dataset = _load(labels_path, features_path, similarity_path)
    try:
        fracs = [float(v) for v in splits.split(",")]
        train_frac, valid_frac, test_frac = fracs
    except ValueError as exc:
        raise ConfigError(f"bad --splits {splits!r}") from exc
    if transfer is not None:
        method = f"fixed:{parse_transfer(transfer).label}"
    if selection == "dselect" and not method.endswith("+d"):
        method += "+d"
    split_seed = derive_seed(seed, 0, 0)
    landmark_seed = derive_seed(seed, 0, 1)
    train_seed = derive_seed(seed, 0, 2)
    train_ids, valid_ids, test_ids = split(
        dataset, SplitSpec(train_frac, valid_frac, test_frac, split_seed))
    kernel = _kernel_for(dataset, width, train_ids)
    result = run_method(method, dataset, kernel, train_ids, valid_ids,
                        test_ids, landmarks, landmark_seed, train_seed,
                        parse_family(family), hinge_loss(), DEFAULT_C_GRID,
                        True)
    result.update({"method": method, "landmarks": landmarks, "seed": seed})
    _emit_json(result, out)


@main.command()
@_dataset_options
@click.option("--transfer", default="identity", show_default=True,
              help="ramp:<slope> | sign | identity (pair mode only).")
@click.option("--landmarks", default=30, show_default=True, type=int)
@click.option("--select", "selection", default="random", show_default=True,
              type=click.Choice(["random", "dselect"]))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--mode", default="pairs", show_default=True,
              type=click.Choice(["pairs", "singletons"]))
@click.option("--out", required=True, type=click.Path(),
              help="Output CSV of embedded coordinates, one row per point.")
@_handle_errors
def embed(labels_path, features_path, similarity_path, width, transfer,
          landmarks, selection, seed, mode, out):
    """Embed every point into the landmarked space and dump it as CSV."""
    dataset = _load(labels_path, features_path, similarity_path)
    all_ids = np.arange(dataset.n)
    kernel = _kernel_for(dataset, width, all_ids)
    if mode == "singletons":
        if selection == "dselect":
            lset = dselect_landmarks(dataset, kernel, all_ids, landmarks, seed)
        else:
            lset = random_landmarks(dataset, all_ids, landmarks, seed)
        embedded = embed_singletons(dataset, kernel, lset, all_ids)
    else:
        if selection == "dselect":
            from .landmark import dselect as dselect_pairs
            _, pairs = dselect_pairs(dataset, kernel, all_ids, landmarks, seed)
        else:
            pairs = random_pairs(dataset, all_ids, landmarks, seed)
        embedded = embed_pairs(dataset, kernel, pairs,
                               parse_transfer(transfer), all_ids)
    dump_embedding(embedded, out)


@main.command()
@_dataset_options
@click.option("--landmarks", default=30, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--mode", default="similarity", show_default=True,
              type=click.Choice(["similarity", "distance"]))
@_handle_errors
def dselect(labels_path, features_path, similarity_path, width, landmarks,
            seed, mode):
    """Print the greedy diverse landmark ids as JSON."""
    dataset = _load(labels_path, features_path, similarity_path)
    all_ids = np.arange(dataset.n)
    kernel = _kernel_for(dataset, width, all_ids)
    lset = dselect_landmarks(dataset, kernel, all_ids, landmarks, seed,
                             mode=mode)
    click.echo(json.dumps({"landmark_ids": list(lset.ids)}))


@main.command("verify-theory")
@click.option("--theorem", required=True, type=click.Choice(["2", "7"]))
@click.option("--epsilon", default=0.0, show_default=True, type=float)
@click.option("--gamma", default=0.2, show_default=True, type=float)
@click.option("--b-bound", default=1.0, show_default=True, type=float)
@click.option("--epsilon-one", default=0.05, show_default=True, type=float)
@click.option("--delta", default=0.1, show_default=True, type=float)
@click.option("--trials", default=50, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--n", default=200, show_default=True, type=int,
              help="Planted instance size.")
@click.option("--noise", default=0.1, show_default=True, type=float)
@click.option("--d", default=None, type=int,
              help="Landmark pair count override (default: prescribed value).")
@click.option("--margin", default=1.0, show_default=True, type=float,
              help="Hinge margin for the surrogate-loss check.")
@click.option("--out", default=None, type=click.Path(),
              help="Report JSON path (stdout when omitted).")
@_handle_errors
def verify_theory(theorem, epsilon, gamma, b_bound, epsilon_one, delta,
                  trials, seed, n, noise, d, margin, out):
    """Monte-Carlo check of the margin / surrogate-loss guarantees."""
    params = GoodnessParams(epsilon=epsilon, gamma=gamma, b_bound=b_bound,
                            epsilon_one=epsilon_one, delta=delta)
    if theorem == "2":
        report = verify_theorem2(params, trials, seed, n=n, noise=noise, d=d)
    else:
        report = verify_theorem7(params, hinge_loss(margin), trials, seed,
                                 n=n, noise=noise, d=d)
    _emit_json(report, out)


if __name__ == "__main__":
    main()
