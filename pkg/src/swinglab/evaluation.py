"""Repeated leave-one-out cross-validation and accuracy reporting.

Each fold trains on N-1 swings (normalizer and centers refitted from
scratch) and predicts the held-out swing. Per-fold seeds derive from the
master seed and the held-out swing's id — never its position — so permuting
the input changes no fold outcome. Repeats rerun the whole LOO pass under
distinct derived seeds and are averaged, never pooled.

A fold whose training run is refused (too few samples for the requested
capacity) counts as an error and is flagged; a configuration refused in
every fold of every repeat renders as "N/A" rather than a number.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .errors import TrainingRefusedError
from .features import FeatureVector
from .rbfnet import BAD, GOOD, RbfModel, TrainConfig, predict_score, train
from .seeds import derive_seed

DEFAULT_REPEATS = 12


@dataclass(frozen=True)
class FoldResult:
    """One leave-one-out fold. ``predicted``/``score`` are None iff refused."""

    held_out_id: str
    actual: str
    predicted: str | None
    score: float | None
    epochs_to_convergence: int | None
    converged: bool
    refused: bool = False
    refusal_reason: str | None = None

    @property
    def error(self) -> int:
        """The fold's contribution to the error count: refusals count as errors."""
        if self.refused:
            return 1
        return int(self.predicted != self.actual)


@dataclass(frozen=True)
class LoocvReport:
    """Per-(criterion, hidden-unit count) summary over repeated LOO passes."""

    criterion: str
    hidden_units: int
    repeats: int
    accuracies: list[float]  # one per repeat, percentages
    mean_accuracy: float
    sample_count: int
    bad_fraction: float  # percentage of bad labels in the data
    master_seed: int
    repeat_seeds: list[int]
    refused_folds_per_repeat: list[int]
    all_folds_refused: bool
    fold_results: list[list[FoldResult]] = field(repr=False, default_factory=list)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "hidden_units": self.hidden_units,
            "repeats": self.repeats,
            "accuracies": [float(a) for a in self.accuracies],
            "mean_accuracy": float(self.mean_accuracy),
            "sample_count": self.sample_count,
            "bad_fraction": float(self.bad_fraction),
            "master_seed": self.master_seed,
            "repeat_seeds": list(self.repeat_seeds),
            "refused_folds_per_repeat": list(self.refused_folds_per_repeat),
            "all_folds_refused": self.all_folds_refused,
            "folds": [
                [
                    {
                        "held_out_id": fr.held_out_id,
                        "actual": fr.actual,
                        "predicted": fr.predicted,
                        "score": fr.score,
                        "epochs_to_convergence": fr.epochs_to_convergence,
                        "converged": fr.converged,
                        "refused": fr.refused,
                        "refusal_reason": fr.refusal_reason,
                    }
                    for fr in repeat
                ]
                for repeat in self.fold_results
            ],
        }


def accuracy(errors: Sequence[int]) -> float:
    """Classification accuracy percentage from 0/1 error indicators, 1 decimal."""
    if len(errors) == 0:
        raise ValueError("accuracy needs at least one error indicator")
    if any(e not in (0, 1) for e in errors):
        raise ValueError("error indicators must be 0 or 1")
    return round((1.0 - sum(errors) / len(errors)) * 100.0, 1)


def _check_alignment(features: Sequence[FeatureVector], labels: Mapping[str, str]) -> list[str]:
    ids = [f.swing_id for f in features]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ValueError(f"duplicate swing ids {dupes}")
    missing = sorted(set(ids) - set(labels))
    if missing:
        raise ValueError(f"labels missing for swings {missing}")
    return ids


def loocv(
    features: Sequence[FeatureVector],
    labels: Mapping[str, str],
    config: TrainConfig,
    master_seed: int | None = None,
) -> tuple[list[FoldResult], float]:
    """One leave-one-out pass; returns per-fold results and the accuracy.

    Fold order and training-set row order are fixed by sorting on swing_id,
    and each fold's seed is derive_seed(master_seed, "fold", held_out_id),
    so results are independent of input ordering.
    """
    _check_alignment(features, labels)
    if len(features) < 2:
        raise ValueError(f"leave-one-out needs at least 2 swings, got {len(features)}")
    if master_seed is None:
        master_seed = config.rng_seed
    ordered = sorted(features, key=lambda f: f.swing_id)

    folds: list[FoldResult] = []
    for i, held_out in enumerate(ordered):
        rest = ordered[:i] + ordered[i + 1 :]
        X = np.vstack([f.values for f in rest])
        y = [labels[f.swing_id] for f in rest]
        fold_cfg = replace(config, rng_seed=derive_seed(master_seed, "fold", held_out.swing_id))
        actual = labels[held_out.swing_id]
        try:
            model: RbfModel = train(X, y, fold_cfg)
        except TrainingRefusedError as exc:
            folds.append(
                FoldResult(
                    held_out_id=held_out.swing_id,
                    actual=actual,
                    predicted=None,
                    score=None,
                    epochs_to_convergence=None,
                    converged=False,
                    refused=True,
                    refusal_reason=str(exc),
                )
            )
            continue
        score = float(predict_score(model, held_out.values))
        folds.append(
            FoldResult(
                held_out_id=held_out.swing_id,
                actual=actual,
                predicted=BAD if score >= 0.5 else GOOD,
                score=score,
                epochs_to_convergence=int(model.diagnostics["clustering_epochs"]),
                converged=bool(model.diagnostics["clustering_converged"]),
            )
        )
    return folds, accuracy([f.error for f in folds])


def repeat_loocv(
    features: Sequence[FeatureVector],
    labels: Mapping[str, str],
    config: TrainConfig,
    repeats: int = DEFAULT_REPEATS,
    master_seed: int | None = None,
    criterion: str = "",
) -> LoocvReport:
    """Run loocv under ``repeats`` derived seeds and average the accuracies."""
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    ids = _check_alignment(features, labels)
    if master_seed is None:
        master_seed = config.rng_seed
    n_bad = sum(1 for i in ids if labels[i] == BAD)

    repeat_seeds = [derive_seed(master_seed, "repeat", str(r)) for r in range(repeats)]
    accuracies: list[float] = []
    refused_counts: list[int] = []
    all_folds: list[list[FoldResult]] = []
    for seed_r in repeat_seeds:
        folds, acc = loocv(features, labels, config, master_seed=seed_r)
        accuracies.append(acc)
        refused_counts.append(sum(1 for f in folds if f.refused))
        all_folds.append(folds)

    total_folds = repeats * len(ids)
    return LoocvReport(
        criterion=criterion,
        hidden_units=config.hidden_units,
        repeats=repeats,
        accuracies=accuracies,
        mean_accuracy=float(np.mean(accuracies)),
        sample_count=len(ids),
        bad_fraction=round(100.0 * n_bad / len(ids), 1),
        master_seed=master_seed,
        repeat_seeds=repeat_seeds,
        refused_folds_per_repeat=refused_counts,
        all_folds_refused=sum(refused_counts) == total_folds,
        fold_results=all_folds,
    )


def sweep_hidden_units(
    features: Sequence[FeatureVector],
    labels_by_criterion: Mapping[str, Mapping[str, str]],
    h_values: Sequence[int],
    repeats: int = DEFAULT_REPEATS,
    master_seed: int = 0,
    base_config: TrainConfig | None = None,
) -> list[LoocvReport]:
    """One LoocvReport per (criterion, hidden-unit count), criteria sorted."""
    if not h_values:
        raise ValueError("h_values must be non-empty")
    reports: list[LoocvReport] = []
    for criterion in sorted(labels_by_criterion):
        labels = labels_by_criterion[criterion]
        for h in h_values:
            if base_config is None:
                cfg = TrainConfig(hidden_units=h, rng_seed=master_seed)
            else:
                cfg = replace(base_config, hidden_units=h)
            reports.append(
                repeat_loocv(
                    features,
                    labels,
                    cfg,
                    repeats=repeats,
                    master_seed=master_seed,
                    criterion=criterion,
                )
            )
    return reports


def render_sweep_table(reports: Sequence[LoocvReport]) -> str:
    """Text table: criterion, bad-swing portion, hidden units, mean accuracy.

    Configurations refused in every fold of every repeat render as N/A.
    """
    header = (
        f"{'criterion':<16}{'bad swings %':>14}{'hidden units':>14}{'mean accuracy %':>18}"
    )
    lines = [header, "-" * len(header)]
    for r in reports:
        acc = "N/A" if r.all_folds_refused else f"{r.mean_accuracy:.1f}"
        lines.append(
            f"{r.criterion:<16}{r.bad_fraction:>14.1f}{r.hidden_units:>14d}{acc:>18}"
        )
    return "\n".join(lines)


def majority_baseline(labels: Mapping[str, str]) -> tuple[list[FoldResult], float]:
    """Leave-one-out majority-class predictor (ties escalate to bad).

    The no-information floor any real model has to beat: each fold predicts
    the most common label among the other N-1 swings.
    """
    if len(labels) < 2:
        raise ValueError("majority baseline needs at least 2 labelled swings")
    folds: list[FoldResult] = []
    for held_out in sorted(labels):
        rest = [labels[i] for i in labels if i != held_out]
        n_bad = sum(1 for lab in rest if lab == BAD)
        predicted = BAD if n_bad * 2 >= len(rest) else GOOD
        folds.append(
            FoldResult(
                held_out_id=held_out,
                actual=labels[held_out],
                predicted=predicted,
                score=None,
                epochs_to_convergence=None,
                converged=True,
            )
        )
    return folds, accuracy([f.error for f in folds])
