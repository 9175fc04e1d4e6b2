"""Gaussian radial-basis-function binary classifier.

Two-phase training: unsupervised k-means center placement over normalized
feature vectors, then a closed-form minimum-norm least-squares solve of the
linear output layer (an iterative gradient solver is available behind config
for protocol-fidelity experiments). Randomness is confined to center
initialization and always seeded.

Label coding: "bad" -> 1, "good" -> 0; a score >= 0.5 classifies as bad (the
flagging threshold escalates ties, since surfacing errors is the point).

Small-sample refusal: a Gaussian layer of h units plus bias has 2h+2 free
parameters driven by the training set (h centers, h widths, h+1 output
weights, normalizer aside); we require at least one more training vector than
that, i.e. N >= 2h+3, and refuse to train otherwise rather than return a
model that interpolates noise. On a 14-swing set this admits h up to 5.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ModelStateError, TrainingRefusedError
from .features import Normalizer, apply_normalizer, fit_normalizer
from .ioutil import atomic_open

GOOD, BAD = "good", "bad"

MODEL_FORMAT = "rbf-model/1"

WIDTH_FLOOR = 1e-6

WIDTH_HEURISTICS = ("nearest-center", "global")
CENTER_INITS = ("sample", "spread")
OUTPUT_SOLVERS = ("least_squares", "gradient")


@dataclass(frozen=True)
class TrainConfig:
    """Training knobs. Every field participates in model serialization.

    center_init "sample" draws h distinct training points with the seeded
    generator; "spread" is a deterministic farthest-point ordering (no
    randomness at all — repeats with different seeds coincide exactly).
    output_solver "least_squares" is the closed-form solve; "gradient"
    iterates plain gradient descent on the output layer, capped at
    max_epochs, stopping when the sum-of-squares improvement per epoch
    drops below convergence_tol.

    The trainer defaults to the "global" width rule: on the small training
    sets this model targets, k-means regularly splits a tight cluster, and
    nearest-center widths then collapse, starving held-out points of
    activation. The global rule keeps every unit's reach proportional to the
    occupied feature-space diameter. set_widths itself keeps
    "nearest-center" as its own default for direct geometric use.
    """

    hidden_units: int
    rng_seed: int = 0
    max_epochs: int = 100
    convergence_tol: float = 1e-10
    width_heuristic: str = "global"
    center_init: str = "sample"
    output_solver: str = "least_squares"

    def __post_init__(self):
        if self.hidden_units < 1:
            raise ValueError(f"hidden_units must be >= 1, got {self.hidden_units}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if self.convergence_tol < 0:
            raise ValueError(f"convergence_tol must be >= 0, got {self.convergence_tol}")
        if self.width_heuristic not in WIDTH_HEURISTICS:
            raise ValueError(f"unknown width_heuristic {self.width_heuristic!r}; expected {WIDTH_HEURISTICS}")
        if self.center_init not in CENTER_INITS:
            raise ValueError(f"unknown center_init {self.center_init!r}; expected {CENTER_INITS}")
        if self.output_solver not in OUTPUT_SOLVERS:
            raise ValueError(f"unknown output_solver {self.output_solver!r}; expected {OUTPUT_SOLVERS}")


@dataclass(frozen=True)
class CenterPlacement:
    centers: np.ndarray  # (h, d)
    epochs_run: int
    converged: bool
    duplicate_centers: bool


def min_training_size(hidden_units: int) -> int:
    """Smallest training-set size accepted for a given hidden-unit count."""
    return 2 * hidden_units + 3


def _farthest_point_order(X: np.ndarray, k: int) -> np.ndarray:
    """Deterministic spread initialization: start nearest the mean, then
    repeatedly take the point farthest from all chosen so far (ties -> lowest
    index)."""
    mean = X.mean(axis=0)
    d0 = np.linalg.norm(X - mean, axis=1)
    chosen = [int(np.argmin(d0))]
    min_dist = np.linalg.norm(X - X[chosen[0]], axis=1)
    while len(chosen) < k:
        nxt = int(np.argmax(min_dist))
        chosen.append(nxt)
        min_dist = np.minimum(min_dist, np.linalg.norm(X - X[nxt], axis=1))
    return X[chosen].copy()


def place_centers(
    X: np.ndarray,
    hidden_units: int,
    seed: int,
    max_epochs: int = 100,
    center_init: str = "sample",
) -> CenterPlacement:
    """k-means center placement with seeded initialization.

    Initial centers are h distinct training points; Lloyd iterations are
    capped at max_epochs and stop early as soon as assignments stop changing
    (equivalently when the center update is a fixed point). Points tie-break
    to the lowest center index; a cluster left empty keeps its old center.
    Duplicate final centers are legal (identical training points) and flagged.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected (N, d) features, got shape {X.shape}")
    N = X.shape[0]
    if hidden_units < 1:
        raise ValueError(f"hidden_units must be >= 1, got {hidden_units}")
    if hidden_units > N:
        raise ValueError(f"cannot place {hidden_units} centers from {N} training points")
    if center_init not in CENTER_INITS:
        raise ValueError(f"unknown center_init {center_init!r}; expected {CENTER_INITS}")

    if center_init == "spread":
        centers = _farthest_point_order(X, hidden_units)
    else:
        rng = np.random.default_rng(seed)
        idx = rng.choice(N, size=hidden_units, replace=False)
        centers = X[idx].copy()

    prev_assign: np.ndarray | None = None
    epochs_run = 0
    converged = False
    for _ in range(max_epochs):
        epochs_run += 1
        # (N, h) distances; argmin ties resolve to the lowest center index.
        dists = np.linalg.norm(X[:, None, :] - centers[None, :, :], axis=2)
        assign = np.argmin(dists, axis=1)
        if prev_assign is not None and np.array_equal(assign, prev_assign):
            converged = True
            break
        new_centers = centers.copy()
        for j in range(hidden_units):
            members = X[assign == j]
            if members.shape[0]:
                new_centers[j] = members.mean(axis=0)
        if np.array_equal(new_centers, centers):
            converged = True
            break
        centers = new_centers
        prev_assign = assign

    dup = False
    for j in range(hidden_units):
        if any(np.array_equal(centers[j], centers[i]) for i in range(j)):
            dup = True
            break
    return CenterPlacement(
        centers=centers, epochs_run=epochs_run, converged=converged, duplicate_centers=dup
    )


def set_widths(
    centers: np.ndarray,
    heuristic: str = "nearest-center",
    features: np.ndarray | None = None,
) -> np.ndarray:
    """Per-unit Gaussian widths from center geometry.

    "nearest-center": sigma_j = distance from center j to its nearest other
    center. "global": sigma_j = d_max / sqrt(2h) for all j, d_max the largest
    pairwise center distance. A single center has no neighbours, so both
    heuristics fall back to the mean training-point distance to that center
    (requires ``features``). Widths are floored at 1e-6 with a warning, so
    duplicate centers cannot produce zero-width units.
    """
    centers = np.asarray(centers, dtype=np.float64)
    if centers.ndim != 2 or centers.shape[0] < 1:
        raise ValueError(f"expected (h, d) centers with h >= 1, got shape {centers.shape}")
    if heuristic not in WIDTH_HEURISTICS:
        raise ValueError(f"unknown width_heuristic {heuristic!r}; expected {WIDTH_HEURISTICS}")
    h = centers.shape[0]

    if h == 1:
        if features is None:
            raise ValueError("a single center needs training features for the width fallback")
        features = np.asarray(features, dtype=np.float64)
        widths = np.array([float(np.mean(np.linalg.norm(features - centers[0], axis=1)))])
    elif heuristic == "nearest-center":
        dists = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=2)
        np.fill_diagonal(dists, np.inf)
        widths = dists.min(axis=1)
    else:
        dists = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=2)
        d_max = float(dists.max())
        widths = np.full(h, d_max / np.sqrt(2.0 * h))

    if (widths < WIDTH_FLOOR).any():
        warnings.warn(
            f"{int((widths < WIDTH_FLOOR).sum())} unit width(s) floored at {WIDTH_FLOOR} "
            "(duplicate or near-duplicate centers)",
            stacklevel=2,
        )
        widths = np.maximum(widths, WIDTH_FLOOR)
    return widths


def activation_matrix(X: np.ndarray, centers: np.ndarray, widths: np.ndarray) -> np.ndarray:
    """(N, h+1) Gaussian activations with the bias column appended last."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    sq = np.sum((X[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    phi = np.exp(-sq / (2.0 * np.asarray(widths, dtype=np.float64) ** 2))
    return np.hstack([phi, np.ones((X.shape[0], 1))])


def solve_output_weights(activations: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares output weights for a bias-augmented design."""
    activations = np.asarray(activations, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    w, *_ = np.linalg.lstsq(activations, targets, rcond=None)
    return w


def descend_output_weights(
    activations: np.ndarray,
    targets: np.ndarray,
    max_epochs: int,
    convergence_tol: float,
) -> tuple[np.ndarray, int, bool]:
    """Gradient-descent alternative to the closed-form solve.

    Plain batch gradient descent on the sum of squares from a zero start,
    step 0.5 / sigma_max(design)^2 (safely inside the stability bound
    1 / sigma_max^2). Returns (weights, epochs_run, converged).
    """
    A = np.asarray(activations, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    sigma_max = float(np.linalg.svd(A, compute_uv=False)[0])
    if sigma_max == 0.0:
        return np.zeros(A.shape[1]), 0, True
    lr = 0.5 / (sigma_max * sigma_max)
    w = np.zeros(A.shape[1])
    resid = A @ w - t
    sse = float(resid @ resid)
    epochs_run = 0
    converged = False
    for _ in range(max_epochs):
        epochs_run += 1
        w = w - lr * (2.0 * (A.T @ resid))
        resid = A @ w - t
        new_sse = float(resid @ resid)
        if abs(sse - new_sse) < convergence_tol:
            sse = new_sse
            converged = True
            break
        sse = new_sse
    return w, epochs_run, converged


@dataclass(frozen=True)
class RbfModel:
    """Trained classifier: normalizer + Gaussian layer + linear output."""

    centers: np.ndarray  # (h, d)
    widths: np.ndarray  # (h,)
    weights: np.ndarray  # (h,)
    bias: float
    normalizer: Normalizer
    config: TrainConfig
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=np.float64)
        widths = np.asarray(self.widths, dtype=np.float64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if centers.ndim != 2:
            raise ModelStateError(f"centers must be (h, d), got shape {centers.shape}")
        h = centers.shape[0]
        if widths.shape != (h,) or weights.shape != (h,):
            raise ModelStateError(
                f"widths {widths.shape} and weights {weights.shape} must both be ({h},)"
            )
        if (widths <= 0).any():
            raise ModelStateError("all widths must be positive")
        if centers.shape[1] != self.normalizer.dimension:
            raise ModelStateError(
                f"center dimension {centers.shape[1]} does not match "
                f"normalizer dimension {self.normalizer.dimension}"
            )
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "weights", weights)

    @property
    def hidden_units(self) -> int:
        return self.centers.shape[0]


def predict_score(model: RbfModel, raw_features: np.ndarray) -> np.ndarray:
    """Raw classifier score(s): bias + sum_j w_j exp(-|x-c_j|^2 / (2 sigma_j^2)).

    Input is un-normalized feature vectors; the model applies its stored
    normalizer. Accepts (d,) or (N, d); returns a scalar array respectively
    (N,) scores.
    """
    raw = np.asarray(raw_features, dtype=np.float64)
    single = raw.ndim == 1
    X = apply_normalizer(np.atleast_2d(raw), model.normalizer)
    phi = activation_matrix(X, model.centers, model.widths)[:, :-1]
    scores = model.bias + phi @ model.weights
    return scores[0] if single else scores


def predict_label(model: RbfModel, raw_features: np.ndarray) -> str | list[str]:
    """Classify: bad iff score >= 0.5 (ties escalate to bad)."""
    scores = predict_score(model, raw_features)
    if np.ndim(scores) == 0:
        return BAD if scores >= 0.5 else GOOD
    return [BAD if s >= 0.5 else GOOD for s in scores]


def targets_from_labels(labels) -> np.ndarray:
    out = []
    for lab in labels:
        if lab not in (GOOD, BAD):
            raise ValueError(f"label must be 'good' or 'bad', got {lab!r}")
        out.append(1.0 if lab == BAD else 0.0)
    return np.asarray(out, dtype=np.float64)


def train(X: np.ndarray, labels, config: TrainConfig) -> RbfModel:
    """Fit normalizer, place centers, set widths, solve the output layer.

    Refuses to train when the set is too small for the requested capacity
    (N < 2h+3, see module docstring). A single-class training set is legal
    but warned about — the model will predict that class everywhere.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise TrainingRefusedError(f"training needs at least 2 vectors, got shape {X.shape}")
    targets = targets_from_labels(labels)
    if targets.shape[0] != X.shape[0]:
        raise ValueError(f"{X.shape[0]} feature vectors but {targets.shape[0]} labels")
    N, h = X.shape[0], config.hidden_units
    if h < 2:
        raise ValueError(f"classifier training needs hidden_units >= 2, got {h}")
    if N < min_training_size(h):
        raise TrainingRefusedError(
            f"{h} hidden units need at least {min_training_size(h)} training vectors "
            f"(2h+3), got {N}: too few samples to constrain the model"
        )
    single_class = len(set(targets.tolist())) < 2
    if single_class:
        warnings.warn("training set contains a single class", stacklevel=2)

    norm = fit_normalizer(X)
    Xn = apply_normalizer(X, norm)
    placement = place_centers(
        Xn, h, seed=config.rng_seed, max_epochs=config.max_epochs, center_init=config.center_init
    )
    widths = set_widths(placement.centers, config.width_heuristic, features=Xn)
    design = activation_matrix(Xn, placement.centers, widths)

    diagnostics = {
        "training_size": int(N),
        "clustering_epochs": placement.epochs_run,
        "clustering_converged": placement.converged,
        "duplicate_centers": placement.duplicate_centers,
        "single_class": single_class,
    }
    if config.output_solver == "gradient":
        w, solver_epochs, solver_converged = descend_output_weights(
            design, targets, config.max_epochs, config.convergence_tol
        )
        diagnostics["solver_epochs"] = solver_epochs
        diagnostics["solver_converged"] = solver_converged
    else:
        w = solve_output_weights(design, targets)

    resid = design @ w - targets
    diagnostics["training_sse"] = float(resid @ resid)

    return RbfModel(
        centers=placement.centers,
        widths=widths,
        weights=w[:-1],
        bias=float(w[-1]),
        normalizer=norm,
        config=config,
        diagnostics=diagnostics,
    )


def model_to_dict(model: RbfModel) -> dict:
    return {
        "format": MODEL_FORMAT,
        "hidden_units": model.hidden_units,
        "centers": [[float(v) for v in row] for row in model.centers],
        "widths": [float(v) for v in model.widths],
        "weights": [float(v) for v in model.weights],
        "bias": float(model.bias),
        "normalizer": {
            "offsets": [float(v) for v in model.normalizer.offsets],
            "scales": [float(v) for v in model.normalizer.scales],
        },
        "config": {
            "hidden_units": model.config.hidden_units,
            "rng_seed": model.config.rng_seed,
            "max_epochs": model.config.max_epochs,
            "convergence_tol": model.config.convergence_tol,
            "width_heuristic": model.config.width_heuristic,
            "center_init": model.config.center_init,
            "output_solver": model.config.output_solver,
        },
        "diagnostics": dict(model.diagnostics),
    }


def model_from_dict(data: dict) -> RbfModel:
    if not isinstance(data, dict) or data.get("format") != MODEL_FORMAT:
        raise ModelStateError(
            f"unsupported model format {data.get('format') if isinstance(data, dict) else data!r}; "
            f"expected {MODEL_FORMAT!r}"
        )
    try:
        cfg = TrainConfig(**data["config"])
        norm = Normalizer(
            offsets=np.asarray(data["normalizer"]["offsets"], dtype=np.float64),
            scales=np.asarray(data["normalizer"]["scales"], dtype=np.float64),
        )
        return RbfModel(
            centers=np.asarray(data["centers"], dtype=np.float64),
            widths=np.asarray(data["widths"], dtype=np.float64),
            weights=np.asarray(data["weights"], dtype=np.float64),
            bias=float(data["bias"]),
            normalizer=norm,
            config=cfg,
            diagnostics=dict(data.get("diagnostics", {})),
        )
    except (KeyError, TypeError) as exc:
        raise ModelStateError(f"malformed model file: {exc}") from None


def save_model(model: RbfModel, path: str) -> None:
    """JSON serialization; floats survive save -> load bit-exactly."""
    with atomic_open(path) as f:
        json.dump(model_to_dict(model), f, indent=2, sort_keys=True, allow_nan=False)
        f.write("\n")


def load_model(path: str) -> RbfModel:
    with open(path, "r", encoding="utf-8") as f:
        return model_from_dict(json.load(f))
