"""Spatial-pattern feature compression and normalization.

A swing's sweet-spot trajectory and its flow-vector tip curve are each
projected onto two anatomical planes (sagittal: forward/vertical; transverse:
forward/lateral) and summarized by quadratic least-squares fits. The three
coefficients of each of the four fits, in fixed order, form a 12-value
feature vector regardless of swing duration.

Feature order:
    f0..f2   sagittal tip curve      (quadratic, linear, constant)
    f3..f5   sagittal trajectory
    f6..f8   transverse tip curve
    f9..f11  transverse trajectory

Feature normalization maps each coordinate into [-0.8, +0.8] with an affine
map fitted on training data only; constant features map to 0. Values outside
the training range are NOT clipped — they extrapolate past the band, which is
the honest behaviour for unseen data.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError
from .ioutil import atomic_open

FEATURE_COUNT = 12

PLANES = ("sagittal", "transverse")

FEATURE_LABELS = tuple(
    f"{plane}_{curve}_{coeff}"
    for plane in PLANES
    for curve in ("tip_curve", "trajectory")
    for coeff in ("quad", "lin", "const")
)

NORMALIZED_BAND = (-0.8, 0.8)


@dataclass(frozen=True)
class QuadFit:
    """Quadratic fit y ~ quad*a^2 + lin*a + const, with its RMS residual."""

    quad: float
    lin: float
    const: float
    rms_residual: float
    sample_count: int

    @property
    def coefficients(self) -> tuple[float, float, float]:
        return (self.quad, self.lin, self.const)

    def evaluate(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.float64)
        return self.quad * a * a + self.lin * a + self.const


@dataclass(frozen=True)
class FeatureVector:
    swing_id: str
    values: np.ndarray  # (12,) float64

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (FEATURE_COUNT,):
            raise ValueError(f"feature vector must have shape ({FEATURE_COUNT},), got {values.shape}")
        object.__setattr__(self, "values", values)


def project_plane(points: np.ndarray, plane: str) -> tuple[np.ndarray, np.ndarray]:
    """Project (T, 3) canonical-frame points onto an anatomical plane.

    Returns (abscissa, ordinate): sagittal is (X, Z), transverse is (X, Y).
    The forward axis is always the abscissa, so the fits read as curves over
    the direction of ball travel.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 3:
        raise ValueError(f"expected (T, 3) points, got shape {points.shape}")
    if plane == "sagittal":
        return points[:, 0], points[:, 2]
    if plane == "transverse":
        return points[:, 0], points[:, 1]
    raise ValueError(f"unknown plane {plane!r}; expected one of {PLANES}")


def fit_quadratic(abscissa, ordinate) -> QuadFit:
    """Least-squares quadratic fit with a numerically conditioned abscissa.

    The abscissa is affinely mapped onto [-1, 1] before solving, and the
    coefficients are mapped back, so badly scaled or offset inputs don't
    degrade the normal equations. Needs at least 3 samples over at least 3
    distinct abscissa values; otherwise the parabola is underdetermined and
    the fit is refused.
    """
    a = np.asarray(abscissa, dtype=np.float64)
    y = np.asarray(ordinate, dtype=np.float64)
    if a.ndim != 1 or a.shape != y.shape:
        raise ValueError(f"abscissa {a.shape} and ordinate {y.shape} must be equal-length 1-D")
    if a.size < 3:
        raise DegenerateFitError(f"quadratic fit needs at least 3 samples, got {a.size}")
    if np.isnan(a).any() or np.isnan(y).any():
        raise DegenerateFitError("quadratic fit input contains NaN")
    if np.unique(a).size < 3:
        raise DegenerateFitError(
            f"quadratic fit needs at least 3 distinct abscissa values, got {np.unique(a).size}"
        )

    lo, hi = float(a.min()), float(a.max())
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    u = (a - mid) / half
    design = np.column_stack([u * u, u, np.ones_like(u)])
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    b2, b1, b0 = (float(v) for v in beta)

    # Undo u = (a - mid)/half in the coefficient basis.
    quad = b2 / (half * half)
    lin = b1 / half - 2.0 * mid * b2 / (half * half)
    const = b0 - b1 * mid / half + b2 * mid * mid / (half * half)

    residual = y - design @ beta
    rms = float(np.sqrt(np.mean(residual * residual)))
    return QuadFit(quad=quad, lin=lin, const=const, rms_residual=rms, sample_count=int(a.size))


# ROI durations the fits were designed around; outside this range the
# vector is still well defined (>= 3 frames) but a warning is emitted.
PREFERRED_DURATION_RANGE = (7, 13)


def plane_fits(path: np.ndarray, tips: np.ndarray) -> dict[str, dict[str, QuadFit]]:
    """All four quadratic fits: {plane: {"tip_curve": fit, "trajectory": fit}}."""
    out: dict[str, dict[str, QuadFit]] = {}
    for plane in PLANES:
        ta, ty = project_plane(tips, plane)
        pa, py = project_plane(path, plane)
        out[plane] = {}
        for curve, (a, y) in (("tip_curve", (ta, ty)), ("trajectory", (pa, py))):
            try:
                out[plane][curve] = fit_quadratic(a, y)
            except DegenerateFitError as exc:
                raise DegenerateFitError(f"{plane} {curve}: {exc}") from None
    return out


def assemble_features(path: np.ndarray, tips: np.ndarray, swing_id: str = "") -> FeatureVector:
    """Compress a swing's sweet-spot path and tip curve into the 12-vector.

    The result has 12 values for any duration >= 3 frames; durations outside
    the preferred range only warn.
    """
    path = np.asarray(path, dtype=np.float64)
    lo, hi = PREFERRED_DURATION_RANGE
    if not lo <= path.shape[0] <= hi:
        warnings.warn(
            f"swing duration {path.shape[0]} outside the expected {lo}-{hi} frame range",
            stacklevel=2,
        )
    fits = plane_fits(path, tips)
    values = []
    for plane in PLANES:
        for curve in ("tip_curve", "trajectory"):
            values.extend(fits[plane][curve].coefficients)
    return FeatureVector(swing_id=swing_id, values=np.asarray(values, dtype=np.float64))


def reduction_report(roi_duration: int, marker_count: int) -> dict:
    """Dimensionality-reduction arithmetic for one ROI duration.

    A clip window of ``roi_duration`` frames carries 3 coordinates per marker
    per frame; the pipeline compresses that to the fixed 12-value vector.
    The percentage is rendered to one decimal.
    """
    if roi_duration < 1 or marker_count < 1:
        raise ValueError("roi_duration and marker_count must be >= 1")
    input_dim = int(roi_duration) * 3 * int(marker_count)
    reduction = round((1.0 - FEATURE_COUNT / input_dim) * 100.0, 1)
    return {
        "roi_duration": int(roi_duration),
        "marker_count": int(marker_count),
        "input_dim": input_dim,
        "output_dim": FEATURE_COUNT,
        "reduction_percent": reduction,
    }


def fit_quality_report(path: np.ndarray, tips: np.ndarray) -> dict:
    """Per-fit RMS residuals for a swing (fit diagnostics)."""
    fits = plane_fits(path, tips)
    return {
        f"{plane}_{curve}": fits[plane][curve].rms_residual
        for plane in PLANES
        for curve in ("tip_curve", "trajectory")
    }


@dataclass(frozen=True)
class Normalizer:
    """Per-feature affine map out = offset + scale * v fitted on training data.

    Fitted so the training minimum maps to -0.8 and the training maximum to
    +0.8. A feature constant in training gets scale 0 / offset 0: it carries
    no information, so every input maps to the band centre.
    """

    offsets: np.ndarray  # (d,)
    scales: np.ndarray  # (d,)

    def __post_init__(self):
        offsets = np.asarray(self.offsets, dtype=np.float64)
        scales = np.asarray(self.scales, dtype=np.float64)
        if offsets.ndim != 1 or offsets.shape != scales.shape:
            raise ValueError("offsets and scales must be equal-length 1-D arrays")
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "scales", scales)

    @property
    def dimension(self) -> int:
        return self.offsets.shape[0]


def fit_normalizer(X: np.ndarray) -> Normalizer:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError(f"expected (N, d) training matrix with N >= 2, got shape {X.shape}")
    if np.isnan(X).any():
        raise ValueError("normalizer training data contains NaN")
    lo = X.min(axis=0)
    hi = X.max(axis=0)
    span = hi - lo
    band_lo, band_hi = NORMALIZED_BAND
    scales = np.zeros_like(span)
    offsets = np.zeros_like(span)
    varying = span > 0
    scales[varying] = (band_hi - band_lo) / span[varying]
    offsets[varying] = band_lo - scales[varying] * lo[varying]
    return Normalizer(offsets=offsets, scales=scales)


def apply_normalizer(X: np.ndarray, norm: Normalizer) -> np.ndarray:
    """Apply the affine map; no clipping, so out-of-range inputs extrapolate."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[-1] != norm.dimension:
        raise ValueError(f"data dimension {X.shape[-1]} does not match normalizer {norm.dimension}")
    return norm.offsets + norm.scales * X


def write_features(vectors: list[FeatureVector], path: str) -> None:
    """Write feature vectors as CSV ``swing_id,f0..f11`` (bit-exact floats)."""
    with atomic_open(path, newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["swing_id"] + [f"f{i}" for i in range(FEATURE_COUNT)])
        for vec in vectors:
            writer.writerow([vec.swing_id] + [repr(float(v)) for v in vec.values])


def read_features(path: str) -> list[FeatureVector]:
    vectors: list[FeatureVector] = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        expected = ["swing_id"] + [f"f{i}" for i in range(FEATURE_COUNT)]
        if header is None or [h.strip() for h in header] != expected:
            raise ValueError(f"{path}: header must be {','.join(expected)}")
        for row_no, row in enumerate(reader, start=1):
            if len(row) == 1 and not row[0].strip():
                continue
            if len(row) != 1 + FEATURE_COUNT:
                raise ValueError(f"{path}: row {row_no} has {len(row)} fields, expected {1 + FEATURE_COUNT}")
            values = []
            for tok in row[1:]:
                v = float(tok)
                if math.isnan(v):
                    raise ValueError(f"{path}: row {row_no} contains NaN feature")
                values.append(v)
            vectors.append(FeatureVector(swing_id=row[0], values=np.asarray(values)))
    return vectors
