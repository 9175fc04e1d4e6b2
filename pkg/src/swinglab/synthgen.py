"""Parametric generator of labelled synthetic swings.

Real mocap recordings of assessed swings are not redistributable, so tests
and demos run on generated ones. Each swing is built backwards from the
quantity the pipeline is supposed to recover: a sweet-spot path whose
forward coordinate advances linearly while height and lateral offset follow
archetype quadratics z(x) and y(x). A rigid racquet triad (R1, R2, H) whose
circumcenter sits exactly at the local origin is carried along that path, so
the pipeline's reconstructed sweet spot equals the generating path up to the
injected marker noise — at zero noise the closed loop is exact.

The remaining 19 body markers are a cosmetic stick figure for the viewer
only; no primary computation reads them.

Archetype intuition: a positive z(x) curvature is a low-to-high "brushing"
swing (good technique), flat or descending curvature is the classic error
pattern. Which archetypes count as bad depends on the labelling criterion —
a stricter criterion also flags the moderate middle group.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .ioutil import atomic_open
from .mocap_io import (
    LabelRecord,
    RoiSpec,
    SwingClip,
    write_clip,
    write_labels,
    write_roi_file,
)
from .seeds import derive_seed

BODY_MARKERS = (
    "head",
    "neck",
    "chest",
    "spine",
    "pelvis",
    "l_shoulder",
    "r_shoulder",
    "l_elbow",
    "r_elbow",
    "l_wrist",
    "r_wrist",
    "l_hip",
    "r_hip",
    "l_knee",
    "r_knee",
    "l_ankle",
    "r_ankle",
    "l_foot",
    "r_foot",
)

MARKER_NAMES = BODY_MARKERS + ("R1", "R2", "H")  # 22 markers

# Stick-figure connectivity for the viewer (pairs of marker names).
SKELETON_EDGES = (
    ("head", "neck"),
    ("neck", "chest"),
    ("chest", "spine"),
    ("spine", "pelvis"),
    ("neck", "l_shoulder"),
    ("neck", "r_shoulder"),
    ("l_shoulder", "l_elbow"),
    ("l_elbow", "l_wrist"),
    ("r_shoulder", "r_elbow"),
    ("r_elbow", "r_wrist"),
    ("pelvis", "l_hip"),
    ("pelvis", "r_hip"),
    ("l_hip", "l_knee"),
    ("l_knee", "l_ankle"),
    ("l_ankle", "l_foot"),
    ("r_hip", "r_knee"),
    ("r_knee", "r_ankle"),
    ("r_ankle", "r_foot"),
    ("r_wrist", "H"),
    ("H", "R1"),
    ("H", "R2"),
    ("R1", "R2"),
)

# Racquet-triad template in the racquet's local frame: three points on a
# circle of radius RACQUET_RADIUS around the local origin, so the triangle's
# circumcenter IS the origin and its area is fixed well away from degeneracy.
RACQUET_RADIUS = 0.14
_TRIAD_ANGLES = np.deg2rad([35.0, -35.0, 180.0])
TRIAD_TEMPLATE = np.stack(
    [
        RACQUET_RADIUS * np.cos(_TRIAD_ANGLES),
        RACQUET_RADIUS * np.sin(_TRIAD_ANGLES),
        np.zeros(3),
    ],
    axis=1,
)  # rows: R1, R2, H
ROI_PAD_FRAMES = 4
FORWARD_STEP = 0.08  # metres of forward travel per frame at speed_scale 1

MANIFEST_FORMAT = "synth-manifest/1"


@dataclass(frozen=True)
class SwingArchetype:
    """Generator parameters for one swing family.

    ``sagittal`` and ``transverse`` are (quad, lin, const) coefficients of
    z(x) and y(x) along the forward sweep. ``labels`` maps criterion name to
    "good"/"bad".
    """

    name: str
    duration_frames: int
    sagittal: tuple[float, float, float]
    transverse: tuple[float, float, float]
    labels: dict[str, str] = field(default_factory=dict)
    speed_scale: float = 1.0
    noise_amplitude: float = 0.0

    def __post_init__(self):
        if self.duration_frames < 3:
            raise ValueError(f"duration_frames must be >= 3, got {self.duration_frames}")
        if self.noise_amplitude < 0:
            raise ValueError(f"noise_amplitude must be >= 0, got {self.noise_amplitude}")
        if self.speed_scale <= 0:
            raise ValueError(f"speed_scale must be positive, got {self.speed_scale}")
        for criterion, label in self.labels.items():
            if label not in ("good", "bad"):
                raise ValueError(
                    f"label for criterion {criterion!r} must be 'good' or 'bad', got {label!r}"
                )


def _rot_x(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def _rot_y(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def sweet_spot_path(archetype: SwingArchetype, frame_count: int, roi_start: int) -> np.ndarray:
    """(T, 3) generating path: x linear, z and y quadratic in x.

    Frame roi_start maps to x = 0; padding frames extrapolate the same
    polynomials, so the path is smooth across the ROI boundary.
    """
    step = FORWARD_STEP * archetype.speed_scale
    t = np.arange(frame_count, dtype=np.float64)
    x = (t - roi_start) * step
    s2, s1, s0 = archetype.sagittal
    t2, t1, t0 = archetype.transverse
    z = s2 * x * x + s1 * x + s0
    y = t2 * x * x + t1 * x + t0
    return np.stack([x, y, z], axis=1)


def _racquet_frames(path: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """(T, 3, 3) noiseless R1/R2/H positions: rigid triad carried along path.

    The racquet face tilts and swings through the stroke; the rotation is
    rigid per frame, so the triad's circumcenter equals path[t] exactly.
    """
    T = path.shape[0]
    roll = _rot_x(0.25 + 0.1 * float(rng.uniform(-1.0, 1.0)))
    sweep = np.linspace(-0.6, 0.4, T)
    out = np.empty((T, 3, 3))
    for t in range(T):
        R = _rot_y(sweep[t]) @ roll
        out[t] = TRIAD_TEMPLATE @ R.T + path[t]
    return out


def _body_frames(path: np.ndarray, racquet: np.ndarray) -> np.ndarray:
    """(T, 19, 3) cosmetic stick figure loosely tracking the swing."""
    T = path.shape[0]
    x_mid = float(path[:, 0].mean())
    base = {
        "head": (0.0, 0.0, 1.75),
        "neck": (0.0, 0.0, 1.55),
        "chest": (0.02, 0.0, 1.40),
        "spine": (0.02, 0.0, 1.20),
        "pelvis": (0.0, 0.0, 1.00),
        "l_shoulder": (0.0, 0.20, 1.50),
        "r_shoulder": (0.0, -0.20, 1.50),
        "l_elbow": (0.05, 0.30, 1.25),
        "l_wrist": (0.10, 0.33, 1.05),
        "l_hip": (0.0, 0.12, 0.95),
        "r_hip": (0.0, -0.12, 0.95),
        "l_knee": (0.02, 0.14, 0.55),
        "r_knee": (0.02, -0.14, 0.55),
        "l_ankle": (0.0, 0.15, 0.10),
        "r_ankle": (0.0, -0.15, 0.10),
        "l_foot": (0.12, 0.15, 0.03),
        "r_foot": (0.12, -0.15, 0.03),
    }
    origin = np.array([x_mid - 0.45, 0.35, 0.0])
    sway = 0.02 * np.sin(np.linspace(0.0, np.pi, T))

    h = racquet[:, 2, :]  # handle marker path
    r_wrist = h + np.array([-0.04, 0.0, -0.06])
    r_shoulder = origin + np.asarray(base["r_shoulder"])
    out = np.empty((T, len(BODY_MARKERS), 3))
    for i, name in enumerate(BODY_MARKERS):
        if name == "r_wrist":
            out[:, i, :] = r_wrist
        elif name == "r_elbow":
            mid = 0.5 * (r_shoulder[None, :] + r_wrist)
            out[:, i, :] = mid + np.array([0.0, -0.05, -0.08])
        else:
            out[:, i, :] = origin + np.asarray(base[name])
            out[:, i, 0] += sway
    return out


def generate_swing(
    archetype: SwingArchetype, seed: int, clip_id: str | None = None
) -> tuple[SwingClip, RoiSpec, list[LabelRecord]]:
    """Generate one swing: full 22-marker clip, its ROI, and its labels.

    Marker noise (uniform in ±noise_amplitude per coordinate) is applied to
    every marker after construction. The ROI sits ROI_PAD_FRAMES inside the
    clip on both sides.
    """
    if clip_id is None:
        clip_id = archetype.name
    rng = np.random.default_rng(seed)
    d = archetype.duration_frames
    T = d + 2 * ROI_PAD_FRAMES
    roi = RoiSpec(clip_id=clip_id, start_frame=ROI_PAD_FRAMES, end_frame=ROI_PAD_FRAMES + d - 1)

    path = sweet_spot_path(archetype, T, roi.start_frame)
    racquet = _racquet_frames(path, rng)
    body = _body_frames(path, racquet)

    frames = np.concatenate([body, racquet], axis=1)
    if archetype.noise_amplitude > 0:
        frames = frames + rng.uniform(-archetype.noise_amplitude, archetype.noise_amplitude, frames.shape)

    clip = SwingClip(
        clip_id=clip_id, sample_rate_hz=50.0, markers=list(MARKER_NAMES), frames=frames
    )
    labels = [
        LabelRecord(clip_id=clip_id, criterion=criterion, label=label)
        for criterion, label in sorted(archetype.labels.items())
    ]
    return clip, roi, labels


def default_preset(noise_amplitude: float = 0.004) -> list[SwingArchetype]:
    """14 swings in three technique groups under two labelling criteria.

    Flat/descending swings (negative curvature) are bad under both criteria;
    the moderate middle group passes the lenient "novice" bar but fails the
    stricter "intermediate" one; pronounced low-to-high swings are good under
    both. Bad portions: 4/14 (novice) and 10/14 (intermediate).
    """
    # Every coefficient is ordered the same way across the three groups
    # (flat < moderate < topspin or the reverse), with within-group jitter
    # well below the between-group gaps even at the noisiest duration, so
    # the groups form separable clusters in normalized feature space rather
    # than differing in a single coordinate.
    groups = [
        # (group, sagittal quad/lin/const, transverse, duration, speed)
        ("flat", (-0.52, -0.22, 1.10), (-0.090, 0.12, 0.37), 7, 1.05),
        ("flat", (-0.46, -0.18, 1.14), (-0.075, 0.10, 0.40), 9, 0.95),
        ("flat", (-0.42, -0.20, 1.08), (-0.080, 0.14, 0.38), 11, 1.00),
        ("flat", (-0.38, -0.16, 1.12), (-0.065, 0.11, 0.36), 13, 1.10),
        ("moderate", (0.10, 0.02, 0.96), (-0.015, 0.010, 0.290), 7, 1.00),
        ("moderate", (0.13, 0.05, 1.00), (0.000, 0.030, 0.310), 8, 1.05),
        ("moderate", (0.15, 0.03, 0.97), (0.010, 0.020, 0.300), 9, 0.90),
        ("moderate", (0.16, 0.07, 1.01), (-0.010, 0.040, 0.320), 10, 1.00),
        ("moderate", (0.18, 0.04, 0.99), (0.015, 0.015, 0.280), 12, 1.10),
        ("moderate", (0.21, 0.06, 0.95), (0.005, 0.025, 0.305), 13, 0.95),
        ("topspin", (0.56, 0.22, 0.84), (0.070, -0.07, 0.23), 8, 1.00),
        ("topspin", (0.62, 0.26, 0.87), (0.085, -0.09, 0.21), 10, 1.05),
        ("topspin", (0.66, 0.24, 0.83), (0.075, -0.08, 0.22), 11, 0.95),
        ("topspin", (0.71, 0.28, 0.86), (0.090, -0.10, 0.20), 12, 1.00),
    ]
    archetypes = []
    for i, (group, sagittal, transverse, duration, speed) in enumerate(groups, start=1):
        labels = {
            "novice": "bad" if group == "flat" else "good",
            "intermediate": "bad" if group in ("flat", "moderate") else "good",
        }
        archetypes.append(
            SwingArchetype(
                name=f"{group}_{i:02d}",
                duration_frames=duration,
                sagittal=sagittal,
                transverse=transverse,
                labels=labels,
                speed_scale=speed,
                noise_amplitude=noise_amplitude,
            )
        )
    return archetypes


def random_archetype(
    rng: np.random.Generator,
    duration_frames: int | None = None,
    noise_amplitude: float = 0.0,
) -> SwingArchetype:
    """Random archetype for property sweeps (coefficients in sane desk ranges)."""
    if duration_frames is None:
        duration_frames = int(rng.integers(7, 14))
    sagittal = (
        float(rng.uniform(-0.6, 0.8)),
        float(rng.uniform(-0.2, 0.2)),
        float(rng.uniform(0.8, 1.2)),
    )
    transverse = (
        float(rng.uniform(-0.1, 0.1)),
        float(rng.uniform(-0.1, 0.1)),
        float(rng.uniform(-0.4, 0.4)),
    )
    return SwingArchetype(
        name="random",
        duration_frames=duration_frames,
        sagittal=sagittal,
        transverse=transverse,
        speed_scale=float(rng.uniform(0.8, 1.2)),
        noise_amplitude=noise_amplitude,
    )


def generate_dataset(
    spec: list[tuple[SwingArchetype, int]],
    seed: int,
    out_dir: str,
) -> dict:
    """Write clips, ROIs, and labels for a dataset spec; returns the manifest.

    Layout: ``clips/<swing_id>.csv``, ``rois.json``, ``labels.csv``,
    ``manifest.json``. Swing ids are s01, s02, ... in spec order. Each swing
    gets its own seed derived from (master seed, swing id), so the dataset is
    byte-identical across runs and insensitive to generation order.
    """
    if not spec:
        raise ValueError("dataset spec must name at least one archetype")
    for archetype, count in spec:
        if count < 1:
            raise ValueError(f"archetype {archetype.name!r} has count {count}; must be >= 1")

    clips_dir = os.path.join(out_dir, "clips")
    os.makedirs(clips_dir, exist_ok=True)

    rois: list[RoiSpec] = []
    labels: list[LabelRecord] = []
    manifest_swings = []
    idx = 0
    for archetype, count in spec:
        for _ in range(count):
            idx += 1
            swing_id = f"s{idx:02d}"
            swing_seed = derive_seed(seed, "swing", swing_id)
            clip, roi, swing_labels = generate_swing(archetype, swing_seed, clip_id=swing_id)
            clip_path = os.path.join(clips_dir, f"{swing_id}.csv")
            write_clip(clip, clip_path)
            rois.append(roi)
            labels.extend(swing_labels)
            manifest_swings.append(
                {
                    "swing_id": swing_id,
                    "archetype": archetype.name,
                    "seed": swing_seed,
                    "duration_frames": archetype.duration_frames,
                    "sagittal": list(archetype.sagittal),
                    "transverse": list(archetype.transverse),
                    "speed_scale": archetype.speed_scale,
                    "noise_amplitude": archetype.noise_amplitude,
                    "labels": dict(sorted(archetype.labels.items())),
                    "clip_file": os.path.join("clips", f"{swing_id}.csv"),
                }
            )

    write_roi_file(rois, os.path.join(out_dir, "rois.json"))
    write_labels(labels, os.path.join(out_dir, "labels.csv"))
    manifest = {
        "format": MANIFEST_FORMAT,
        "master_seed": seed,
        "swing_count": idx,
        "roi_file": "rois.json",
        "labels_file": "labels.csv",
        "swings": manifest_swings,
    }
    with atomic_open(os.path.join(out_dir, "manifest.json")) as f:
        json.dump(manifest, f, indent=2, sort_keys=True, allow_nan=False)
        f.write("\n")
    return manifest
