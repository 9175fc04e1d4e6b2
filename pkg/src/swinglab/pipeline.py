"""End-to-end per-swing processing: clip + ROI in, features or bundles out.

The chain is: slice the ROI, reconstruct the virtual sweet spot, take its
gradient flow and vector tips, fit the plane quadratics, emit the 12-value
vector. The same intermediates feed the viewer bundle export, so what the
viewer overlays is exactly what the features were fitted to.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .features import FeatureVector, assemble_features
from .ioutil import atomic_open
from .kinematics import compute_sweet_spot, compute_vector_tips, gradient_flow
from .mocap_io import LabelRecord, RoiSpec, SwingClip, slice_roi
from .synthgen import SKELETON_EDGES

BUNDLE_FORMAT = "swing-viewer-bundle/1"


@dataclass(frozen=True)
class SwingKinematics:
    """ROI-windowed sweet-spot kinematics of one swing."""

    clip_id: str
    start_frame: int  # absolute clip frame of positions[0]
    positions: np.ndarray  # (d, 3)
    vectors: np.ndarray  # (d, 3) gradient flow, metres per frame
    tips: np.ndarray  # (d, 3) positions + vectors


def swing_kinematics(
    clip: SwingClip, roi: RoiSpec, sweet_spot_method: str = "circumcenter"
) -> SwingKinematics:
    window = slice_roi(clip, roi)
    positions = compute_sweet_spot(window, method=sweet_spot_method)
    vectors = gradient_flow(positions)
    tips = compute_vector_tips(positions, vectors)
    return SwingKinematics(
        clip_id=clip.clip_id,
        start_frame=roi.start_frame,
        positions=positions,
        vectors=vectors,
        tips=tips,
    )


def extract_swing_features(
    clip: SwingClip, roi: RoiSpec, sweet_spot_method: str = "circumcenter"
) -> FeatureVector:
    """The full per-swing reduction to the 12-value feature vector."""
    kin = swing_kinematics(clip, roi, sweet_spot_method)
    return assemble_features(kin.positions, kin.tips, swing_id=clip.clip_id)


def _json_points(arr: np.ndarray) -> list[list[float | None]]:
    return [[None if math.isnan(v) else float(v) for v in row] for row in np.asarray(arr)]


def build_viewer_bundle(
    clip: SwingClip,
    roi: RoiSpec | None = None,
    labels: list[LabelRecord] | None = None,
    kinematics: SwingKinematics | None = None,
    connectivity: list[tuple[str, str]] | None = None,
) -> dict:
    """Self-contained JSON-ready dict for the replay viewer.

    Frames carry null for missing samples (JSON has no NaN). Connectivity
    defaults to the standard stick-figure edges and is always filtered to
    markers actually present, so the viewer never dereferences a missing
    marker.
    """
    if connectivity is None:
        connectivity = list(SKELETON_EDGES)
    present = set(clip.markers)
    edges = [[a, b] for a, b in connectivity if a in present and b in present]

    bundle: dict = {
        "format": BUNDLE_FORMAT,
        "clip_id": clip.clip_id,
        "sample_rate_hz": float(clip.sample_rate_hz),
        "markers": list(clip.markers),
        "connectivity": edges,
        "frames": [_json_points(clip.frames[t]) for t in range(clip.frame_count)],
        "roi": None,
        "labels": [],
        "kinematics": None,
    }
    if roi is not None:
        bundle["roi"] = {"start_frame": roi.start_frame, "end_frame": roi.end_frame}
    if labels:
        bundle["labels"] = [
            {"criterion": r.criterion, "label": r.label}
            for r in sorted(labels, key=lambda r: r.criterion)
            if r.clip_id == clip.clip_id
        ]
    if kinematics is not None:
        bundle["kinematics"] = {
            "start_frame": kinematics.start_frame,
            "positions": _json_points(kinematics.positions),
            "vectors": _json_points(kinematics.vectors),
            "tips": _json_points(kinematics.tips),
        }
    return bundle


def write_viewer_bundle(bundle: dict, path: str) -> None:
    with atomic_open(path) as f:
        json.dump(bundle, f, indent=2, sort_keys=True, allow_nan=False)
        f.write("\n")


def load_viewer_bundle(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        bundle = json.load(f)
    if not isinstance(bundle, dict) or bundle.get("format") != BUNDLE_FORMAT:
        raise ValueError(f"{path}: not a {BUNDLE_FORMAT} file")
    return bundle
