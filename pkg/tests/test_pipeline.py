"""Tests for per-swing kinematics extraction and viewer bundle export."""

import json

import numpy as np
import pytest

import swinglab as sl
from swinglab import pipeline, synthgen
from swinglab.mocap_io import LabelRecord


def _swing(duration=10, noise=0.0, seed=4):
    arch = synthgen.SwingArchetype(
        name="probe",
        duration_frames=duration,
        sagittal=(-0.4, 0.2, 1.0),
        transverse=(0.1, 0.0, 0.3),
        labels={"novice": "good"},
        noise_amplitude=noise,
    )
    return synthgen.generate_swing(arch, seed=seed, clip_id="probe01")


def test_swing_kinematics_spans_roi():
    clip, roi, _ = _swing(duration=9)
    kin = pipeline.swing_kinematics(clip, roi)
    assert kin.clip_id == "probe01"
    assert kin.start_frame == roi.start_frame
    assert kin.positions.shape == (9, 3)
    assert kin.vectors.shape == (9, 3)
    assert (kin.tips == kin.positions + kin.vectors).all()


def test_swing_kinematics_matches_direct_computation():
    clip, roi, _ = _swing(duration=8)
    kin = pipeline.swing_kinematics(clip, roi)
    window = sl.slice_roi(clip, roi)
    path = sl.compute_sweet_spot(window)
    assert (kin.positions == path).all()
    assert (kin.vectors == sl.gradient_flow(path)).all()


def test_extract_swing_features_carries_clip_id():
    clip, roi, _ = _swing()
    vec = pipeline.extract_swing_features(clip, roi)
    assert vec.swing_id == "probe01"
    assert vec.values.shape == (12,)


def test_bundle_contents_and_edge_filtering():
    clip, roi, labels = _swing()
    kin = pipeline.swing_kinematics(clip, roi)
    bundle = pipeline.build_viewer_bundle(clip, roi=roi, labels=labels, kinematics=kin)
    assert bundle["format"] == "swing-viewer-bundle/1"
    assert bundle["clip_id"] == "probe01"
    assert bundle["markers"] == list(clip.markers)
    assert len(bundle["frames"]) == clip.frame_count
    assert len(bundle["frames"][0]) == clip.marker_count
    assert bundle["roi"] == {"start_frame": roi.start_frame, "end_frame": roi.end_frame}
    assert bundle["labels"] == [{"criterion": "novice", "label": "good"}]
    kin_payload = bundle["kinematics"]
    assert kin_payload["start_frame"] == roi.start_frame
    assert len(kin_payload["positions"]) == roi.duration
    present = set(clip.markers)
    for a, b in bundle["connectivity"]:
        assert a in present and b in present


def test_bundle_filters_edges_for_missing_markers():
    clip, _, _ = _swing()
    bundle = pipeline.build_viewer_bundle(clip, connectivity=[("R1", "R2"), ("R1", "ghost")])
    assert bundle["connectivity"] == [["R1", "R2"]]


def test_bundle_labels_filtered_by_clip_and_sorted():
    clip, _, _ = _swing()
    labels = [
        LabelRecord(clip_id="probe01", criterion="novice", label="good"),
        LabelRecord(clip_id="other", criterion="novice", label="bad"),
        LabelRecord(clip_id="probe01", criterion="intermediate", label="bad"),
    ]
    bundle = pipeline.build_viewer_bundle(clip, labels=labels)
    assert bundle["labels"] == [
        {"criterion": "intermediate", "label": "bad"},
        {"criterion": "novice", "label": "good"},
    ]


def test_bundle_nan_becomes_null():
    clip, _, _ = _swing()
    frames = clip.frames.copy()
    frames[2, 5, :] = np.nan  # knock out one body marker in one frame
    import dataclasses

    holey = dataclasses.replace(clip, frames=frames)
    bundle = pipeline.build_viewer_bundle(holey)
    assert bundle["frames"][2][5] == [None, None, None]
    # still serializable under strict JSON (allow_nan=False)
    json.dumps(bundle, allow_nan=False)


def test_bundle_roundtrip_and_format_check(tmp_path):
    clip, roi, labels = _swing()
    kin = pipeline.swing_kinematics(clip, roi)
    bundle = pipeline.build_viewer_bundle(clip, roi=roi, labels=labels, kinematics=kin)
    path = str(tmp_path / "bundle.json")
    pipeline.write_viewer_bundle(bundle, path)
    back = pipeline.load_viewer_bundle(path)
    assert back == json.loads(json.dumps(bundle))

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format": "other/1"}))
    with pytest.raises(ValueError, match="not a swing-viewer-bundle/1 file"):
        pipeline.load_viewer_bundle(str(bad))


def test_bundle_kinematics_tips_are_positions_plus_vectors(tmp_path):
    clip, roi, _ = _swing(duration=13)
    kin = pipeline.swing_kinematics(clip, roi)
    bundle = pipeline.build_viewer_bundle(clip, roi=roi, kinematics=kin)
    payload = bundle["kinematics"]
    pos = np.array(payload["positions"], dtype=np.float64)
    vec = np.array(payload["vectors"], dtype=np.float64)
    tips = np.array(payload["tips"], dtype=np.float64)
    assert (tips == pos + vec).all()
