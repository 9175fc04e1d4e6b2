"""Clip parsing, canonicalization, ROI slicing, and label files."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import swinglab as sl
from swinglab.errors import ClipFormatError, LabelFileError, MissingSampleError, RoiError
from swinglab.mocap_io import labels_by_criterion
from swinglab.synthgen import MARKER_NAMES


def _clip_csv(markers, rows):
    header = ["frame"] + [f"{m}_{ax}" for m in markers for ax in "xyz"]
    lines = [",".join(header)]
    for t, row in enumerate(rows):
        lines.append(",".join([str(t)] + [str(v) for v in row]))
    return "\n".join(lines) + "\n"


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _random_clip(rng, markers=("R1", "R2", "H", "head"), frames=10):
    data = rng.normal(size=(frames, len(markers), 3))
    return sl.SwingClip(
        clip_id="rand", sample_rate_hz=50.0, markers=list(markers), frames=data
    )


# ---------------------------------------------------------------- parse_clip


def test_parse_full_body_clip(tmp_path, rng):
    rows = rng.normal(size=(10, 66)).tolist()
    path = _write(tmp_path, "full.csv", _clip_csv(MARKER_NAMES, rows))
    clip = sl.parse_clip(path)
    assert clip.frame_count == 10
    assert clip.marker_count == 22
    assert clip.series_count == 66
    assert clip.clip_id == "full"
    assert clip.markers == list(MARKER_NAMES)


def test_parse_row_arity_error_names_row(tmp_path, rng):
    rows = rng.normal(size=(3, 66)).tolist()
    rows[1] = rows[1][:65]  # 65 values instead of 66
    path = _write(tmp_path, "bad.csv", _clip_csv(MARKER_NAMES, rows))
    with pytest.raises(ClipFormatError, match="row 2 has 65"):
        sl.parse_clip(path)


def test_parse_non_numeric_token(tmp_path):
    text = _clip_csv(["R1", "R2", "H"], [[0.1] * 9])
    path = _write(tmp_path, "tok.csv", text.replace("0.1", "oops", 1))
    with pytest.raises(ClipFormatError, match="row 1"):
        sl.parse_clip(path)


def test_parse_nan_sentinel_passes_through(tmp_path):
    # R1 entirely missing: the clip parses; kinematics is where it fails.
    rows = [["NaN", "NaN", "NaN", 0.1, 0.2, 0.3, 1.0, 1.1, 1.2] for _ in range(4)]
    path = _write(tmp_path, "gap.csv", _clip_csv(["R1", "R2", "H"], rows))
    clip = sl.parse_clip(path)
    assert np.isnan(clip.path("R1")).all()
    with pytest.raises(MissingSampleError) as err:
        sl.compute_sweet_spot(clip)
    assert err.value.frames == [0, 1, 2, 3]


@pytest.mark.parametrize(
    "header",
    [
        "time,R1_x,R1_y,R1_z,R2_x,R2_y,R2_z,H_x,H_y,H_z",  # wrong first column
        "frame,R1_x,R1_y,R2_z,R2_x,R2_y,R2_z,H_x,H_y,H_z",  # mixed stems in a triple
        "frame,R1_x,R1_y,R1_w,R2_x,R2_y,R2_z,H_x,H_y,H_z",  # bad suffix
        "frame,R1_x,R1_y,R1_z,R1_x,R1_y,R1_z,H_x,H_y,H_z",  # duplicate marker
        "frame,R1_x,R1_y,R1_z,R2_x,R2_y",  # not a multiple of 3
        "frame,R1_x,R1_y,R1_z,R2_x,R2_y,R2_z",  # fewer than 3 markers
    ],
)
def test_parse_malformed_headers(tmp_path, header):
    n = (len(header.split(",")) - 1) // 3 * 3
    path = _write(tmp_path, "hdr.csv", header + "\n0," + ",".join(["0.0"] * n) + "\n")
    with pytest.raises(ClipFormatError):
        sl.parse_clip(path)


def test_parse_empty_and_headerless(tmp_path):
    with pytest.raises(ClipFormatError, match="empty"):
        sl.parse_clip(_write(tmp_path, "empty.csv", ""))
    with pytest.raises(ClipFormatError, match="no data rows"):
        sl.parse_clip(_write(tmp_path, "hdronly.csv", _clip_csv(["R1", "R2", "H"], [])))


def test_parse_scale_factor(tmp_path):
    rows = [[1000.0, 2000.0, 3000.0, 0, 0, 0, 1, 1, 1]]
    path = _write(tmp_path, "mm.csv", _clip_csv(["R1", "R2", "H"], rows))
    clip = sl.parse_clip(path, scale=0.001)
    assert np.allclose(clip.path("R1")[0], [1.0, 2.0, 3.0])


def test_parse_unknown_convention(tmp_path, rng):
    path = _write(tmp_path, "c.csv", _clip_csv(["R1", "R2", "H"], rng.normal(size=(2, 9)).tolist()))
    with pytest.raises(ValueError, match="unknown source convention"):
        sl.parse_clip(path, source_convention="y-up")


def test_roundtrip_bit_exact(tmp_path, rng):
    clip = _random_clip(rng)
    # punch a few NaN holes in a body marker
    frames = clip.frames.copy()
    frames[2, 3, :] = np.nan
    frames[5, 3, 1] = np.nan
    clip = sl.SwingClip("rt", 50.0, list(clip.markers), frames)
    path = str(tmp_path / "rt.csv")
    sl.write_clip(clip, path)
    back = sl.parse_clip(path)
    assert back.markers == clip.markers
    assert back.frames.shape == clip.frames.shape
    same = (back.frames == clip.frames) | (np.isnan(back.frames) & np.isnan(clip.frames))
    assert same.all()  # bit-exact, NaN positions included

    sl.write_clip(back, str(tmp_path / "rt2.csv"))
    assert (tmp_path / "rt.csv").read_bytes() == (tmp_path / "rt2.csv").read_bytes()


# ------------------------------------------------------- convert_handedness


def test_lh_xzy_example():
    assert np.array_equal(sl.convert_handedness([1, 2, 3], "lh-xzy"), [1, 3, -2])


def test_origin_fixed_point():
    for conv in ("canonical", "rh-xyz-zup", "lh-xzy"):
        assert np.array_equal(sl.convert_handedness([0, 0, 0], conv), [0, 0, 0])


def test_forward_then_inverse_roundtrip():
    p = np.array([0.3, -1.1, 2.5])
    for conv in ("canonical", "rh-xyz-zup", "lh-xzy"):
        fwd = sl.convert_handedness(p, conv)
        assert np.array_equal(sl.convert_handedness(fwd, conv, inverse=True), p)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=3))
def test_handedness_preserves_norm(v):
    p = np.array(v)
    for conv in ("canonical", "rh-xyz-zup", "lh-xzy"):
        q = sl.convert_handedness(p, conv)
        assert abs(np.linalg.norm(q) - np.linalg.norm(p)) <= 1e-12


def test_handedness_array_form():
    pts = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    out = sl.convert_handedness(pts, "lh-xzy")
    assert np.array_equal(out, [[1, 3, -2], [4, 6, -5]])


# -------------------------------------------------------------- slice_roi


def test_slice_roi_window(rng):
    clip = _random_clip(rng, frames=20)
    sub = sl.slice_roi(clip, sl.RoiSpec("rand", 5, 14))
    assert sub.frame_count == 10
    for k in range(10):
        assert np.array_equal(sub.frames[k], clip.frames[5 + k])


def test_slice_roi_identity(rng):
    clip = _random_clip(rng, frames=9)
    sub = sl.slice_roi(clip, sl.RoiSpec("rand", 0, 8))
    assert np.array_equal(sub.frames, clip.frames)


def test_slice_roi_out_of_bounds(rng):
    clip = _random_clip(rng, frames=8)
    with pytest.raises(RoiError, match="out of bounds"):
        sl.slice_roi(clip, sl.RoiSpec("rand", 2, 8))


def test_slice_roi_missing_racquet_sample(rng):
    clip = _random_clip(rng, frames=20)
    frames = clip.frames.copy()
    frames[9, 1, 2] = np.nan  # R2, frame 9
    clip = sl.SwingClip("rand", 50.0, list(clip.markers), frames)
    with pytest.raises(MissingSampleError, match=r"R2 missing at frames \[9\]") as err:
        sl.slice_roi(clip, sl.RoiSpec("rand", 5, 14))
    assert err.value.frames == [9]


def test_slice_roi_body_marker_gaps_allowed(rng):
    clip = _random_clip(rng, frames=20)
    frames = clip.frames.copy()
    frames[9, 3, :] = np.nan  # "head" may be missing
    clip = sl.SwingClip("rand", 50.0, list(clip.markers), frames)
    sub = sl.slice_roi(clip, sl.RoiSpec("rand", 5, 14))
    assert np.isnan(sub.path("head")[4]).all()


def test_slice_roi_duration_warning(rng):
    clip = _random_clip(rng, frames=30)
    with pytest.warns(UserWarning, match="duration 5"):
        sl.slice_roi(clip, sl.RoiSpec("rand", 0, 4))
    with pytest.warns(UserWarning, match="duration 20"):
        sl.slice_roi(clip, sl.RoiSpec("rand", 0, 19))


def test_roi_spec_validation():
    with pytest.raises(RoiError):
        sl.RoiSpec("c", -1, 4)
    with pytest.raises(RoiError):
        sl.RoiSpec("c", 5, 4)
    assert sl.RoiSpec("c", 5, 14).duration == 10


def test_roi_file_roundtrip(tmp_path):
    rois = [sl.RoiSpec("s01", 4, 13), sl.RoiSpec("s02", 2, 8)]
    path = str(tmp_path / "rois.json")
    sl.write_roi_file(rois, path)
    assert sl.load_roi_file(path) == rois
    # single-ROI files may be a bare object
    sl.write_roi_file(rois[:1], path)
    assert json.loads((tmp_path / "rois.json").read_text())["clip_id"] == "s01"
    assert sl.load_roi_file(path) == rois[:1]


def test_roi_file_malformed(tmp_path):
    path = _write(tmp_path, "bad.json", '[{"clip_id": "x", "start_frame": 1}]')
    with pytest.raises(RoiError, match="malformed"):
        sl.load_roi_file(path)
    path = _write(tmp_path, "notlist.json", '"just a string"')
    with pytest.raises(RoiError):
        sl.load_roi_file(path)


# ----------------------------------------------------------------- labels


def _label_rows(n_bad, n_total, criterion):
    rows = []
    for i in range(1, n_total + 1):
        label = "bad" if i <= n_bad else "good"
        rows.append(sl.LabelRecord(f"s{i:02d}", criterion, label))
    return rows


def test_labels_roundtrip_and_fractions(tmp_path):
    records = _label_rows(4, 14, "novice") + _label_rows(10, 14, "intermediate")
    path = str(tmp_path / "labels.csv")
    sl.write_labels(records, path)
    back = sl.load_labels(path)
    assert back == records
    by_crit = labels_by_criterion(back)
    frac = lambda m: round(100 * sum(v == "bad" for v in m.values()) / len(m), 1)
    assert frac(by_crit["novice"]) == 28.6
    assert frac(by_crit["intermediate"]) == 71.4


def test_labels_duplicate_key(tmp_path):
    text = "clip_id,criterion,label\ns01,novice,good\ns01,novice,bad\n"
    with pytest.raises(LabelFileError, match="duplicate"):
        sl.load_labels(_write(tmp_path, "dup.csv", text))


def test_labels_same_clip_two_criteria_ok(tmp_path):
    text = "clip_id,criterion,label\ns01,novice,bad\ns01,intermediate,good\n"
    records = sl.load_labels(_write(tmp_path, "two.csv", text))
    assert len(records) == 2


def test_labels_bad_value(tmp_path):
    text = "clip_id,criterion,label\ns01,novice,meh\n"
    with pytest.raises(LabelFileError, match="'good' or 'bad'"):
        sl.load_labels(_write(tmp_path, "val.csv", text))


def test_labels_bad_header(tmp_path):
    text = "clip,criterion,label\ns01,novice,good\n"
    with pytest.raises(LabelFileError, match="header"):
        sl.load_labels(_write(tmp_path, "hdr.csv", text))


# -------------------------------------------------------------- SwingClip


def test_swing_clip_validation(rng):
    frames = rng.normal(size=(4, 3, 3))
    with pytest.raises(ValueError, match="sample_rate_hz"):
        sl.SwingClip("c", 0.0, ["R1", "R2", "H"], frames)
    with pytest.raises(ValueError, match="unique"):
        sl.SwingClip("c", 50.0, ["R1", "R1", "H"], frames)
    with pytest.raises(ValueError, match="does not match"):
        sl.SwingClip("c", 50.0, ["R1", "R2"], frames)
    with pytest.raises(ValueError, match="at least one frame"):
        sl.SwingClip("c", 50.0, ["R1", "R2", "H"], np.empty((0, 3, 3)))
    clip = sl.SwingClip("c", 50.0, ["R1", "R2", "H"], frames)
    with pytest.raises(KeyError):
        clip.path("nope")
