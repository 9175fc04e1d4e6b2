"""Marker motion file parsing, canonicalization, ROI slicing, and label files.

Clip file contract (UTF-8 CSV):
    frame,<name>_x,<name>_y,<name>_z,...
one row per sample, ``NaN`` literal for missing samples. Coordinates are
metres in the canonical frame: X forward (toward the net), Y lateral,
Z vertical up. Conversion from other source conventions happens only here,
at ingestion; everything downstream assumes the canonical frame.

ROI files are JSON objects ``{"clip_id", "start_frame", "end_frame"}`` (or a
list of them); label files are CSV ``clip_id,criterion,label``.

Missing samples are never repaired: NaN passes through parsing untouched and
is rejected only where an operation genuinely cannot proceed.
"""

from __future__ import annotations

import csv
import json
import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ClipFormatError, LabelFileError, MissingSampleError, RoiError
from .ioutil import atomic_open

RACQUET_MARKERS = ("R1", "R2", "H")

SOURCE_CONVENTIONS = ("canonical", "rh-xyz-zup", "lh-xzy")

# ROI durations the assessment protocol was designed around; outside this
# range slicing warns but does not fail.
ROI_DURATION_RANGE = (7, 13)

GOOD, BAD = "good", "bad"


@dataclass(frozen=True)
class SwingClip:
    """A marker motion clip: T frames of n markers, canonical frame, metres."""

    clip_id: str
    sample_rate_hz: float
    markers: list[str]
    frames: np.ndarray  # (T, n, 3) float64, NaN for missing samples

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise ValueError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.ndim != 3 or frames.shape[2] != 3:
            raise ValueError(f"frames must have shape (T, n, 3), got {frames.shape}")
        if frames.shape[0] < 1:
            raise ValueError("clip must contain at least one frame")
        if frames.shape[1] != len(self.markers):
            raise ValueError(
                f"frame width {frames.shape[1]} does not match {len(self.markers)} markers"
            )
        if len(set(self.markers)) != len(self.markers):
            raise ValueError("marker names must be unique")
        object.__setattr__(self, "frames", frames)

    @property
    def frame_count(self) -> int:
        return self.frames.shape[0]

    @property
    def marker_count(self) -> int:
        return self.frames.shape[1]

    @property
    def series_count(self) -> int:
        """Number of scalar time series (3 per marker)."""
        return 3 * self.marker_count

    def has_marker(self, name: str) -> bool:
        return name in self.markers

    def path(self, name: str) -> np.ndarray:
        """(T, 3) trajectory of one marker."""
        try:
            i = self.markers.index(name)
        except ValueError:
            raise KeyError(f"clip {self.clip_id!r} has no marker {name!r}") from None
        return self.frames[:, i, :]


@dataclass(frozen=True)
class RoiSpec:
    """Inclusive frame window [start_frame, end_frame] of a swing's action zone."""

    clip_id: str
    start_frame: int
    end_frame: int

    def __post_init__(self):
        if self.start_frame < 0 or self.end_frame < self.start_frame:
            raise RoiError(
                f"invalid ROI for {self.clip_id!r}: "
                f"need 0 <= start <= end, got [{self.start_frame}, {self.end_frame}]"
            )

    @property
    def duration(self) -> int:
        return self.end_frame - self.start_frame + 1


@dataclass(frozen=True)
class LabelRecord:
    clip_id: str
    criterion: str
    label: str  # "good" | "bad"

    def __post_init__(self):
        if self.label not in (GOOD, BAD):
            raise LabelFileError(
                f"label for ({self.clip_id!r}, {self.criterion!r}) must be "
                f"'good' or 'bad', got {self.label!r}"
            )


def convert_handedness(p, source_convention: str, inverse: bool = False) -> np.ndarray:
    """Map a 3-vector (or (T, 3) array) from a source convention to the canonical frame.

    Conventions:
      canonical   identity
      rh-xyz-zup  right-handed XYZ with Z up; coincides with the canonical frame
      lh-xzy      left-handed XZY storage: (x, y, z) -> (x, z, -y)

    With ``inverse=True`` applies the declared inverse map, recovering the
    source coordinates exactly. All maps preserve vector norms.
    """
    p = np.asarray(p, dtype=np.float64)
    if source_convention in ("canonical", "rh-xyz-zup"):
        return p.copy()
    if source_convention == "lh-xzy":
        out = np.empty_like(p)
        if not inverse:
            out[..., 0] = p[..., 0]
            out[..., 1] = p[..., 2]
            out[..., 2] = -p[..., 1]
        else:
            out[..., 0] = p[..., 0]
            out[..., 1] = -p[..., 2]
            out[..., 2] = p[..., 1]
        return out
    raise ValueError(
        f"unknown source convention {source_convention!r}; expected one of {SOURCE_CONVENTIONS}"
    )


def _parse_header(fields: list[str], path: str) -> list[str]:
    if not fields or fields[0] != "frame":
        raise ClipFormatError(f"{path}: header must start with 'frame', got {fields[:1]}")
    coord_fields = fields[1:]
    if len(coord_fields) % 3 != 0:
        raise ClipFormatError(
            f"{path}: header names {len(coord_fields)} coordinate columns, not a multiple of 3"
        )
    markers: list[str] = []
    for i in range(0, len(coord_fields), 3):
        triple = coord_fields[i : i + 3]
        stems = set()
        for col, suffix in zip(triple, ("_x", "_y", "_z")):
            if not col.endswith(suffix):
                raise ClipFormatError(
                    f"{path}: expected column ending in '{suffix}' at position {i + 1}, got {col!r}"
                )
            stems.add(col[: -len(suffix)])
        if len(stems) != 1:
            raise ClipFormatError(f"{path}: mixed marker names in column triple {triple}")
        markers.append(stems.pop())
    if len(markers) < 3:
        raise ClipFormatError(f"{path}: clip needs at least 3 markers, found {len(markers)}")
    if len(set(markers)) != len(markers):
        dupes = sorted({m for m in markers if markers.count(m) > 1})
        raise ClipFormatError(f"{path}: duplicate marker names {dupes}")
    return markers


def parse_clip(
    path: str,
    source_convention: str = "canonical",
    sample_rate_hz: float = 50.0,
    scale: float = 1.0,
    clip_id: str | None = None,
) -> SwingClip:
    """Parse a clip CSV into a canonical-frame SwingClip.

    ``scale`` multiplies all coordinates after parsing (e.g. 0.001 for files
    recorded in millimetres). NaN samples pass through untouched. The sample
    rate is not part of the file contract, so it is supplied here.
    """
    if source_convention not in SOURCE_CONVENTIONS:
        raise ValueError(
            f"unknown source convention {source_convention!r}; expected one of {SOURCE_CONVENTIONS}"
        )
    if clip_id is None:
        clip_id = os.path.splitext(os.path.basename(path))[0]

    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ClipFormatError(f"{path}: empty file") from None
        markers = _parse_header([h.strip() for h in header], path)
        n = len(markers)

        rows: list[list[float]] = []
        for row_no, row in enumerate(reader, start=1):
            if len(row) == 1 and not row[0].strip():
                continue  # trailing blank line
            values = row[1:]
            if len(values) != 3 * n:
                raise ClipFormatError(
                    f"{path}: row {row_no} has {len(values)} coordinate values, expected {3 * n}"
                )
            try:
                rows.append([float(v) for v in values])
            except ValueError as exc:
                raise ClipFormatError(f"{path}: row {row_no}: {exc}") from None

    if not rows:
        raise ClipFormatError(f"{path}: no data rows")

    frames = np.asarray(rows, dtype=np.float64).reshape(len(rows), n, 3)
    if scale != 1.0:
        frames = frames * scale
    frames = convert_handedness(frames, source_convention)
    return SwingClip(clip_id=clip_id, sample_rate_hz=sample_rate_hz, markers=markers, frames=frames)


def write_clip(clip: SwingClip, path: str) -> None:
    """Write a canonical-frame clip; parse(write(clip)) round-trips bit-exactly."""
    with atomic_open(path, newline="") as f:
        writer = csv.writer(f)
        header = ["frame"]
        for m in clip.markers:
            header += [f"{m}_x", f"{m}_y", f"{m}_z"]
        writer.writerow(header)
        for t in range(clip.frame_count):
            row: list[str] = [str(t)]
            for v in clip.frames[t].reshape(-1):
                row.append("NaN" if math.isnan(v) else repr(float(v)))
            writer.writerow(row)


def slice_roi(clip: SwingClip, roi: RoiSpec) -> SwingClip:
    """Extract the sub-clip of frames [start..end].

    Refuses when any racquet marker present in the clip has a missing sample
    inside the window: that data cannot feed the kinematic chain and is never
    repaired.
    """
    if roi.end_frame >= clip.frame_count:
        raise RoiError(
            f"ROI [{roi.start_frame}, {roi.end_frame}] out of bounds for "
            f"{clip.clip_id!r} with {clip.frame_count} frames"
        )
    lo, hi = ROI_DURATION_RANGE
    if not lo <= roi.duration <= hi:
        warnings.warn(
            f"ROI duration {roi.duration} for {clip.clip_id!r} outside the "
            f"expected {lo}-{hi} frame range",
            stacklevel=2,
        )
    bad: dict[str, list[int]] = {}
    for name in RACQUET_MARKERS:
        if not clip.has_marker(name):
            continue
        seg = clip.path(name)[roi.start_frame : roi.end_frame + 1]
        missing = np.flatnonzero(np.isnan(seg).any(axis=1))
        if missing.size:
            bad[name] = [int(roi.start_frame + i) for i in missing]
    if bad:
        detail = "; ".join(f"{m} missing at frames {fs}" for m, fs in sorted(bad.items()))
        raise MissingSampleError(
            f"ROI [{roi.start_frame}, {roi.end_frame}] of {clip.clip_id!r} has "
            f"missing racquet samples: {detail}",
            frames=sorted({f for fs in bad.values() for f in fs}),
        )
    return SwingClip(
        clip_id=clip.clip_id,
        sample_rate_hz=clip.sample_rate_hz,
        markers=list(clip.markers),
        frames=clip.frames[roi.start_frame : roi.end_frame + 1].copy(),
    )


def load_roi_file(path: str) -> list[RoiSpec]:
    """Load a ROI JSON file: a single ROI object or a list of them."""
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise RoiError(f"{path}: expected a ROI object or list of ROI objects")
    rois = []
    for entry in data:
        try:
            rois.append(
                RoiSpec(
                    clip_id=str(entry["clip_id"]),
                    start_frame=int(entry["start_frame"]),
                    end_frame=int(entry["end_frame"]),
                )
            )
        except (KeyError, TypeError) as exc:
            raise RoiError(f"{path}: malformed ROI entry {entry!r}: {exc}") from None
    return rois


def write_roi_file(rois: list[RoiSpec], path: str) -> None:
    data = [
        {"clip_id": r.clip_id, "start_frame": r.start_frame, "end_frame": r.end_frame}
        for r in rois
    ]
    with atomic_open(path) as f:
        json.dump(data if len(data) != 1 else data[0], f, indent=2, sort_keys=True)
        f.write("\n")


def load_labels(path: str) -> list[LabelRecord]:
    """Load a label CSV. Duplicate (clip_id, criterion) pairs are rejected."""
    records: list[LabelRecord] = []
    seen: set[tuple[str, str]] = set()
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise LabelFileError(f"{path}: empty file") from None
        if [h.strip() for h in header] != ["clip_id", "criterion", "label"]:
            raise LabelFileError(f"{path}: header must be 'clip_id,criterion,label', got {header}")
        for row_no, row in enumerate(reader, start=1):
            if len(row) == 1 and not row[0].strip():
                continue
            if len(row) != 3:
                raise LabelFileError(f"{path}: row {row_no} has {len(row)} fields, expected 3")
            clip_id, criterion, label = (v.strip() for v in row)
            key = (clip_id, criterion)
            if key in seen:
                raise LabelFileError(f"{path}: duplicate label for {key}")
            seen.add(key)
            try:
                records.append(LabelRecord(clip_id=clip_id, criterion=criterion, label=label))
            except LabelFileError as exc:
                raise LabelFileError(f"{path}: row {row_no}: {exc}") from None
    return records


def write_labels(records: list[LabelRecord], path: str) -> None:
    with atomic_open(path, newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["clip_id", "criterion", "label"])
        for r in records:
            writer.writerow([r.clip_id, r.criterion, r.label])


def labels_by_criterion(records: list[LabelRecord]) -> dict[str, dict[str, str]]:
    """Group label records as {criterion: {clip_id: label}}."""
    out: dict[str, dict[str, str]] = {}
    for r in records:
        out.setdefault(r.criterion, {})[r.clip_id] = r.label
    return out
