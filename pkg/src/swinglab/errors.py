"""Exception hierarchy for the swinglab pipeline.

Every failure mode callers are expected to handle gets its own class so the
CLI can map them to per-swing diagnostics instead of tracebacks.
"""

from __future__ import annotations


class SwinglabError(Exception):
    """Base class for all swinglab errors."""


class ClipFormatError(SwinglabError):
    """Malformed clip file: bad header, row arity mismatch, non-numeric token."""


class RoiError(SwinglabError):
    """ROI out of clip bounds or otherwise unusable."""


class MissingSampleError(SwinglabError):
    """A required racquet marker has missing samples inside the ROI."""

    def __init__(self, message: str, frames: list[int] | None = None):
        super().__init__(message)
        self.frames = list(frames) if frames else []


class LabelFileError(SwinglabError):
    """Label CSV malformed: bad header, unknown label, duplicate key."""


class DegenerateGeometryError(SwinglabError):
    """Racquet markers collinear or coincident; no equidistant point exists."""

    def __init__(self, message: str, frames: list[int] | None = None):
        super().__init__(message)
        self.frames = list(frames) if frames else []


class DegenerateFitError(SwinglabError):
    """Polynomial fit is rank-deficient (too few points or too few distinct abscissae)."""


class TrainingRefusedError(SwinglabError):
    """Model configuration rejected for the given training-set size."""


class ModelStateError(SwinglabError):
    """Model used before training or loaded from an incompatible file."""
