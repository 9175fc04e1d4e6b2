"""Sweet-spot reconstruction and motion gradient flow.

The racquet head carries no physical marker at its sweet spot, so one is
synthesized per frame from the racquet triad R1, R2, H: the circumcenter of
that triangle (equidistant from all three markers, invariant to the order in
which they are given, and equivariant under rigid motion of the triad). A
centroid variant is available for sensitivity checks.

The gradient flow of a path is its per-component finite-difference derivative
with unit frame spacing: central differences inside, one-sided at both ends.
Vector tips (position + flow) are what the downstream feature fits consume.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateGeometryError, MissingSampleError
from .mocap_io import SwingClip

# Cross-product magnitude below this fraction of |a||b| means the triad is
# (numerically) collinear and the circumcenter is undefined.
COLLINEARITY_TOL = 1e-9

SWEET_SPOT_METHODS = ("circumcenter", "centroid")


def circumcenter(A, B, C) -> np.ndarray:
    """Circumcenter of triangle(s) ABC in 3-space.

    Accepts (3,) or (T, 3) arrays. The result is equidistant from A, B and C.
    Raises DegenerateGeometryError when a triangle is collinear (including
    repeated points), reporting the offending frame indices.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    C = np.asarray(C, dtype=np.float64)
    single = A.ndim == 1
    A, B, C = np.atleast_2d(A), np.atleast_2d(B), np.atleast_2d(C)

    a = A - C
    b = B - C
    cross = np.cross(a, b)
    cross_norm = np.linalg.norm(cross, axis=1)
    limit = COLLINEARITY_TOL * np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
    degenerate = cross_norm <= limit  # catches coincident markers too (0 <= 0)
    if degenerate.any():
        frames = [int(i) for i in np.flatnonzero(degenerate)]
        raise DegenerateGeometryError(
            f"collinear racquet triad at frames {frames}", frames=frames
        )

    a2 = np.sum(a * a, axis=1, keepdims=True)
    b2 = np.sum(b * b, axis=1, keepdims=True)
    num = np.cross(a2 * b - b2 * a, cross)
    cc = C + num / (2.0 * (cross_norm**2)[:, None])
    return cc[0] if single else cc


def compute_sweet_spot(clip: SwingClip, method: str = "circumcenter") -> np.ndarray:
    """(T, 3) virtual sweet-spot path from the R1/R2/H triad.

    ``method`` selects geometric construction: "circumcenter" (default) or
    "centroid". Missing triad samples are refused, never repaired.
    """
    if method not in SWEET_SPOT_METHODS:
        raise ValueError(f"unknown sweet-spot method {method!r}; expected {SWEET_SPOT_METHODS}")
    r1, r2, h = clip.path("R1"), clip.path("R2"), clip.path("H")
    nan_frames = np.flatnonzero(np.isnan(np.concatenate([r1, r2, h], axis=1)).any(axis=1))
    if nan_frames.size:
        frames = [int(i) for i in nan_frames]
        raise MissingSampleError(
            f"racquet triad of {clip.clip_id!r} has missing samples at frames {frames}",
            frames=frames,
        )
    if method == "centroid":
        return (r1 + r2 + h) / 3.0
    return circumcenter(r1, r2, h)


def gradient_flow(path: np.ndarray) -> np.ndarray:
    """Finite-difference flow of a (T, d) path, unit frame spacing.

    Interior frames use the central difference (x[t+1] - x[t-1]) / 2; the two
    ends use one-sided differences. Needs at least 2 frames — a single sample
    has no motion to difference. NaN in a sample propagates to the flow
    values it touches and no further.
    """
    path = np.asarray(path, dtype=np.float64)
    single = path.ndim == 1
    p = path[:, None] if single else path
    T = p.shape[0]
    if T < 2:
        raise ValueError(f"gradient flow needs at least 2 frames, got {T}")
    flow = np.empty_like(p)
    flow[0] = p[1] - p[0]
    flow[-1] = p[-1] - p[-2]
    if T > 2:
        flow[1:-1] = (p[2:] - p[:-2]) / 2.0
    return flow[:, 0] if single else flow


def compute_vector_tips(path: np.ndarray, flow: np.ndarray | None = None) -> np.ndarray:
    """Tips of the flow vectors drawn from each path point: path + flow."""
    path = np.asarray(path, dtype=np.float64)
    if flow is None:
        flow = gradient_flow(path)
    else:
        flow = np.asarray(flow, dtype=np.float64)
        if flow.shape != path.shape:
            raise ValueError(f"flow shape {flow.shape} does not match path shape {path.shape}")
    return path + flow


def velocity(path: np.ndarray, sample_rate_hz: float) -> np.ndarray:
    """Physical velocity (m/s): gradient flow scaled by the sample rate."""
    if sample_rate_hz <= 0:
        raise ValueError(f"sample_rate_hz must be positive, got {sample_rate_hz}")
    return gradient_flow(path) * sample_rate_hz


def acceleration(path: np.ndarray, sample_rate_hz: float) -> np.ndarray:
    """Physical acceleration (m/s^2): second gradient flow scaled twice."""
    if sample_rate_hz <= 0:
        raise ValueError(f"sample_rate_hz must be positive, got {sample_rate_hz}")
    return gradient_flow(gradient_flow(path)) * sample_rate_hz * sample_rate_hz
