"""Velocity-obstacle cones for polygonal and circular shapes.

A cone is an apex in velocity space plus two unit boundary directions. VO, RVO
and HRVO share the boundary directions and differ only in where the apex sits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .geometry import ConvexPolygon, centroid, intersects

PARALLEL_TOL = 1e-9


@dataclass(frozen=True)
class ConeDirections:
    """Boundary directions of a collision cone, or the whole plane."""

    vl: Optional[Tuple[float, float]]
    vr: Optional[Tuple[float, float]]

    @property
    def full_plane(self) -> bool:
        return self.vl is None

    @classmethod
    def whole_plane(cls) -> "ConeDirections":
        return cls(None, None)

    @classmethod
    def from_angles(cls, left: float, right: float) -> "ConeDirections":
        if left - right >= math.pi:
            return cls.whole_plane()
        return cls((math.cos(left), math.sin(left)), (math.cos(right), math.sin(right)))

    def padded(self, delta: float) -> "ConeDirections":
        """Rotate vl by +delta and vr by -delta."""
        if self.full_plane or delta == 0:
            return self
        left = math.atan2(self.vl[1], self.vl[0])
        right = left - _span(self.vl, self.vr)
        return ConeDirections.from_angles(left + delta, right - delta)


def _span(vl, vr) -> float:
    """Counterclockwise angle from vr to vl in [0, 2pi)."""
    a = math.atan2(vr[0] * vl[1] - vr[1] * vl[0], vr[0] * vl[0] + vr[1] * vl[1])
    return a if a >= 0 else a + 2 * math.pi


@dataclass(frozen=True)
class VelocityCone:
    apex: Tuple[float, float]
    vl: Tuple[float, float] = (0.0, 0.0)
    vr: Tuple[float, float] = (0.0, 0.0)
    full_plane: bool = False


def cone_directions_polytopic(robot: ConvexPolygon, obstacle: ConvexPolygon) -> ConeDirections:
    """Extreme directions over all obstacle-vertex minus robot-vertex vectors.

    Angles are measured as offsets from the centroid-to-centroid direction, so
    the construction is valid on either side of the +-pi seam.
    """
    if intersects(robot, obstacle):
        return ConeDirections.whole_plane()
    ref = centroid(obstacle) - centroid(robot)
    base = math.atan2(ref[1], ref[0])
    lo, hi = kernels.angle_extremes(robot.array, obstacle.array, float(ref[0]), float(ref[1]))
    return ConeDirections.from_angles(base + hi, base + lo)


def cone_directions_circular(x_r: Sequence[float], r_r: float, x_o: Sequence[float], r_o: float) -> ConeDirections:
    """Tangent directions to the disc of radius ``r_r + r_o`` around ``x_o - x_r``."""
    dx, dy = x_o[0] - x_r[0], x_o[1] - x_r[1]
    dist = math.hypot(dx, dy)
    radius = r_r + r_o
    if dist <= radius:
        return ConeDirections.whole_plane()
    base = math.atan2(dy, dx)
    half = math.asin(radius / dist)
    return ConeDirections.from_angles(base + half, base - half)


def _cone(dirs: ConeDirections, apex) -> VelocityCone:
    apex = (float(apex[0]), float(apex[1]))
    if dirs.full_plane:
        return VelocityCone(apex, full_plane=True)
    return VelocityCone(apex, dirs.vl, dirs.vr)


def build_vo(dirs: ConeDirections, v_obstacle: Sequence[float]) -> VelocityCone:
    return _cone(dirs, v_obstacle)


def rvo_apex(v_robot, v_other) -> Tuple[float, float]:
    return (0.5 * (v_robot[0] + v_other[0]), 0.5 * (v_robot[1] + v_other[1]))


def build_rvo(dirs: ConeDirections, v_robot: Sequence[float], v_other: Sequence[float]) -> VelocityCone:
    return _cone(dirs, rvo_apex(v_robot, v_other))


def _line_intersection(p, u, q, w):
    # p + s*u = q + t*w
    den = u[0] * w[1] - u[1] * w[0]
    if abs(den) < PARALLEL_TOL:
        return None
    s = ((q[0] - p[0]) * w[1] - (q[1] - p[1]) * w[0]) / den
    return (p[0] + s * u[0], p[1] + s * u[1])


def build_hrvo(dirs: ConeDirections, v_robot: Sequence[float], v_other: Sequence[float]) -> VelocityCone:
    """Hybrid reciprocal cone.

    The side of the RVO centerline holding ``v_robot`` keeps its RVO edge; the
    opposite edge is taken from the VO. A robot exactly on the centerline is
    assigned to the vl side.
    """
    rvo = rvo_apex(v_robot, v_other)
    if dirs.full_plane:
        return _cone(dirs, rvo)
    vl, vr = dirs.vl, dirs.vr
    bis = (vl[0] + vr[0], vl[1] + vr[1])
    rel = (v_robot[0] - rvo[0], v_robot[1] - rvo[1])
    on_left = bis[0] * rel[1] - bis[1] * rel[0] >= 0.0
    vo = (float(v_other[0]), float(v_other[1]))
    if on_left:
        apex = _line_intersection(rvo, vl, vo, vr)
    else:
        apex = _line_intersection(rvo, vr, vo, vl)
    return _cone(dirs, rvo if apex is None else apex)


def cone_contains(c: VelocityCone, v: Sequence[float]) -> bool:
    """Closed-cone membership; the apex itself is inside."""
    if c.full_plane:
        return True
    dx, dy = v[0] - c.apex[0], v[1] - c.apex[1]
    return c.vr[0] * dy - c.vr[1] * dx >= 0.0 and c.vl[0] * dy - c.vl[1] * dx <= 0.0


def cones_to_arrays(cones: Sequence[VelocityCone]):
    m = len(cones)
    apex = np.empty((m, 2))
    vl = np.empty((m, 2))
    vr = np.empty((m, 2))
    full = np.empty(m, dtype=np.uint8)
    for i, c in enumerate(cones):
        apex[i] = c.apex
        vl[i] = c.vl
        vr[i] = c.vr
        full[i] = c.full_plane
    return apex, vl, vr, full


def set_mask(cones: Sequence[VelocityCone], points) -> np.ndarray:
    """Vectorised :func:`set_contains` over an ``(N, 2)`` array of velocities."""
    return kernels.cone_mask(np.asarray(points, dtype=float).reshape(-1, 2), *cones_to_arrays(cones))


def set_contains(cones: Sequence[VelocityCone], v: Sequence[float]) -> bool:
    """True if ``v`` lies in the union of the cones."""
    return any(cone_contains(c, v) for c in cones)


def boundary_distance(c: VelocityCone, v: Sequence[float]) -> float:
    """Distance from ``v`` to the boundary rays of a (non full-plane) cone."""
    d = (v[0] - c.apex[0], v[1] - c.apex[1])
    best = math.inf
    for u in (c.vl, c.vr):
        along = u[0] * d[0] + u[1] * d[1]
        if along > 0:
            best = min(best, abs(u[0] * d[1] - u[1] * d[0]))
        else:
            best = min(best, math.hypot(*d))
    return best
