"""Exact convex-polygon geometry in the plane.

Polygons are immutable, counterclockwise and strictly convex. Touching shapes
(distance exactly zero) are treated as intersecting everywhere in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from . import kernels

Point = Tuple[float, float]

DUPLICATE_TOL = 1e-9
CROSS_TOL = 1e-12


class GeometryError(ValueError):
    """Raised for degenerate or non-convex input polygons."""


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    return kernels.wrap_angle(float(a))


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices (meters)."""

    vertices: Tuple[Point, ...]

    def __post_init__(self):
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        _validate(verts)

    @classmethod
    def from_array(cls, arr, validate: bool = True) -> "ConvexPolygon":
        arr = np.asarray(arr, dtype=float).reshape(-1, 2)
        if validate:
            return cls(tuple(map(tuple, arr.tolist())))
        poly = object.__new__(cls)
        object.__setattr__(poly, "vertices", tuple(map(tuple, arr.tolist())))
        return poly

    @classmethod
    def from_points(cls, points: Iterable[Sequence[float]]) -> "ConvexPolygon":
        """Convex hull of arbitrary points, reoriented CCW."""
        return cls.from_array(kernels.convex_hull(np.asarray(list(points), dtype=float)))

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.vertices, dtype=float)
        arr.setflags(write=False)
        return arr

    def __len__(self) -> int:
        return len(self.vertices)


def _validate(verts: Tuple[Point, ...]) -> None:
    n = len(verts)
    if n < 3:
        raise GeometryError(f"polygon needs at least 3 vertices, got {n}")
    arr = np.array(verts)
    if not np.all(np.isfinite(arr)):
        raise GeometryError("polygon vertices must be finite")
    diff = arr[:, None, :] - arr[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, np.inf)
    if dist.min() <= DUPLICATE_TOL:
        raise GeometryError("polygon has duplicate vertices")
    e1 = np.roll(arr, -1, axis=0) - arr
    e2 = np.roll(e1, -1, axis=0)
    cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    if np.any(cross <= CROSS_TOL):
        raise GeometryError("polygon must be strictly convex and counterclockwise")
    # a star polygon has positive turns but winds more than once
    turns = np.arctan2(cross, np.einsum("ij,ij->i", e1, e2)).sum()
    if abs(turns - 2 * math.pi) > 1e-6:
        raise GeometryError("polygon winds more than once")


@dataclass(frozen=True)
class Pose:
    """Planar pose; heading is wrapped to (-pi, pi] on construction."""

    position: Point
    heading: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", (float(self.position[0]), float(self.position[1])))
        object.__setattr__(self, "heading", wrap_angle(self.heading))


def rectangle(length: float, width: float) -> ConvexPolygon:
    """Axis-aligned rectangle centered at the origin, long side along x."""
    hx, hy = 0.5 * length, 0.5 * width
    return ConvexPolygon(((-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy)))


def regular_polygon(n: int, radius: float, phase: float = 0.0) -> ConvexPolygon:
    angles = phase + 2.0 * math.pi * np.arange(n) / n
    return ConvexPolygon.from_array(radius * np.column_stack((np.cos(angles), np.sin(angles))))


def translate(p: ConvexPolygon, offset: Sequence[float]) -> ConvexPolygon:
    return ConvexPolygon.from_array(p.array + np.asarray(offset, dtype=float), validate=False)


def world_vertices(body: ConvexPolygon, pose: Pose) -> ConvexPolygon:
    """Rotate a body-frame polygon by the pose heading, then translate."""
    c, s = math.cos(pose.heading), math.sin(pose.heading)
    rot = np.array(((c, s), (-s, c)))
    arr = body.array @ rot + np.asarray(pose.position)
    return ConvexPolygon.from_array(arr, validate=False)


def centroid(p: ConvexPolygon) -> np.ndarray:
    """Vertex centroid (mean of the vertices, not the area centroid)."""
    return p.array.mean(axis=0)


def recenter(p: ConvexPolygon) -> ConvexPolygon:
    """Shift so that the vertex centroid sits at the origin."""
    return ConvexPolygon.from_array(p.array - centroid(p), validate=False)


@lru_cache(maxsize=1024)
def circumradius(p: ConvexPolygon) -> float:
    """Largest centroid-to-vertex distance."""
    d = p.array - centroid(p)
    return float(np.sqrt(np.einsum("ij,ij->i", d, d).max()))


def minkowski_diff(obstacle: ConvexPolygon, robot: ConvexPolygon) -> ConvexPolygon:
    """The set ``obstacle + (-robot)`` as a convex polygon.

    A translation ``d`` of the robot makes it touch or overlap the obstacle
    exactly when ``d`` lies in the result.
    """
    sums = (obstacle.array[:, None, :] - robot.array[None, :, :]).reshape(-1, 2)
    return ConvexPolygon.from_array(kernels.convex_hull(sums), validate=False)


def intersects(a: ConvexPolygon, b: ConvexPolygon) -> bool:
    """Separating-axis test; touching counts as intersecting."""
    return kernels.sat_overlap(a.array, b.array)


def min_distance(a: ConvexPolygon, b: ConvexPolygon) -> float:
    """Euclidean distance between two convex polygons, 0 when they meet."""
    return kernels.polygon_distance(a.array, b.array)


def ray_entry_time(origin: Sequence[float], velocity: Sequence[float], region: ConvexPolygon) -> Optional[float]:
    """Smallest ``t >= 0`` with ``origin + t * velocity`` in ``region``.

    Returns None when the ray misses, and 0 when the origin is inside.
    """
    t = kernels.ray_entry_times(np.asarray(origin, dtype=float), np.asarray(velocity, dtype=float), region.array)[0]
    return None if math.isinf(t) else float(t)


def contains_point(p: ConvexPolygon, point: Sequence[float], tol: float = 0.0) -> bool:
    arr = p.array
    edges = np.roll(arr, -1, axis=0) - arr
    rel = np.asarray(point, dtype=float) - arr
    cross = edges[:, 0] * rel[:, 1] - edges[:, 1] * rel[:, 0]
    return bool(np.all(cross / np.hypot(edges[:, 0], edges[:, 1]) >= -tol))


@lru_cache(maxsize=1024)
def inflate(p: ConvexPolygon, margin: float) -> ConvexPolygon:
    """Offset every edge outward by ``margin`` and miter the corners."""
    if margin < 0:
        raise GeometryError("margin must be non-negative")
    if margin == 0:
        return p
    arr = p.array
    edges = np.roll(arr, -1, axis=0) - arr
    normals = np.column_stack((edges[:, 1], -edges[:, 0]))
    normals /= np.hypot(normals[:, 0], normals[:, 1])[:, None]
    prev = np.roll(normals, 1, axis=0)
    scale = margin / (1.0 + np.einsum("ij,ij->i", prev, normals))
    return ConvexPolygon.from_array(arr + (prev + normals) * scale[:, None], validate=False)
