"""Numpy implementations of the hot geometric kernels.

This module is the fallback used when the compiled ``_kernels_c`` extension is
unavailable. Both modules expose the same functions with the same semantics;
polygons are ``(K, 2)`` float64 arrays in counterclockwise order.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def convex_hull(points):
    """Strictly convex CCW hull of a point cloud (Andrew's monotone chain).

    Collinear points are dropped, so the result never has a straight angle.
    """
    pts = sorted(set(map(tuple, np.asarray(points, dtype=float).tolist())))
    if len(pts) < 3:
        return np.array(pts, dtype=float).reshape(-1, 2)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1], dtype=float)


def _edge_normals(poly):
    edges = np.roll(poly, -1, axis=0) - poly
    return np.column_stack((edges[:, 1], -edges[:, 0]))


def sat_overlap(a, b):
    """True when the polygons overlap or touch (closed sets)."""
    for poly in (a, b):
        normals = _edge_normals(poly)
        pa = a @ normals.T
        pb = b @ normals.T
        if np.any(pa.max(axis=0) < pb.min(axis=0)) or np.any(pb.max(axis=0) < pa.min(axis=0)):
            return False
    return True


def _points_to_edges(points, poly):
    start = poly
    seg = np.roll(poly, -1, axis=0) - poly
    seg_len2 = np.einsum("ij,ij->i", seg, seg)
    rel = points[:, None, :] - start[None, :, :]
    t = np.clip(np.einsum("pkj,kj->pk", rel, seg) / seg_len2, 0.0, 1.0)
    closest = start[None, :, :] + t[..., None] * seg[None, :, :]
    d = points[:, None, :] - closest
    return float(np.sqrt(np.einsum("pkj,pkj->pk", d, d).min()))


def polygon_distance(a, b):
    if sat_overlap(a, b):
        return 0.0
    return min(_points_to_edges(a, b), _points_to_edges(b, a))


def ray_entry_times(origin, velocities, region):
    """Entry time of rays ``origin + t * v`` (t >= 0) into a convex region.

    Returns an array of times with ``inf`` where the ray misses; 0 when the
    origin is already inside or on the boundary.
    """
    velocities = np.asarray(velocities, dtype=float).reshape(-1, 2)
    normals = _edge_normals(region)
    num = np.einsum("kj,kj->k", normals, origin[None, :] - region)
    den = velocities @ normals.T
    n = len(velocities)
    t_lo = np.zeros(n)
    t_hi = np.full(n, np.inf)
    hit = np.ones(n, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = -num[None, :] / den
    for k in range(len(region)):
        dk = den[:, k]
        parallel = dk == 0.0
        hit &= ~(parallel & (num[k] > 0.0))
        entering = dk < 0.0
        t_lo = np.where(entering, np.maximum(t_lo, ratio[:, k]), t_lo)
        leaving = dk > 0.0
        t_hi = np.where(leaving, np.minimum(t_hi, ratio[:, k]), t_hi)
    hit &= t_lo <= t_hi
    return np.where(hit, t_lo, np.inf)


def disc_entry_times(velocities, center, radius):
    """Entry time of rays from the origin into the closed disc."""
    velocities = np.asarray(velocities, dtype=float).reshape(-1, 2)
    c2 = center[0] * center[0] + center[1] * center[1] - radius * radius
    if c2 <= 0.0:
        return np.zeros(len(velocities))
    a = np.einsum("ij,ij->i", velocities, velocities)
    b = velocities @ center
    disc = b * b - a * c2
    out = np.full(len(velocities), np.inf)
    ok = (a > 0.0) & (b > 0.0) & (disc >= 0.0)
    out[ok] = (b[ok] - np.sqrt(disc[ok])) / a[ok]
    return out


def angle_extremes(robot, obstacle, ref_x, ref_y):
    """Min and max wrapped angle of ``obstacle[h] - robot[k]`` about ``ref``."""
    d = obstacle[None, :, :] - robot[:, None, :]
    cr = ref_x * d[..., 1] - ref_y * d[..., 0]
    dt = ref_x * d[..., 0] + ref_y * d[..., 1]
    off = np.arctan2(cr, dt)
    return float(off.min()), float(off.max())


def cone_mask(points, apex, vl, vr, full):
    """Boolean mask: point inside at least one cone."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(apex) == 0:
        return np.zeros(len(points), dtype=bool)
    d = points[:, None, :] - apex[None, :, :]
    c_r = vr[None, :, 0] * d[..., 1] - vr[None, :, 1] * d[..., 0]
    c_l = vl[None, :, 0] * d[..., 1] - vl[None, :, 1] * d[..., 0]
    inside = (c_r >= 0.0) & (c_l <= 0.0)
    inside |= np.asarray(full, dtype=bool)[None, :]
    return inside.any(axis=1)


def wrap_angle(a):
    """Wrap to (-pi, pi]."""
    a = math.fmod(a + math.pi, 2.0 * math.pi)
    if a <= 0.0:
        a += 2.0 * math.pi
    return a - math.pi
