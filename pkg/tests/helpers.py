"""Independent reference computations and random shape generators for tests.

Nothing here calls into the package's geometry kernels.
"""

import math

import numpy as np

from polyvo.geometry import ConvexPolygon


def random_convex(rng, center=(0.0, 0.0), r_min=0.2, r_max=1.2, k_min=3, k_max=8):
    """Random strictly convex CCW polygon: sorted angles on a random ellipse."""
    k = int(rng.integers(k_min, k_max + 1))
    while True:
        ang = np.sort(rng.uniform(0, 2 * math.pi, k))
        gaps = np.diff(np.append(ang, ang[0] + 2 * math.pi))
        if gaps.min() > 0.05 and gaps.max() < math.pi - 0.05:
            break
    a = rng.uniform(r_min, r_max)
    b = rng.uniform(r_min, r_max)
    rot = rng.uniform(0, 2 * math.pi)
    x = a * np.cos(ang)
    y = b * np.sin(ang)
    c, s = math.cos(rot), math.sin(rot)
    pts = np.column_stack((c * x - s * y, s * x + c * y)) + np.asarray(center)
    return ConvexPolygon.from_array(pts)


def sample_boundary(poly, spacing=1e-3):
    pts = []
    v = np.asarray(poly.vertices)
    for i in range(len(v)):
        a, b = v[i], v[(i + 1) % len(v)]
        n = max(2, int(math.ceil(np.linalg.norm(b - a) / spacing)) + 1)
        t = np.linspace(0.0, 1.0, n)[:, None]
        pts.append(a + t * (b - a))
    return np.vstack(pts)


def point_in_polygon(point, poly):
    """Even-odd crossing rule (works for any simple polygon)."""
    x, y = point
    v = poly.vertices
    inside = False
    j = len(v) - 1
    for i in range(len(v)):
        xi, yi = v[i]
        xj, yj = v[j]
        if (yi > y) != (yj > y) and x < (xj - xi) * (y - yi) / (yj - yi) + xi:
            inside = not inside
        j = i
    return inside


def sampled_distance(a, b, spacing=1e-3):
    """Distance by dense boundary sampling plus a containment check."""
    from scipy.spatial import cKDTree

    if point_in_polygon(a.vertices[0], b) or point_in_polygon(b.vertices[0], a):
        return 0.0
    pa = sample_boundary(a, spacing)
    pb = sample_boundary(b, spacing)
    d, _ = cKDTree(pb).query(pa)
    return float(d.min())


def enumerated_distance(a, b):
    """Brute force over all vertex / edge pairs of two disjoint polygons."""

    def pt_seg(p, s0, s1):
        p, s0, s1 = map(np.asarray, (p, s0, s1))
        d = s1 - s0
        t = np.clip(np.dot(p - s0, d) / np.dot(d, d), 0, 1)
        return float(np.linalg.norm(p - (s0 + t * d)))

    best = math.inf
    for P, Q in ((a, b), (b, a)):
        q = Q.vertices
        for p in P.vertices:
            for i in range(len(q)):
                best = min(best, pt_seg(p, q[i], q[(i + 1) % len(q)]))
    return best


def brute_hull_contains(points, d, tol=1e-9):
    """Is ``d`` in the convex hull of ``points``? Checks every supporting line."""
    pts = np.asarray(points)
    n = len(pts)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            e = pts[j] - pts[i]
            if np.linalg.norm(e) < 1e-12:
                continue
            side = e[0] * (pts[:, 1] - pts[i, 1]) - e[1] * (pts[:, 0] - pts[i, 0])
            if np.all(side >= -tol):
                sd = e[0] * (d[1] - pts[i, 1]) - e[1] * (d[0] - pts[i, 0])
                if sd < -tol * max(1.0, np.linalg.norm(e)):
                    return False
    return True


def ray_hits_pair_hull(robot, obstacle, directions, eps=1e-12):
    """Does a ray from the origin along each direction enter {o - r}?

    The hull of the pairwise differences is the union of all segments between
    two of its points, so the ray enters it iff it crosses one of those
    segments. Enumerating every segment needs no hull construction at all.
    Assumes the origin is outside (the shapes are disjoint).
    """
    pts = (np.asarray(obstacle.vertices)[:, None, :] - np.asarray(robot.vertices)[None, :, :]).reshape(-1, 2)
    i, j = np.triu_indices(len(pts), k=1)
    a, b = pts[i], pts[j]
    e = b - a
    d = np.asarray(directions, dtype=float).reshape(-1, 2)
    # solve t*d = a + s*e for every (direction, segment) pair
    den = d[:, None, 0] * e[None, :, 1] - d[:, None, 1] * e[None, :, 0]
    num_t = a[None, :, 0] * e[None, :, 1] - a[None, :, 1] * e[None, :, 0]
    num_s = a[None, :, 0] * d[:, None, 1] - a[None, :, 1] * d[:, None, 0]
    ok = np.abs(den) > eps
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(ok, num_t / den, -1.0)
        s = np.where(ok, num_s / den, -1.0)
    hit = (t >= 0) & (s >= 0) & (s <= 1)
    return hit.any(axis=1)


def disjoint_pair(rng, spread=4.0):
    """Two random convex polygons that do not touch (checked by even-odd tests)."""
    while True:
        a = random_convex(rng, center=rng.uniform(-spread, spread, 2))
        b = random_convex(rng, center=rng.uniform(-spread, spread, 2))
        if sampled_gap(a, b) > 1e-3:
            return a, b


def sampled_gap(a, b):
    if point_in_polygon(a.vertices[0], b) or point_in_polygon(b.vertices[0], a):
        return 0.0
    # segment-segment distance over all edge pairs (zero when edges cross)
    best = math.inf
    va, vb = np.asarray(a.vertices), np.asarray(b.vertices)
    for p0, p1 in zip(va, np.roll(va, -1, axis=0)):
        for q0, q1 in zip(vb, np.roll(vb, -1, axis=0)):
            best = min(best, _seg_seg(p0, p1, q0, q1))
    return best


def _seg_seg(p0, p1, q0, q1):
    def cross(u, v):
        return u[0] * v[1] - u[1] * v[0]

    r, s = p1 - p0, q1 - q0
    den = cross(r, s)
    if abs(den) > 1e-15:
        t = cross(q0 - p0, s) / den
        u = cross(q0 - p0, r) / den
        if 0 <= t <= 1 and 0 <= u <= 1:
            return 0.0

    def pt_seg(p, a, b):
        d = b - a
        t = np.clip(np.dot(p - a, d) / np.dot(d, d), 0, 1)
        return float(np.linalg.norm(p - (a + t * d)))

    return min(pt_seg(p0, q0, q1), pt_seg(p1, q0, q1), pt_seg(q0, p0, p1), pt_seg(q1, p0, p1))
