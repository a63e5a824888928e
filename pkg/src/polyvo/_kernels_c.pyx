# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot geometric kernels.

Same functions and semantics as ``_kernels_py``. Inputs are C-contiguous
float64 arrays; polygons are ``(K, 2)`` and counterclockwise.
"""

import numpy as np

from libc.math cimport INFINITY, atan2, fmod, sqrt, M_PI

BACKEND = "cython"


cdef inline double _cross(double ox, double oy, double ax, double ay, double bx, double by) noexcept nogil:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def convex_hull(points):
    """Strictly convex CCW hull of a point cloud (Andrew's monotone chain)."""
    cdef double[:, ::1] p = np.unique(np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 2), axis=0)
    cdef Py_ssize_t n = p.shape[0]
    if n < 3:
        return np.asarray(p).copy()
    out = np.empty((2 * n, 2), dtype=np.float64)
    cdef double[:, ::1] h = out
    cdef Py_ssize_t k = 0, i, t
    # np.unique sorts lexicographically, as monotone chain requires
    for i in range(n):
        while k >= 2 and _cross(h[k - 2, 0], h[k - 2, 1], h[k - 1, 0], h[k - 1, 1], p[i, 0], p[i, 1]) <= 0.0:
            k -= 1
        h[k, 0] = p[i, 0]
        h[k, 1] = p[i, 1]
        k += 1
    t = k + 1
    for i in range(n - 2, -1, -1):
        while k >= t and _cross(h[k - 2, 0], h[k - 2, 1], h[k - 1, 0], h[k - 1, 1], p[i, 0], p[i, 1]) <= 0.0:
            k -= 1
        h[k, 0] = p[i, 0]
        h[k, 1] = p[i, 1]
        k += 1
    return out[: k - 1].copy()


cdef bint _separated_by(const double[:, ::1] poly, const double[:, ::1] a, const double[:, ::1] b) noexcept nogil:
    cdef Py_ssize_t k, i, n = poly.shape[0]
    cdef double nx, ny, v, amin, amax, bmin, bmax
    for k in range(n):
        nx = poly[(k + 1) % n, 1] - poly[k, 1]
        ny = -(poly[(k + 1) % n, 0] - poly[k, 0])
        amin = INFINITY
        amax = -INFINITY
        for i in range(a.shape[0]):
            v = a[i, 0] * nx + a[i, 1] * ny
            if v < amin:
                amin = v
            if v > amax:
                amax = v
        bmin = INFINITY
        bmax = -INFINITY
        for i in range(b.shape[0]):
            v = b[i, 0] * nx + b[i, 1] * ny
            if v < bmin:
                bmin = v
            if v > bmax:
                bmax = v
        if amax < bmin or bmax < amin:
            return True
    return False


cdef bint _overlap(const double[:, ::1] a, const double[:, ::1] b) noexcept nogil:
    return not (_separated_by(a, a, b) or _separated_by(b, a, b))


def sat_overlap(const double[:, ::1] a, const double[:, ::1] b):
    """True when the polygons overlap or touch (closed sets)."""
    return bool(_overlap(a, b))


cdef double _points_to_edges(const double[:, ::1] pts, const double[:, ::1] poly) noexcept nogil:
    cdef Py_ssize_t i, k, n = poly.shape[0]
    cdef double best = INFINITY, sx, sy, l2, t, dx, dy, d2
    for k in range(n):
        sx = poly[(k + 1) % n, 0] - poly[k, 0]
        sy = poly[(k + 1) % n, 1] - poly[k, 1]
        l2 = sx * sx + sy * sy
        for i in range(pts.shape[0]):
            t = ((pts[i, 0] - poly[k, 0]) * sx + (pts[i, 1] - poly[k, 1]) * sy) / l2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            dx = pts[i, 0] - (poly[k, 0] + t * sx)
            dy = pts[i, 1] - (poly[k, 1] + t * sy)
            d2 = dx * dx + dy * dy
            if d2 < best:
                best = d2
    return sqrt(best)


def polygon_distance(const double[:, ::1] a, const double[:, ::1] b):
    if _overlap(a, b):
        return 0.0
    cdef double d1 = _points_to_edges(a, b)
    cdef double d2 = _points_to_edges(b, a)
    return d1 if d1 < d2 else d2


def ray_entry_times(origin, velocities, const double[:, ::1] region):
    """Entry time of rays ``origin + t * v`` (t >= 0) into a convex region."""
    cdef double[:, ::1] v = np.ascontiguousarray(velocities, dtype=np.float64).reshape(-1, 2)
    cdef double ox = origin[0], oy = origin[1]
    cdef Py_ssize_t n = v.shape[0], m = region.shape[0], i, k
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    cdef double[::1] nx = np.empty(m), ny = np.empty(m), num = np.empty(m)
    cdef double lo, hi, den, r
    cdef bint hit
    for k in range(m):
        nx[k] = region[(k + 1) % m, 1] - region[k, 1]
        ny[k] = -(region[(k + 1) % m, 0] - region[k, 0])
        num[k] = nx[k] * (ox - region[k, 0]) + ny[k] * (oy - region[k, 1])
    with nogil:
        for i in range(n):
            lo = 0.0
            hi = INFINITY
            hit = True
            for k in range(m):
                den = nx[k] * v[i, 0] + ny[k] * v[i, 1]
                if den == 0.0:
                    if num[k] > 0.0:
                        hit = False
                        break
                else:
                    r = -num[k] / den
                    if den < 0.0:
                        if r > lo:
                            lo = r
                    elif r < hi:
                        hi = r
            res[i] = lo if (hit and lo <= hi) else INFINITY
    return out


def disc_entry_times(velocities, center, double radius):
    """Entry time of rays from the origin into the closed disc."""
    cdef double[:, ::1] v = np.ascontiguousarray(velocities, dtype=np.float64).reshape(-1, 2)
    cdef double cx = center[0], cy = center[1]
    cdef double c2 = cx * cx + cy * cy - radius * radius
    cdef Py_ssize_t i, n = v.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    cdef double a, b, disc
    if c2 <= 0.0:
        out[:] = 0.0
        return out
    for i in range(n):
        a = v[i, 0] * v[i, 0] + v[i, 1] * v[i, 1]
        b = v[i, 0] * cx + v[i, 1] * cy
        disc = b * b - a * c2
        if a > 0.0 and b > 0.0 and disc >= 0.0:
            res[i] = (b - sqrt(disc)) / a
        else:
            res[i] = INFINITY
    return out


def angle_extremes(const double[:, ::1] robot, const double[:, ::1] obstacle, double ref_x, double ref_y):
    """Min and max wrapped angle of ``obstacle[h] - robot[k]`` about ``ref``."""
    cdef Py_ssize_t k, h
    cdef double dx, dy, off, lo = INFINITY, hi = -INFINITY
    for k in range(robot.shape[0]):
        for h in range(obstacle.shape[0]):
            dx = obstacle[h, 0] - robot[k, 0]
            dy = obstacle[h, 1] - robot[k, 1]
            off = atan2(ref_x * dy - ref_y * dx, ref_x * dx + ref_y * dy)
            if off < lo:
                lo = off
            if off > hi:
                hi = off
    return lo, hi


def cone_mask(points, const double[:, ::1] apex, const double[:, ::1] vl, const double[:, ::1] vr, full):
    """Boolean mask: point inside at least one cone."""
    cdef double[:, ::1] p = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 2)
    cdef const unsigned char[::1] f = np.ascontiguousarray(full, dtype=np.uint8)
    cdef Py_ssize_t n = p.shape[0], m = apex.shape[0], i, j
    out = np.zeros(n, dtype=np.bool_)
    cdef unsigned char[::1] res = out.view(np.uint8)
    cdef double dx, dy
    with nogil:
        for i in range(n):
            for j in range(m):
                if f[j]:
                    res[i] = 1
                    break
                dx = p[i, 0] - apex[j, 0]
                dy = p[i, 1] - apex[j, 1]
                if vr[j, 0] * dy - vr[j, 1] * dx >= 0.0 and vl[j, 0] * dy - vl[j, 1] * dx <= 0.0:
                    res[i] = 1
                    break
    return out


def wrap_angle(double a):
    """Wrap to (-pi, pi]."""
    a = fmod(a + M_PI, 2.0 * M_PI)
    if a <= 0.0:
        a += 2.0 * M_PI
    return a - M_PI
