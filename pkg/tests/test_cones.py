import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyvo.cones import (
    ConeDirections,
    VelocityCone,
    boundary_distance,
    build_hrvo,
    build_rvo,
    build_vo,
    cone_contains,
    cone_directions_circular,
    cone_directions_polytopic,
    set_contains,
    set_mask,
)
from polyvo.geometry import centroid, circumradius, rectangle, translate

from helpers import disjoint_pair, ray_hits_pair_hull

SQUARE = rectangle(1.0, 1.0)
A = math.atan2(1, 3)


def angle(u):
    return math.atan2(u[1], u[0])


def span(d):
    a = angle(d.vl) - angle(d.vr)
    return a % (2 * math.pi)


class TestPolytopicDirections:
    def test_squares_ahead(self):
        d = cone_directions_polytopic(SQUARE, translate(SQUARE, (4, 0)))
        np.testing.assert_allclose(d.vl, (math.cos(A), math.sin(A)), atol=1e-12)
        np.testing.assert_allclose(d.vr, (math.cos(A), -math.sin(A)), atol=1e-12)

    def test_squares_behind_across_seam(self):
        d = cone_directions_polytopic(SQUARE, translate(SQUARE, (-4, 0)))
        np.testing.assert_allclose(d.vl, (-math.cos(A), -math.sin(A)), atol=1e-12)
        np.testing.assert_allclose(d.vr, (-math.cos(A), math.sin(A)), atol=1e-12)

    def test_overlap_is_full_plane(self):
        assert cone_directions_polytopic(SQUARE, translate(SQUARE, (0.5, 0.2))).full_plane

    def test_touching_is_full_plane(self):
        assert cone_directions_polytopic(SQUARE, translate(SQUARE, (1.0, 0))).full_plane

    def test_unit_vectors_and_span(self):
        rng = np.random.default_rng(20)
        for _ in range(200):
            r, o = disjoint_pair(rng)
            d = cone_directions_polytopic(r, o)
            if d.full_plane:
                continue
            assert math.hypot(*d.vl) == pytest.approx(1.0, abs=1e-9)
            assert math.hypot(*d.vr) == pytest.approx(1.0, abs=1e-9)
            assert 0 < span(d) < math.pi

    def test_translation_invariance(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            r, o = disjoint_pair(rng)
            off = rng.uniform(-20, 20, 2)
            d0 = cone_directions_polytopic(r, o)
            d1 = cone_directions_polytopic(translate(r, off), translate(o, off))
            assert d0.full_plane == d1.full_plane
            if not d0.full_plane:
                np.testing.assert_allclose(d0.vl, d1.vl, atol=1e-9)
                np.testing.assert_allclose(d0.vr, d1.vr, atol=1e-9)

    def test_swap_negates(self):
        rng = np.random.default_rng(22)
        for _ in range(100):
            r, o = disjoint_pair(rng)
            d = cone_directions_polytopic(r, o)
            e = cone_directions_polytopic(o, r)
            if d.full_plane:
                assert e.full_plane
                continue
            np.testing.assert_allclose(e.vl, -np.asarray(d.vl), atol=1e-9)
            np.testing.assert_allclose(e.vr, -np.asarray(d.vr), atol=1e-9)

    def test_circle_cone_contains_polygon_cone(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            r, o = disjoint_pair(rng, spread=6.0)
            poly = build_vo(cone_directions_polytopic(r, o), (0, 0))
            circ = build_vo(cone_directions_circular(centroid(r), circumradius(r), centroid(o), circumradius(o)),
                            (0, 0))
            for v in rng.uniform(-3, 3, (100, 2)):
                if cone_contains(poly, v):
                    assert cone_contains(circ, v)


class TestCircularDirections:
    def test_half_angle(self):
        d = cone_directions_circular((0, 0), 1.0, (4, 0), 1.0)
        np.testing.assert_allclose(d.vl, (math.cos(math.pi / 6), math.sin(math.pi / 6)))
        np.testing.assert_allclose(d.vr, (math.cos(math.pi / 6), -math.sin(math.pi / 6)))

    def test_tangent_touch_is_full_plane(self):
        assert cone_directions_circular((0, 0), 1.0, (2, 0), 1.0).full_plane

    def test_tiny_obstacle(self):
        d = cone_directions_circular((0, 0), 1.0, (4, 0), 0.0)
        assert angle(d.vl) == pytest.approx(math.asin(0.25))


class TestApexes:
    DIRS = ConeDirections.from_angles(math.pi / 6, -math.pi / 6)

    def test_vo_apex(self):
        assert build_vo(self.DIRS, (0, 0)).apex == (0.0, 0.0)
        assert build_vo(self.DIRS, (1.0, 0)).apex == (1.0, 0.0)

    def test_full_plane_propagates(self):
        assert build_vo(ConeDirections.whole_plane(), (3, 4)).full_plane
        assert build_rvo(ConeDirections.whole_plane(), (1, 0), (0, 0)).full_plane
        assert build_hrvo(ConeDirections.whole_plane(), (1, 0), (0, 0)).full_plane

    @pytest.mark.parametrize("vr, vo, apex", [((1, 0), (0, 0), (0.5, 0)), ((1, 1), (-1, -1), (0, 0)),
                                              ((0.3, 0.2), (0.3, 0.2), (0.3, 0.2))])
    def test_rvo_apex(self, vr, vo, apex):
        assert build_rvo(self.DIRS, vr, vo).apex == pytest.approx(apex)

    def test_hrvo_coincident(self):
        assert build_hrvo(self.DIRS, (0.4, -0.2), (0.4, -0.2)).apex == pytest.approx((0.4, -0.2))

    def test_hrvo_example_point(self):
        c = build_hrvo(self.DIRS, (1.0, 0.3), (0.0, -0.3))
        a = math.pi / 6
        # lines through (0.5, 0) along vl and (0, -0.3) along vr
        m = np.array([[math.cos(a), -math.cos(a)], [math.sin(a), math.sin(a)]])
        s, _ = np.linalg.solve(m, [-0.5, -0.3])
        assert c.apex == pytest.approx((0.5 + s * math.cos(a), s * math.sin(a)))

    def test_hrvo_vr_side_mirrors(self):
        up = build_hrvo(self.DIRS, (1.0, 0.3), (0.0, -0.3))
        down = build_hrvo(self.DIRS, (1.0, -0.3), (0.0, 0.3))
        assert down.apex == pytest.approx((up.apex[0], -up.apex[1]))

    def test_hrvo_tie_goes_to_vl_side(self):
        # v_robot on the centerline: the vl-side construction is used
        c = build_hrvo(self.DIRS, (1.0, 0.0), (0.0, 0.0))
        a = math.pi / 6
        expected = (0.25, -0.25 * math.tan(a))
        assert c.apex == pytest.approx(expected)

    def test_hrvo_parallel_falls_back(self):
        dirs = ConeDirections((1.0, 0.0), (1.0, -1e-12))
        c = build_hrvo(dirs, (1.0, 1.0), (0.0, 0.0))
        assert c.apex == pytest.approx((0.5, 0.5))


class TestMembership:
    CONE = build_vo(ConeDirections.from_angles(math.pi / 6, -math.pi / 6), (0, 0))

    def test_inside_and_outside(self):
        assert cone_contains(self.CONE, (2, 0))
        assert not cone_contains(self.CONE, (-2, 0))
        assert not cone_contains(self.CONE, (1, 1))

    def test_apex_inside(self):
        assert cone_contains(self.CONE, (0, 0))

    def test_boundary_inside(self):
        assert cone_contains(self.CONE, (math.cos(math.pi / 6), math.sin(math.pi / 6)))

    def test_full_plane(self):
        assert cone_contains(VelocityCone((5, 5), full_plane=True), (-100, 3))

    def test_union(self):
        other = build_vo(ConeDirections.from_angles(math.pi + 0.1, math.pi - 0.1), (0, 0))
        assert set_contains([self.CONE, other], (-2, 0))
        assert not set_contains([self.CONE, other], (0, 2))
        assert not set_contains([], (0, 0))

    def test_boundary_distance(self):
        assert boundary_distance(self.CONE, (2, 0)) == pytest.approx(1.0)
        assert boundary_distance(self.CONE, (-1, 0)) == pytest.approx(1.0)

    def test_padding_widens(self):
        d = ConeDirections.from_angles(0.3, -0.3).padded(0.1)
        assert angle(d.vl) == pytest.approx(0.4)
        assert angle(d.vr) == pytest.approx(-0.4)
        assert ConeDirections.from_angles(1.5, -1.5).padded(0.1).full_plane


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3), st.floats(-math.pi, math.pi),
                          st.floats(0.01, 1.5), st.booleans()), min_size=0, max_size=6),
       st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=30))
def test_vectorised_mask_matches_scalar(specs, points):
    cones = []
    for ax, ay, mid, half, full in specs:
        if full:
            cones.append(VelocityCone((ax, ay), full_plane=True))
        else:
            d = ConeDirections.from_angles(mid + half, mid - half)
            cones.append(build_vo(d, (ax, ay)))
    mask = set_mask(cones, points)
    assert list(mask) == [set_contains(cones, p) for p in points]


def test_rvo_reciprocity():
    # if A's choice is outside its RVO, B's mirrored choice is outside B's RVO
    rng = np.random.default_rng(24)
    for _ in range(100):
        ra, rb = disjoint_pair(rng)
        va, vb = rng.uniform(-1.5, 1.5, 2), rng.uniform(-1.5, 1.5, 2)
        cone_a = build_rvo(cone_directions_polytopic(ra, rb), va, vb)
        cone_b = build_rvo(cone_directions_polytopic(rb, ra), vb, va)
        for new_a in rng.uniform(-2, 2, (50, 2)):
            new_b = va + vb - new_a
            if boundary_distance(cone_a, new_a) < 1e-9:
                continue
            assert cone_contains(cone_a, new_a) == cone_contains(cone_b, new_b)


def test_vo_matches_ray_oracle_small():
    rng = np.random.default_rng(25)
    checked = 0
    for _ in range(100):
        r, o = disjoint_pair(rng)
        v_o = rng.uniform(-1, 1, 2)
        cone = build_vo(cone_directions_polytopic(r, o), v_o)
        vs = rng.uniform(-2, 2, (100, 2))
        hits = ray_hits_pair_hull(r, o, vs - v_o)
        for v, h in zip(vs, hits):
            if cone.full_plane or boundary_distance(cone, v) < 1e-6:
                continue
            assert cone_contains(cone, v) == bool(h)
            checked += 1
    assert checked > 5000

