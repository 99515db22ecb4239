import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geomcases import membership, random_polygon, random_region, sample_points
from stlstar import geometry as geo
from stlstar.geometry import ConvexPolygon, Region

R = 10.0
EPS = 1e-9 * R


def rect(x0, x1, y0, y1):
    return ConvexPolygon.rectangle(x0, x1, y0, y1)


def region(*polys):
    return Region(tuple(polys), R, EPS)


def test_hull_is_ccw_without_collinear_points():
    p = geo.convex_hull([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (1, 1)], EPS)
    assert len(p) == 4 and p.area() == pytest.approx(4.0)


def test_from_points_drops_slivers():
    assert ConvexPolygon.from_points([(0, 0), (5, 0), (5, 1e-12)], EPS).is_empty


def test_signed_distance_and_row():
    p = rect(0, 4, 0, 2)
    assert p.signed_distance(1, 1) == pytest.approx(1.0)
    assert p.signed_distance(6, 1) == pytest.approx(-2.0)
    tri = ConvexPolygon.from_points([(0, 0), (4, 0), (0, 4)], EPS)
    assert tri.row(1.0) == pytest.approx((0.0, 3.0))


def test_intersect_and_difference():
    a, b = rect(0, 4, 0, 4), rect(2, 6, 1, 3)
    assert geo.intersect(a, b, EPS).area() == pytest.approx(4.0)
    pieces = geo.difference(a, b, EPS)
    assert sum(q.area() for q in pieces) == pytest.approx(12.0)
    assert geo.intersect(a, rect(5, 6, 5, 6), EPS).is_empty


def test_complement_of_empty_and_full():
    assert geo.complement(Region.empty(R)).area() == pytest.approx(R * R)
    assert geo.complement(Region.full(R)).is_empty


def test_complement_area():
    r = region(rect(1, 3, 1, 3), rect(2, 5, 2, 4))
    c = geo.complement(r)
    assert c.area() == pytest.approx(R * R - (4 + 6 - 1))


def test_erode_shift_band():
    # a band [5, 6] x [0, 10] seen through a lookahead window [0, 2] becomes [3, 6]
    out = geo.erode_shift(region(rect(5, 6, 0, R)), 0.0, 2.0)
    assert len(out) == 1 and out.polygons[0].bbox() == pytest.approx((3.0, 0.0, 6.0, R))


def test_erode_shift_clips_to_domain_and_validates():
    out = geo.erode_shift(region(rect(1, 2, 0, 1)), 0.0, 3.0)
    assert out.polygons[0].xmin == pytest.approx(0.0)
    with pytest.raises(ValueError):
        geo.erode_shift(region(rect(1, 2, 0, 1)), 2.0, 1.0)


def test_diagonal_trace_interior_and_edge_contact():
    tri_above = ConvexPolygon.from_points([(0, 0), (R, R), (0, R)], EPS)
    tri_below = ConvexPolygon.from_points([(0, 0), (R, 0), (R, R)], EPS)
    assert geo.diagonal_trace(region(tri_above)) == []
    assert geo.diagonal_trace(region(tri_below)) == []
    assert geo.diagonal_trace(region(tri_above, tri_below)) == [(0.0, R)]
    assert geo.diagonal_trace(region(rect(2, 5, 0, R))) == [(2.0, 5.0)]


def test_cylindrify_makes_vertical_bands():
    out = geo.cylindrify([(1.0, 2.0), (4.0, 7.0)], R)
    assert [p.bbox() for p in out] == [(1.0, 0.0, 2.0, R), (4.0, 0.0, 7.0, R)]


def test_merge_adjacent_joins_rectangles_sharing_an_edge():
    out = geo.merge_adjacent(region(rect(0, 2, 0, 1), rect(2, 5, 0, 1), rect(7, 8, 0, 1)))
    assert sorted(p.area() for p in out) == pytest.approx([1.0, 5.0])


def test_merge_adjacent_keeps_non_convex_unions_apart():
    out = geo.merge_adjacent(region(rect(0, 2, 0, 1), rect(2, 3, 0, 3)))
    assert len(out) == 2


def test_contains_point_modes():
    r = region(rect(1, 2, 1, 2))
    assert r.contains(1.0, 1.5, "closed") and not r.contains(1.0, 1.5, "strict")
    assert r.contains(1.5, 1.5, "strict")
    with pytest.raises(ValueError):
        r.contains(1, 1, "fuzzy")


def test_corner_coverage():
    assert geo.corner_coverage(region(rect(0, 1, 0, 1))) == "inside"
    assert geo.corner_coverage(region(rect(0.5, 1, 0, 1))) == "outside"
    tri = ConvexPolygon.from_points([(0, 0), (1, 0), (1, 1)], EPS)
    assert geo.corner_coverage(region(tri)) == "boundary"
    other = ConvexPolygon.from_points([(0, 0), (1, 1), (0, 1)], EPS)
    assert geo.corner_coverage(region(tri, other)) == "inside"


def test_region_json_round_trip():
    r = region(rect(0, 1, 0, 2), geo.convex_hull([(3, 3), (4, 3), (3, 5)], EPS))
    back = Region.from_json(r.to_json())
    assert back.r == R and [p.verts for p in back] == [p.verts for p in r]


# -- sampled properties ------------------------------------------------------------------


def _agree(expect, got, near):
    return not np.any((expect != got) & ~near)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_intersection_is_commutative(seed):
    rng = np.random.default_rng(seed)
    p, q = random_polygon(rng, R, EPS), random_polygon(rng, R, EPS)
    X, Y = sample_points(rng, R, 400)
    inp, n1 = membership([p], X, Y, 2 * EPS)
    inq, n2 = membership([q], X, Y, 2 * EPS)
    pq, n3 = membership([geo.intersect(p, q, EPS)], X, Y, 2 * EPS)
    qp, n4 = membership([geo.intersect(q, p, EPS)], X, Y, 2 * EPS)
    near = n1 | n2 | n3 | n4
    assert _agree(inp & inq, pq, near) and _agree(pq, qp, near)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_complement_is_an_involution(seed):
    rng = np.random.default_rng(seed)
    r = random_region(rng, R)
    c = geo.complement(r)
    cc = geo.complement(c)
    X, Y = sample_points(rng, R, 400)
    a, n1 = membership(r.polygons, X, Y, 2 * EPS)
    b, n2 = membership(c.polygons, X, Y, 2 * EPS)
    d, n3 = membership(cc.polygons, X, Y, 2 * EPS)
    near = n1 | n2 | n3
    assert _agree(~a, b, near) and _agree(a, d, near)


def _row_oracle(p, X, Y, lo, hi):
    out = np.zeros(X.shape, dtype=bool)
    for k in range(len(X)):
        if p.ymin <= Y[k] <= p.ymax:
            xl, xr = p.row(Y[k])
            out[k] = xl - hi <= X[k] <= xr - lo
    return out


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_erode_shift_matches_translate_union(seed):
    rng = np.random.default_rng(seed)
    p = random_polygon(rng, R, EPS)
    lo = float(rng.choice([0.0, rng.uniform(0, 3)]))
    hi = lo + float(rng.uniform(0.1, 4))
    e = geo.erode_shift(Region((p,), R, EPS), lo, hi)
    X, Y = sample_points(rng, R, 300)
    got, near = membership(e.polygons, X, Y, 2 * EPS)
    assert _agree(_row_oracle(p, X, Y, lo, hi), got, near)
    # every sampled translate lands inside the result
    for c in np.linspace(lo, hi, 5):
        t = p.translate(-c)
        inside_t, near_t = membership([t], X, Y, 2 * EPS)
        assert not np.any(inside_t & ~near_t & ~got & ~near)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_merge_adjacent_preserves_the_union(seed):
    rng = np.random.default_rng(seed)
    r = geo.complement(random_region(rng, R))
    m = geo.merge_adjacent(r)
    assert len(m) <= len(r)
    X, Y = sample_points(rng, R, 400)
    a, n1 = membership(r.polygons, X, Y, 2 * EPS)
    b, n2 = membership(m.polygons, X, Y, 2 * EPS)
    assert _agree(a, b, n1 | n2)
    assert sum(p.area() for p in m) == pytest.approx(sum(p.area() for p in r), rel=1e-9, abs=1e-9)


def test_polygons_stay_convex_after_operations():
    rng = np.random.default_rng(7)
    for _ in range(50):
        r = random_region(rng, R)
        for p in geo.complement(r).polygons + geo.erode_shift(r, 0.5, 2.0).polygons:
            assert geo.is_convex_ring(p.verts, EPS)
            assert p.area() > 0 and math.isfinite(p.area())
