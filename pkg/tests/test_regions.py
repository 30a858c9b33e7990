from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mcflow.errors import DimensionError, RegionError, UnboundedRegionError
from mcflow.regions import (
    ConvexPolygon,
    Halfspace,
    Orthant,
    PointSet,
    Polygonal,
    box,
    box_points,
    convex_hull,
    discretized,
    halfspace_polygon,
    intersect,
    minkowski_all,
    minkowski_sum,
    negate,
    points,
    polygon,
    polygons,
    translate,
    zero_region,
)
from mcflow.vector import vec


def _verts(region):
    return [[tuple(v) for v in piece] for piece in region.vertex_lists()]


# exnet arc (2, 3): x + 2y <= 2, or x <= 2 with 1 < y <= 2
def _arc23():
    triangle = ConvexPolygon.from_halfspaces([
        Halfspace.of((1, 2), 2), Halfspace.of((-1, 0), 0), Halfspace.of((0, -1), 0)])
    strip = ConvexPolygon.from_halfspaces([
        Halfspace.of((1, 0), 2), Halfspace.of((-1, 0), 0), Halfspace.of((0, 1), 2),
        Halfspace.of((0, -1), -1, True)])
    return Polygonal.of([triangle, strip])


def test_hull_is_ccw_from_lexicographic_minimum():
    assert convex_hull([(2, 2), (0, 2), (2, 0), (0, 0), (1, 1)]) == [vec(0, 0), vec(2, 0), vec(2, 2), vec(0, 2)]
    assert convex_hull([(0, 0), (1, 1), (2, 2)]) == [vec(0, 0), vec(2, 2)]


def test_polygon_canonical_vertices():
    assert _verts(polygon([(2, 2), (0, 0), (2, 0), (0, 2)])) == [[(0, 0), (2, 0), (2, 2), (0, 2)]]
    assert polygon([(2, 2), (0, 0), (2, 0), (0, 2)]) == box((0, 0), (2, 2))


def test_point_set_membership_and_dimension():
    r = points(2, [(0, 0), (1, 2)])
    assert r.contains((1, 2))
    assert not r.contains((2, 1))
    with pytest.raises(DimensionError):
        r.contains((1, 2, 3))
    with pytest.raises(DimensionError):
        points(2, [(1, 2, 3)])


def test_arc23_membership():
    r = _arc23()
    assert r.contains((2, 0))      # x + 2y = 2
    assert r.contains((0, 1))
    assert not r.contains((1, 1))  # outside the triangle, y = 1 not > 1
    assert r.contains((1, "3/2"))
    assert r.contains((2, 2))
    assert not r.contains((3, 0))


def test_strict_halfspace_excludes_boundary():
    r = halfspace_polygon(((1, 0), 2), ((-1, 0), 0), ((0, 1), 2), ((0, -1), -1, True))
    assert not r.contains((1, 1))
    assert r.contains((1, 2))
    # vertices describe the closure
    assert _verts(r) == [[(0, 1), (2, 1), (2, 2), (0, 2)]]


def test_empty_and_unbounded_halfspace_systems():
    assert halfspace_polygon(((1, 0), 0), ((-1, 0), -1), ((0, 1), 1), ((0, -1), 0)).is_empty()
    # a segment whose only points lie on a strict boundary
    assert halfspace_polygon(((1, 0), 0), ((-1, 0), 0, True), ((0, 1), 1), ((0, -1), 0)).is_empty()
    with pytest.raises(UnboundedRegionError):
        halfspace_polygon(((-1, 0), 0), ((0, -1), 0))


def test_minkowski_sum_of_box_and_triangle():
    s = minkowski_sum(box((0, 0), (1, 1)), polygon([(0, 0), (1, 0), (0, 1)]))
    assert _verts(s) == [[(0, 0), (2, 0), (2, 1), (1, 2), (0, 2)]]


def test_minkowski_sum_with_degenerate_pieces():
    seg = polygon([(0, 0), (2, 0)])
    pt = polygon([(1, 1)])
    assert _verts(minkowski_sum(seg, pt)) == [[(1, 1), (3, 1)]]
    assert _verts(minkowski_sum(seg, polygon([(0, 0), (0, 1)]))) == [[(0, 0), (2, 0), (2, 1), (0, 1)]]


def test_minkowski_sum_drops_strictness():
    r = halfspace_polygon(((1, 0), 1), ((-1, 0), 0), ((0, 1), 1, True), ((0, -1), 0))
    s = minkowski_sum(r, zero_region(2, "polygons"))
    assert s.contains((1, 1))
    assert not r.contains((1, 1))


def test_point_set_sum_intersection_negation():
    a = points(2, [(0, 0), (1, 1)])
    b = points(2, [(0, 0), (1, 0)])
    assert minkowski_sum(a, b) == points(2, [(0, 0), (1, 0), (1, 1), (2, 1)])
    assert intersect(a, b) == points(2, [(0, 0)])
    assert negate(a) == points(2, [(0, 0), (-1, -1)])
    assert translate(a, (1, 0)) == points(2, [(1, 0), (2, 1)])
    with pytest.raises(RegionError):
        minkowski_sum(a, box((0, 0), (1, 1)))


def test_empty_sum_is_zero():
    assert minkowski_all([], 3, "points") == points(3, [(0, 0, 0)])
    assert minkowski_all([], 2, "polygons") == polygon([(0, 0)])


def test_union_of_adjacent_boxes_merges():
    r = polygons([(0, 0), (1, 0), (1, 1), (0, 1)], [(1, 0), (2, 0), (2, 1), (1, 1)])
    assert len(r.pieces) == 1
    assert r == box((0, 0), (2, 1))


def test_non_convex_union_stays_split():
    r = polygons([(0, 0), (2, 0), (2, 1), (0, 1)], [(0, 0), (1, 0), (1, 2), (0, 2)])
    assert len(r.pieces) == 2
    assert r.area() == 3
    assert not r.contains((2, 2))


def test_covered_piece_is_dropped():
    r = polygons([(0, 0), (3, 0), (3, 3), (0, 3)], [(1, 1), (2, 1), (2, 2)])
    assert r == box((0, 0), (3, 3))
    assert len(r.pieces) == 1


def test_polygon_intersection_and_orthant_clip():
    r = intersect(box((0, 0), (2, 2)), box((1, 1), (3, 3)))
    assert r == box((1, 1), (2, 2))
    assert intersect(box((0, 0), (1, 1)), box((2, 2), (3, 3))).is_empty()
    clipped = intersect(box((-1, -1), (1, 1)), Orthant(2))
    assert clipped == box((0, 0), (1, 1))
    assert intersect(points(2, [(-1, 0), (1, 1)]), Orthant(2)) == points(2, [(1, 1)])


def test_integer_points_and_discretize():
    assert discretized(polygon([(0, 0), (2, 0), (0, 2)])) == points(
        2, [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2)])
    assert discretized(_arc23()) == points(2, [(0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 2)])
    assert len(box_points((0, 0, 0), (1, 1, 2))) == 12


def test_reducibility():
    assert box_points((0, 0), (2, 3)).is_reducible()
    assert box((0, 0), ("5/2", "5/2")).is_reducible()
    assert not points(2, [(0, 0), (1, 1)]).is_reducible()
    assert not points(2, [(1, 0)]).is_reducible()
    assert not _arc23().is_reducible()   # (1, 2) present, (1, 1) missing
    assert Orthant(2).is_reducible()


def test_orthant_is_only_a_return_capacity():
    o = Orthant(2)
    assert o.contains((0, 5))
    assert not o.contains((-1, 0))
    with pytest.raises(RegionError):
        o.negate()
    with pytest.raises(UnboundedRegionError):
        o.integer_points()


_pts = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=5)


@settings(max_examples=40, deadline=None)
@given(_pts, _pts)
def test_polygon_sum_contains_vertex_sums(a, b):
    pa, pb = polygon(a), polygon(b)
    s = minkowski_sum(pa, pb)
    assert s == minkowski_sum(pb, pa)
    for p in a:
        for q in b:
            assert s.contains(vec(*p) + vec(*q))
    lo, hi = s.bounding_box()
    assert lo == vec(min(p[0] for p in a) + min(q[0] for q in b), min(p[1] for p in a) + min(q[1] for q in b))
    assert hi == vec(max(p[0] for p in a) + max(q[0] for q in b), max(p[1] for p in a) + max(q[1] for q in b))


@settings(max_examples=40, deadline=None)
@given(_pts)
def test_negation_is_an_involution(a):
    r = polygon(a)
    assert negate(negate(r)) == r
    for p in a:
        assert negate(r).contains(-vec(*p))


@settings(max_examples=40, deadline=None)
@given(_pts, _pts)
def test_point_set_sum_matches_definition(a, b):
    s = minkowski_sum(points(2, a), points(2, b))
    assert set(s.points) == {vec(*p) + vec(*q) for p in a for q in b}


def test_mixed_intersection_filters_points_by_membership():
    pts = points(2, [(0, 0), (5, 5), (1, 1)])
    assert intersect(pts, box((0, 0), (1, 1))) == points(2, [(0, 0), (1, 1)])
    assert intersect(box((0, 0), (1, 1)), pts) == points(2, [(0, 0), (1, 1)])
    # strict edge of the strip keeps (1, 1) out of the strip piece but the triangle has it
    on_arc = intersect(points(2, [(1, 1), (2, 1), (1, 2), (2, 2)]), _arc23())
    assert on_arc == points(2, [(1, 2), (2, 2)])
    assert intersect(points(2, [(3, 3)]), box((0, 0), (1, 1))).is_empty()
    with pytest.raises(DimensionError):
        intersect(points(3, [(0, 0, 0)]), box((0, 0), (1, 1)))


def test_segment_capacity_is_reducible():
    s1 = load_fixture("exnet").arc("s1").capacity
    assert s1 == polygon([(0, 0), (0, 2)])
    assert s1.is_reducible()


def test_sum_over_an_intersection_can_be_strictly_smaller():
    net = load_fixture("gap")
    a, b, c = (net.arc(i).capacity for i in ("a3", "a1", "a2"))
    left = minkowski_sum(a, intersect(b, c))
    right = intersect(minkowski_sum(a, b), minkowski_sum(a, c))
    assert set(left.points) < set(right.points)
    assert set(right.points) - set(left.points) == {vec(2, 2)}


_small = st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=4)


@settings(max_examples=30, deadline=None)
@given(_small, _small, _small)
def test_polygon_sum_is_associative(a, b, c):
    pa, pb, pc = polygon(a), polygon(b), polygon(c)
    assert minkowski_sum(minkowski_sum(pa, pb), pc) == minkowski_sum(pa, minkowski_sum(pb, pc))


@settings(max_examples=30, deadline=None)
@given(_small, _small, _small)
def test_point_set_sum_is_associative(a, b, c):
    pa, pb, pc = points(2, a), points(2, b), points(2, c)
    assert minkowski_sum(minkowski_sum(pa, pb), pc) == minkowski_sum(pa, minkowski_sum(pb, pc))


@settings(max_examples=40, deadline=None)
@given(_pts, _pts)
def test_negation_distributes_over_sum_and_intersection(a, b):
    pa, pb = polygon(a), polygon(b)
    assert negate(minkowski_sum(pa, pb)) == minkowski_sum(negate(pa), negate(pb))
    assert negate(intersect(pa, pb)) == intersect(negate(pa), negate(pb))
    sa, sb = points(2, a), points(2, b)
    assert negate(minkowski_sum(sa, sb)) == minkowski_sum(negate(sa), negate(sb))
    assert negate(intersect(sa, sb)) == intersect(negate(sa), negate(sb))


_frac_pts = st.lists(
    st.tuples(st.integers(-6, 6), st.integers(-6, 6)).map(lambda p: (Fraction(p[0], 2), Fraction(p[1], 2))),
    min_size=1, max_size=4)


@settings(max_examples=40, deadline=None)
@given(_frac_pts, _frac_pts)
def test_integer_points_of_a_sum_cover_the_sums_of_integer_points(a, b):
    pa, pb = polygon(a), polygon(b)
    total = set(minkowski_sum(pa, pb).integer_points())
    for p in pa.integer_points():
        for q in pb.integer_points():
            assert p + q in total
