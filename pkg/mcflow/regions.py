"""Exact capacity regions.

Three variants share one interface:

- ``PointSet``: a finite set of points in Q^k (any k).
- ``Polygonal``: for k = 2, a finite union of convex polygons, each stored in
  halfspace form with its closure's vertices cached in canonical order
  (counter-clockwise from the lexicographically smallest vertex).
- ``Orthant``: the nonnegative orthant, used only as the capacity of the
  return arc.

Minkowski sums of polygons are taken over closures, so a strict boundary is
dropped by a sum. Intersection, negation and translation keep strictness.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

from .errors import DimensionError, RegionError, UnboundedRegionError
from .simplex import LinearConstraint, find_point
from .util import as_rational
from .vector import CommodityVector, vec

POINTS = "points"
POLYGONS = "polygons"
ORTHANT = "orthant"

# pieces beyond this skip the whole-union convexity check (inclusion-exclusion is exponential)
_UNION_AREA_LIMIT = 10


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Sequence]) -> list[CommodityVector]:
    """Monotone-chain hull, CCW from the lexicographically smallest point.

    Collinear points are dropped; a degenerate hull has 1 or 2 vertices.
    """
    pts = sorted(set(CommodityVector(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polygon_area(vertices: Sequence) -> Fraction:
    if len(vertices) < 3:
        return Fraction(0)
    total = Fraction(0)
    for i, p in enumerate(vertices):
        q = vertices[(i + 1) % len(vertices)]
        total += p[0] * q[1] - q[0] * p[1]
    return abs(total) / 2


def _edge_half(d) -> int:
    # 0 for standard angles in (-90, 90], 1 for (90, 270]
    return 0 if d[0] > 0 or (d[0] == 0 and d[1] > 0) else 1


def _edge_cmp(d1, d2) -> int:
    h1, h2 = _edge_half(d1), _edge_half(d2)
    if h1 != h2:
        return h1 - h2
    c = d1[0] * d2[1] - d1[1] * d2[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def _edges(vertices: Sequence) -> list[CommodityVector]:
    n = len(vertices)
    if n < 2:
        return []
    return [vertices[(i + 1) % n] - vertices[i] for i in range(n)]


@dataclass(frozen=True)
class Halfspace:
    """normal . x <= bound (or < bound when strict)."""
    normal: CommodityVector
    bound: Fraction
    strict: bool = False

    @classmethod
    def of(cls, normal, bound, strict: bool = False) -> "Halfspace":
        n = CommodityVector(normal)
        if len(n) != 2:
            raise DimensionError("polygon halfspaces need a 2-entry normal")
        if n.is_zero():
            raise RegionError("halfspace normal must be nonzero")
        return cls(n, as_rational(bound), bool(strict))

    def value(self, p) -> Fraction:
        return self.normal[0] * p[0] + self.normal[1] * p[1]

    def satisfied(self, p) -> bool:
        v = self.value(p)
        return v < self.bound if self.strict else v <= self.bound

    def satisfied_closed(self, p) -> bool:
        return self.value(p) <= self.bound

    def translated(self, shift) -> "Halfspace":
        return Halfspace(self.normal, self.bound + self.value(shift), self.strict)

    def negated(self) -> "Halfspace":
        return Halfspace(-self.normal, self.bound, self.strict)

    def as_constraint(self) -> LinearConstraint:
        return LinearConstraint(tuple(self.normal), self.bound, self.strict)


def _halfspaces_from_vertices(vertices: Sequence) -> tuple[Halfspace, ...]:
    if len(vertices) == 1:
        (x, y), = [tuple(vertices[0])]
        return (
            Halfspace.of((1, 0), x), Halfspace.of((-1, 0), -x),
            Halfspace.of((0, 1), y), Halfspace.of((0, -1), -y),
        )
    if len(vertices) == 2:
        p, q = vertices
        d = q - p
        n = vec(-d[1], d[0])
        return (
            Halfspace(n, n.dot(p)), Halfspace(-n, -n.dot(p)),
            Halfspace(d, d.dot(q)), Halfspace(-d, -d.dot(p)),
        )
    out = []
    for i, p in enumerate(vertices):
        q = vertices[(i + 1) % len(vertices)]
        d = q - p
        n = vec(d[1], -d[0])
        out.append(Halfspace(n, n.dot(p)))
    return tuple(out)


@dataclass(frozen=True)
class ConvexPolygon:
    """A bounded, nonempty convex polygon (possibly a segment or a point)."""
    halfspaces: tuple[Halfspace, ...]
    vertices: tuple[CommodityVector, ...] = field(compare=False)

    @classmethod
    def from_halfspaces(cls, halfspaces: Iterable[Halfspace]) -> "ConvexPolygon | None":
        """Build from halfspaces; None when the set is empty.

        Raises UnboundedRegionError for a nonempty unbounded set.
        """
        hs = tuple(halfspaces)
        if not hs:
            raise UnboundedRegionError("a polygon with no halfspaces is the whole plane")
        candidates = []
        for h1, h2 in itertools.combinations(hs, 2):
            a, b = h1.normal, h2.normal
            det = a[0] * b[1] - a[1] * b[0]
            if det == 0:
                continue
            x = (h1.bound * b[1] - a[1] * h2.bound) / det
            y = (a[0] * h2.bound - h1.bound * b[0]) / det
            p = vec(x, y)
            if all(h.satisfied_closed(p) for h in hs):
                candidates.append(p)
        if not candidates:
            closed = [LinearConstraint(tuple(h.normal), h.bound) for h in hs]
            if find_point(closed, 2) is None:
                return None
            raise UnboundedRegionError("polygon is unbounded", halfspaces=len(hs))
        if _has_recession_direction(hs):
            raise UnboundedRegionError("polygon is unbounded", halfspaces=len(hs))
        verts = tuple(convex_hull(candidates))
        # centroid of the closure's vertices lies in its relative interior
        c = vec(sum(v[0] for v in verts) / len(verts), sum(v[1] for v in verts) / len(verts))
        if not all(h.satisfied(c) for h in hs if h.strict):
            return None
        return cls(hs, verts)

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence]) -> "ConvexPolygon":
        verts = tuple(convex_hull(points))
        if not verts:
            raise RegionError("a polygon needs at least one vertex")
        return cls(_halfspaces_from_vertices(verts), verts)

    @property
    def is_strict(self) -> bool:
        return any(h.strict for h in self.halfspaces)

    @property
    def area(self) -> Fraction:
        return polygon_area(self.vertices)

    def contains(self, p) -> bool:
        return all(h.satisfied(p) for h in self.halfspaces)

    def covers(self, other: "ConvexPolygon") -> bool:
        """Other's closure lies inside self (conservative on strict edges)."""
        return all(self.contains(v) for v in other.vertices)

    def translated(self, shift) -> "ConvexPolygon":
        s = CommodityVector(shift)
        return ConvexPolygon(tuple(h.translated(s) for h in self.halfspaces), tuple(v + s for v in self.vertices))

    def negated(self) -> "ConvexPolygon":
        return ConvexPolygon(tuple(h.negated() for h in self.halfspaces), tuple(convex_hull(-v for v in self.vertices)))

    def intersect(self, other: "ConvexPolygon") -> "ConvexPolygon | None":
        return ConvexPolygon.from_halfspaces(self.halfspaces + other.halfspaces)

    def minkowski_sum(self, other: "ConvexPolygon") -> "ConvexPolygon":
        """Edge merge: walk both edge sequences in polar-angle order."""
        start = self.vertices[0] + other.vertices[0]
        edges = sorted(_edges(self.vertices) + _edges(other.vertices), key=cmp_to_key(_edge_cmp))
        pts = [start]
        for d in edges:
            pts.append(pts[-1] + d)
        return ConvexPolygon.from_vertices(pts)

    def bounding_box(self) -> tuple[CommodityVector, CommodityVector]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return vec(min(xs), min(ys)), vec(max(xs), max(ys))


def _has_recession_direction(hs: Sequence[Halfspace]) -> bool:
    for h in hs:
        a = h.normal
        for d in (vec(-a[1], a[0]), vec(a[1], -a[0])):
            if all(g.normal.dot(d) <= 0 for g in hs):
                return True
    return False


class Region:
    """Common interface of the capacity variants."""
    k: int
    variant: str

    def contains(self, p) -> bool:
        raise NotImplementedError

    def is_empty(self) -> bool:
        raise NotImplementedError

    def negate(self) -> "Region":
        raise NotImplementedError

    def translate(self, shift) -> "Region":
        raise NotImplementedError

    def minkowski_sum(self, other: "Region") -> "Region":
        raise NotImplementedError

    def intersect(self, other: "Region") -> "Region":
        raise NotImplementedError

    def integer_points(self) -> list[CommodityVector]:
        raise NotImplementedError

    def is_reducible(self) -> bool:
        """Lattice down-closure: every integer q with 0 <= q <= p is present
        for each integer point p, and every integer point is nonnegative."""
        pts = self.integer_points()
        present = set(pts)
        for p in pts:
            if not p.is_nonnegative():
                return False
            for i, x in enumerate(p):
                if x > 0:
                    q = list(p)
                    q[i] = x - 1
                    if CommodityVector(q) not in present:
                        return False
        return True

    def _check_point(self, p) -> CommodityVector:
        p = CommodityVector(p)
        if len(p) != self.k:
            raise DimensionError(f"point has {len(p)} entries, region has k={self.k}")
        return p

    def _check_other(self, other: "Region") -> None:
        if other.k != self.k:
            raise DimensionError(f"regions of different dimension: {self.k} vs {other.k}")


@dataclass(frozen=True, eq=False)
class PointSet(Region):
    k: int
    points: frozenset

    variant = POINTS

    @classmethod
    def of(cls, k: int, points: Iterable) -> "PointSet":
        pts = frozenset(CommodityVector(p) for p in points)
        for p in pts:
            if len(p) != k:
                raise DimensionError(f"point {p} does not have k={k} entries")
        return cls(k, pts)

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.k == other.k and self.points == other.points

    def __hash__(self):
        return hash((POINTS, self.k, self.points))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.sorted_points())

    def sorted_points(self) -> list[CommodityVector]:
        return sorted(self.points)

    def contains(self, p) -> bool:
        return self._check_point(p) in self.points

    def is_empty(self) -> bool:
        return not self.points

    def negate(self) -> "PointSet":
        return PointSet(self.k, frozenset(-p for p in self.points))

    def translate(self, shift) -> "PointSet":
        s = self._check_point(shift)
        return PointSet(self.k, frozenset(p + s for p in self.points))

    def minkowski_sum(self, other: Region) -> "PointSet":
        self._check_other(other)
        if not isinstance(other, PointSet):
            raise RegionError(f"cannot add a point set and a {other.variant} region")
        return PointSet(self.k, frozenset(p + q for p in self.points for q in other.points))

    def intersect(self, other: Region) -> "PointSet":
        """Mixed variants keep the points that lie in ``other``."""
        self._check_other(other)
        if isinstance(other, PointSet):
            return PointSet(self.k, self.points & other.points)
        return PointSet(self.k, frozenset(p for p in self.points if other.contains(p)))

    def integer_points(self) -> list[CommodityVector]:
        return sorted(p for p in self.points if p.is_integral())

    def bounding_box(self):
        if not self.points:
            return None
        return (
            CommodityVector(min(p[i] for p in self.points) for i in range(self.k)),
            CommodityVector(max(p[i] for p in self.points) for i in range(self.k)),
        )


@dataclass(frozen=True, eq=False)
class Polygonal(Region):
    pieces: tuple[ConvexPolygon, ...]
    k: int = 2

    variant = POLYGONS

    @classmethod
    def of(cls, pieces: Iterable) -> "Polygonal":
        return cls(tuple(p for p in pieces if p is not None)).simplified()

    @classmethod
    def from_halfspaces(cls, halfspaces: Iterable[Halfspace]) -> "Polygonal":
        return cls.of([ConvexPolygon.from_halfspaces(halfspaces)])

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence]) -> "Polygonal":
        return cls((ConvexPolygon.from_vertices(points),))

    def canonical(self) -> tuple:
        return tuple(sorted(tuple(tuple(v) for v in p.vertices) for p in self.simplified().pieces))

    def __eq__(self, other):
        return isinstance(other, Polygonal) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash((POLYGONS, self.canonical()))

    def vertex_lists(self) -> list[list[CommodityVector]]:
        return [list(p.vertices) for p in sorted(self.pieces, key=lambda p: tuple(p.vertices))]

    def contains(self, p) -> bool:
        p = self._check_point(p)
        return any(piece.contains(p) for piece in self.pieces)

    def is_empty(self) -> bool:
        return not self.pieces

    def negate(self) -> "Polygonal":
        return Polygonal(tuple(p.negated() for p in self.pieces))

    def translate(self, shift) -> "Polygonal":
        s = self._check_point(shift)
        return Polygonal(tuple(p.translated(s) for p in self.pieces))

    def minkowski_sum(self, other: Region) -> "Polygonal":
        self._check_other(other)
        if not isinstance(other, Polygonal):
            raise RegionError(f"cannot add a polygonal and a {other.variant} region")
        return Polygonal.of(a.minkowski_sum(b) for a in self.pieces for b in other.pieces)

    def intersect(self, other: Region) -> Region:
        self._check_other(other)
        if isinstance(other, Orthant):
            return self.clip_nonnegative()
        if isinstance(other, PointSet):
            return other.intersect(self)
        return Polygonal.of(a.intersect(b) for a in self.pieces for b in other.pieces)

    def clip_nonnegative(self) -> "Polygonal":
        extra = (Halfspace.of((-1, 0), 0), Halfspace.of((0, -1), 0))
        return Polygonal.of(ConvexPolygon.from_halfspaces(p.halfspaces + extra) for p in self.pieces)

    def bounding_box(self):
        if not self.pieces:
            return None
        boxes = [p.bounding_box() for p in self.pieces]
        lo = vec(min(b[0][0] for b in boxes), min(b[0][1] for b in boxes))
        hi = vec(max(b[1][0] for b in boxes), max(b[1][1] for b in boxes))
        return lo, hi

    def integer_points(self) -> list[CommodityVector]:
        box = self.bounding_box()
        if box is None:
            return []
        lo, hi = box
        out = []
        for x in range(math.ceil(lo[0]), math.floor(hi[0]) + 1):
            for y in range(math.ceil(lo[1]), math.floor(hi[1]) + 1):
                p = vec(x, y)
                if self.contains(p):
                    out.append(p)
        return out

    def area(self) -> Fraction:
        """Exact area of the union (inclusion-exclusion over pieces)."""
        total = Fraction(0)
        pieces = list(self.pieces)
        for r in range(1, len(pieces) + 1):
            for combo in itertools.combinations(pieces, r):
                inter = combo[0]
                for p in combo[1:]:
                    inter = inter.intersect(p) if inter is not None else None
                    if inter is None:
                        break
                if inter is not None:
                    total += inter.area if r % 2 else -inter.area
        return total

    def simplified(self) -> "Polygonal":
        """Drop covered pieces and merge pieces whose union is convex."""
        pieces = _drop_covered(list(self.pieces))
        if 1 < len(pieces) <= _UNION_AREA_LIMIT and not any(p.is_strict for p in pieces):
            hull = ConvexPolygon.from_vertices(v for p in pieces for v in p.vertices)
            if hull.area > 0 and hull.area == Polygonal(tuple(pieces)).area():
                return Polygonal((hull,))
        merged = True
        while merged and len(pieces) > 1:
            merged = False
            for i, j in itertools.combinations(range(len(pieces)), 2):
                a, b = pieces[i], pieces[j]
                if a.is_strict or b.is_strict:
                    continue
                hull = ConvexPolygon.from_vertices(list(a.vertices) + list(b.vertices))
                if hull.area == 0:
                    continue
                inter = a.intersect(b)
                overlap = inter.area if inter is not None else Fraction(0)
                if hull.area == a.area + b.area - overlap:
                    pieces = [p for n, p in enumerate(pieces) if n not in (i, j)] + [hull]
                    pieces = _drop_covered(pieces)
                    merged = True
                    break
        return Polygonal(tuple(pieces))


def _drop_covered(pieces: list[ConvexPolygon]) -> list[ConvexPolygon]:
    unique: list[ConvexPolygon] = []
    for p in pieces:
        if p not in unique:
            unique.append(p)
    out = []
    for i, p in enumerate(unique):
        if any(j != i and q.covers(p) and (j < i or not p.covers(q)) for j, q in enumerate(unique)):
            continue
        out.append(p)
    return out


@dataclass(frozen=True, eq=False)
class Orthant(Region):
    """{x : x_i >= 0 for all i}."""
    k: int

    variant = ORTHANT

    def __eq__(self, other):
        return isinstance(other, Orthant) and other.k == self.k

    def __hash__(self):
        return hash((ORTHANT, self.k))

    def contains(self, p) -> bool:
        return self._check_point(p).is_nonnegative()

    def is_empty(self) -> bool:
        return False

    def negate(self) -> Region:
        raise RegionError("the return-arc orthant is never negated")

    def translate(self, shift) -> Region:
        raise RegionError("the return-arc orthant is never translated")

    def minkowski_sum(self, other: Region) -> Region:
        raise RegionError("the return-arc capacity is excluded from value functions")

    def intersect(self, other: Region) -> Region:
        self._check_other(other)
        if isinstance(other, Orthant):
            return self
        return other.intersect(self)

    def integer_points(self) -> list[CommodityVector]:
        raise UnboundedRegionError("the nonnegative orthant has infinitely many integer points")

    def is_reducible(self) -> bool:
        return True


# Module-level forms of the region operations.

def contains(region: Region, p) -> bool:
    return region.contains(p)


def is_empty(region: Region) -> bool:
    return region.is_empty()


def negate(region: Region) -> Region:
    return region.negate()


def translate(region: Region, shift) -> Region:
    return region.translate(shift)


def minkowski_sum(r1: Region, r2: Region) -> Region:
    return r1.minkowski_sum(r2)


def intersect(r1: Region, r2: Region) -> Region:
    return r1.intersect(r2)


def integer_points(region: Region) -> list[CommodityVector]:
    return region.integer_points()


def is_reducible(region: Region) -> bool:
    return region.is_reducible()


def minkowski_all(regions: Sequence[Region], k: int, variant: str) -> Region:
    """Fold minkowski_sum; the empty sum is {0}."""
    total = zero_region(k, variant)
    for r in regions:
        total = total.minkowski_sum(r)
    return total


def intersect_all(regions: Sequence[Region]) -> Region:
    it = iter(regions)
    try:
        total = next(it)
    except StopIteration:
        raise RegionError("intersection of no regions") from None
    for r in it:
        total = total.intersect(r)
    return total


# Constructors.

def points(k: int, pts: Iterable) -> PointSet:
    return PointSet.of(k, pts)


def polygon(vertices: Iterable[Sequence]) -> Polygonal:
    return Polygonal.from_vertices(vertices)


def polygons(*vertex_lists: Iterable[Sequence]) -> Polygonal:
    return Polygonal.of(ConvexPolygon.from_vertices(v) for v in vertex_lists)


def halfspace_polygon(*halfspaces) -> Polygonal:
    """halfspace_polygon(((1, 0), 2), ((0, -1), -1, True), ...)."""
    return Polygonal.from_halfspaces(Halfspace.of(*h) for h in halfspaces)


def zero_region(k: int, variant: str) -> Region:
    if variant == POLYGONS:
        if k != 2:
            raise DimensionError("polygonal regions need k=2")
        return polygon([(0, 0)])
    return PointSet.of(k, [CommodityVector.zero(k)])


def box(lo: Sequence, hi: Sequence) -> Polygonal:
    """Axis-aligned rectangle [lo, hi] (k=2)."""
    lo, hi = CommodityVector(lo), CommodityVector(hi)
    if len(lo) != 2 or len(hi) != 2:
        raise DimensionError("box() builds k=2 polygons; use box_points() for other k")
    return polygon([lo, (hi[0], lo[1]), hi, (lo[0], hi[1])])


def box_points(lo: Sequence, hi: Sequence) -> PointSet:
    """Integer points of the box [lo, hi] in any k."""
    lo, hi = CommodityVector(lo), CommodityVector(hi)
    if len(lo) != len(hi):
        raise DimensionError("box corners differ in dimension")
    ranges = [range(math.ceil(a), math.floor(b) + 1) for a, b in zip(lo, hi)]
    return PointSet.of(len(lo), itertools.product(*ranges))


def discretized(region: Region) -> PointSet:
    """Integer points of a bounded region as a PointSet."""
    return PointSet.of(region.k, region.integer_points())
