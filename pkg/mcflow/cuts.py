"""Cuts, value functions and the outer bounds built from them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import networkx as nx

from .constants import RETURN_ARC_ID
from .errors import NotFullyDisjointError, RegionError
from .logging import resolve_logger
from .model import ArcAssignment, EnhancedNetwork, Flow
from .regions import PointSet, Polygonal, Region, intersect_all, minkowski_all
from .util import natural_key
from .vector import CommodityVector

FORWARD = 1
BACKWARD = -1

OrientedArc = tuple[str, int]


@dataclass(frozen=True)
class Cut:
    index: int
    s_side: frozenset[str]
    t_side: frozenset[str]
    forward: tuple[str, ...]
    backward: tuple[str, ...]  # e is always the last backward arc

    def oriented(self, include_return: bool = False) -> list[OrientedArc]:
        out = [(a, FORWARD) for a in self.forward]
        out += [(a, BACKWARD) for a in self.backward if include_return or a != RETURN_ARC_ID]
        return out

    def arc_ids(self, include_return: bool = False) -> tuple[str, ...]:
        return tuple(a for a, _ in self.oriented(include_return))

    def label(self) -> str:
        s = ",".join(sorted(self.s_side, key=natural_key))
        t = ",".join(sorted(self.t_side, key=natural_key))
        return "{" + s + "}|{" + t + "}"


def enumerate_cuts(net: EnhancedNetwork) -> list[Cut]:
    """All 2^(n-2) bipartitions with s on one side and t on the other.

    Bit i of the counter puts the i-th non-terminal node (natural id order)
    on the source side.
    """
    inner = sorted((n for n in net.nodes if n not in (net.source, net.sink)), key=natural_key)
    cuts = []
    for index in range(2 ** len(inner)):
        s_side = {net.source} | {n for i, n in enumerate(inner) if index >> i & 1}
        t_side = set(net.nodes) - s_side
        fwd = tuple(a.id for a in net.arcs if a.tail in s_side and a.head in t_side)
        bwd = tuple(a.id for a in net.arcs if a.tail in t_side and a.head in s_side) + (RETURN_ARC_ID,)
        cuts.append(Cut(index, frozenset(s_side), frozenset(t_side), fwd, bwd))
    return cuts


def canonical_order(cuts: Iterable[Cut]) -> list[Cut]:
    """Ascending source-side size, ties by counter index."""
    return sorted(cuts, key=lambda c: (len(c.s_side), c.index))


def _value(net: EnhancedNetwork, oriented: Iterable[OrientedArc]) -> Region:
    variant = net.variant
    if variant is None:
        raise RegionError("cut capacity needs all arcs to share one capacity variant")
    regions = []
    for arc_id, sign in sorted(oriented, key=lambda p: (natural_key(p[0]), p[1])):
        cap = net.arc(arc_id).capacity
        regions.append(cap if sign == FORWARD else cap.negate())
    return minkowski_all(regions, net.k, variant)


def cut_capacity(net: EnhancedNetwork, c: Cut) -> Region:
    """Minkowski sum of forward capacities and negated backward ones, e excluded."""
    return _value(net, c.oriented())


def total_capacity(net: EnhancedNetwork, logger=None) -> Region:
    logger = resolve_logger(logger)
    cuts = canonical_order(enumerate_cuts(net))
    region = intersect_all([cut_capacity(net, c) for c in cuts])
    logger.emit("total_capacity_done", cuts=len(cuts))
    return region


def pairwise_capacity(net: EnhancedNetwork, c1: Cut, c2: Cut, _memo: dict | None = None) -> Region:
    """v(A & B) + (v(A - B) & v(B - A)) over oriented arcs.

    An arc that is forward in one cut and backward in the other counts as two
    distinct oriented arcs.
    """
    memo = {} if _memo is None else _memo

    def v(arcs: frozenset) -> Region:
        if arcs not in memo:
            memo[arcs] = _value(net, arcs)
        return memo[arcs]

    a, b = frozenset(c1.oriented()), frozenset(c2.oriented())
    return v(a & b).minkowski_sum(v(a - b).intersect(v(b - a)))


def pairwise_bound(net: EnhancedNetwork, logger=None) -> Region:
    """Intersection of pairwise_capacity over all unordered pairs, i = j included."""
    logger = resolve_logger(logger)
    cuts = canonical_order(enumerate_cuts(net))
    memo: dict = {}
    region = None
    pairs = 0
    for c1, c2 in itertools.combinations_with_replacement(cuts, 2):
        u = pairwise_capacity(net, c1, c2, memo)
        region = u if region is None else region.intersect(u)
        pairs += 1
    logger.emit("pairwise_bound_done", cuts=len(cuts), pairs=pairs)
    return region


def net_flow(net: EnhancedNetwork, f: ArcAssignment, c: Cut) -> CommodityVector:
    """Forward minus backward flow over the base arcs of a cut."""
    if isinstance(f, Flow):
        f = f.assignment
    total = CommodityVector.zero(net.k)
    for arc_id, sign in c.oriented():
        total = total + f[arc_id] if sign == FORWARD else total - f[arc_id]
    return total


def disjoint_paths(net: EnhancedNetwork) -> list[list[str]]:
    """The s-t paths (as arc ids) of a fully disjoint network.

    Raises NotFullyDisjointError when two paths share an interior node or
    some arc lies on no s-t path.
    """
    g = nx.MultiDiGraph()
    g.add_nodes_from(net.nodes)
    for a in net.arcs:
        g.add_edge(a.tail, a.head, key=a.id)
    paths = [[key for _, _, key in p] for p in nx.all_simple_edge_paths(g, net.source, net.sink)]
    paths.sort(key=lambda p: [natural_key(a) for a in p])
    seen_nodes: set[str] = set()
    used: set[str] = set()
    for p in paths:
        interior = {net.arc(a).head for a in p[:-1]}
        if interior & seen_nodes:
            raise NotFullyDisjointError("two s-t paths share an interior node",
                                        nodes=sorted(interior & seen_nodes, key=natural_key))
        seen_nodes |= interior
        used.update(p)
    stray = sorted(set(net.arc_ids()) - used, key=natural_key)
    if stray:
        raise NotFullyDisjointError("arcs outside every s-t path", arcs=stray)
    return paths


def disjoint_capacity(net: EnhancedNetwork) -> Region:
    """Sum over paths of the intersection of capacities along each path.

    The result is clipped to the nonnegative orthant, the return arc's
    capacity.
    """
    paths = disjoint_paths(net)
    variant = net.variant
    if variant is None:
        raise RegionError("disjoint capacity needs all arcs to share one capacity variant")
    per_path = [intersect_all([net.arc(a).capacity for a in p]) for p in paths]
    total = minkowski_all(per_path, net.k, variant)
    if isinstance(total, PointSet):
        return PointSet(total.k, frozenset(p for p in total.points if p.is_nonnegative()))
    if isinstance(total, Polygonal):
        return total.clip_nonnegative()
    return total

