"""Cycle-space machinery and the flow-value decision oracle.

Two flows with the same value differ by a circulation, and circulations are
spanned by the fundamental cycles of a spanning tree. Deciding whether a
value f is feasible therefore reduces to: route f along one s-t path (a
pseudoflow F), then search for cycle coefficients x with
``sum_i sigma(a, i) x_i`` in ``C_a - F(a)`` for every arc a.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import networkx as nx

from .constants import DEFAULT_BRANCH_BUDGET, DEFAULT_BUDGET, RETURN_ARC_ID
from .errors import (
    BudgetExceededError,
    DimensionError,
    DisconnectedError,
    FlowError,
    NetworkError,
    NoPathError,
    RegionError,
)
from .gluing import realize
from .logging import resolve_logger
from .model import EnhancedNetwork, Flow, FlowVerdict, Pseudoflow, check_flow
from .regions import POINTS, POLYGONS, ConvexPolygon, Region, intersect_all
from .simplex import LinearConstraint, find_point
from .util import natural_key
from .vector import CommodityVector


@dataclass(frozen=True)
class FundamentalCycle:
    chord: str
    signs: Mapping[str, int] = field(hash=False)  # arc id -> +1 forward, -1 backward

    def sign(self, arc_id: str) -> int:
        return self.signs.get(arc_id, 0)

    def describe(self) -> str:
        items = sorted(self.signs.items(), key=lambda kv: natural_key(kv[0]))
        return "{" + ",".join(("" if s > 0 else "-") + a for a, s in items) + "}"


@dataclass(frozen=True)
class CycleSystem:
    """Spanning forest (the tree of s first) and its fundamental cycles.

    ``basis`` holds one cycle per non-tree arc of the base network;
    ``return_cycle`` is the cycle closed by e, None when s and t lie in
    different components.
    """
    tree: tuple[str, ...]
    basis: tuple[FundamentalCycle, ...]
    return_cycle: FundamentalCycle | None
    parent: Mapping[str, tuple[str, str]] = field(hash=False)  # node -> (tree arc id, parent node)
    depth: Mapping[str, int] = field(hash=False)
    arc_ends: Mapping[str, tuple[str, str]] = field(hash=False)
    root: Mapping[str, str] = field(hash=False, default_factory=dict)  # node -> root of its tree

    @property
    def all_cycles(self) -> tuple[FundamentalCycle, ...]:
        if self.return_cycle is None:
            return self.basis
        return self.basis + (self.return_cycle,)

    def connects(self, u: str, v: str) -> bool:
        return self.root[u] == self.root[v]

    def membership(self, arc_ids: Sequence[str]) -> dict[str, tuple[int, ...]]:
        """Signed membership matrix: arc -> (sigma(a, c1), ..., sigma(a, cN))."""
        return {a: tuple(c.sign(a) for c in self.basis) for a in arc_ids}

    def tree_path(self, u: str, v: str) -> list[tuple[str, int]]:
        """Tree arcs walked from u to v, with +1 when walked along their orientation."""
        if not self.connects(u, v):
            raise DisconnectedError(f"{u!r} and {v!r} lie in different components", nodes=[u, v])
        up_u, up_v = [], []
        a, b = u, v
        while self.depth[a] > self.depth[b]:
            up_u.append(a)
            a = self.parent[a][1]
        while self.depth[b] > self.depth[a]:
            up_v.append(b)
            b = self.parent[b][1]
        while a != b:
            up_u.append(a)
            up_v.append(b)
            a = self.parent[a][1]
            b = self.parent[b][1]
        path = []
        for x in up_u:
            arc_id, px = self.parent[x]
            path.append((arc_id, 1 if self.arc_ends[arc_id] == (x, px) else -1))
        for x in reversed(up_v):
            arc_id, px = self.parent[x]
            path.append((arc_id, 1 if self.arc_ends[arc_id] == (px, x) else -1))
        return path


def _cycle(system_parts, chord: str, tail: str, head: str) -> FundamentalCycle:
    signs = {chord: 1}
    for arc_id, sign in system_parts.tree_path(head, tail):
        signs[arc_id] = sign
    return FundamentalCycle(chord, signs)


def _bfs_forest(roots: Sequence[str], arcs: Sequence[tuple[str, str, str]]) -> list[tuple[str, str, str]]:
    """Breadth-first forest edges (parent, child, arc id), one tree per root not yet reached.

    Incident arcs are scanned in natural id order; nx.bfs_edges reports no
    multigraph keys, so parallel arcs could not be told apart.
    """
    incident: dict[str, list[tuple[str, str, str]]] = {}
    for arc_id, tail, head in sorted(arcs, key=lambda t: natural_key(t[0])):
        incident.setdefault(tail, []).append((arc_id, tail, head))
        incident.setdefault(head, []).append((arc_id, tail, head))
    seen: set[str] = set()
    out = []
    for r in roots:
        if r in seen:
            continue
        seen.add(r)
        queue = deque([r])
        while queue:
            u = queue.popleft()
            for arc_id, tail, head in incident.get(u, ()):
                v = head if tail == u else tail
                if v not in seen:
                    seen.add(v)
                    out.append((u, v, arc_id))
                    queue.append(v)
    return out


def cycle_basis(net: EnhancedNetwork, tree: Sequence[str] | None = None) -> CycleSystem:
    """Fundamental cycles of a spanning forest of the underlying undirected graph.

    Without ``tree`` the forest is breadth-first from s, then from the
    remaining nodes in natural order, with incident arcs scanned in natural
    id order. A disconnected graph has m - n + (number of components) base
    cycles.
    """
    g = nx.MultiGraph()
    g.add_nodes_from(net.nodes)
    for a in net.arcs:
        g.add_edge(a.tail, a.head, key=a.id)
    components = nx.number_connected_components(g)
    ends = {a.id: (a.tail, a.head) for a in net.all_arcs}
    roots = [net.source] + sorted(net.nodes, key=natural_key)

    if tree is None:
        tree_edges = _bfs_forest(roots, [(a.id, a.tail, a.head) for a in net.arcs])
    else:
        ids = list(tree)
        unknown = [a for a in ids if a not in ends or a == RETURN_ARC_ID]
        if unknown:
            raise NetworkError(f"tree names unknown arcs: {unknown}")
        sub = nx.MultiGraph()
        sub.add_nodes_from(net.nodes)
        for a in ids:
            sub.add_edge(*ends[a], key=a)
        if len(ids) != len(net.nodes) - components or nx.number_connected_components(sub) != components:
            raise NetworkError("given arcs do not form a spanning forest", arcs=sorted(ids, key=natural_key))
        tree_edges = _bfs_forest(roots, [(a, *ends[a]) for a in ids])

    children = {v for _, v, _ in tree_edges}
    parent = {}
    depth = {n: 0 for n in net.nodes if n not in children}
    root = {n: n for n in depth}
    for u, v, arc_id in tree_edges:
        parent[v] = (arc_id, u)
        depth[v] = depth[u] + 1
        root[v] = root[u]
    tree_ids = tuple(sorted((arc_id for _, _, arc_id in tree_edges), key=natural_key))
    partial = CycleSystem(tree_ids, (), None, parent, depth, ends, root)

    in_tree = set(tree_ids)
    basis = tuple(_cycle(partial, a.id, a.tail, a.head) for a in net.arcs if a.id not in in_tree)
    e = net.return_arc
    closing = _cycle(partial, e.id, e.tail, e.head) if partial.connects(e.tail, e.head) else None
    return CycleSystem(tree_ids, basis, closing, parent, depth, ends, root)


def build_pseudoflow(net: EnhancedNetwork, f, system: CycleSystem | None = None) -> Pseudoflow:
    """f routed along the tree path from s to t and back over e."""
    value = CommodityVector(f)
    if len(value) != net.k:
        raise DimensionError(f"value has {len(value)} entries, network has k={net.k}")
    system = system or cycle_basis(net)
    assignment = {a: CommodityVector.zero(net.k) for a in net.arc_ids()}
    if system.return_cycle is None:
        if not value.is_zero():
            raise NoPathError("no s-t path: s and t lie in different components")
    else:
        for arc_id, sign in system.tree_path(net.source, net.sink):
            assignment[arc_id] = value if sign > 0 else -value
    assignment[RETURN_ARC_ID] = value
    return Pseudoflow(assignment)


def cycle_coordinates(system: CycleSystem, difference: Mapping[str, CommodityVector]) -> dict[str, CommodityVector]:
    """Coefficients of a circulation in the fundamental basis, keyed by chord.

    Each chord lies on exactly one fundamental cycle, so its coefficient is
    the circulation's value on the chord. Raises FlowError if the
    reconstruction does not give back the input (not a circulation).
    """
    coords = {c.chord: CommodityVector(difference[c.chord]) for c in system.all_cycles}
    for arc_id, x in difference.items():
        rebuilt = None
        for c in system.all_cycles:
            s = c.sign(arc_id)
            if s:
                term = coords[c.chord] if s > 0 else -coords[c.chord]
                rebuilt = term if rebuilt is None else rebuilt + term
        x = CommodityVector(x)
        if rebuilt is None:
            rebuilt = CommodityVector.zero(len(x))
        if rebuilt != x:
            raise FlowError(f"difference is not a circulation (arc {arc_id!r})", arc=arc_id)
    return coords


@dataclass(frozen=True)
class CycleConstraint:
    arc_id: str
    signs: tuple[int, ...]
    region: Region  # C_a - F(a)


@dataclass(frozen=True)
class ConstraintGroup:
    """Arcs sharing one (sign-normalised) cycle pattern.

    The combination ``sum pattern_i * c_i`` must lie in ``region``, the
    intersection of the members' regions, each negated when the member
    traverses the pattern backwards.
    """
    pattern: tuple[int, ...]
    members: tuple[tuple[int, str], ...]  # (+1 | -1, arc id)
    region: Region

    def expression(self, names: Sequence[str]) -> str:
        out = ""
        for s, n in zip(self.pattern, names):
            if s:
                out += ("+" if s > 0 and out else "-" if s < 0 else "") + n
        return out or "0"

    def describe(self, names: Sequence[str]) -> str:
        parts = [("-" if s < 0 else "") + f"v({a})" for s, a in self.members]
        return f"{self.expression(names)} in {' & '.join(parts)}"


@dataclass(frozen=True)
class CycleConstraintSet:
    k: int
    cycle_count: int
    constraints: tuple[CycleConstraint, ...]

    @property
    def variable_count(self) -> int:
        return self.cycle_count * self.k

    def combination(self, arc_signs: Sequence[int], coefficients: Sequence[CommodityVector]) -> CommodityVector:
        total = CommodityVector.zero(self.k)
        for s, x in zip(arc_signs, coefficients):
            if s:
                total = total + x if s > 0 else total - x
        return total

    def satisfied_by(self, coefficients: Sequence[CommodityVector]) -> bool:
        return all(c.region.contains(self.combination(c.signs, coefficients)) for c in self.constraints)

    def groups(self) -> list[ConstraintGroup]:
        buckets: dict[tuple[int, ...], list[tuple[int, CycleConstraint]]] = {}
        for c in self.constraints:
            first = next((s for s in c.signs if s), 1)
            pattern = tuple(s * first for s in c.signs)
            buckets.setdefault(pattern, []).append((first, c))
        out = []
        for pattern, items in buckets.items():
            members = tuple((s, c.arc_id) for s, c in items)
            region = intersect_all([c.region if s > 0 else c.region.negate() for s, c in items])
            out.append(ConstraintGroup(pattern, members, region))
        out.sort(key=lambda g: (sum(1 for s in g.pattern if s), [-abs(s) for s in g.pattern], g.pattern))
        return out


def cycle_constraints(net: EnhancedNetwork, system: CycleSystem, F: Mapping[str, CommodityVector]) -> CycleConstraintSet:
    """One constraint per base arc: its signed cycle sum lies in C_a - F(a)."""
    if isinstance(F, Flow):
        F = F.assignment
    constraints = tuple(
        CycleConstraint(a.id, tuple(c.sign(a.id) for c in system.basis), a.capacity.translate(-F[a.id]))
        for a in net.arcs
    )
    return CycleConstraintSet(net.k, len(system.basis), constraints)


@dataclass(frozen=True)
class Decision:
    feasible: bool
    value: CommodityVector
    witness: Flow | None = None
    branches: int = 0

    def __bool__(self):
        return self.feasible


def _piece_rows(constraint: CycleConstraint, piece: ConvexPolygon, k: int, cycles: int) -> list[LinearConstraint]:
    rows = []
    for h in piece.halfspaces:
        coeffs = [0] * (cycles * k)
        for i, s in enumerate(constraint.signs):
            if s:
                for d in range(k):
                    coeffs[i * k + d] = s * h.normal[d]
        rows.append(LinearConstraint.of(coeffs, h.bound, h.strict))
    return rows


def _augment(net: EnhancedNetwork, system: CycleSystem, F: Mapping, coefficients: Sequence[CommodityVector]) -> Flow:
    out = {}
    for a in net.arcs:
        v = F[a.id]
        for c, x in zip(system.basis, coefficients):
            s = c.sign(a.id)
            if s:
                v = v + x if s > 0 else v - x
        out[a.id] = v
    out[RETURN_ARC_ID] = F[RETURN_ARC_ID]
    return Flow(out)


def decide(
    net: EnhancedNetwork,
    f,
    *,
    tree: Sequence[str] | None = None,
    branch_budget: int = DEFAULT_BRANCH_BUDGET,
    budget: int = DEFAULT_BUDGET,
    logger=None,
) -> Decision:
    """Is there a flow of value f? Returns the witness when there is."""
    logger = resolve_logger(logger)
    value = CommodityVector(f)
    if len(value) != net.k:
        raise DimensionError(f"value has {len(value)} entries, network has k={net.k}")
    variant = net.variant
    if variant is None:
        raise RegionError("decide needs all capacities in one variant (point sets or polygons)")
    if not net.return_arc.capacity.contains(value):
        return Decision(False, value)

    if variant == POINTS:
        witness = realize(net, value, budget=budget, logger=logger)
        return Decision(witness is not None, value, witness)
    if variant != POLYGONS:
        raise RegionError(f"decide does not support {variant} capacities")

    system = cycle_basis(net, tree)
    if system.return_cycle is None and not value.is_zero():
        logger.debug("decide_done", value=value, feasible=False, branches=0)
        return Decision(False, value)
    F = build_pseudoflow(net, value, system).assignment
    ccs = cycle_constraints(net, system, F)
    k, n_cycles = net.k, ccs.cycle_count
    order = sorted(ccs.constraints, key=lambda c: (len(c.region.pieces), natural_key(c.arc_id)))
    if any(not c.region.pieces for c in order):
        return Decision(False, value)

    branches = 0

    def search(depth: int, rows: list[LinearConstraint]):
        nonlocal branches
        if depth == len(order):
            return find_point(rows, n_cycles * k)
        c = order[depth]
        pieces = c.region.pieces
        last = depth == len(order) - 1
        for piece in pieces:
            branches += 1
            if branches > branch_budget:
                raise BudgetExceededError(f"decide explored more than {branch_budget} branches",
                                          branch_budget=branch_budget)
            nxt = rows + _piece_rows(c, piece, k, n_cycles)
            if len(pieces) > 1 and not last and find_point(nxt, n_cycles * k) is None:
                logger.debug("branch_pruned", arc=c.arc_id, depth=depth)
                continue
            point = search(depth + 1, nxt)
            if point is not None:
                return point
        return None

    point = search(0, [])
    logger.debug("decide_done", value=value, feasible=point is not None, branches=branches)
    if point is None:
        return Decision(False, value, None, branches)
    coefficients = [CommodityVector(point[i * k:(i + 1) * k]) for i in range(n_cycles)]
    witness = _augment(net, system, F, coefficients)
    if check_flow(net, witness) is not FlowVerdict.VALID:
        raise FlowError("augmented pseudoflow failed the flow check", value=str(value))
    return Decision(True, value, witness, branches)
