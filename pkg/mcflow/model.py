"""Core network model: arcs, networks, the enhanced network and flows."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .constants import DEFAULT_EMBED_BOUND, EMBED_SINK, EMBED_SOURCE, EMBED_SPLIT, RETURN_ARC_ID
from .errors import DimensionError, FlowError, NetworkError, RegionError
from .regions import (
    POINTS,
    POLYGONS,
    Orthant,
    Polygonal,
    PointSet,
    Region,
    box,
    box_points,
    discretized,
)
from .util import natural_key
from .vector import CommodityVector, vec

ArcAssignment = Mapping[str, CommodityVector]


class FlowVerdict(str, Enum):
    VALID = "valid flow"            # conservation and capacities hold
    PSEUDOFLOW = "pseudoflow only"  # conservation holds, some capacity violated
    INVALID = "invalid"             # conservation fails somewhere


@dataclass(frozen=True)
class Arc:
    id: str
    tail: str
    head: str
    capacity: Region

    def reversed(self) -> "Arc":
        """Opposite orientation: endpoints swapped, capacity negated."""
        return Arc(self.id, self.head, self.tail, self.capacity.negate())


def reverse_arc(a: Arc) -> Arc:
    return a.reversed()


@dataclass(frozen=True)
class Network:
    k: int
    nodes: tuple[str, ...]
    arcs: tuple[Arc, ...]
    source: str
    sink: str

    def __post_init__(self):
        if self.k < 1:
            raise NetworkError(f"commodity count must be at least 1, got {self.k}")
        if len(set(self.nodes)) != len(self.nodes):
            raise NetworkError("duplicate node ids")
        nodes = set(self.nodes)
        for role, n in (("source", self.source), ("sink", self.sink)):
            if n not in nodes:
                raise NetworkError(f"{role} {n!r} is not a node", node=n)
        if self.source == self.sink:
            raise NetworkError("source and sink must differ", node=self.source)
        seen = set()
        for a in self.arcs:
            if a.id == RETURN_ARC_ID:
                raise NetworkError(f"arc id {RETURN_ARC_ID!r} is reserved for the return arc", arc=a.id)
            if a.id in seen:
                raise NetworkError(f"duplicate arc id {a.id!r}", arc=a.id)
            seen.add(a.id)
            for end in (a.tail, a.head):
                if end not in nodes:
                    raise NetworkError(f"arc {a.id!r} has unknown endpoint {end!r}", arc=a.id)
            if a.tail == a.head:
                raise NetworkError(f"arc {a.id!r} is a self loop", arc=a.id)
            if a.capacity.k != self.k:
                raise DimensionError(
                    f"arc {a.id!r} capacity has dimension {a.capacity.k}, network has k={self.k}", arc=a.id)

    @property
    def variant(self) -> str | None:
        """POINTS, POLYGONS, or None for a mix of the two."""
        kinds = {a.capacity.variant for a in self.arcs}
        if not kinds:
            return POINTS
        return kinds.pop() if len(kinds) == 1 else None

    def arc(self, arc_id: str) -> Arc:
        for a in self.arcs:
            if a.id == arc_id:
                return a
        raise NetworkError(f"no arc {arc_id!r}", arc=arc_id)


@dataclass(frozen=True)
class EnhancedNetwork:
    """The base network plus the return arc e from t to s."""
    base: Network
    return_arc: Arc = field(default=None)

    def __post_init__(self):
        if self.return_arc is None:
            object.__setattr__(self, "return_arc",
                               Arc(RETURN_ARC_ID, self.base.sink, self.base.source, Orthant(self.base.k)))
        e = self.return_arc
        if e.tail != self.base.sink or e.head != self.base.source:
            raise NetworkError("return arc must run from sink to source")
        object.__setattr__(self, "_by_id", {a.id: a for a in self.all_arcs})

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.base.nodes

    @property
    def source(self) -> str:
        return self.base.source

    @property
    def sink(self) -> str:
        return self.base.sink

    @property
    def arcs(self) -> tuple[Arc, ...]:
        """Base arcs in natural id order (e excluded)."""
        return tuple(sorted(self.base.arcs, key=lambda a: natural_key(a.id)))

    @property
    def all_arcs(self) -> tuple[Arc, ...]:
        return self.arcs + (self.return_arc,)

    @property
    def variant(self) -> str | None:
        return self.base.variant

    def arc(self, arc_id: str) -> Arc:
        try:
            return self._by_id[arc_id]
        except KeyError:
            raise NetworkError(f"no arc {arc_id!r}", arc=arc_id) from None

    def arc_ids(self, include_return: bool = False) -> list[str]:
        arcs = self.all_arcs if include_return else self.arcs
        return [a.id for a in arcs]


@dataclass(frozen=True)
class Flow:
    """Assignment to every arc of the enhanced network (e included)."""
    assignment: Mapping[str, CommodityVector]

    @property
    def value(self) -> CommodityVector:
        return self.assignment[RETURN_ARC_ID]

    def __getitem__(self, arc_id: str) -> CommodityVector:
        return self.assignment[arc_id]

    def items(self):
        return sorted(self.assignment.items(), key=lambda kv: natural_key(kv[0]))


@dataclass(frozen=True)
class Pseudoflow(Flow):
    """Conservation holds; capacities may not."""


def build_network(k: int, nodes: Sequence[str], arcs: Iterable, s: str, t: str) -> EnhancedNetwork:
    """Validate and build an enhanced network.

    ``arcs`` holds Arc objects or (id, tail, head, capacity) tuples.
    """
    built = []
    for a in arcs:
        if isinstance(a, Arc):
            built.append(a)
        else:
            arc_id, tail, head, cap = a
            built.append(Arc(str(arc_id), str(tail), str(head), cap))
    for a in built:
        if isinstance(a.capacity, Polygonal) and k != 2:
            raise DimensionError(f"arc {a.id!r}: polygonal capacities need k=2", arc=a.id)
        if not isinstance(a.capacity, (PointSet, Polygonal)):
            raise RegionError(f"arc {a.id!r}: unsupported capacity {type(a.capacity).__name__}", arc=a.id)
    return EnhancedNetwork(Network(int(k), tuple(str(n) for n in nodes), tuple(built), str(s), str(t)))


def node_balance(net: EnhancedNetwork, f: ArcAssignment) -> dict[str, CommodityVector]:
    """Inflow minus outflow at every node, e included."""
    zero = CommodityVector.zero(net.k)
    bal = {n: zero for n in net.nodes}
    for a in net.all_arcs:
        v = f[a.id]
        bal[a.head] = bal[a.head] + v
        bal[a.tail] = bal[a.tail] - v
    return bal


def _coerce(net: EnhancedNetwork, f: ArcAssignment) -> dict[str, CommodityVector]:
    if isinstance(f, Flow):
        f = f.assignment
    want = set(net.arc_ids(include_return=True))
    missing = sorted(want - set(f), key=natural_key)
    if missing:
        raise FlowError(f"assignment is missing arcs: {', '.join(missing)}", missing=missing)
    extra = sorted(set(f) - want, key=natural_key)
    if extra:
        raise FlowError(f"assignment names unknown arcs: {', '.join(extra)}", unknown=extra)
    out = {}
    for arc_id, v in f.items():
        v = CommodityVector(v)
        if len(v) != net.k:
            raise DimensionError(f"value on {arc_id!r} has {len(v)} entries, expected {net.k}", arc=arc_id)
        out[arc_id] = v
    return out


def check_flow(net: EnhancedNetwork, f: ArcAssignment) -> FlowVerdict:
    f = _coerce(net, f)
    if not all(b.is_zero() for b in node_balance(net, f).values()):
        return FlowVerdict.INVALID
    if all(a.capacity.contains(f[a.id]) for a in net.all_arcs):
        return FlowVerdict.VALID
    return FlowVerdict.PSEUDOFLOW


def flow_value(net: EnhancedNetwork, f: ArcAssignment) -> CommodityVector:
    if isinstance(f, Flow):
        f = f.assignment
    if RETURN_ARC_ID not in f:
        raise FlowError("assignment has no value on the return arc")
    return CommodityVector(f[RETURN_ARC_ID])


def restrict(f: ArcAssignment, arc_ids: Iterable[str]) -> dict[str, CommodityVector]:
    """The assignment limited to the given arcs."""
    if isinstance(f, Flow):
        f = f.assignment
    ids = set(arc_ids)
    unknown = ids - set(f)
    if unknown:
        raise FlowError(f"cannot restrict to unassigned arcs: {', '.join(sorted(unknown, key=natural_key))}")
    return {a: f[a] for a in sorted(ids, key=natural_key)}


def zero_assignment(net: EnhancedNetwork) -> dict[str, CommodityVector]:
    return {a: CommodityVector.zero(net.k) for a in net.arc_ids(include_return=True)}


def discretize(net: EnhancedNetwork) -> EnhancedNetwork:
    """Replace every base capacity by its integer points."""
    arcs = [Arc(a.id, a.tail, a.head, discretized(a.capacity)) for a in net.base.arcs]
    b = net.base
    return EnhancedNetwork(Network(b.k, b.nodes, tuple(arcs), b.source, b.sink))


def embed_requirements(
    net: Network | EnhancedNetwork,
    sources: Sequence[str],
    sinks: Sequence[str],
    requirement: Sequence,
    bound: int = DEFAULT_EMBED_BOUND,
) -> EnhancedNetwork:
    """Reduce a one-source-per-commodity instance to a single s-t network.

    Adds a super source s, a splitter s' and a super sink t. The arc (s, s')
    carries values R <= f <= (B, ..., B); the arcs s' -> s_i and t_i -> t
    are bounded by the box [0, B]^k, B standing in for "uncapacitated".
    """
    base = net.base if isinstance(net, EnhancedNetwork) else net
    k = base.k
    R = CommodityVector(requirement)
    if len(R) != k:
        raise DimensionError(f"requirement has {len(R)} entries, network has k={k}")
    if len(sources) != k or len(sinks) != k:
        raise DimensionError(f"need one source and one sink per commodity (k={k})")
    nodes = set(base.nodes)
    for n in list(sources) + list(sinks):
        if n not in nodes:
            raise NetworkError(f"unknown node {n!r}", node=n)
    for n in (EMBED_SOURCE, EMBED_SPLIT, EMBED_SINK):
        if n in nodes:
            raise NetworkError(f"node id {n!r} is reserved by the reduction", node=n)
    if not all(0 <= r <= bound for r in R):
        raise DimensionError(f"requirement {R} must lie in [0, {bound}]")

    top = vec([bound] * k)
    zero = CommodityVector.zero(k)
    polygonal = base.variant == POLYGONS
    make = box if polygonal else box_points
    arcs = list(base.arcs)
    arcs.append(Arc("req", EMBED_SOURCE, EMBED_SPLIT, make(R, top)))
    for i, n in enumerate(sources, start=1):
        arcs.append(Arc(f"src{i}", EMBED_SPLIT, n, make(zero, top)))
    for i, n in enumerate(sinks, start=1):
        arcs.append(Arc(f"snk{i}", n, EMBED_SINK, make(zero, top)))
    return EnhancedNetwork(Network(
        k, tuple(base.nodes) + (EMBED_SOURCE, EMBED_SPLIT, EMBED_SINK), tuple(arcs), EMBED_SOURCE, EMBED_SINK,
    ))
