"""Local flows over cuts and the gluing engine that assembles feasible flows.

A local flow assigns a capacity point to every arc of a cut (plus the return
arc e, carrying the cut's net value). Local flows from different cuts glue
when they agree on every shared arc. Folding the gluing over all cuts yields
exactly the feasible flows of the network; ``brute_force`` is the
independent oracle the engine is tested against.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .constants import DEFAULT_BUDGET, RETURN_ARC_ID
from .cuts import FORWARD, Cut, canonical_order, enumerate_cuts
from .errors import BudgetExceededError, FlowError, RegionError
from .logging import resolve_logger
from .model import EnhancedNetwork, Flow
from .regions import PointSet
from .util import natural_key
from .vector import CommodityVector


@dataclass(frozen=True)
class LocalFlow:
    cuts: frozenset[Cut]
    assignment: Mapping[str, CommodityVector] = field(hash=False)

    @property
    def value(self) -> CommodityVector:
        return self.assignment[RETURN_ARC_ID]

    @property
    def arcs(self) -> frozenset[str]:
        return frozenset(self.assignment)

    def key(self) -> frozenset:
        """Identity of the assignment, independent of the cut set."""
        return frozenset(self.assignment.items())

    def restrict(self, arc_ids: Iterable[str], cuts: Iterable[Cut] = ()) -> "LocalFlow":
        ids = set(arc_ids) | {RETURN_ARC_ID}
        missing = ids - set(self.assignment)
        if missing:
            raise FlowError(f"local flow does not cover {sorted(missing, key=natural_key)}")
        return LocalFlow(frozenset(cuts), {a: self.assignment[a] for a in ids})

    def sorted_items(self) -> list[tuple[str, CommodityVector]]:
        return sorted(self.assignment.items(), key=lambda kv: natural_key(kv[0]))

    def to_flow(self) -> Flow:
        return Flow(dict(self.sorted_items()))


@dataclass
class GluingStats:
    """Comparison counters.

    semantic: sum over fold steps of |first-cut family| * |new family| *
    |shared arcs|, every local flow of the next cut compared against every
    local flow of the first cut. survivor: the same product taken with the
    partial flows that are still alive, so it shrinks when the eager discard
    bites. actual: hash lookups plus matched pairs, the work the join really does.
    For brute force, ``coordinates`` counts full assignments examined and
    ``operations`` adds one node check per node per assignment.
    """
    semantic_comparisons: int = 0
    survivor_comparisons: int = 0
    actual_comparisons: int = 0
    coordinates: int = 0
    operations: int = 0
    steps: list = field(default_factory=list)


@dataclass
class LocalFlowFamily:
    cuts: tuple[Cut, ...]
    flows: list[LocalFlow]
    stats: GluingStats = field(default_factory=GluingStats)

    def __len__(self):
        return len(self.flows)

    def __iter__(self):
        return iter(self.flows)

    def values(self) -> set[CommodityVector]:
        return {f.value for f in self.flows}

    def sorted_values(self) -> list[CommodityVector]:
        return sorted(self.values())

    def by_value(self) -> dict[CommodityVector, list[LocalFlow]]:
        """Level sets of the enriched sum: local flows grouped by value."""
        groups: dict = defaultdict(list)
        for f in self.flows:
            groups[f.value].append(f)
        return {v: sorted(groups[v], key=lambda f: f.sorted_items()) for v in sorted(groups)}

    def assignments(self) -> set[frozenset]:
        return {f.key() for f in self.flows}


def _require_points(net: EnhancedNetwork, arc_ids: Iterable[str]) -> None:
    for arc_id in arc_ids:
        cap = net.arc(arc_id).capacity
        if not isinstance(cap, PointSet):
            raise RegionError(
                f"arc {arc_id!r} has a {cap.variant} capacity; gluing enumerates point sets "
                "(discretize the network first)", arc=arc_id)


def local_flows_of_cut(
    net: EnhancedNetwork,
    c: Cut,
    *,
    value: CommodityVector | None = None,
    budget: int = DEFAULT_BUDGET,
) -> LocalFlowFamily:
    """Every combination of capacity points over the cut's arcs.

    Values on arcs are stored in original orientation; the net value
    (forward minus backward) goes on e and must lie in e's capacity.
    """
    oriented = c.oriented()
    ids = [a for a, _ in oriented]
    _require_points(net, ids)
    choices = [net.arc(a).capacity.sorted_points() for a in ids]
    size = math.prod(len(ch) for ch in choices)
    if size > budget:
        raise BudgetExceededError(f"cut {c.label()} has {size} local flows, budget is {budget}",
                                  cut=c.index, size=size, budget=budget)
    e_cap = net.return_arc.capacity
    zero = CommodityVector.zero(net.k)
    flows = []
    for combo in itertools.product(*choices):
        total = zero
        for (_, sign), x in zip(oriented, combo):
            total = total + x if sign == FORWARD else total - x
        if value is not None and total != value:
            continue
        if not e_cap.contains(total):
            continue
        assignment = dict(zip(ids, combo))
        assignment[RETURN_ARC_ID] = total
        flows.append(LocalFlow(frozenset((c,)), assignment))
    return LocalFlowFamily((c,), flows)


def compatible(f1: LocalFlow, f2: LocalFlow, stats: GluingStats | None = None) -> bool:
    """Agreement on every shared arc, e included."""
    shared = f1.arcs & f2.arcs
    if stats is not None:
        stats.semantic_comparisons += len(shared)
        stats.actual_comparisons += len(shared)
    return all(f1.assignment[a] == f2.assignment[a] for a in shared)


def glue(flows: Sequence[LocalFlow]) -> LocalFlow:
    """The unique local flow over the union of the contributors' cuts."""
    if not flows:
        raise FlowError("nothing to glue")
    cuts: set = set()
    merged: dict = {}
    for f in flows:
        for a, x in f.assignment.items():
            if merged.setdefault(a, x) != x:
                raise FlowError(f"local flows disagree on arc {a!r}", arc=a)
        cuts |= f.cuts
    return LocalFlow(frozenset(cuts), merged)


def mutual_capacity(
    net: EnhancedNetwork,
    cuts: Sequence[Cut],
    *,
    value: CommodityVector | None = None,
    budget: int = DEFAULT_BUDGET,
    logger=None,
) -> LocalFlowFamily:
    """Left fold of gluing over ``cuts`` in the order given.

    Partial gluings with no partner in the next cut are dropped at once.
    Matching is a hash join on the values of the shared arcs.
    """
    logger = resolve_logger(logger)
    if not cuts:
        raise FlowError("mutual capacity needs at least one cut")
    stats = GluingStats()
    first = local_flows_of_cut(net, cuts[0], value=value, budget=budget)
    running = first.flows
    covered = set(cuts[0].arc_ids(include_return=True))
    for step, c in enumerate(cuts[1:], start=2):
        family = local_flows_of_cut(net, c, value=value, budget=budget)
        cut_arcs = set(c.arc_ids(include_return=True))
        shared = sorted(covered & cut_arcs, key=natural_key)
        stats.semantic_comparisons += len(first) * len(family) * len(shared)
        stats.survivor_comparisons += len(running) * len(family) * len(shared)

        index: dict = defaultdict(list)
        for lf in family.flows:
            index[tuple(lf.assignment[a] for a in shared)].append(lf)
        glued = []
        for partial in running:
            stats.actual_comparisons += 1
            for lf in index.get(tuple(partial.assignment[a] for a in shared), ()):
                stats.actual_comparisons += 1
                glued.append(LocalFlow(partial.cuts | lf.cuts, {**partial.assignment, **lf.assignment}))
                if len(glued) > budget:
                    raise BudgetExceededError(f"gluing produced more than {budget} partial flows",
                                              step=step, budget=budget)
        stats.steps.append({"step": step, "cut": c.index, "partials": len(running),
                            "family": len(family), "shared": len(shared), "survivors": len(glued)})
        logger.debug("fold_step", step=step, cut=c.label(), partials=len(running),
                     family=len(family), shared=len(shared), survivors=len(glued))
        running = glued
        covered |= cut_arcs
    logger.emit("mutual_capacity_done", cuts=len(cuts), flows=len(running),
                values=len({f.value for f in running}), semantic=stats.semantic_comparisons,
                survivor=stats.survivor_comparisons, actual=stats.actual_comparisons)
    return LocalFlowFamily(tuple(cuts), running, stats)


def feasible_flows(net: EnhancedNetwork, *, budget: int = DEFAULT_BUDGET, logger=None) -> LocalFlowFamily:
    """Mutual capacity of every cut: exactly the feasible flows."""
    return mutual_capacity(net, canonical_order(enumerate_cuts(net)), budget=budget, logger=logger)


def realize(net: EnhancedNetwork, value, *, budget: int = DEFAULT_BUDGET, logger=None) -> Flow | None:
    """A feasible flow with the given value, or None.

    Runs the fold with every cut's family pre-filtered to that value.
    """
    v = CommodityVector(value)
    family = mutual_capacity(net, canonical_order(enumerate_cuts(net)), value=v, budget=budget, logger=logger)
    if not family.flows:
        return None
    best = min(family.flows, key=lambda f: f.sorted_items())
    return best.to_flow()


def brute_force(net: EnhancedNetwork, *, budget: int = DEFAULT_BUDGET, logger=None) -> LocalFlowFamily:
    """Enumerate every assignment of capacity points and keep the flows.

    e receives the net outflow of s and must be nonnegative; every node,
    source and sink included, is checked for conservation.
    """
    logger = resolve_logger(logger)
    arcs = list(net.arcs)
    _require_points(net, [a.id for a in arcs])
    choices = [a.capacity.sorted_points() for a in arcs]
    size = math.prod(len(ch) for ch in choices)
    if size > budget:
        raise BudgetExceededError(f"brute force needs {size} assignments, budget is {budget}",
                                  size=size, budget=budget)
    stats = GluingStats()
    s, t = net.source, net.sink
    e_cap = net.return_arc.capacity
    zero = CommodityVector.zero(net.k)
    cuts = tuple(canonical_order(enumerate_cuts(net)))
    flows = []
    for combo in itertools.product(*choices):
        stats.coordinates += 1
        stats.operations += len(net.nodes)
        bal = {n: zero for n in net.nodes}
        for a, x in zip(arcs, combo):
            bal[a.head] = bal[a.head] + x
            bal[a.tail] = bal[a.tail] - x
        value = -bal[s]
        if not e_cap.contains(value):
            continue
        # e carries the value from t back to s
        bal[s] = bal[s] + value
        bal[t] = bal[t] - value
        if all(b.is_zero() for b in bal.values()):
            assignment = {a.id: x for a, x in zip(arcs, combo)}
            assignment[RETURN_ARC_ID] = value
            flows.append(LocalFlow(frozenset(cuts), assignment))
    logger.emit("brute_force_done", assignments=stats.coordinates, flows=len(flows), operations=stats.operations)
    return LocalFlowFamily(cuts, flows, stats)
