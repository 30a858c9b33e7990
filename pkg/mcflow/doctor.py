from __future__ import annotations

import math

import networkx as nx

from .cuts import disjoint_paths, enumerate_cuts
from .document import NetworkDocument
from .errors import McflowError
from .model import EnhancedNetwork
from .regions import PointSet


def network_checks(doc: NetworkDocument, net: EnhancedNetwork, budget: int) -> list[dict]:
    """Diagnostics for a parsed network, one dict per check (status OK / WARN / INFO)."""
    checks = []

    def add(status: str, name: str, detail: str, **extra):
        checks.append({"status": status, "check": name, "detail": detail, **extra})

    variant = net.variant or "mixed"
    add("OK", "parse", f"{len(net.nodes)} nodes, {len(net.arcs)} arcs, k={net.k}, capacities: {variant}")
    if net.variant is None:
        add("WARN", "variant", "point-set and polygonal capacities are mixed; cut capacities and decide will refuse")

    g = nx.MultiGraph()
    g.add_nodes_from(net.nodes)
    g.add_edges_from((a.tail, a.head) for a in net.arcs)
    if nx.is_connected(g):
        add("OK", "connected", "underlying graph is connected")
    else:
        add("WARN", "connected", f"{nx.number_connected_components(g)} components; the cycle basis spans a forest")

    d = nx.MultiDiGraph()
    d.add_nodes_from(net.nodes)
    d.add_edges_from((a.tail, a.head) for a in net.arcs)
    if nx.has_path(d, net.source, net.sink):
        add("OK", "path", f"an s-t path exists from {net.source!r} to {net.sink!r}")
    else:
        add("WARN", "path", "no directed s-t path; only the zero flow can be feasible")

    empty = [a.id for a in net.arcs if a.capacity.is_empty()]
    if empty:
        add("WARN", "empty", f"arcs with empty capacity (no flow at all): {', '.join(empty)}", arcs=empty)

    try:
        bad = [a.id for a in net.arcs if not a.capacity.is_reducible()]
    except McflowError as e:
        bad = None
        add("WARN", "reducible", f"reducibility not checked: {e.message}")
    if bad is not None:
        if bad:
            declared = " (declared reducible)" if doc.reducible_declared else ""
            add("WARN", "reducible", f"not reducible{declared}: {', '.join(bad)}", arcs=bad)
        else:
            add("OK", "reducible", "every capacity is down-closed on the integer grid")

    add("OK", "cuts", f"{len(enumerate_cuts(net))} s-t cuts")
    if all(isinstance(a.capacity, PointSet) for a in net.arcs):
        size = math.prod(len(a.capacity) for a in net.arcs)
        status = "OK" if size <= budget else "WARN"
        add(status, "brute_force", f"brute force enumerates {size} assignments (budget {budget})", size=size)
    else:
        add("INFO", "brute_force", "polygonal capacities: gluing and brute force need --discretize")

    try:
        paths = disjoint_paths(net)
        add("INFO", "disjoint", f"fully disjoint with {len(paths)} s-t paths; disjoint-capacity applies")
    except McflowError:
        add("INFO", "disjoint", "not fully disjoint")
    return checks


def run_doctor(doc: NetworkDocument, net: EnhancedNetwork, budget: int) -> tuple[list[dict], str]:
    """Run the diagnostics and render them the way the CLI prints them."""
    checks = network_checks(doc, net, budget)
    lines = ["Network diagnostics:"]
    for c in checks:
        lines.append(f"  {c['status']}: {c['detail']}")
    return checks, "\n".join(lines) + "\n"
