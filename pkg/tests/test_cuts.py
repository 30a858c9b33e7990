import random

import pytest

from mcflow.cuts import (
    BACKWARD,
    FORWARD,
    canonical_order,
    cut_capacity,
    disjoint_capacity,
    disjoint_paths,
    enumerate_cuts,
    net_flow,
    pairwise_bound,
    pairwise_capacity,
    total_capacity,
)
from mcflow.errors import NotFullyDisjointError, RegionError
from mcflow.gluing import brute_force, feasible_flows
from mcflow.model import build_network
from mcflow.regions import box, minkowski_sum, points, polygon
from mcflow.vector import vec

PENTAGON = [[(0, 0), (2, 0), (2, 1), (1, 2), (0, 2)]]


def _verts(region):
    return [[tuple(v) for v in piece] for piece in region.vertex_lists()]


def _cut(net, s_side):
    return next(c for c in enumerate_cuts(net) if c.s_side == frozenset(s_side))


def test_gap_has_two_cuts():
    net = load_fixture("gap")
    cuts = enumerate_cuts(net)
    assert [c.label() for c in cuts] == ["{s}|{t,v2}", "{s,v2}|{t}"]
    assert cuts[0].forward == ("a1", "a3")
    assert cuts[1].forward == ("a2", "a3")
    assert all(c.backward[-1] == "e" for c in cuts)
    assert cuts[0].oriented() == [("a1", FORWARD), ("a3", FORWARD)]
    assert cuts[0].oriented(include_return=True)[-1] == ("e", BACKWARD)


def test_cut_counts_and_canonical_order():
    assert len(enumerate_cuts(load_fixture("exnet"))) == 16
    net = load_fixture("cyclebox")
    cuts = enumerate_cuts(net)
    assert len(cuts) == 16
    assert cuts[0].forward == ("a1", "a2")
    ordered = canonical_order(cuts)
    assert ordered[0].index == 0
    assert [len(c.s_side) for c in ordered] == sorted(len(c.s_side) for c in cuts)
    assert ordered[-1].s_side == frozenset(net.nodes) - {"v5"}


def test_cut_capacity_with_a_backward_arc():
    net = build_network(2, ["s", "v", "t"], [
        ("a1", "s", "v", points(2, [(1, 1)])),
        ("a2", "v", "s", points(2, [(1, 0)])),
        ("a3", "v", "t", points(2, [(0, 0), (1, 1)])),
    ], "s", "t")
    c = _cut(net, {"s"})
    assert c.forward == ("a1",) and c.backward == ("a2", "e")
    assert cut_capacity(net, c) == points(2, [(0, 1)])


def test_single_arc_cut_is_the_arc_capacity():
    net = load_fixture("box3")
    assert cut_capacity(net, enumerate_cuts(net)[0]) == box((0, 0), (3, 3))


def test_exnet_sink_side_cut_capacity():
    net = load_fixture("exnet")
    c = _cut(net, {"s", "1", "2", "3"})
    assert set(c.forward) == {"u34", "u3t"}
    region = cut_capacity(net, c)
    triangle = polygon([(0, 0), (1, 0), (0, 1)])
    assert region == minkowski_sum(triangle, box((0, 0), (1, 2)))
    assert _verts(region) == [[(0, 0), (2, 0), (2, 2), (1, 3), (0, 3)]]
    # integer points agree with pairwise sums of integer points
    tri_pts = [vec(x, y) for x in range(2) for y in range(2) if x + y <= 1]
    box_pts = [vec(x, y) for x in range(2) for y in range(3)]
    assert set(region.integer_points()) == {p + q for p in tri_pts for q in box_pts}


def test_exnet_total_capacity_is_the_box():
    assert total_capacity(load_fixture("exnet")) == box((0, 0), (2, 2))


def test_exnet_pairwise_of_the_two_sink_cuts():
    net = load_fixture("exnet")
    a = _cut(net, {"s", "1", "2", "3"})
    b = _cut(net, {"s", "1", "2", "3", "4"})
    assert _verts(pairwise_capacity(net, a, b)) == PENTAGON


def test_exnet_pairwise_bound_is_the_pentagon():
    net = load_fixture("exnet")
    logger = CapturingLogger()
    region = pairwise_bound(net, logger)
    assert _verts(region) == PENTAGON
    assert ("pairwise_bound_done", {"cuts": 16, "pairs": 136}) in logger.events


def test_exnet_sandwich_is_strict():
    net = load_fixture("exnet")
    total = total_capacity(net)
    pairwise = pairwise_bound(net)
    # (2, 2) is in the box only; (1, 2) is in the pentagon but not feasible
    assert total.contains((2, 2)) and not pairwise.contains((2, 2))
    assert pairwise.contains((1, 2))
    for p in pairwise.integer_points():
        assert total.contains(p)


def test_pairwise_capacity_of_a_cut_with_itself():
    net = load_fixture("gap")
    for c in enumerate_cuts(net):
        assert pairwise_capacity(net, c, c) == cut_capacity(net, c)


def test_example3_gap_between_total_and_pairwise():
    net = load_fixture("gap")
    c1, c2 = enumerate_cuts(net)
    assert total_capacity(net) == points(2, [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)])
    u = pairwise_capacity(net, c1, c2)
    a1, a2, a3 = (net.arc(a).capacity for a in ("a1", "a2", "a3"))
    assert u == minkowski_sum(a3, a1.intersect(a2))
    assert not u.contains((2, 2))
    assert pairwise_bound(net) == u
    assert feasible_flows(net).values() == set(u.points)


def test_opposite_orientations_count_as_distinct_arcs():
    # a2 runs v -> u: backward in {s, u}, forward in {s, v}
    net = build_network(1, ["s", "u", "v", "t"], [
        ("a1", "s", "u", points(1, [(0,), (1,)])),
        ("a2", "v", "u", points(1, [(0,), (1,)])),
        ("a3", "s", "v", points(1, [(0,), (1,)])),
        ("a4", "u", "t", points(1, [(0,), (1,)])),
        ("a5", "v", "t", points(1, [(0,), (1,)])),
    ], "s", "t")
    su, sv = _cut(net, {"s", "u"}), _cut(net, {"s", "v"})
    assert "a2" in su.backward and "a2" in sv.forward
    u = pairwise_capacity(net, su, sv)
    # nothing shared; v({a3, a4, -a2}) & v({a1, a5, a2})
    assert u == points(1, [(0,), (1,), (2,)])


def test_disjoint_capacity_matches_gluing():
    net = load_fixture("disjoint")
    assert [p for p in disjoint_paths(net)] == [["p1", "p2"], ["q1", "q2", "q3"]]
    region = disjoint_capacity(net)
    assert region == points(2, [(0, 0), (1, 0), (0, 1), (1, 1)])
    assert set(region.points) == feasible_flows(net).values()


def _random_disjoint_network(rng):
    grid = [(x, y) for x in range(3) for y in range(3)]
    nodes, arcs = ["s", "t"], []
    for p in range(rng.randint(1, 3)):
        length = rng.randint(1, 3)
        inner = [f"p{p}v{i}" for i in range(length - 1)]
        nodes[1:1] = inner
        hops = ["s"] + inner + ["t"]
        for i in range(length):
            cap = points(2, rng.sample(grid, rng.randint(1, 3)))
            arcs.append((f"p{p}a{i}", hops[i], hops[i + 1], cap))
    return build_network(2, nodes, arcs, "s", "t")


def test_disjoint_capacity_on_random_disjoint_networks():
    rng = random.Random(7)
    for _ in range(20):
        net = _random_disjoint_network(rng)
        assert set(disjoint_capacity(net).points) == feasible_flows(net).values()


def test_disjoint_capacity_simple_shapes():
    path = build_network(2, ["s", "v", "t"], [
        ("a1", "s", "v", box((0, 0), (2, 1))),
        ("a2", "v", "t", box((0, 0), (1, 2))),
    ], "s", "t")
    assert disjoint_capacity(path) == box((0, 0), (1, 1))
    parallel = build_network(2, ["s", "t"], [
        ("a1", "s", "t", box((0, 0), (2, 1))),
        ("a2", "s", "t", box((0, 0), (1, 2))),
    ], "s", "t")
    assert disjoint_capacity(parallel) == minkowski_sum(box((0, 0), (2, 1)), box((0, 0), (1, 2)))


def test_disjoint_capacity_refuses_shared_nodes():
    with pytest.raises(NotFullyDisjointError):
        disjoint_capacity(load_fixture("cyclebox"))


def test_mixed_variants_are_refused():
    net = build_network(2, ["s", "t"], [
        ("a1", "s", "t", box((0, 0), (1, 1))),
        ("a2", "s", "t", points(2, [(0, 0)])),
    ], "s", "t")
    with pytest.raises(RegionError):
        total_capacity(net)


def _random_network(rng):
    inner = [f"v{i}" for i in range(1, rng.randint(0, 3) + 1)]
    nodes = ["s"] + inner + ["t"]
    grid = [(x, y) for x in range(3) for y in range(3)]
    arcs = []
    for i in range(rng.randint(1, 6)):
        tail, head = rng.sample(nodes, 2)
        arcs.append((f"a{i + 1}", tail, head, points(2, rng.sample(grid, rng.choice([1, 2, 2, 3])))))
    return build_network(2, nodes, arcs, "s", "t")


def test_valid_flows_lie_in_every_pairwise_capacity():
    rng = random.Random(20240611)
    for _ in range(10):
        net = _random_network(rng)
        cuts = enumerate_cuts(net)
        total = total_capacity(net)
        bound = pairwise_bound(net)
        for f in brute_force(net):
            assert bound.contains(f.value)
            assert total.contains(f.value)
            for c in cuts:
                assert net_flow(net, f.assignment, c) == f.value
