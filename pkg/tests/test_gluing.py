import itertools
import random

import pytest

from mcflow.bench import chain_cuts, chain_network
from mcflow.cuts import canonical_order, enumerate_cuts, net_flow
from mcflow.errors import BudgetExceededError, FlowError, RegionError
from mcflow.gluing import (
    LocalFlow,
    brute_force,
    compatible,
    feasible_flows,
    glue,
    local_flows_of_cut,
    mutual_capacity,
    realize,
)
from mcflow.model import FlowVerdict, build_network, check_flow, discretize, node_balance
from mcflow.regions import points
from mcflow.vector import vec


def _lf(**assignment):
    return LocalFlow(frozenset(), {a: vec(*x) for a, x in assignment.items()})


def test_local_flows_of_a_cut_enumerate_the_product():
    net = load_fixture("gap")
    c0, c1 = enumerate_cuts(net)
    family = local_flows_of_cut(net, c0)
    assert len(family) == 9
    first = min(family, key=lambda f: f.sorted_items())
    assert first.value == first.assignment["a1"] + first.assignment["a3"]
    assert vec(3, 1) in family.values()


def test_zero_capacity_cut_has_one_local_flow():
    net = build_network(2, ["s", "t"], [("a1", "s", "t", points(2, [(0, 0)]))], "s", "t")
    family = local_flows_of_cut(net, enumerate_cuts(net)[0])
    assert len(family) == 1
    assert family.flows[0].value == vec(0, 0)


def test_negative_cut_values_are_not_local_flows():
    # a backward arc larger than the forward one would push e below zero
    net = build_network(1, ["s", "v", "t"], [
        ("a1", "s", "v", points(1, [(0,), (1,)])),
        ("a2", "v", "s", points(1, [(0,), (2,)])),
        ("a3", "v", "t", points(1, [(0,), (1,)])),
    ], "s", "t")
    family = local_flows_of_cut(net, enumerate_cuts(net)[0])
    assert family.values() == {vec(0), vec(1)}


def test_chain_cut_two_has_4_u_plus_1_local_flows():
    for U in (0, 1, 3):
        net = chain_network(U)
        assert len(local_flows_of_cut(net, chain_cuts(net)[1])) == 4 * (U + 1)


def test_compatible_and_glue_of_two_cut_flows():
    # two local flows over the cuts of a diamond s -> {1, 2} -> t sharing arc (s, 2)
    f1 = _lf(s2=(0, 1), u12=(1, 0), u1t=(0, 1), e=(1, 2))
    f2 = _lf(s2=(0, 1), s1=(1, 1), e=(1, 2))
    assert compatible(f1, f2)
    g = glue([f1, f2])
    assert g.assignment == {"s2": vec(0, 1), "u12": vec(1, 0), "u1t": vec(0, 1), "s1": vec(1, 1), "e": vec(1, 2)}
    assert g.restrict(f1.arcs).key() == f1.key()
    assert g.restrict(f2.arcs).key() == f2.key()


def test_incompatible_flows_do_not_glue():
    f1 = _lf(a=(0, 1), e=(1, 1))
    f2 = _lf(a=(1, 0), e=(1, 1))
    assert compatible(f1, f1)
    assert not compatible(f1, f2)
    assert not compatible(f1, _lf(b=(0, 0), e=(1, 2)))
    with pytest.raises(FlowError):
        glue([f1, f2])
    with pytest.raises(FlowError):
        glue([])
    assert glue([f1]).key() == f1.key()


def test_glue_over_disjoint_arc_sets_is_the_union():
    f1 = _lf(a=(1, 0), e=(1, 0))
    f2 = _lf(b=(1, 0), e=(1, 0))
    assert glue([f1, f2]).assignment == {"a": vec(1, 0), "b": vec(1, 0), "e": vec(1, 0)}


def test_gap_feasible_flows_contain_the_reference_flow():
    net = load_fixture("gap")
    family = feasible_flows(net)
    groups = family.by_value()
    assert vec(2, 1) in groups
    assert any(f.assignment["a1"] == vec(1, 1) and f.assignment["a3"] == vec(1, 0) for f in groups[vec(2, 1)])
    for f in family:
        assert check_flow(net, f.to_flow()) is FlowVerdict.VALID


def test_single_cut_mutual_capacity_is_the_cut_family():
    net = load_fixture("gap")
    c0 = enumerate_cuts(net)[0]
    assert mutual_capacity(net, [c0]).assignments() == local_flows_of_cut(net, c0).assignments()


def test_zero_capacity_on_every_path_leaves_only_zero():
    net = build_network(2, ["s", "v", "t"], [
        ("a1", "s", "v", points(2, [(0, 0), (1, 1)])),
        ("a2", "v", "t", points(2, [(0, 0)])),
    ], "s", "t")
    assert feasible_flows(net).values() == {vec(0, 0)}


def test_exnet_integer_points():
    net = discretize(load_fixture("exnet"))
    logger = CapturingLogger()
    family = feasible_flows(net, logger=logger)
    expected = {vec(0, 0), vec(1, 0), vec(2, 0), vec(0, 1), vec(1, 1), vec(2, 1), vec(0, 2)}
    assert family.values() == expected
    assert vec(1, 2) not in family.values()
    assert "mutual_capacity_done" in logger.names()
    assert logger.names().count("fold_step") == 15


@pytest.mark.slow
def test_exnet_gluing_matches_brute_force():
    net = discretize(load_fixture("exnet"))
    assert feasible_flows(net).assignments() == brute_force(net).assignments()


def test_disjoint_fixture_matches_brute_force():
    net = load_fixture("disjoint")
    assert feasible_flows(net).assignments() == brute_force(net).assignments()


def test_realize_returns_a_witness_or_none():
    net = load_fixture("gap")
    f = realize(net, (2, 1))
    assert f is not None
    assert f.value == vec(2, 1)
    assert check_flow(net, f) is FlowVerdict.VALID
    assert realize(net, (2, 2)) is None


def test_polygonal_capacities_must_be_discretized():
    net = load_fixture("box3")
    with pytest.raises(RegionError):
        feasible_flows(net)


def test_budget_is_enforced():
    net = discretize(load_fixture("exnet"))
    with pytest.raises(BudgetExceededError) as exc:
        brute_force(net, budget=1000)
    assert exc.value.exit_code == 3
    assert exc.value.details["size"] == 81648
    with pytest.raises(BudgetExceededError):
        feasible_flows(net, budget=10)


def test_chain_counters():
    net = chain_network(2)
    family = mutual_capacity(net, chain_cuts(net))
    assert family.stats.steps[0]["partials"] == 6
    assert family.stats.semantic_comparisons == family.stats.survivor_comparisons == 48 * 3
    assert family.stats.actual_comparisons < family.stats.semantic_comparisons
    brute = brute_force(net)
    assert brute.stats.coordinates == 96 * 9
    assert brute.stats.operations == 384 * 9
    assert family.values() == brute.values()


def _random_network(rng):
    inner = [f"v{i}" for i in range(1, rng.randint(0, 3) + 1)]
    nodes = ["s"] + inner + ["t"]
    grid = [(x, y) for x in range(3) for y in range(3)]
    arcs = []
    for i in range(rng.randint(1, 8)):
        tail, head = rng.sample(nodes, 2)
        arcs.append((f"a{i + 1}", tail, head, points(2, rng.sample(grid, rng.choice([1, 1, 2, 2, 3])))))
    return build_network(2, nodes, arcs, "s", "t")


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_gluing_agrees_with_brute_force_on_random_networks(seed):
    net = _random_network(random.Random(seed))
    glued = feasible_flows(net)
    brute = brute_force(net)
    assert glued.assignments() == brute.assignments()
    assert glued.values() == brute.values()


@pytest.mark.parametrize("seed", range(10))
def test_cut_order_does_not_matter(seed):
    net = _random_network(random.Random(seed))
    shuffled = list(canonical_order(enumerate_cuts(net)))
    random.Random(seed).shuffle(shuffled)
    assert mutual_capacity(net, shuffled).assignments() == feasible_flows(net).assignments()


def _single_node_moves(net):
    """Pairs of cuts whose source sides differ by exactly one inner node."""
    cuts = enumerate_cuts(net)
    for c, d in itertools.combinations(cuts, 2):
        moved = c.s_side ^ d.s_side
        if len(moved) == 1:
            small, large = (c, d) if len(c.s_side) < len(d.s_side) else (d, c)
            yield next(iter(moved)), small, large


def test_moving_one_node_across_a_cut_measures_its_balance():
    net = load_fixture("disjoint")
    moves = list(_single_node_moves(net))
    # every inner node is moved across a cut somewhere
    assert {v for v, _, _ in moves} == {"a", "b", "c"}
    rng = random.Random(7)
    for _ in range(30):
        f = {a.id: rng.choice(a.capacity.sorted_points()) for a in net.arcs}
        f["e"] = vec(0, 0)
        bal = node_balance(net, f)
        for v, small, large in moves:
            assert net_flow(net, f, small) - net_flow(net, f, large) == bal[v]


def test_feasible_flows_conserve_at_every_node():
    net = load_fixture("disjoint")
    moves = list(_single_node_moves(net))
    flows = feasible_flows(net).flows
    assert flows
    for lf in flows:
        for v, small, large in moves:
            assert net_flow(net, lf.assignment, small) == net_flow(net, lf.assignment, large) == lf.value
        bal = node_balance(net, lf.assignment)
        assert all(x.is_zero() for x in bal.values())
