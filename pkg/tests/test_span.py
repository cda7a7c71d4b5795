import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from operad_forge import operads as ops
from operad_forge import span as sp
from operad_forge.exact import LinComb
from operad_forge.graphs import MultiHyperGraph

PTS = MultiHyperGraph([1, 2])
SEG = MultiHyperGraph.from_pairs([1, 2], [(1, 2)])
LOOP = MultiHyperGraph.from_pairs([1], [(1, 1)])


@pytest.fixture(scope="module")
def sp_table():
    return sp.closure(ops.G, [PTS, SEG], 4)


@pytest.fixture(scope="module")
def graph_generators():
    return sp.find_generators(ops.G, 4)


@pytest.mark.parametrize("p, q", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_placement_count(p, q):
    items = list(sp.placements(p, q))
    n = p + q - 1
    assert len(items) == comb(n, q) * p
    for hole, sx, sy in items:
        assert sx[hole] == "*"
        assert set(v for v in sx.values() if v != "*") | set(sy.values()) == set(range(1, n + 1))


def test_standardize_and_orbit():
    g = MultiHyperGraph.from_pairs("xyz", [("x", "y")])
    v = sp.standardize(ops.G, LinComb.of(g))
    assert sp.vertex_set(ops.G, v) == (1, 2, 3)
    assert len({w for w in sp.orbit(ops.G, v)}) == 3


def test_com_and_commag():
    assert sp.closure(ops.G, [PTS], 6).dims() == [1] * 6
    assert sp.closure(ops.G, [SEG], 4).dims() == [1, 1, 3, 15]


def test_sp_dims_and_grading(sp_table):
    assert sp_table.dims() == [1, 2, 7, 37]
    by_edges = sp_table.dims_by_edges(3)
    assert sum(by_edges.values()) == 7
    assert by_edges[0] == 1


def test_triangle_is_not_generated(sp_table):
    tri = MultiHyperGraph.from_pairs([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    assert not sp.membership(ops.G, sp_table, LinComb.of(tri))


@given(seed=st.integers(0, 10 ** 6))
def test_compositions_of_members_are_members(sp_table, seed):
    rng = random.Random(seed)
    basis2 = sp_table.basis(2)
    basis3 = sp_table.basis(3)
    x = sum((b.scale(rng.randint(-2, 2)) for b in basis2), LinComb())
    y = sum((b.scale(rng.randint(-2, 2)) for b in basis3), LinComb())
    if not x or not y:
        return
    x = x.map_basis(lambda g: ops.G.relabel(g, {1: "a", 2: "*"}))
    y = y.map_basis(lambda g: ops.G.relabel(g, {1: "b", 2: "c", 3: "d"}))
    assert sp.membership(ops.G, sp_table, ops.compose(ops.G, x, "*", y))


def test_relabelled_members_are_members(sp_table):
    for v in sp_table.basis(3):
        w = v.map_basis(lambda g: ops.G.relabel(g, {1: "q", 2: "p", 3: "r"}))
        assert sp.membership(ops.G, sp_table, w)


def test_threads_do_not_change_results(monkeypatch):
    base = sp.closure(ops.G, [PTS, SEG], 4)
    monkeypatch.setenv(sp.THREADS_ENV, "4")
    threaded = sp.closure(ops.G, [PTS, SEG], 4)
    assert threaded.dims() == base.dims()
    for n in range(1, 5):
        assert threaded.basis(n) == base.basis(n)


def test_loop_generator_needs_edge_cap():
    with pytest.raises(sp.ClosureError):
        sp.closure(ops.MG, [LOOP, PTS], 3)
    table = sp.closure(ops.MG, [LOOP, PTS], 2, max_edges=2)
    assert table.dims_by_edges(1) == {0: 1, 1: 1, 2: 1}


def test_arity_bound():
    with pytest.raises(sp.ArityBoundError):
        sp.closure(ops.G, [PTS], 7)
    assert sp.closure(ops.G, [PTS], 7, arity_bound=7).dims() == [1] * 7
    table = sp.closure(ops.G, [PTS], 2)
    with pytest.raises(sp.ArityBoundError):
        table.contains(LinComb.of(MultiHyperGraph([1, 2, 3])))


def test_carrier_checked():
    with pytest.raises(sp.ClosureError):
        sp.closure(ops.G, [MultiHyperGraph.from_pairs([1, 2], [(1, 2), (1, 2)])], 2)


def test_generator_reports(graph_generators):
    reports, _ = graph_generators
    by_arity = {r.arity: r for r in reports}
    assert by_arity[2].shape_count == 2
    assert by_arity[3].shape_count == 1
    assert by_arity[3].representatives[0].edges == 3
    assert by_arity[4].ambient_dim == 64
    assert by_arity[4].composable_rank == 51
    assert by_arity[4].deficit == 13
    assert [s.edges for s in by_arity[4].representatives] == [3, 4, 5, 6]
    # orbit sizes of the chosen shapes add up to the deficit
    assert sum(s.orbit_size for s in by_arity[4].representatives) >= by_arity[4].deficit


def test_removal_tests(graph_generators):
    reports, table = graph_generators
    for rep in reports:
        res = sp.removal_test(ops.G, sp.truncate(table, rep.arity - 1), rep)
        assert res and all(res.values())


def test_tree_generators():
    reports, _ = sp.find_generators(ops.T, 5)
    counts = {r.arity: r.shape_count for r in reports}
    assert counts == {2: 1, 3: 0, 4: 1, 5: 1}


def test_generator_search_rejects_infinite_carrier():
    table = sp.closure(ops.MG, [PTS], 2)
    with pytest.raises(sp.ClosureError):
        sp.generator_search(ops.MG, table, 3)


def test_threshold_formula():
    assert [sp.threshold_edges(n) for n in range(2, 7)] == [1, 2, 4, 7, 11]


def test_report_serializes(graph_generators):
    reports, _ = graph_generators
    d = reports[-1].to_dict()
    assert d["arity"] == 4 and d["shape_count"] == 4
