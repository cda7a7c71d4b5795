import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from operad_forge import graphs as gm
from operad_forge.graphs import ARROW, PLAIN, UNLABELLED, GraphError, MultiHyperGraph, RootedGraph

LABELS = ["a", "b", "c", "d"]


@st.composite
def multigraphs(draw, oriented=False, min_vertices=1):
    k = draw(st.integers(min_vertices, 4))
    verts = LABELS[:k]
    syms = [UNLABELLED, ARROW] if oriented else [PLAIN]
    edges = draw(st.lists(st.tuples(st.sampled_from(verts), st.sampled_from(syms),
                                    st.sampled_from(verts), st.sampled_from(syms)), max_size=5))
    return MultiHyperGraph(verts, [[(u, s), (v, t)] for u, s, v, t in edges])


def det(m):
    m = [[Fraction(x) for x in row] for row in m]
    n, out = len(m), Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i]), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            out = -out
        out *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            m[r] = [x - f * y for x, y in zip(m[r], m[i])]
    return out


def kirchhoff(g):
    """Matrix-tree theorem: count spanning trees of a multigraph, loops ignored."""
    idx = {v: i for i, v in enumerate(g.vertices)}
    n = len(idx)
    lap = [[0] * n for _ in range(n)]
    for e in g.edges:
        a, b = idx[e[0][0]], idx[e[1][0]]
        if a != b:
            lap[a][a] += 1
            lap[b][b] += 1
            lap[a][b] -= 1
            lap[b][a] -= 1
    return det([row[1:] for row in lap[1:]]) if n > 1 else 1


def test_edges_are_sorted_multisets():
    g = MultiHyperGraph.from_pairs("ab", [("b", "a"), ("a", "b"), ("a", "a")])
    h = MultiHyperGraph.from_pairs("ab", [("a", "a"), ("a", "b"), ("a", "b")])
    assert g == h and hash(g) == hash(h)
    assert g.edge_count == 3
    assert gm.to_polynomial(g) == "a^2 + ab + ab"


def test_predicates():
    tri = MultiHyperGraph.from_pairs("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert gm.is_graph(tri) and gm.is_connected(tri) and not gm.is_forest(tri)
    path = MultiHyperGraph.from_pairs("abc", [("a", "b"), ("b", "c")])
    assert gm.is_tree(path)
    assert not gm.is_graph(MultiHyperGraph.from_pairs("ab", [("a", "b"), ("a", "b")]))
    assert not gm.is_graph(MultiHyperGraph.from_pairs("a", [("a", "a")]))
    assert gm.is_multigraph(MultiHyperGraph("ab", [[("a", PLAIN)] * 2]))
    assert not gm.is_multigraph(MultiHyperGraph("abc", [[("a", PLAIN), ("b", PLAIN), ("c", PLAIN)]]))


def test_bad_edges_rejected():
    with pytest.raises(GraphError):
        MultiHyperGraph.from_pairs("ab", [("a", "z")])
    with pytest.raises(GraphError):
        gm.relabel(MultiHyperGraph("ab"), {"a": "x", "b": "x"})


def test_simple_graph_counts():
    for n in range(1, 6):
        assert sum(1 for _ in gm.all_graphs(LABELS[:n] if n <= 4 else "abcde")) == 2 ** comb(n, 2)


@pytest.mark.parametrize("n, unlabelled", [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34)])
def test_shape_classes_count_unlabelled_graphs(n, unlabelled):
    shapes = {gm.shape_key(g) for g in gm.all_graphs(list(range(1, n + 1)))}
    assert len(shapes) == unlabelled


@pytest.mark.parametrize("n, unlabelled", [(3, 1), (4, 2), (5, 3)])
def test_cayley_and_tree_shapes(n, unlabelled):
    trees = list(gm.all_trees(list(range(1, n + 1))))
    assert len(trees) == n ** (n - 2)
    assert len(set(trees)) == len(trees)
    assert all(gm.is_tree(t) for t in trees)
    assert len({gm.shape_key(t) for t in trees}) == unlabelled


def test_multigraph_enumeration_counts():
    # edge types on k labels with loops: C(k+1, 2); multisets of size <= m
    for k in range(1, 4):
        types = comb(k + 1, 2)
        for m in range(3):
            expected = sum(comb(types + j - 1, j) for j in range(m + 1))
            assert sum(1 for _ in gm.all_multigraphs(LABELS[:k], m)) == expected


@given(multigraphs())
def test_spanning_trees_match_matrix_tree_theorem(g):
    if not gm.is_connected(g):
        with pytest.raises(GraphError):
            gm.spanning_trees(g)
        return
    assert len(gm.spanning_trees(g)) == kirchhoff(g)


@given(multigraphs())
def test_json_round_trip(g):
    assert gm.loads(gm.dumps(g)) == g


@given(multigraphs(oriented=True), st.sampled_from(LABELS))
def test_json_round_trip_rooted_oriented(g, r):
    if r not in g.vertices:
        r = g.vertices[0]
    x = RootedGraph(g, r)
    assert gm.loads(gm.dumps(x)) == x


@given(multigraphs(), st.permutations(LABELS))
def test_relabel_is_a_group_action(g, perm):
    sigma = dict(zip(LABELS, perm))
    inv = {v: k for k, v in sigma.items()}
    h = gm.relabel(g, {v: sigma[v] for v in g.vertices})
    assert h.edge_count == g.edge_count
    assert gm.relabel(h, {v: inv[v] for v in h.vertices}) == g
    assert gm.shape_key(h) == gm.shape_key(g)


@given(multigraphs(min_vertices=2))
def test_orientation_by_spanning_tree(g):
    if not gm.is_connected(g):
        return
    for idx in gm.spanning_trees(g)[:3]:
        t = gm.edge_subgraph(g, idx)
        for r in g.vertices:
            o = gm.orient_by_tree(g, t, r)
            assert gm.forget_orientation(o) == g
            assert gm.is_oriented(o)
            # exactly one edge enters every vertex except the root through a "_" end
            tails = [v for e in o.edges for v, s in e if s == UNLABELLED]
            assert sorted(tails, key=gm.label_key) == [v for v in g.vertices if v != r]


def test_orient_tree_direction():
    t = MultiHyperGraph.from_pairs("abc", [("a", "b"), ("b", "c")])
    o = gm.orient_tree(t, "a")
    assert set(o.edges) == {gm.make_edge([("a", ARROW), ("b", UNLABELLED)]),
                            gm.make_edge([("b", ARROW), ("c", UNLABELLED)])}


def test_disjoint_union():
    g = gm.disjoint_union(MultiHyperGraph.from_pairs("ab", [("a", "b")]), MultiHyperGraph("c"))
    assert g.vertices == ("a", "b", "c") and g.edge_count == 1
    with pytest.raises(GraphError):
        gm.disjoint_union(g, MultiHyperGraph("a"))


def test_json_format():
    g = MultiHyperGraph.from_pairs("ab", [("a", "b"), ("a", "a")])
    assert gm.graph_to_json(g) == {"vertices": ["a", "b"], "edges": [[["a", 2]], [["a", 1], ["b", 1]]]}
    with pytest.raises(GraphError):
        gm.graph_from_json({"edges": []})
    with pytest.raises(GraphError):
        gm.graph_from_json({"vertices": ["a"], "edges": [[["a", 0]]]})
