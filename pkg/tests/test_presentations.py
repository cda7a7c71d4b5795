import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from operad_forge import presentations as pr
from operad_forge import suites
from operad_forge.exact import LinComb, span

ABC = ("a", "b", "c")
ABCD = ("a", "b", "c", "d")


def double_factorial(n):
    out = 1
    for k in range(2 * n - 3, 0, -2):
        out *= k
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_free_operad_dimensions(n):
    # binary tree shapes times a generator choice per internal node
    assert len(pr.free_trees(ABCD[:n])) == double_factorial(n) * 2 ** (n - 1)


def test_two_node_basis():
    basis = pr.two_node_basis()
    assert len(basis) == 12
    assert len(set(basis)) == 12


def test_children_are_unordered():
    assert pr.corolla("p", "a", "b") == pr.corolla("p", "b", "a")
    assert pr.corolla("sv", "a", "b") == pr.corolla("sv", "b", "a")


def test_dual_corolla_changes_sign_under_transposition():
    v = pr.corolla("sv", "a", "b")
    assert pr.relabel(v, {"a": "b", "b": "a"}) == -v
    w = pr.corolla("s", "a", "b")
    assert pr.relabel(w, {"a": "b", "b": "a"}) == w


def test_relation_spans():
    I = pr.relation_space(pr.sp_relations())
    J = pr.relation_space(pr.dual_relations())
    assert I.rank == 5
    assert J.rank == 7
    assert pr.same_space(pr.orthogonal(I), J)


def test_all_pairings_vanish():
    I = pr.relation_space(pr.sp_relations())
    J = pr.relation_space(pr.dual_relations())
    assert all(pr.koszul_pairing(f, x) == 0 for f in J.rows() for x in I.rows())


def test_pairing_detects_non_orthogonal_vectors():
    t = pr.two_node_basis()[0]
    assert pr.koszul_pairing(LinComb.of(pr.dualize(t)), LinComb.of(t)) == 1


def test_listed_dual_relations_span_the_dual_space():
    J = pr.relation_space(pr.dual_relations())
    assert pr.same_space(span(suites.listed_dual_relations()), J)


def test_quotient_dimensions():
    assert pr.quotient_dims(pr.sp_relations(), 4) == [1, 2, 7, 37]


def test_free_compose_grafts():
    v = pr.free_compose(pr.corolla("p", "a", "*"), "*", pr.corolla("s", "b", "c"))
    ((t, c),) = v.items()
    assert c == 1 and set(t.leaves()) == set(ABC)
    with pytest.raises(pr.PresentationError):
        pr.free_compose(pr.corolla("p", "a", "*"), "*", pr.corolla("s", "a", "c"))


@given(st.permutations(ABC), st.permutations(ABC))
def test_relabelling_is_an_action(p1, p2):
    s1 = dict(zip(ABC, p1))
    s2 = dict(zip(ABC, p2))
    both = {k: s2[s1[k]] for k in ABC}
    for r in pr.dual_relations() + pr.sp_relations():
        assert pr.relabel(pr.relabel(r, s1), s2) == pr.relabel(r, both)


@given(st.permutations(ABCD), st.permutations(ABCD))
def test_sign_is_multiplicative(p1, p2):
    composed = [p2[ABCD.index(x)] for x in p1]
    assert pr.perm_sign(composed) == pr.perm_sign(p1) * pr.perm_sign(p2)


@given(st.sampled_from(pr.free_trees(ABCD, pr.PRIMAL + pr.DUAL)))
def test_json_round_trip(t):
    v = LinComb.of(t, 3)
    assert pr.lincomb_from_json(pr.lincomb_to_json(v)) == v


@given(st.permutations(ABC))
def test_relation_spaces_are_invariant(perm):
    sigma = dict(zip(ABC, perm))
    for rels in (pr.sp_relations(), pr.dual_relations()):
        rs = pr.relation_space(rels)
        for row in rs.rows():
            assert rs.contains(pr.relabel(row, sigma))


def test_malformed_json():
    with pytest.raises(pr.PresentationError):
        pr.lincomb_from_json([{"coef": "1"}])
