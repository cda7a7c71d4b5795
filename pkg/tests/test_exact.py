from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from operad_forge.exact import LinComb, RowSpace, lincomb_sum, nullspace, span

BASIS = ["e0", "e1", "e2", "e3", "e4"]
coefs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
vectors = st.dictionaries(st.sampled_from(BASIS), coefs, max_size=5).map(LinComb)


def test_zero_terms_dropped():
    v = LinComb({"a": 1, "b": 0}) + LinComb({"a": -1})
    assert v == 0
    assert not v
    assert len(LinComb({"a": Fraction(1, 2), "b": 2})) == 2


def test_scale_and_sum():
    v = LinComb({"a": 1, "b": 2})
    assert v.scale(Fraction(1, 2)) == LinComb({"a": Fraction(1, 2), "b": 1})
    assert lincomb_sum([v, v, -v]) == v
    assert 3 * v == v + v + v


def test_map_basis_merges_terms():
    v = LinComb({"a": 1, "A": 2})
    assert v.map_basis(str.lower) == LinComb({"a": 3})


def test_rowspace_basic():
    rs = span([LinComb({"a": 1, "b": 1}), LinComb({"a": 1, "b": -1}), LinComb({"a": 2})])
    assert rs.rank == 2
    assert rs.contains(LinComb({"b": 7}))
    assert not rs.contains(LinComb({"c": 1}))
    assert rs.reduce(LinComb({"a": 3, "c": 1})) == LinComb({"c": 1})


def test_insert_reports_growth():
    rs = RowSpace()
    assert rs.insert(LinComb({"a": 1}))
    assert not rs.insert(LinComb({"a": -4}))
    assert rs.rank == 1


def test_nullspace_of_single_constraint():
    ns = nullspace([LinComb({"a": 1, "b": 1, "c": 1})], ["a", "b", "c"])
    assert len(ns) == 2
    for v in ns:
        assert sum(v.coefficient(x) for x in "abc") == 0


@given(st.lists(vectors, max_size=6))
def test_rank_independent_of_order(vs):
    assert span(vs).rank == span(list(reversed(vs))).rank


@given(st.lists(vectors, max_size=5), st.lists(coefs, min_size=5, max_size=5))
def test_combinations_are_members(vs, cs):
    rs = span(vs)
    combo = lincomb_sum(v.scale(c) for v, c in zip(vs, cs))
    assert rs.contains(combo)
    assert rs.reduce(combo) == 0


@given(st.lists(vectors, max_size=5), vectors)
def test_reduce_is_idempotent_and_consistent(vs, v):
    # the remainder is only defined up to a nonzero scalar
    rs = span(vs)
    r = rs.reduce(v)
    assert rs.reduce(r) == r
    assert (r == 0) == rs.contains(v)
    bigger = span(vs + [v])
    assert bigger.contains(r)
    assert span(vs + [r]).rank == bigger.rank


@given(st.lists(vectors, max_size=5))
def test_nullspace_dimension_and_orthogonality(vs):
    ns = nullspace(vs, BASIS)
    assert len(ns) == len(BASIS) - span(vs).rank
    for row in vs:
        for v in ns:
            assert sum(row.coefficient(x) * v.coefficient(x) for x in BASIS) == 0


@given(st.lists(vectors, max_size=5))
def test_rows_span_same_space(vs):
    rs = span(vs)
    again = span(rs.rows())
    assert again.rank == rs.rank
    assert all(again.contains(v) for v in vs)


def test_copy_is_independent():
    rs = span([LinComb({"a": 1})])
    cp = rs.copy()
    cp.insert(LinComb({"b": 1}))
    assert rs.rank == 1 and cp.rank == 2


@pytest.mark.parametrize("bad", [LinComb({"x": 1})])
def test_membership_outside_columns(bad):
    assert not span([LinComb({"a": 1})]).contains(bad)
