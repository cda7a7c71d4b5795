from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from operad_forge import series as se
from operad_forge.series import SeriesError, TruncEGF

ORDER = 8
small = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=ORDER, max_size=ORDER)


def test_exp_log_inverse_pair():
    x = se.x(ORDER)
    assert (1 + x).log().exp() == 1 + x
    assert x.exp().log() == x


def test_dims_scale_by_factorial():
    assert se.hilbert_com(6).dims() == [1] * 6
    assert TruncEGF.from_dims([1, 2, 6], 3).coeffs == (0, 1, 1, 1)


def test_commag_matches_double_factorial():
    assert se.hilbert_commag(10).dims() == se.double_factorial_dims(10)


def test_sp_matches_set_partition_oracle():
    assert se.hilbert_sp(10).dims() == se.set_partition_dims(se.double_factorial_dims(10), 10)


def test_sp_dual_matches_cycle_oracle():
    assert se.hilbert_sp_dual(12).dims() == se.cycle_pair_dims(12)


def test_koszul_residual_vanishes():
    assert se.koszul_residual(se.hilbert_sp(12), se.hilbert_sp_dual(12)).is_zero()


def test_residual_detects_a_wrong_pair():
    assert not se.koszul_residual(se.hilbert_com(8), se.hilbert_sp_dual(8)).is_zero()


def test_errors():
    with pytest.raises(SeriesError):
        se.x(4).reciprocal()
    with pytest.raises(SeriesError):
        (1 + se.x(4)).exp()
    with pytest.raises(SeriesError):
        se.x(4).log()
    with pytest.raises(SeriesError):
        se.x(4).compose(1 + se.x(4))


@given(small)
def test_compositional_inverse_round_trip(cs):
    f = TruncEGF([0, 1] + cs[1:], ORDER)
    g = f.compositional_inverse()
    assert f.compose(g) == se.x(ORDER)
    assert g.compose(f) == se.x(ORDER)


@given(small)
def test_reciprocal(cs):
    f = TruncEGF([1] + cs[1:], ORDER)
    assert f * f.reciprocal() == TruncEGF.const(1, ORDER)


@given(small)
def test_exp_turns_sums_into_products(cs):
    f = TruncEGF([0] + cs[1:], ORDER)
    g = TruncEGF([0] + list(reversed(cs))[1:], ORDER)
    assert (f + g).exp() == f.exp() * g.exp()


@given(small)
def test_sqrt_squares_back(cs):
    f = TruncEGF([1] + cs[1:], ORDER)
    r = f.sqrt()
    assert r * r == f


@given(small)
def test_derivative_of_integral(cs):
    f = TruncEGF(cs, ORDER)
    assert f.integral().derivative().coeffs[:-1] == f.coeffs[:-1]


def test_dim_is_factorial_times_coefficient():
    h = se.hilbert_sp_dual(6)
    for n in range(1, 7):
        assert h.dim(n) == factorial(n) * h[n]
    assert h[40] == Fraction(0)
