from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from davenport.intlog import floor_log2, floor_log2_ratio, floors_add_up, frac_log2_ge, frac_sum_lt


def _frac_log2(x: int) -> Fraction:
    """{log2 x} as the exact ratio x / 2**floor(log2 x) in [1, 2); monotone in {log2 x}."""
    return Fraction(x, 1 << (x.bit_length() - 1))


@pytest.mark.parametrize("n, k", [(1, 0), (2, 1), (3, 1), (4, 2), (1023, 9), (1024, 10), (2**100 - 1, 99)])
def test_floor_log2(n, k):
    assert floor_log2(n) == k


def test_floor_log2_rejects_nonpositive():
    with pytest.raises(ValueError):
        floor_log2(0)


@pytest.mark.parametrize("m, k", [(3, 0), (5, 0), (6, 1), (7, 1), (12, 2), (23, 2), (24, 3), (897, 8)])
def test_floor_log2_ratio_by_three(m, k):
    # largest k with 3 * 2**k <= m
    assert floor_log2_ratio(m, 3) == k


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_floor_log2_ratio_definition(a, b):
    num, den = max(a, b), min(a, b)
    k = floor_log2_ratio(num, den)
    assert den * 2**k <= num < den * 2 ** (k + 1)


@given(st.integers(1, 10**9), st.integers(1, 10**9))
def test_frac_log2_ge_matches_rational_comparison(a, b):
    assert frac_log2_ge(a, b) == (_frac_log2(a) >= _frac_log2(b))


def test_frac_log2_known_cases():
    # {log2 7} ~ 0.807 and {log2 3} ~ 0.585; {log2 9} ~ 0.17
    assert frac_log2_ge(7, 3)
    assert not frac_log2_ge(9, 3)
    assert frac_log2_ge(3, 3)
    assert frac_log2_ge(6, 3) and frac_log2_ge(3, 6)


@given(st.lists(st.integers(1, 5000), min_size=1, max_size=6), st.integers(0, 4))
def test_frac_sum_lt_matches_definition(values, bound):
    # sum {log2 m} < K  <=>  prod(m / 2**fl(m)) < 2**K
    lhs = 1
    for m in values:
        lhs *= _frac_log2(m)
    assert frac_sum_lt(values, bound) == (lhs < 2**bound)


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_floors_add_up(a, b):
    assert floors_add_up(a, b) == (floor_log2(a) + floor_log2(b) == floor_log2(a * b))
    assert floors_add_up(a, b) == (_frac_log2(a) * _frac_log2(b) < 2)
