"""Exact integer versions of floor(log2 x) and fractional-part comparisons.

Nothing here touches floating point. Rationals are passed as (numerator,
denominator) pairs of positive ints.
"""

from __future__ import annotations

from math import prod
from typing import Iterable


def floor_log2(n: int) -> int:
    """floor(log2 n) for a positive integer n."""
    if n < 1:
        raise ValueError(f"floor_log2 needs a positive integer, got {n}")
    return n.bit_length() - 1


def floor_log2_ratio(num: int, den: int) -> int:
    """floor(log2(num/den)) for positive integers, num >= den.

    Returns the largest k >= 0 with den * 2**k <= num.
    """
    if num < den or den < 1:
        raise ValueError(f"need num >= den >= 1, got {num}/{den}")
    k = num.bit_length() - den.bit_length()
    if den << k > num:
        k -= 1
    return k


def frac_log2_ge(a: int, b: int) -> bool:
    """Decide {log2 a} >= {log2 b} exactly.

    Both sides are normalised into [1, 2) by their power of two, so the
    comparison is a / 2**fl(a) >= b / 2**fl(b).
    """
    return a << floor_log2(b) >= b << floor_log2(a)


def frac_sum_lt(values: Iterable[int], bound: int) -> bool:
    """Decide sum({log2 m}) < bound exactly, for a nonnegative integer bound.

    sum {log2 m_i} < K  <=>  prod m_i < 2**(K + sum floor(log2 m_i)).
    """
    values = list(values)
    shift = bound + sum(floor_log2(m) for m in values)
    return prod(values) < (1 << shift)


def floors_add_up(*values: int) -> bool:
    """True iff sum(floor(log2 m_i)) == floor(log2(prod m_i)).

    Equivalent to the fractional parts summing to less than one.
    """
    return sum(floor_log2(m) for m in values) == floor_log2(prod(values))
