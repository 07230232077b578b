import pytest

from davenport.groups import canonicalize
from davenport.oracle import ORACLE_MAX_ORDER, brute_force_davenport
from davenport.weights import make_weightset


def bf(moduli, spec):
    G = canonicalize(moduli)
    return brute_force_davenport(G, make_weightset(spec, G))


def test_c5_single_weight():
    # D(C_n) = n
    assert bf([5], [1]) == 5


def test_c9_pm():
    assert bf([9], "pm") == 4


def test_c2_squared_pm():
    assert bf([2, 2], "pm") == 3


@pytest.mark.parametrize("moduli, value", [([2, 2], 3), ([2, 4], 5), ([3, 3], 5), ([2, 2, 2], 4)])
def test_classical_davenport(moduli, value):
    # D(C_n1 + C_n2) = n1 + n2 - 1 for rank two; D(C_2^r) = r + 1
    assert bf(moduli, [1]) == value


def test_full_weights_small():
    assert bf([3, 3], "full") == 3
    assert bf([2, 4], "full") == 2


def test_trivial_group():
    assert bf([], "pm") == 1


def test_zero_weight():
    assert bf([4], [0, 1]) == 1


def test_cap():
    with pytest.raises(ValueError):
        bf([17], "pm")
    assert ORACLE_MAX_ORDER == 16
    G = canonicalize([17])
    assert brute_force_davenport(G, make_weightset("pm", G), max_order=17) == 5
