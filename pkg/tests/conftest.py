from functools import lru_cache

import pytest

from davenport.groups import canonicalize
from davenport.oracle import brute_force_davenport
from davenport.weights import WeightSet, make_weightset


@lru_cache(maxsize=None)
def _oracle(moduli: tuple[int, ...], residues: tuple[int, ...], exponent: int) -> int:
    G = canonicalize(moduli)
    return brute_force_davenport(G, WeightSet(residues, exponent))


def cached_oracle(G, A: WeightSet) -> int:
    """brute_force_davenport, memoised across the whole session."""
    return _oracle(G.moduli, A.residues, A.exponent)


@pytest.fixture(scope="session")
def oracle():
    return cached_oracle


def group(*moduli):
    return canonicalize(list(moduli))


def weights(spec, G):
    return make_weightset(spec, G)
