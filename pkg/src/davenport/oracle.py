"""Brute-force D_A(G) for tiny groups, straight from the definition.

Independent of the search: elements are plain tuples, multisets are grown
level by level without any pruning bound, and each new multiset is checked
by listing every subset that contains its last term together with every
weight assignment. A multiset can only be zero-sum free if all its
sub-multisets are, so levels are built from the free multisets of the
previous level.
"""

from __future__ import annotations

from itertools import combinations, product

from davenport.groups import AbelianGroup
from davenport.weights import WeightSet

ORACLE_MAX_ORDER = 16


def _has_zero_subsum_with_last(seq, weights, moduli) -> bool:
    *head, last = seq
    r = len(moduli)
    for k in range(len(head) + 1):
        for idx in combinations(range(len(head)), k):
            terms = [head[i] for i in idx] + [last]
            for ws in product(weights, repeat=len(terms)):
                if all(sum(w * t[c] for w, t in zip(ws, terms)) % moduli[c] == 0 for c in range(r)):
                    return True
    return False


def brute_force_davenport(G: AbelianGroup, A: WeightSet, max_order: int = ORACLE_MAX_ORDER) -> int:
    """Smallest l such that every length-l sequence over G has a weighted zero-subsum."""
    if G.order > max_order:
        raise ValueError(f"brute force is limited to |G| <= {max_order}, got {G.order}")
    moduli = G.moduli
    elems = sorted(G.elements())
    weights = A.residues
    level: list[tuple] = [()]
    length = 0
    while level:
        nxt = []
        for seq in level:
            lo = elems.index(seq[-1]) if seq else 0
            for g in elems[lo:]:
                cand = seq + (g,)
                if not _has_zero_subsum_with_last(cand, weights, moduli):
                    nxt.append(cand)
        if not nxt:
            return length + 1
        level = nxt
        length += 1
    raise AssertionError("unreachable")
