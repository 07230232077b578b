"""Finite abelian groups given by cyclic moduli.

A group is stored by its invariant factors n_1 | n_2 | ... | n_r. Elements
are tuples of coordinates, coords[i] in [0, n_i), ranked in mixed radix
with the first coordinate most significant.

>>> G = canonicalize([6, 10])
>>> G.moduli
(2, 30)
>>> G.index((1, 2))
32
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd, prod
from typing import Callable, Iterator, Sequence

import numpy as np
from sympy import factorint
from sympy.utilities.iterables import partitions

GroupElement = tuple[int, ...]

MAX_DECOMPOSITION_RANK = 24


class InvalidGroup(ValueError):
    pass


@dataclass(frozen=True)
class Component:
    """One cyclic prime-power summand C_q of a group, q = p**e."""

    q: int
    p: int
    coord: int  # invariant-factor coordinate whose p-part is q


@dataclass(frozen=True)
class AbelianGroup:
    moduli: tuple[int, ...]

    def __post_init__(self):
        m = self.moduli
        if any(n < 2 for n in m) or any(b % a for a, b in zip(m, m[1:])):
            raise InvalidGroup(f"not an invariant-factor chain: {list(m)}; use canonicalize()")

    # -- statistics -----------------------------------------------------

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def exponent(self) -> int:
        return self.moduli[-1] if self.moduli else 1

    @property
    def rank(self) -> int:
        return len(self.moduli)

    def rank_of(self, n: int) -> int:
        """Number of invariant factors divisible by n."""
        return sum(1 for m in self.moduli if m % n == 0)

    @cached_property
    def components(self) -> tuple[Component, ...]:
        """Prime-power cyclic summands, sorted by (p, q, coord)."""
        out = []
        for i, n in enumerate(self.moduli):
            for p, e in factorint(n).items():
                out.append(Component(p**e, p, i))
        return tuple(sorted(out, key=lambda c: (c.p, c.q, c.coord)))

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(sorted(c.q for c in self.components))

    @property
    def total_rank(self) -> int:
        return len(self.components)

    @property
    def is_trivial(self) -> bool:
        return not self.moduli

    def __str__(self) -> str:
        if not self.moduli:
            return "C1"
        parts = []
        for n, k in Counter(self.moduli).items():
            parts.append(f"C{n}^{k}" if k > 1 else f"C{n}")
        return "+".join(parts)

    # -- elements -------------------------------------------------------

    def contains(self, a: Sequence[int]) -> bool:
        return len(a) == self.rank and all(0 <= x < n for x, n in zip(a, self.moduli))

    def reduce(self, a: Sequence[int]) -> GroupElement:
        if len(a) != self.rank:
            raise InvalidGroup(f"element {list(a)} has wrong length for {self}")
        return tuple(x % n for x, n in zip(a, self.moduli))

    @property
    def zero(self) -> GroupElement:
        return (0,) * self.rank

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.moduli))

    def neg(self, a: GroupElement) -> GroupElement:
        return tuple(-x % n for x, n in zip(a, self.moduli))

    def scale(self, k: int, a: GroupElement) -> GroupElement:
        return tuple(k * x % n for x, n in zip(a, self.moduli))

    @cached_property
    def strides(self) -> tuple[int, ...]:
        s = []
        acc = 1
        for n in reversed(self.moduli):
            s.append(acc)
            acc *= n
        return tuple(reversed(s))

    def index(self, a: GroupElement) -> int:
        return sum(x * s for x, s in zip(a, self.strides))

    def element_at(self, i: int) -> GroupElement:
        if not 0 <= i < self.order:
            raise IndexError(f"index {i} out of range for {self} of order {self.order}")
        out = []
        for s, n in zip(self.strides, self.moduli):
            out.append(i // s % n)
        return tuple(out)

    def elements(self) -> Iterator[GroupElement]:
        return product(*(range(n) for n in self.moduli))

    def element_order(self, a: GroupElement) -> int:
        o = 1
        for x, n in zip(a, self.moduli):
            c = n // gcd(x, n)
            o = o * c // gcd(o, c)
        return o

    def coords_array(self) -> np.ndarray:
        """All elements as an (order, rank) int64 array, in index order."""
        if not self.moduli:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.moduli).reshape(self.rank, -1)
        return np.ascontiguousarray(grids.T.astype(np.int64))


def canonicalize(moduli: Sequence[int]) -> AbelianGroup:
    """Invariant-factor form of C_{m_1} + ... + C_{m_k}."""
    exps: dict[int, list[int]] = {}
    for m in moduli:
        m = int(m)
        if m < 1:
            raise InvalidGroup(f"moduli must be positive, got {m}")
        for p, e in factorint(m).items():
            exps.setdefault(p, []).append(e)
    r = max((len(v) for v in exps.values()), default=0)
    factors = [1] * r
    for p, es in exps.items():
        es.sort(reverse=True)
        for k, e in enumerate(es):
            factors[r - 1 - k] *= p**e
    return AbelianGroup(tuple(factors))


_CYCLIC_TERM = re.compile(r"^C(\d+)(?:\^(\d+))?$", re.IGNORECASE)


def parse_group(text: str) -> AbelianGroup:
    """Parse "C3*C3*C9", "C3^2*C9", "C3+C9" or "[3,3,9]"."""
    s = text.strip().replace(" ", "")
    if not s:
        raise InvalidGroup("empty group description")
    if s.startswith("["):
        if not s.endswith("]"):
            raise InvalidGroup(f"cannot parse group {text!r}")
        body = s[1:-1]
        try:
            mods = [int(x) for x in body.split(",")] if body else []
        except ValueError:
            raise InvalidGroup(f"cannot parse group {text!r}") from None
        return canonicalize(mods)
    mods = []
    for term in re.split(r"[*+x]", s):
        m = _CYCLIC_TERM.match(term)
        if not m:
            raise InvalidGroup(f"cannot parse group term {term!r} in {text!r}")
        mods.extend([int(m.group(1))] * int(m.group(2) or 1))
    return canonicalize(mods)


def dilate(G: AbelianGroup, d: int) -> AbelianGroup:
    """Isomorphism type of d*G."""
    if d < 1:
        raise InvalidGroup(f"dilation factor must be >= 1, got {d}")
    return canonicalize([n // gcd(n, d) for n in G.moduli])


def groups_of_order(n: int) -> list[AbelianGroup]:
    """One representative per isomorphism class, sorted by moduli."""
    per_prime = []
    for p, e in sorted(factorint(n).items()):
        choices = []
        for part in partitions(e):
            choices.append([p**k for k, mult in part.items() for _ in range(mult)])
        per_prime.append(choices)
    out = {canonicalize([q for block in combo for q in block]) for combo in product(*per_prime)}
    return sorted(out, key=lambda G: G.moduli)


def enumerate_groups(max_order: int) -> list[AbelianGroup]:
    """All isomorphism classes of order <= max_order, by order then moduli."""
    if max_order < 1:
        raise InvalidGroup(f"max_order must be >= 1, got {max_order}")
    out = []
    for n in range(1, max_order + 1):
        out.extend(groups_of_order(n))
    return out


@dataclass(frozen=True)
class Decomposition:
    """G as a direct sum of cyclic groups C_{m_1} + ... + C_{m_t}.

    Each block lists indices into group.components; a block holds at most one
    power of each prime, and its part is the product of those powers.
    """

    group: AbelianGroup
    blocks: tuple[tuple[int, ...], ...]

    @property
    def parts(self) -> tuple[int, ...]:
        comps = self.group.components
        return tuple(prod(comps[j].q for j in b) for b in self.blocks)


def check_decomposition_rank(G: AbelianGroup) -> None:
    if G.total_rank > MAX_DECOMPOSITION_RANK:
        raise InvalidGroup(
            f"total rank {G.total_rank} of {G} exceeds the decomposition cap {MAX_DECOMPOSITION_RANK}"
        )


def decompositions(G: AbelianGroup) -> Iterator[Decomposition]:
    """Stream every cyclic decomposition of G, one per multiset of parts.

    Blocks are sorted by descending part; duplicates that only permute equal
    prime powers are skipped.
    """
    check_decomposition_rank(G)
    comps = G.components
    seen: set[tuple[int, ...]] = set()

    def rec(j: int, blocks: list[list[int]]) -> Iterator[list[list[int]]]:
        if j == len(comps):
            yield blocks
            return
        p = comps[j].p
        for b in blocks:
            if all(comps[i].p != p for i in b):
                b.append(j)
                yield from rec(j + 1, blocks)
                b.pop()
        blocks.append([j])
        yield from rec(j + 1, blocks)
        blocks.pop()

    for blocks in rec(0, []):
        keyed = sorted(((prod(comps[i].q for i in b), tuple(b)) for b in blocks), reverse=True)
        parts = tuple(k for k, _ in keyed)
        if parts in seen:
            continue
        seen.add(parts)
        yield Decomposition(G, tuple(b for _, b in keyed))


def block_embedding(G: AbelianGroup, block: Sequence[int]) -> tuple[int, list[tuple[int, int, int]]]:
    """Embed C_m (m = product of the block's prime powers) into G.

    Returns (m, terms) with terms = [(q, coord, scale), ...]: the integer x
    in C_m maps to the element with coordinate coord += (x mod q) * scale.
    """
    comps = G.components
    m = prod(comps[j].q for j in block)
    terms = []
    for j in block:
        c = comps[j]
        terms.append((c.q, c.coord, G.moduli[c.coord] // c.q))
    return m, terms


def embed_block_element(G: AbelianGroup, terms: list[tuple[int, int, int]], x: int, into: list[int]) -> None:
    for q, coord, scale in terms:
        into[coord] = (into[coord] + (x % q) * scale) % G.moduli[coord]


def cyclic_sum_embedding(
    parts: Sequence[int],
) -> tuple[AbelianGroup, Callable[[Sequence[int]], GroupElement], Callable[[GroupElement], tuple[int, ...]]]:
    """Isomorphism from C_{m_1} + ... + C_{m_t} onto its invariant-factor form.

    Returns (G, f, f_inv): f maps raw coordinates (x_1, ..., x_t) to an
    element of G and f_inv maps back. Each prime power of each m_i is matched
    to a distinct prime-power component of G; x_i mod q lands on that
    component.
    """
    G = canonicalize(parts)
    free: dict[int, list[Component]] = {}
    for c in G.components:
        free.setdefault(c.q, []).append(c)
    plan = []
    for m in parts:
        terms = []
        for p, e in factorint(m).items():
            c = free[p**e].pop()
            terms.append((c.q, c.coord, G.moduli[c.coord] // c.q))
        plan.append(terms)

    def f(x: Sequence[int]) -> GroupElement:
        out = [0] * G.rank
        for xi, terms in zip(x, plan):
            embed_block_element(G, terms, xi, out)
        return tuple(out)

    def f_inv(z: GroupElement) -> tuple[int, ...]:
        raw = []
        for m, terms in zip(parts, plan):
            x, mod = 0, 1
            for q, coord, scale in terms:
                r = z[coord] * pow(scale, -1, q) % q
                # CRT step: x = x (mod mod), x = r (mod q)
                x += mod * ((r - x) * pow(mod, -1, q) % q)
                mod *= q
            raw.append(x % max(m, 1))
        return tuple(raw)

    return G, f, f_inv
