"""Weight sets A, stored as residues modulo exp(G)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable, Literal, Union

from davenport.groups import AbelianGroup, dilate

Label = Literal["plus-minus", "full", "custom"]
WeightSpec = Union[str, Iterable[int]]


class InvalidWeights(ValueError):
    pass


@dataclass(frozen=True)
class WeightSet:
    residues: tuple[int, ...]
    exponent: int
    label: Label = "custom"

    def __post_init__(self):
        if not self.residues:
            raise InvalidWeights("weight set must be nonempty")

    @property
    def has_zero(self) -> bool:
        return 0 in self.residues

    @property
    def is_symmetric(self) -> bool:
        rs = set(self.residues)
        return all(-a % self.exponent in rs for a in rs)

    def is_plus_minus_type(self) -> bool:
        """A = {u, -u} (or {u} when u = -u) for a unit u."""
        n = self.exponent
        rs = self.residues
        if n == 1 or gcd(rs[0], n) != 1:
            return False
        return set(rs) == {rs[0], -rs[0] % n}

    def is_full(self) -> bool:
        return self.exponent > 1 and self.residues == tuple(range(1, self.exponent))

    def is_single_unit(self) -> bool:
        return len(self.residues) == 1 and self.exponent > 1 and gcd(self.residues[0], self.exponent) == 1

    def to_json(self) -> dict:
        if self.label == "plus-minus":
            return {"kind": "pm"}
        if self.label == "full":
            return {"kind": "full"}
        return {"kind": "set", "values": list(self.residues)}

    def __str__(self) -> str:
        if self.label == "plus-minus":
            return "pm"
        if self.label == "full":
            return "full"
        return "set:" + ",".join(map(str, self.residues))


def make_weightset(spec: WeightSpec, G: AbelianGroup) -> WeightSet:
    """Build the weight set for G from "pm", "full", "set:1,-1" or an int list."""
    n = G.exponent
    label: Label = "custom"
    if isinstance(spec, str):
        s = spec.strip().lower()
        if s in ("pm", "plus-minus", "+-", "±1"):
            values, label = [1, -1], "plus-minus"
        elif s == "full":
            values, label = list(range(1, max(n, 2))), "full"
        elif s.startswith("set:"):
            try:
                values = [int(v) for v in s[4:].split(",") if v.strip()]
            except ValueError:
                raise InvalidWeights(f"cannot parse weights {spec!r}") from None
        else:
            raise InvalidWeights(f"unknown weight spec {spec!r}; use pm | full | set:a,b,...")
    else:
        values = [int(v) for v in spec]
    if not values:
        raise InvalidWeights("explicit weight list is empty")
    if G.is_trivial:
        return WeightSet((0,), 1, label)
    return WeightSet(tuple(sorted({v % n for v in values})), n, label)


def parse_weights(text: str, G: AbelianGroup) -> WeightSet:
    return make_weightset(text, G)


def relabel(exponent: int, residues: Iterable[int]) -> WeightSet:
    """Weight set from residues, labelled plus-minus or full when it is one."""
    res = tuple(sorted({r % exponent for r in residues})) if exponent > 1 else (0,)
    label: Label = "custom"
    if exponent > 1 and set(res) == {1, exponent - 1}:
        label = "plus-minus"
    elif exponent > 1 and res == tuple(range(1, exponent)):
        label = "full"
    return WeightSet(res, exponent, label)


@dataclass(frozen=True)
class Normalized:
    weights: WeightSet
    group: AbelianGroup
    reduced: bool
    degenerate: bool  # some weight is a multiple of exp(G): the constant is 1


def _centered(a: int, n: int) -> int:
    a %= n
    return a - n if a > n // 2 else a


def normalize(A: WeightSet, G: AbelianGroup) -> Normalized:
    """Divide out d = gcd(A, exp G): D_A(G) = D_{A/d}(dG)."""
    n = G.exponent
    if G.is_trivial:
        return Normalized(A, G, False, True)
    degenerate = A.has_zero
    d = reduce(gcd, (abs(_centered(a, n)) for a in A.residues), n)
    if d == 1:
        return Normalized(A, G, False, degenerate)
    H = dilate(G, d)
    m = H.exponent
    residues = [_centered(a, n) // d for a in A.residues]
    return Normalized(relabel(m, residues), H, True, degenerate)
