"""Explicit dissociated sequences, each returned as a verified certificate.

Builders first produce raw coordinates in C_{m_1} + ... + C_{m_t} and then
move them into the invariant-factor coordinates of the group through
``cyclic_sum_embedding``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal, Sequence

from davenport.groups import AbelianGroup, GroupElement, canonicalize, cyclic_sum_embedding
from davenport.intlog import floor_log2, floor_log2_ratio, frac_log2_ge
from davenport.sumset import Certificate, verify_certificate
from davenport.weights import WeightSet, make_weightset

Method = Literal["cyclic_chain", "rank2_pm", "independent_full"]
MATCHING_RANK_LIMIT = 10


class ConstructionError(ValueError):
    pass


def _checked(cert: Certificate) -> Certificate:
    report = verify_certificate(cert)
    if not report.valid:
        raise AssertionError(
            f"construction {cert.provenance} over {cert.group} is not dissociated: "
            f"{report.reason} {report.indices} {report.weights}"
        )
    return cert


# -- raw coordinates ------------------------------------------------------


def chain_raw(m: int) -> list[tuple[int]]:
    """e, 2e, 4e, ..., 2^(floor(log2 m) - 1) e in C_m."""
    if m < 2:
        raise ConstructionError(f"cyclic_chain needs m >= 2, got {m}")
    return [(1 << i,) for i in range(floor_log2(m))]


def chain_length(m: int) -> int:
    return floor_log2(m)


def rank2_params(m1: int, m2: int) -> tuple[int, int, int]:
    """(k, l, d) for the rank-two construction in C_{m1} + C_{m2}."""
    if m1 < 4 or m2 < 3:
        raise ConstructionError(f"rank2_pm needs m1 >= 4 and m2 >= 3, got ({m1}, {m2})")
    k = floor_log2_ratio(m1, 3)
    l = floor_log2_ratio(m2, 3)
    nearest = (m1 + 3) // 6  # closest integer to m1/6, halves rounded up
    d = (nearest - (1 << k)) % m1
    return k, l, d


def rank2_length(m1: int, m2: int) -> int:
    k, l, _ = rank2_params(m1, m2)
    return k + l + 3


def rank2_raw(m1: int, m2: int) -> list[tuple[int, int]]:
    k, l, d = rank2_params(m1, m2)
    out = [((1 << i) % m1, 0) for i in range(k)]
    out += [(0, (3 << j) % m2) for j in range(l)]
    out += [((d + s) % m1, 1 % m2) for s in (0, 1 << k, 1 << (k + 1))]
    return out


# -- certificates ---------------------------------------------------------


def cyclic_chain(m: int) -> Certificate:
    G = canonicalize([m])
    elems = [G.reduce(x) for x in chain_raw(m)]
    return _checked(Certificate(G, make_weightset("pm", G), elems, f"cyclic_chain(m={m})"))


def rank2_pm(m1: int, m2: int) -> Certificate:
    """Sequence of length floor(log2(m1/3)) + floor(log2(m2/3)) + 3 over C_{m1} + C_{m2}."""
    G, f, _ = cyclic_sum_embedding([m1, m2])
    elems = [f(x) for x in rank2_raw(m1, m2)]
    return _checked(Certificate(G, make_weightset("pm", G), elems, f"rank2_pm(m1={m1},m2={m2})"))


def independent_full(G: AbelianGroup) -> Certificate:
    """The basis vectors of order exp(G); dissociated for full weights."""
    if G.is_trivial:
        raise ConstructionError("independent_full needs a nontrivial group")
    n = G.exponent
    elems = []
    for i, m in enumerate(G.moduli):
        if m == n:
            e = [0] * G.rank
            e[i] = 1
            elems.append(tuple(e))
    return _checked(Certificate(G, make_weightset("full", G), elems, "independent_full"))


@dataclass(frozen=True)
class ConstructionPlan:
    """Blocks over the cyclic parts of a decomposition of a group.

    parts are the m_i; each block names part positions and a method.
    cyclic_chain blocks hold one part, rank2_pm blocks two (in m1, m2
    order), independent_full blocks cover the whole group.
    """

    parts: tuple[int, ...]
    blocks: tuple[tuple[tuple[int, ...], Method], ...]

    def __post_init__(self):
        used = sorted(i for idx, _ in self.blocks for i in idx)
        if used != list(range(len(self.parts))):
            raise ConstructionError(f"plan blocks do not partition the parts {self.parts}")
        for idx, method in self.blocks:
            if method == "rank2_pm" and len(idx) != 2:
                raise ConstructionError("rank2_pm blocks need exactly two parts")
            if method == "cyclic_chain" and len(idx) != 1:
                raise ConstructionError("cyclic_chain blocks need exactly one part")

    def length(self) -> int:
        total = 0
        for idx, method in self.blocks:
            ms = [self.parts[i] for i in idx]
            if method == "cyclic_chain":
                total += chain_length(ms[0])
            elif method == "rank2_pm":
                total += rank2_length(*ms)
            else:
                total += canonicalize(ms).rank_of(canonicalize(ms).exponent)
        return total

    def describe(self) -> str:
        out = []
        for idx, method in self.blocks:
            ms = ",".join(str(self.parts[i]) for i in idx)
            out.append(f"{method}({ms})")
        return " + ".join(out)


def compose(plan: ConstructionPlan, G: AbelianGroup, A: WeightSet) -> Certificate:
    """Put each block's sequence on its own coordinates and concatenate."""
    H, f, _ = cyclic_sum_embedding(plan.parts)
    if H != G:
        raise ConstructionError(f"plan parts {plan.parts} give {H}, not {G}")
    t = len(plan.parts)
    elems: list[GroupElement] = []
    for idx, method in plan.blocks:
        if method == "independent_full":
            if len(plan.blocks) != 1:
                raise ConstructionError("independent_full must be the only block")
            return independent_full(G)
        raw: list[tuple[int, ...]]
        if method == "cyclic_chain":
            raw = chain_raw(plan.parts[idx[0]])
        elif method == "rank2_pm":
            raw = rank2_raw(plan.parts[idx[0]], plan.parts[idx[1]])
        else:
            raise ConstructionError(f"unknown method {method!r}")
        for x in raw:
            full = [0] * t
            for pos, v in zip(idx, x):
                full[pos] = v
            elems.append(f(full))
    return _checked(Certificate(G, A, elems, f"compose[{plan.describe()}]"))


def _pairings(n: int) -> Iterator[list[tuple[int, ...]]]:
    """All partitions of range(n) into singletons and pairs."""
    if n == 0:
        yield []
        return

    def rec(rest: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
        if not rest:
            yield []
            return
        a, tail = rest[0], rest[1:]
        for sub in rec(tail):
            yield [(a,)] + sub
        for j, b in enumerate(tail):
            for sub in rec(tail[:j] + tail[j + 1:]):
                yield [(a, b)] + sub

    yield from rec(tuple(range(n)))


def _pair_block(parts: Sequence[int], i: int, j: int) -> tuple[int, tuple[int, int]] | None:
    """Best orientation of rank2_pm on parts i, j, or None if not applicable."""
    best = None
    for a, b in ((i, j), (j, i)):
        if parts[a] >= 4 and parts[b] >= 3:
            v = rank2_length(parts[a], parts[b])
            if best is None or v > best[0]:
                best = (v, (a, b))
    return best


def plan_on_parts(parts: Sequence[int]) -> ConstructionPlan:
    """Best plus-minus plan of chains and rank-two pairs over fixed parts."""
    parts = tuple(parts)
    if len(parts) <= MATCHING_RANK_LIMIT:
        best_len, best_blocks = -1, None
        for pairing in _pairings(len(parts)):
            blocks = []
            total = 0
            ok = True
            for blk in pairing:
                if len(blk) == 1:
                    blocks.append((blk, "cyclic_chain"))
                    total += chain_length(parts[blk[0]])
                else:
                    pb = _pair_block(parts, *blk)
                    if pb is None:
                        ok = False
                        break
                    blocks.append((pb[1], "rank2_pm"))
                    total += pb[0]
            if ok and total > best_len:
                best_len, best_blocks = total, blocks
        return ConstructionPlan(parts, tuple(best_blocks))
    # greedy pairing: pair parts whose fractional log2 part is >= that of 3
    good = [i for i, m in enumerate(parts) if m >= 3 and frac_log2_ge(m, 3)]
    good.sort(key=lambda i: parts[i], reverse=True)
    blocks = []
    used = set()
    while len(good) >= 2:
        a, b = good[0], good[-1]
        pb = _pair_block(parts, a, b)
        if pb is None or pb[0] <= chain_length(parts[a]) + chain_length(parts[b]):
            break
        blocks.append((pb[1], "rank2_pm"))
        used.update((a, b))
        good = good[1:-1]
    for i in range(len(parts)):
        if i not in used:
            blocks.append(((i,), "cyclic_chain"))
    return ConstructionPlan(parts, tuple(blocks))


def plan_best(G: AbelianGroup, A: WeightSet) -> tuple[ConstructionPlan, Certificate]:
    """Best construction over the invariant-factor coordinates of G."""
    if A.is_full() and not A.is_plus_minus_type():
        plan = ConstructionPlan(G.moduli, ((tuple(range(G.rank)), "independent_full"),))
        return plan, independent_full(G)
    if not A.is_plus_minus_type() and not G.is_trivial:
        raise ConstructionError("plan_best handles plus-minus or full weights only")
    if G.is_trivial:
        return ConstructionPlan((), ()), Certificate(G, A, [], "empty")
    plan = plan_on_parts(G.moduli)
    return plan, compose(plan, G, make_weightset("pm", G))


def unit_scaled(cert: Certificate, A: WeightSet) -> Certificate:
    """Re-target a plus-minus certificate to weights {u, -u}, u a unit.

    If S is dissociated for {1, -1} then u^{-1} S is dissociated for {u, -u}.
    """
    G = cert.group
    n = G.exponent
    u = A.residues[0]
    inv = pow(u, -1, n)
    elems = [G.scale(inv, g) for g in cert.elements]
    return _checked(Certificate(G, A, elems, cert.provenance + f" scaled by {inv}"))


__all__ = [
    "ConstructionPlan",
    "compose",
    "cyclic_chain",
    "independent_full",
    "plan_best",
    "plan_on_parts",
    "rank2_pm",
]
