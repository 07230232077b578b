"""Closed-form bounds and exact values, each tagged with the rule behind it.

All logarithms are exact integer computations (see ``intlog``). Weight sets
are normalised first; plus-minus type sets {u, -u} with u a unit are handled
as {1, -1} through the automorphism g -> u g.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd, prod
from typing import Literal

from sympy import factorint

from davenport.constructions import (
    ConstructionPlan,
    compose,
    independent_full,
    plan_on_parts,
    rank2_length,
)
from davenport.groups import (
    MAX_DECOMPOSITION_RANK,
    AbelianGroup,
    canonicalize,
    check_decomposition_rank,
    cyclic_sum_embedding,
    dilate,
)
from davenport.intlog import floor_log2
from davenport.sumset import Certificate, verify_certificate
from davenport.weights import WeightSet, make_weightset, normalize

# composition search over prime-power multisets is exponential; above this
# total rank exact_value falls back to the star decomposition
COMPOSITION_RANK_LIMIT = 10

# certificates are built and verified only while order * rank stays below this
CERT_MAX_CELLS = 1 << 23

# values that no closed-form rule here reaches, for plus-minus weights
EXCEPTIONAL_PM = {
    (3, 3): (3, "elementary 3-group: rank + 1"),
    (3, 3, 3): (4, "elementary 3-group: rank + 1"),
    (3, 3, 9): (6, "C3+C3+C9 = 6 (case analysis)"),
}


@dataclass(frozen=True)
class Bound:
    value: int
    method: str
    certificate: Certificate | None = None

    def to_json(self) -> dict:
        out = {"value": self.value, "method": self.method}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


@dataclass(frozen=True)
class Status:
    kind: Literal["Exact", "Bracket"]
    lo: int
    hi: int
    method: str = ""

    @property
    def value(self) -> int | None:
        return self.lo if self.kind == "Exact" else None

    def shifted(self, k: int) -> "Status":
        return Status(self.kind, self.lo + k, self.hi + k, self.method)

    def to_json(self) -> dict:
        if self.kind == "Exact":
            return {"status": "Exact", "value": self.lo, "method": self.method}
        return {"status": "Bracket", "lower": self.lo, "upper": self.hi}

    def __str__(self) -> str:
        if self.kind == "Exact":
            return f"Exact({self.lo})"
        return f"Bracket({self.lo}, {self.hi})"


@dataclass
class BoundsReport:
    group: AbelianGroup
    weights: WeightSet
    lower: list[Bound] = field(default_factory=list)
    upper: list[Bound] = field(default_factory=list)
    status: Status | None = None

    @property
    def best_lower(self) -> Bound:
        return max(self.lower, key=lambda b: b.value)

    @property
    def best_upper(self) -> Bound:
        return min(self.upper, key=lambda b: b.value)

    def to_json(self) -> dict:
        out = {"group": list(self.group.moduli), "weights": self.weights.to_json()}
        out.update(self.status.to_json())
        out["lower_bounds"] = [b.to_json() for b in self.lower]
        out["upper_bounds"] = [b.to_json() for b in self.upper]
        return out


# -- plus-minus bounds ------------------------------------------------------


def ags_bounds(G: AbelianGroup) -> tuple[int, int]:
    """(sum floor(log2 n_i) + 1, floor(log2 |G|) + 1) over the invariant factors."""
    return sum(floor_log2(n) for n in G.moduli) + 1, floor_log2(G.order) + 1


def decomposition_value(parts) -> int:
    return sum(floor_log2(m) for m in parts if m > 1) + 1


def _prime_of(q: int) -> int:
    return next(iter(factorint(q)))


def _blocks_with_first(ms: tuple[int, ...]):
    """(block, rest) for every block holding ms[0] and at most one power per prime."""
    first = ms[0]
    p0 = _prime_of(first)
    rest = list(ms[1:])
    by_prime: dict[int, list[int]] = {}
    for q in rest:
        p = _prime_of(q)
        if p != p0:
            vals = by_prime.setdefault(p, [])
            if q not in vals:
                vals.append(q)
    primes = sorted(by_prime)
    for choice in product(*[[None] + by_prime[p] for p in primes]):
        block = [first] + [q for q in choice if q is not None]
        remaining = list(rest)
        for q in block[1:]:
            remaining.remove(q)
        yield tuple(sorted(block)), tuple(remaining)


def _all_blocks(ms: tuple[int, ...]):
    """(block, rest) for every nonempty block of ms with at most one power per prime."""
    by_prime: dict[int, list[int]] = {}
    for q in ms:
        vals = by_prime.setdefault(_prime_of(q), [])
        if q not in vals:
            vals.append(q)
    primes = sorted(by_prime)
    for choice in product(*[[None] + by_prime[p] for p in primes]):
        block = [q for q in choice if q is not None]
        if not block:
            continue
        remaining = list(ms)
        for q in block:
            remaining.remove(q)
        yield tuple(sorted(block)), tuple(remaining)


def _star_better(a, b) -> bool:
    """Order candidates by value, then fewer parts, then smaller sorted parts."""
    if b is None:
        return True
    if a[0] != b[0]:
        return a[0] > b[0]
    if len(a[1]) != len(b[1]):
        return len(a[1]) < len(b[1])
    return a[1] < b[1]


@lru_cache(maxsize=None)
def _star(ms: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    if not ms:
        return 0, ()
    best = None
    for block, rest in _blocks_with_first(ms):
        v, parts = _star(rest)
        cand = (v + floor_log2(prod(block)), tuple(sorted(parts + (prod(block),))))
        if _star_better(cand, best):
            best = cand
    return best


def star_lower(G: AbelianGroup) -> tuple[int, tuple[int, ...]]:
    """max over cyclic decompositions of sum floor(log2 m_i) + 1, with best parts."""
    check_decomposition_rank(G)
    if G.is_trivial:
        return 1, ()
    v, parts = _star(G.prime_powers)
    return v + 1, parts


@lru_cache(maxsize=None)
def _composition(ms: tuple[int, ...]) -> tuple[int, tuple]:
    """Longest certified length: leaves are cyclic chains or rank-two pairs.

    Returns (length, leaves) with leaves ("chain", m) or ("rank2", m1, m2).
    """
    if not ms:
        return 0, ()
    best = None
    for block, rest in _blocks_with_first(ms):
        m = prod(block)
        v, leaves = _composition(rest)
        cand = (v + floor_log2(m), (("chain", m),) + leaves)
        if best is None or cand[0] > best[0]:
            best = cand
        for block2, rest2 in _all_blocks(rest):
            m2 = prod(block2)
            options = []
            if m >= 4 and m2 >= 3:
                options.append((rank2_length(m, m2), ("rank2", m, m2)))
            if m2 >= 4 and m >= 3:
                options.append((rank2_length(m2, m), ("rank2", m2, m)))
            if not options:
                continue
            length, leaf = max(options, key=lambda o: o[0])
            v2, leaves2 = _composition(rest2)
            if v2 + length > best[0]:
                best = (v2 + length, (leaf,) + leaves2)
    return best


def _plan_from_leaves(leaves) -> ConstructionPlan:
    parts: list[int] = []
    blocks = []
    for leaf in leaves:
        if leaf[0] == "chain":
            blocks.append(((len(parts),), "cyclic_chain"))
            parts.append(leaf[1])
        else:
            blocks.append(((len(parts), len(parts) + 1), "rank2_pm"))
            parts.extend(leaf[1:])
    return ConstructionPlan(tuple(parts), tuple(blocks))


def construction_lower(G: AbelianGroup) -> tuple[int, ConstructionPlan]:
    """Best lower bound from chains and rank-two blocks over all decompositions.

    Composes block sequences across direct summands; returns the bound on
    D_pm(G) (length + 1) and the plan realising it.
    """
    if G.is_trivial:
        return 1, ConstructionPlan((), ())
    if G.total_rank <= COMPOSITION_RANK_LIMIT:
        length, leaves = _composition(G.prime_powers)
        return length + 1, _plan_from_leaves(leaves)
    parts = star_lower(G)[1] if G.total_rank <= MAX_DECOMPOSITION_RANK else G.moduli
    plan = plan_on_parts(parts)
    return plan.length() + 1, plan


# -- generic bounds ---------------------------------------------------------


def _kernel_size(G: AbelianGroup, d: int) -> int:
    """|{g : d g = 0}|."""
    return prod(gcd(m, d) for m in G.moduli)


def generic_upper(G: AbelianGroup, A: WeightSet) -> tuple[int, str]:
    """Upper bound on D_A(G) from the order of G only.

    D_{a}(G) = D(aG) <= |aG| for each weight a, and D_{+-a}(G) <= floor(log2|aG|) + 1
    when a and -a are both weights. No table values are used.
    """
    n = G.exponent
    if A.has_zero or G.is_trivial:
        return 1, "zero weight"
    rs = set(A.residues)
    best = (G.order, "D(G) <= |G|")
    for a in sorted(rs):
        size = G.order // _kernel_size(G, gcd(a, n))
        if size < best[0]:
            best = (size, f"D({a}G) <= |{a}G|")
        if -a % n in rs and floor_log2(size) + 1 < best[0]:
            best = (floor_log2(size) + 1, f"floor(log2 |{a}G|) + 1 (weights +-{a})")
    return best


# -- certificate transport ----------------------------------------------------


def certifiable(G: AbelianGroup) -> bool:
    """Whether certificates over G are small enough to build and verify."""
    return G.order * max(G.rank, 1) <= CERT_MAX_CELLS


def _lift(cert: Certificate | None, G: AbelianGroup, A: WeightSet, d: int) -> Certificate | None:
    """Pull a certificate over dG (weights A/d) back to G with weights A.

    If d*S' = S is dissociated for A/d then S' is dissociated for A.
    """
    if cert is None or not certifiable(G):
        return None
    if d == 1 and cert.group == G:
        if cert.weights == A:
            return cert  # built by a checked construction
        elems = list(cert.elements)
    else:
        parts = [n // gcd(n, d) for n in G.moduli]
        _, _, f_inv = cyclic_sum_embedding(parts)
        elems = [tuple(f_inv(z)) for z in cert.elements]
    out = Certificate(G, A, elems, cert.provenance)
    report = verify_certificate(out)
    if not report.valid:
        raise AssertionError(f"lifted certificate for {G} is invalid: {report}")
    return out


def _retarget(cert: Certificate, A: WeightSet) -> Certificate:
    """Rewrite a {1,-1} (or {1}) certificate for weights {u,-u} (or {u})."""
    G = cert.group
    u = A.residues[0]
    if A.is_plus_minus_type():
        u = min(A.residues)
    inv = pow(u, -1, G.exponent)
    return Certificate(G, A, [G.scale(inv, g) for g in cert.elements], cert.provenance)


# -- dispatcher ---------------------------------------------------------------


def _pm_report(H: AbelianGroup) -> tuple[list[Bound], list[Bound], Status]:
    """Bounds for D_pm(H), certificates over H with weights {1, -1}."""
    pm = make_weightset("pm", H)
    chain_lo, log_up = ags_bounds(H)
    if H.total_rank <= MAX_DECOMPOSITION_RANK:
        star_v, star_parts = star_lower(H)
    else:  # too many components to optimise over; the invariant factors still count
        star_v, star_parts = chain_lo, H.moduli
    comp_v, comp_plan = construction_lower(H)
    inv_plan = plan_on_parts(H.moduli)

    def cert(parts, blocks=None):
        if not certifiable(H):
            return None
        plan = parts if blocks is None else ConstructionPlan(parts, blocks)
        return compose(plan, H, pm)

    def chains(parts):
        return tuple(((i,), "cyclic_chain") for i in range(len(parts)))

    lower = [
        Bound(chain_lo, "chain: sum floor(log2 n_i) + 1 over invariant factors", cert(H.moduli, chains(H.moduli))),
        Bound(star_v, f"star: best cyclic decomposition {list(star_parts)}", cert(star_parts, chains(star_parts))),
        Bound(inv_plan.length() + 1, f"pairing on invariant factors: {inv_plan.describe()}", cert(inv_plan)),
        Bound(comp_v, f"composition over direct summands: {comp_plan.describe()}", cert(comp_plan)),
    ]
    upper = [Bound(log_up, "floor(log2 |G|) + 1")]
    best_lo = max(b.value for b in lower)

    if H.exponent == 3:
        v = H.rank + 1
        upper.append(Bound(v, "elementary 3-group: rank + 1 (plus-minus = full weights)"))
        return lower, upper, Status("Exact", v, v, "elementary-3")
    if chain_lo == log_up:
        return lower, upper, Status("Exact", log_up, log_up, "chain lower bound meets floor(log2 |G|) + 1")
    if star_v == log_up:
        return lower, upper, Status("Exact", log_up, log_up,
                                    f"star decomposition {list(star_parts)} meets floor(log2 |G|) + 1")
    if H.moduli in EXCEPTIONAL_PM:
        v, why = EXCEPTIONAL_PM[H.moduli]
        upper.append(Bound(v, why))
        return lower, upper, Status("Exact", v, v, f"known value: {why}")
    if comp_v == log_up:
        tag = "rank-two construction" if "rank2" in comp_plan.describe() else "composition"
        return lower, upper, Status("Exact", log_up, log_up,
                                    f"{tag} {comp_plan.describe()} meets floor(log2 |G|) + 1")
    best = next(b for b in lower if b.value == best_lo)
    return lower, upper, Status("Bracket", best_lo, log_up, f"lower: {best.method}; upper: floor(log2 |G|) + 1")


def exact_value(G: AbelianGroup, A: WeightSet) -> BoundsReport:
    """Best known bounds on D_A(G); Exact when a rule pins the value."""
    report = BoundsReport(G, A)
    norm = normalize(A, G)
    H, B = norm.group, norm.weights
    d = G.exponent // H.exponent if not H.is_trivial else G.exponent
    red = f" (reduced to {H} with weights {B})" if norm.reduced else ""

    if norm.degenerate or H.is_trivial:
        why = "trivial group" if G.is_trivial else "a weight is a multiple of exp(G)" if norm.degenerate else (
            "weights divisible by exp(G) after reduction")
        report.lower.append(Bound(1, why))
        report.upper.append(Bound(1, why))
        report.status = Status("Exact", 1, 1, why)
        return report

    if B.is_plus_minus_type():
        lower, upper, status = _pm_report(H)
        pm_is_b = set(B.residues) == {1, H.exponent - 1}
        for b in lower:
            cert = b.certificate if pm_is_b or b.certificate is None else _retarget(b.certificate, B)
            report.lower.append(Bound(b.value, b.method + red, _lift(cert, G, A, d)))
        report.upper.extend(Bound(b.value, b.method + red) for b in upper)
        report.status = Status(status.kind, status.lo, status.hi, status.method + red)
        return report

    if B.is_full():
        v = H.rank_of(H.exponent) + 1
        cert = None
        if certifiable(H):
            cert = Certificate(H, B, independent_full(H).elements, "independent_full")
        report.lower.append(Bound(v, "independent elements of order exp(G)" + red, _lift(cert, G, A, d)))
        report.upper.append(Bound(v, "full weights: rank_exp(G) + 1" + red))
        report.status = Status("Exact", v, v, "full weights: rank_exp(G) + 1" + red)
        return report

    # any weight set without 0 is contained in the full one
    basis = None
    if certifiable(H):
        basis = Certificate(H, B, independent_full(H).elements, "independent elements of order exp(G)")
    report.lower.append(Bound(H.rank_of(H.exponent) + 1, "full-weight lower bound" + red, _lift(basis, G, A, d)))
    if B.is_single_unit():
        # D(G) >= sum(n_i - 1) + 1 from e_i repeated n_i - 1 times
        cert = None
        if certifiable(H):
            elems = []
            for i, n in enumerate(H.moduli):
                e = [0] * H.rank
                e[i] = 1
                elems += [tuple(e)] * (n - 1)
            unit = make_weightset([1], H)
            cert = _retarget(Certificate(H, unit, elems, "basis with multiplicities n_i - 1"), B)
        dstar = sum(n - 1 for n in H.moduli) + 1
        report.lower.append(Bound(dstar, "D*(G) = sum(n_i - 1) + 1" + red, _lift(cert, G, A, d)))
    up, why = generic_upper(H, B)
    report.upper.append(Bound(up, why + red))
    lo = report.best_lower.value
    if lo == up:
        report.status = Status("Exact", up, up, "lower bound meets " + why + red)
    else:
        report.status = Status("Bracket", lo, up, f"lower: {report.best_lower.method}; upper: {why}{red}")
    return report


def e_constant(G: AbelianGroup, A: WeightSet) -> Status:
    """E_A(G) = D_A(G) + |G| - 1."""
    return exact_value(G, A).status.shifted(G.order - 1)


def bounds_for(moduli, weights="pm") -> BoundsReport:
    G = canonicalize(moduli)
    return exact_value(G, make_weightset(weights, G))


__all__ = [
    "BoundsReport",
    "Bound",
    "Status",
    "ags_bounds",
    "construction_lower",
    "decomposition_value",
    "dilate",
    "e_constant",
    "exact_value",
    "generic_upper",
    "star_lower",
]
