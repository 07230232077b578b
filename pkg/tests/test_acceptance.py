"""Acceptance criteria 1-9, one pass/fail line each.

Run under pytest (the lines are printed even with output capture on) or
directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
import time
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import cached_oracle  # noqa: E402

from davenport.bounds import ags_bounds, exact_value, star_lower  # noqa: E402
from davenport.constructions import cyclic_chain, rank2_pm  # noqa: E402
from davenport.groups import canonicalize, enumerate_groups  # noqa: E402
from davenport.report import run_table  # noqa: E402
from davenport.search import SearchConfig, max_dissociated  # noqa: E402
from davenport.sumset import verify_certificate  # noqa: E402
from davenport.weights import make_weightset, normalize  # noqa: E402

# Values the order-<=100 theorem lists as exceptions.
THEOREM_EXCEPTIONS = {(3, 3): 3, (3, 3, 3): 4, (3, 3, 9): 6}
THEOREM_OPEN = {(5, 15): (6, 7)}
# C3^4 (order 81) is an elementary 3-group, whose value rank + 1 = 5 is proved
# separately; the theorem's exception list leaves it out. Checked by search below.
ELEMENTARY_3_IN_RANGE = {(3, 3, 3, 3): 5}


def pm(G):
    return make_weightset("pm", G)


def criterion_1() -> tuple[bool, str]:
    start = time.perf_counter()
    rows = run_table(100)
    elapsed = time.perf_counter() - start
    problems = []
    for row in rows:
        expected_exact = THEOREM_EXCEPTIONS.get(row.moduli) or ELEMENTARY_3_IN_RANGE.get(row.moduli)
        if row.moduli in THEOREM_OPEN:
            ok = row.status == "Bracket" and (row.lower, row.upper) == THEOREM_OPEN[row.moduli]
        elif expected_exact is not None:
            ok = row.status == "Exact" and row.value == expected_exact
        else:
            ok = row.status == "Exact" and row.value == ags_bounds(canonicalize(row.moduli))[1]
        if not ok:
            problems.append(row.moduli)
    for moduli in THEOREM_EXCEPTIONS:
        row = next(r for r in rows if r.moduli == moduli)
        if not row.search_verified:
            problems.append(("not search-verified", moduli))
    G = canonicalize([3, 3, 3, 3])
    r = max_dissociated(G, pm(G))
    if not (r.exhausted and r.max_len + 1 == 5):
        problems.append(("C3^4 search", r.max_len))
    ok = not problems and elapsed < 60
    detail = (f"{len(rows)} classes in {elapsed:.1f}s; exceptions C3^2=3, C3^3=4, C3^2+C9=6 (search-verified), "
              f"C5+C15=Bracket(6,7); deviation: C3^4=5 (elementary-3 rule, exhaustive search), not "
              f"floor(log2 81)+1=7")
    return ok, detail if ok else f"mismatches {problems}; {detail}"


def criterion_2() -> tuple[bool, str]:
    G = canonicalize([3, 3, 9])
    r = max_dissociated(G, pm(G))
    ok = r.max_len == 5 and r.exhausted
    return ok, f"C3^2+C9: max_len {r.max_len}, exhausted {r.exhausted}, {r.nodes_visited} nodes, {r.elapsed:.1f}s"


def criterion_3() -> tuple[bool, str]:
    G = canonicalize([5, 15])
    results = {t: max_dissociated(G, pm(G), SearchConfig(threads=t)) for t in (1, 4, 8)}
    ref = results[1]
    same = all(r.max_len == ref.max_len and r.witness.elements == ref.witness.elements and r.exhausted
               for r in results.values())
    ok = same and ref.exhausted and ref.max_len in (5, 6)
    nodes = ", ".join(f"{t} threads {r.nodes_visited} nodes" for t, r in results.items())
    return ok, (f"C5+C15: max_len {ref.max_len} => D_pm = {ref.max_len + 1}, exhausted, identical witness "
                f"{[list(g) for g in ref.witness.elements]} ({nodes})")


def criterion_4() -> tuple[bool, str]:
    start = time.perf_counter()
    mismatches, checked = [], 0
    for G in enumerate_groups(16):
        for spec in ("pm", "full", [1]):
            A = make_weightset(spec, G)
            r = max_dissociated(G, A)
            checked += 1
            if not r.exhausted or r.max_len + 1 != cached_oracle(G, A):
                mismatches.append((G.moduli, spec))
    elapsed = time.perf_counter() - start
    return not mismatches, f"{checked} (group, weights) pairs, {len(mismatches)} mismatches, {elapsed:.1f}s"


def criterion_5() -> tuple[bool, str]:
    bad, n = [], 0
    for G in enumerate_groups(36):
        if G.is_trivial:
            continue
        r = max_dissociated(G, make_weightset("full", G))
        n += 1
        if not r.exhausted or r.max_len != G.rank_of(G.exponent):
            bad.append(G.moduli)
    return not bad, f"{n} groups, full weights, max_len = rank_exp(G) everywhere" if not bad else f"failures {bad}"


def criterion_6() -> tuple[bool, str]:
    a = star_lower(canonicalize([3, 759]))
    b = star_lower(canonicalize([897, 897]))
    ok = a == (12, (33, 69)) and b == (20, (39, 69, 299))
    return ok, f"star(C3+C759) = {a[0]} via {list(a[1])}; star(C897^2) = {b[0]} via {list(b[1])}"


def criterion_7() -> tuple[bool, str]:
    fails = []
    n = 0
    for m1 in range(4, 41):
        for m2 in range(3, 41):
            n += 1
            if not verify_certificate(rank2_pm(m1, m2)).valid:
                fails.append((m1, m2))
    for m in range(2, 1025):
        n += 1
        if not verify_certificate(cyclic_chain(m)).valid:
            fails.append(m)
    return not fails, f"{n} certificates, {len(fails)} failures"


def criterion_8() -> tuple[bool, str]:
    bad, n = [], 0
    for G in enumerate_groups(16):
        if G.is_trivial:
            continue
        for spec in ([2, -2], [3], [2], [1, 2]):
            A = make_weightset(spec, G)
            norm = normalize(A, G)
            before = cached_oracle(G, A)
            after = 1 if norm.degenerate or norm.group.is_trivial else cached_oracle(norm.group, norm.weights)
            n += 1
            if before != after:
                bad.append((G.moduli, spec))
    return not bad, f"{n} (group, weights) pairs agree before/after normalize" if not bad else f"failures {bad}"


def criterion_9() -> tuple[bool, str]:
    bad, exact = [], 0
    for G in enumerate_groups(1000):
        if G.is_trivial:
            continue
        chain, up = ags_bounds(G)
        star = star_lower(G)[0]
        if not chain <= star <= up:
            bad.append(("order", G.moduli))
        st = exact_value(G, pm(G)).status
        if st.kind == "Exact":
            exact += 1
            if not star <= st.value <= min(star + G.rank - 1, up):
                bad.append(("exact", G.moduli, st.value))
    n = sum(1 for G in enumerate_groups(1000) if not G.is_trivial)
    return not bad, f"{n} nontrivial groups, {exact} Exact values inside [star, min(star + rank - 1, log2 upper)]" \
        if not bad else f"violations {bad}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@lru_cache(maxsize=None)
def _outcome(i: int) -> tuple[bool, str]:
    return CRITERIA[i - 1]()


def _line(i: int) -> str:
    ok, detail = _outcome(i)
    return f"criterion {i}: {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("i", range(1, 10))
def test_criterion(i, capsys):
    line = _line(i)
    with capsys.disabled():
        print("\n" + line)
    assert _outcome(i)[0], line


if __name__ == "__main__":
    failed = 0
    for i in range(1, 10):
        print(_line(i), flush=True)
        failed += not _outcome(i)[0]
    sys.exit(1 if failed else 0)
