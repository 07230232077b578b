"""Exhaustive search for the longest A-dissociated sequence.

The search walks sequences as non-decreasing tuples of element indices; it
is exhaustive because dissociation does not depend on order. Root branches
(the first element) are independent tasks. In deterministic mode the tasks
share their best lengths in a way that keeps the reported witness the
lexicographically least maximum-length sequence for any thread count.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from davenport import kernels
from davenport._accel import USE_NUMBA
from davenport.bounds import generic_upper
from davenport.groups import AbelianGroup
from davenport.sumset import Certificate, verify_certificate
from davenport.weights import WeightSet

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**9
MAX_SEARCH_ORDER = 1 << 16


class SearchRefused(ValueError):
    pass


@dataclass
class SearchConfig:
    max_depth: int | None = None
    node_budget: int = DEFAULT_BUDGET
    threads: int | None = None
    deterministic: bool = True
    symmetry: bool = False
    max_order: int = MAX_SEARCH_ORDER


@dataclass
class SearchResult:
    max_len: int
    witness: Certificate
    exhausted: bool
    nodes_visited: int
    elapsed: float
    depth_cap: int
    backend: str = field(default="numba" if USE_NUMBA else "numpy")

    @property
    def davenport(self) -> int | None:
        """D_A(G) = max_len + 1, known only for an exhausted search."""
        return self.max_len + 1 if self.exhausted else None

    def to_json(self) -> dict:
        return {
            "group": list(self.witness.group.moduli),
            "weights": self.witness.weights.to_json(),
            "max_len": self.max_len,
            "davenport": self.davenport,
            "witness": self.witness.to_json(),
            "exhausted": self.exhausted,
            "nodes": self.nodes_visited,
            "millis": round(self.elapsed * 1000, 3),
            "depth_cap": self.depth_cap,
            "backend": self.backend,
        }


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("DAVENPORT_THREADS", "1")))
    except ValueError:
        return 1


def generic_length_cap(G: AbelianGroup, A: WeightSet) -> int:
    """Upper bound on the length of a dissociated sequence, from |G| alone.

    Known exceptional values are deliberately not used here, so an exhausted
    search is a proof on its own.
    """
    return generic_upper(G, A)[0] - 1


def symmetry_roots(G: AbelianGroup) -> np.ndarray:
    """Smallest index in each orbit under unit scaling and swaps of equal moduli."""
    n = G.exponent
    N = G.order
    coords = G.coords_array()
    moduli = np.array(G.moduli, dtype=np.int64)
    strides = np.array(G.strides, dtype=np.int64)
    maps = []
    for u in range(2, n):
        if gcd(u, n) == 1:
            maps.append(((coords * u) % moduli) @ strides)
    for i in range(G.rank - 1):
        if G.moduli[i] == G.moduli[i + 1]:
            c = coords.copy()
            c[:, [i, i + 1]] = c[:, [i + 1, i]]
            maps.append(c @ strides)
    rep = np.arange(N)
    changed = True
    while changed:
        changed = False
        for m in maps:
            # union-find style relaxation to the orbit minimum
            cand = np.minimum(rep, rep[m])
            cand[m] = np.minimum(cand[m], rep)
            if np.any(cand != rep):
                rep = cand
                changed = True
        rep = rep[rep]
    return np.flatnonzero(rep == np.arange(N))


def max_dissociated(G: AbelianGroup, A: WeightSet, config: SearchConfig | None = None) -> SearchResult:
    """Longest sequence over G without an A-weighted zero-subsum.

    exhausted is True when the whole space was covered (or the proven length
    cap was reached), in which case D_A(G) = max_len + 1.
    """
    config = config or SearchConfig()
    if G.order > config.max_order:
        raise SearchRefused(f"|G| = {G.order} exceeds the search cap {config.max_order}")
    start = time.perf_counter()
    proven_cap = generic_length_cap(G, A)
    cap = proven_cap if config.max_depth is None else min(config.max_depth, proven_cap)
    threads = config.threads or default_threads()

    tables = kernels.build_tables(G, A.residues)
    N = G.order
    symmetric = A.is_symmetric
    roots = symmetry_roots(G) if config.symmetry else np.arange(N)
    ntask = len(roots)
    found = np.zeros(max(ntask, 1), dtype=np.int64)
    nodes = np.zeros(max(ntask, 1), dtype=np.int64)
    witnesses = np.zeros((max(ntask, 1), cap + 1), dtype=np.int64)
    status = np.zeros(max(ntask, 1), dtype=np.int64)
    best = np.zeros(max(ntask, 1), dtype=np.int64)

    def run(t: int) -> None:
        root = int(roots[t])
        if USE_NUMBA:
            b, s = kernels.dfs_task_nb(
                root, tables.coords, tables.moduli, tables.strides, tables.neg, tables.wmul,
                symmetric, cap, found, nodes, t, config.node_budget, config.deterministic, witnesses[t],
            )
        else:
            b, s = kernels.dfs_task_np(
                root, tables, symmetric, cap, found, nodes, t, config.node_budget,
                config.deterministic, witnesses[t],
            )
        best[t] = b
        status[t] = s

    if cap > 0 and ntask:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(run, range(ntask)))
        else:
            for t in range(ntask):
                run(t)

    max_len = int(best.max()) if ntask else 0
    aborted = bool(status.any())
    if max_len:
        t = int(np.flatnonzero(best == max_len)[0])
        idx = witnesses[t, :max_len]
    else:
        idx = []
    cert = Certificate(G, A, [G.element_at(int(i)) for i in idx], provenance="search")
    if not verify_certificate(cert).valid:
        raise AssertionError(f"search produced an invalid witness for {G}: {cert.elements}")
    exhausted = max_len == proven_cap or (not aborted and max_len < cap)
    elapsed = time.perf_counter() - start
    log.debug("search %s %s: max_len=%d exhausted=%s nodes=%d %.3fs",
              G, A, max_len, exhausted, int(nodes.sum()), elapsed)
    return SearchResult(max_len, cert, exhausted, int(nodes.sum()), elapsed, cap)
