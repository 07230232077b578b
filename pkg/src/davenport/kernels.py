"""Hot loops of the dissociated-sequence search.

Every kernel exists twice: a loop version compiled with numba and a
vectorised numpy version. ``USE_NUMBA`` in ``davenport._accel`` picks one; the
two must agree node for node (tests/test_kernels.py checks this).

Sum sets are uint8 membership arrays indexed by mixed-radix element index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from davenport._accel import njit
from davenport.groups import AbelianGroup

# refresh shared pruning thresholds / budget every this many candidate checks
SYNC_EVERY = 2048


@dataclass(frozen=True)
class Tables:
    """Index arithmetic for one (group, weights) pair."""

    coords: np.ndarray  # (N, r) int64
    moduli: np.ndarray  # (r,) int64
    strides: np.ndarray  # (r,) int64
    neg: np.ndarray  # (N,) int64, index of -g
    wmul: np.ndarray  # (N, k) int64, index of a*g for each weight residue a

    @property
    def order(self) -> int:
        return self.coords.shape[0]


def build_tables(G: AbelianGroup, residues) -> Tables:
    coords = G.coords_array()
    moduli = np.array(G.moduli, dtype=np.int64)
    strides = np.array(G.strides, dtype=np.int64)
    if G.rank == 0:
        zero = np.zeros(1, dtype=np.int64)
        return Tables(coords, moduli, strides, zero, np.zeros((1, len(residues)), dtype=np.int64))
    neg = ((-coords) % moduli) @ strides
    res = np.array(residues, dtype=np.int64)
    wmul = ((coords[:, None, :] * res[None, :, None]) % moduli) @ strides
    return Tables(coords, moduli, strides, neg.astype(np.int64), np.ascontiguousarray(wmul, dtype=np.int64))


# -- numba kernels --------------------------------------------------------


@njit(cache=True, nogil=True)
def _add_index(coords, moduli, strides, i, j):
    s = 0
    for c in range(moduli.shape[0]):
        s += ((coords[i, c] + coords[j, c]) % moduli[c]) * strides[c]
    return s


@njit(cache=True, nogil=True)
def allowed_nb(sig, g, wmul, neg):
    """True if g can extend a dissociated sequence with weighted subsums sig."""
    for t in range(wmul.shape[1]):
        h = wmul[g, t]
        if h == 0 or sig[neg[h]]:
            return False
    return True


@njit(cache=True, nogil=True)
def extend_nb(sig, out, g, coords, moduli, strides, wmul):
    """out = sig | A*g | (sig + A*g)."""
    n = sig.shape[0]
    for i in range(n):
        out[i] = sig[i]
    for t in range(wmul.shape[1]):
        h = wmul[g, t]
        out[h] = 1
        for i in range(n):
            if sig[i]:
                out[_add_index(coords, moduli, strides, i, h)] = 1


@njit(cache=True, nogil=True)
def remaining_bound_nb(sig, start, wmul, neg):
    """Upper bound on further elements for symmetric weights.

    Counts allowed candidates with index >= start, a pair {g, -g} once.
    """
    n = sig.shape[0]
    cnt = 0
    for g in range(start, n):
        if allowed_nb(sig, g, wmul, neg):
            ng = neg[g]
            if ng >= g or ng < start:
                cnt += 1
    return cnt


@njit(cache=True, nogil=True)
def _threshold(found, task, local_best, deterministic):
    need = local_best + 1
    for t in range(found.shape[0]):
        f = found[t]
        if t < task or not deterministic:
            if f + 1 > need:
                need = f + 1
        elif t > task:
            if f > need:
                need = f
    return need


@njit(cache=True, nogil=True)
def dfs_task_nb(root, coords, moduli, strides, neg, wmul, symmetric, max_len,
                found, nodes, task, budget, deterministic, witness):
    """Depth-first search over sequences whose smallest element index is root.

    Sequences are explored as non-decreasing index tuples (strictly
    increasing when the weights are symmetric, since then repeats are never
    dissociated). Returns (best length, status) with status 0 = completed,
    1 = budget exceeded. The best sequence is written into witness.

    found[t] holds the best length of task t so far; in deterministic mode a
    task only looks for lengths it could still win on the lexicographic
    tie-break against the other tasks.
    """
    n = coords.shape[0]
    sig = np.zeros((max_len + 1, n), dtype=np.uint8)
    seq = np.zeros(max_len + 1, dtype=np.int64)
    ptr = np.zeros(max_len + 1, dtype=np.int64)
    count = np.int64(0)
    tick = 0

    if max_len < 1 or not allowed_nb(sig[0], root, wmul, neg):
        return 0, 0
    extend_nb(sig[0], sig[1], root, coords, moduli, strides, wmul)
    seq[0] = root
    best = 1
    witness[0] = root
    if found[task] < 1:
        found[task] = 1
    need = _threshold(found, task, best, deterministic)
    level = 1
    ptr[1] = root + 1 if symmetric else root
    if symmetric:
        if 1 + remaining_bound_nb(sig[1], ptr[1], wmul, neg) < need:
            nodes[task] = 0
            return best, 0
    elif max_len < need:
        nodes[task] = 0
        return best, 0

    while level >= 1:
        tick += 1
        if tick >= SYNC_EVERY:
            tick = 0
            nodes[task] = count
            need = _threshold(found, task, best, deterministic)
            if nodes.sum() > budget:
                return best, 1
        if need > max_len:
            break
        g = ptr[level]
        if level >= max_len or g >= n:
            level -= 1
            continue
        ptr[level] = g + 1
        count += 1
        if not allowed_nb(sig[level], g, wmul, neg):
            continue
        extend_nb(sig[level], sig[level + 1], g, coords, moduli, strides, wmul)
        seq[level] = g
        level += 1
        ptr[level] = g + 1 if symmetric else g
        if level > best:
            best = level
            for i in range(level):
                witness[i] = seq[i]
            if found[task] < best:
                found[task] = best
            need = _threshold(found, task, best, deterministic)
        if symmetric:
            if level + remaining_bound_nb(sig[level], ptr[level], wmul, neg) < need:
                level -= 1
        elif max_len < need:
            level -= 1
    nodes[task] = count
    return best, 0


# -- numpy fallback ---------------------------------------------------------


def allowed_mask_np(sig: np.ndarray, tables: Tables) -> np.ndarray:
    h = tables.wmul
    return np.all((h != 0) & (sig[tables.neg[h]] == 0), axis=1)


def extend_np(sig: np.ndarray, g: int, tables: Tables) -> np.ndarray:
    out = sig.copy()
    members = np.flatnonzero(sig)
    base = tables.coords[members]
    for h in tables.wmul[g]:
        out[h] = 1
        if members.size:
            tgt = ((base + tables.coords[h]) % tables.moduli) @ tables.strides
            out[tgt] = 1
    return out


def remaining_bound_np(allowed: np.ndarray, start: int, tables: Tables) -> int:
    idx = np.arange(start, allowed.shape[0])
    ng = tables.neg[start:]
    keep = allowed[start:] & ((ng >= idx) | (ng < start))
    return int(keep.sum())


def dfs_task_np(root, tables: Tables, symmetric, max_len, found, nodes, task, budget,
                deterministic, witness):
    """Same contract as dfs_task_nb, vectorised per node."""
    n = tables.order
    sig0 = np.zeros(n, dtype=np.uint8)
    if max_len < 1 or not allowed_mask_np(sig0, tables)[root]:
        return 0, 0
    state = {"best": 1, "count": 0, "tick": 0, "aborted": False}
    witness[0] = root
    if found[task] < 1:
        found[task] = 1

    def threshold():
        need = state["best"] + 1
        for t in range(found.shape[0]):
            f = int(found[t])
            if t < task or not deterministic:
                need = max(need, f + 1)
            elif t > task:
                need = max(need, f)
        return need

    need = [threshold()]
    seq = [root]

    def visit(sig, start):
        level = len(seq)
        allowed = allowed_mask_np(sig, tables)
        if symmetric:
            if level + remaining_bound_np(allowed, start, tables) < need[0]:
                return
        elif max_len < need[0]:
            return
        if level >= max_len:
            return
        for g in range(start, n):
            if need[0] > max_len or state["aborted"]:
                return
            state["count"] += 1
            state["tick"] += 1
            if state["tick"] >= SYNC_EVERY:
                state["tick"] = 0
                nodes[task] = state["count"]
                need[0] = threshold()
                if nodes.sum() > budget:
                    state["aborted"] = True
                    return
            if not allowed[g]:
                continue
            seq.append(g)
            if len(seq) > state["best"]:
                state["best"] = len(seq)
                witness[: len(seq)] = seq
                found[task] = max(int(found[task]), state["best"])
                need[0] = threshold()
            visit(extend_np(sig, g, tables), g + 1 if symmetric else g)
            seq.pop()

    visit(extend_np(sig0, root, tables), root + 1 if symmetric else root)
    nodes[task] = state["count"]
    return state["best"], 1 if state["aborted"] else 0
