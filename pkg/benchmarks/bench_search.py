"""Compare the numba kernels with the numpy fallback on the same searches.

The backend is fixed at import time by DAVENPORT_DISABLE_NUMBA, so each
backend runs in its own subprocess. Both must report identical node counts.

    python3 benchmarks/bench_search.py [--groups "C3*C3*C9" "C5*C15" ...] [--reps 3]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

# groups whose value is below floor(log2 |G|) + 1 force a full exhaustive search
DEFAULT_GROUPS = ["C3*C3", "C7*C7", "C3*C3*C3", "C3*C6*C6", "C3*C3*C3*C3"]

WORKER = r"""
import json, sys, time
from davenport import SearchConfig, make_weightset, max_dissociated, parse_group
from davenport._accel import USE_NUMBA
groups, reps = json.loads(sys.argv[1]), int(sys.argv[2])
G0 = parse_group("C3")
max_dissociated(G0, make_weightset("pm", G0))  # compile / warm up
out = []
for text in groups:
    G = parse_group(text)
    A = make_weightset("pm", G)
    best = None
    for _ in range(reps):
        r = max_dissociated(G, A, SearchConfig(threads=1))
        best = r.elapsed if best is None else min(best, r.elapsed)
    out.append({"group": text, "max_len": r.max_len, "nodes": r.nodes_visited, "seconds": best})
print(json.dumps({"backend": "numba" if USE_NUMBA else "numpy", "results": out}))
"""


def run_backend(groups: list[str], reps: int, disable_numba: bool) -> dict:
    env = dict(os.environ, DAVENPORT_DISABLE_NUMBA="1" if disable_numba else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER, json.dumps(groups), str(reps)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--groups", nargs="+", default=DEFAULT_GROUPS)
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()

    nb = run_backend(args.groups, args.reps, disable_numba=False)
    npy = run_backend(args.groups, 1, disable_numba=True)
    print(f"{'group':<12}{'max_len':>8}{'nodes':>12}{nb['backend'] + ' s':>12}{'numpy s':>12}{'speedup':>10}")
    ok = True
    for a, b in zip(nb["results"], npy["results"]):
        same = a["nodes"] == b["nodes"] and a["max_len"] == b["max_len"]
        ok &= same
        speed = b["seconds"] / a["seconds"] if a["seconds"] > 0 else float("inf")
        flag = "" if same else "  NODE MISMATCH"
        print(f"{a['group']:<12}{a['max_len']:>8}{a['nodes']:>12}{a['seconds']:>12.4f}{b['seconds']:>12.4f}"
              f"{speed:>9.0f}x{flag}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
