"""Command-line interface: info | bounds | exact | search | table | verify.

Exit codes: 0 success, 1 certificate verification failed, 2 invalid input,
3 search budget exhausted before the search space was.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from davenport.bounds import e_constant, exact_value, star_lower
from davenport.groups import InvalidGroup, parse_group
from davenport.report import TSV_HEADER, run_table
from davenport.search import DEFAULT_BUDGET, SearchConfig, SearchRefused, max_dissociated
from davenport.sumset import Certificate, CertificateError, verify_certificate
from davenport.weights import InvalidWeights, parse_weights

EXIT_OK, EXIT_INVALID_CERT, EXIT_BAD_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _emit(obj: dict | list, args, text: str | None = None) -> None:
    if args.pretty and text is not None:
        print(text)
    else:
        print(json.dumps(obj, indent=2 if args.pretty else None))


def _search_config(args) -> SearchConfig:
    return SearchConfig(
        max_depth=getattr(args, "max_depth", None),
        node_budget=args.budget,
        threads=args.threads,
        deterministic=not args.nondeterministic,
        symmetry=getattr(args, "symmetry", False),
    )


def cmd_info(args) -> int:
    G = parse_group(args.group)
    out = {
        "group": list(G.moduli),
        "name": str(G),
        "order": G.order,
        "exponent": G.exponent,
        "rank": G.rank,
        "total_rank": G.total_rank,
        "prime_powers": list(G.prime_powers),
    }
    text = "\n".join(f"{k}: {v}" for k, v in out.items())
    _emit(out, args, text)
    return EXIT_OK


def cmd_bounds(args) -> int:
    G = parse_group(args.group)
    A = parse_weights(args.weights, G)
    report = exact_value(G, A)
    out = report.to_json()
    out["E"] = e_constant(G, A).to_json()
    if A.is_plus_minus_type() and G.total_rank <= 24:
        out["star"] = {"value": star_lower(G)[0], "parts": list(star_lower(G)[1])}
    lines = [f"{G} with weights {A}: {report.status}"]
    lines += [f"  lower {b.value}: {b.method}" for b in report.lower]
    lines += [f"  upper {b.value}: {b.method}" for b in report.upper]
    _emit(out, args, "\n".join(lines))
    return EXIT_OK


def cmd_exact(args) -> int:
    G = parse_group(args.group)
    A = parse_weights(args.weights, G)
    status = exact_value(G, A).status
    out = {"group": list(G.moduli), "weights": A.to_json(), **status.to_json()}
    code = EXIT_OK
    if status.kind == "Bracket" and args.resolve:
        result = max_dissociated(G, A, _search_config(args))
        out["search"] = {"max_len": result.max_len, "exhausted": result.exhausted,
                         "nodes": result.nodes_visited, "budget": args.budget}
        if result.exhausted:
            v = result.max_len + 1
            out.update({"status": "Exact", "value": v, "method": "exhaustive search"})
            out.pop("lower", None)
            out.pop("upper", None)
        else:
            out["lower"] = max(out["lower"], result.max_len + 1)
            code = EXIT_BUDGET
    text = f"{G} with weights {A}: " + (
        f"Exact({out['value']}) [{out['method']}]" if out["status"] == "Exact"
        else f"Bracket({out['lower']}, {out['upper']})")
    _emit(out, args, text)
    return code


def cmd_search(args) -> int:
    G = parse_group(args.group)
    A = parse_weights(args.weights, G)
    result = max_dissociated(G, A, _search_config(args))
    if args.out:
        result.witness.dump(args.out)
    text = (f"{G} with weights {A}: max_len {result.max_len}, exhausted {result.exhausted}, "
            f"D = {result.davenport}, nodes {result.nodes_visited}, {result.elapsed:.3f}s\n"
            f"witness {[list(g) for g in result.witness.elements]}")
    _emit(result.to_json(), args, text)
    return EXIT_OK if result.exhausted else EXIT_BUDGET


def cmd_table(args) -> int:
    rows = run_table(args.max_order, args.resolve, args.budget, args.threads)
    if args.tsv:
        print(TSV_HEADER)
        for row in rows:
            print(row.to_tsv())
    else:
        text = "\n".join(
            f"{row.moduli}\t{row.value if row.status == 'Exact' else (row.lower, row.upper)}\t{row.method}"
            for row in rows)
        _emit([row.to_json() for row in rows], args, text)
    return EXIT_BUDGET if any(r.budget_exhausted for r in rows) else EXIT_OK


def cmd_verify(args) -> int:
    try:
        cert = Certificate.load(args.certificate)
    except OSError as exc:
        raise CertificateError(str(exc)) from None
    report = verify_certificate(cert)
    out = report.to_json()
    text = "valid" if report.valid else f"invalid: {report.reason} {report.indices} {report.weights}"
    _emit(out, args, text)
    return EXIT_OK if report.valid else EXIT_INVALID_CERT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    weights = argparse.ArgumentParser(add_help=False)
    weights.add_argument("--weights", default="pm", help="pm | full | set:a,b,c (default pm)")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="node budget for search")
    search.add_argument("--threads", type=int, default=None,
                        help="worker threads (default $DAVENPORT_THREADS or 1)")
    search.add_argument("--nondeterministic", action="store_true",
                        help="allow any maximum witness instead of the least one")

    p = argparse.ArgumentParser(prog="davenport", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", parents=[common], help="group statistics")
    s.add_argument("group")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("bounds", parents=[common, weights], help="all bounds with provenance")
    s.add_argument("group")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("exact", parents=[common, weights, search], help="exact value or bracket")
    s.add_argument("group")
    s.add_argument("--resolve", action="store_true", help="search when only a bracket is known")
    s.set_defaults(func=cmd_exact)

    s = sub.add_parser("search", parents=[common, weights, search], help="exhaustive search")
    s.add_argument("group")
    s.add_argument("--max-depth", type=int, default=None)
    s.add_argument("--symmetry", action="store_true", help="restrict the first element to orbit minima")
    s.add_argument("--out", help="write the witness certificate to this file")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("table", parents=[common, search], help="plus-minus values up to an order")
    s.add_argument("--max-order", type=int, default=100)
    s.add_argument("--resolve", action="store_true", help="search every bracketed row")
    s.add_argument("--tsv", action="store_true")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("verify", parents=[common], help="verify a certificate JSON file")
    s.add_argument("certificate")
    s.set_defaults(func=cmd_verify)
    return p


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (InvalidGroup, InvalidWeights, CertificateError, SearchRefused, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
