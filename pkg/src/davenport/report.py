"""The plus-minus table over all groups up to a given order."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from davenport.bounds import EXCEPTIONAL_PM, exact_value
from davenport.groups import AbelianGroup, enumerate_groups
from davenport.search import DEFAULT_BUDGET, SearchConfig, max_dissociated
from davenport.weights import make_weightset

log = logging.getLogger(__name__)

TSV_HEADER = "moduli\torder\tstatus\tlower\tupper\tsearch_verified\tmethod"


class TableMismatch(AssertionError):
    """A search contradicted a hardcoded value."""


@dataclass(frozen=True)
class TableRow:
    moduli: tuple[int, ...]
    order: int
    status: str  # "Exact" or "Bracket"
    lower: int
    upper: int
    method: str
    search_verified: bool = False
    budget_exhausted: bool = False

    @property
    def value(self) -> int | None:
        return self.lower if self.status == "Exact" else None

    def to_json(self) -> dict:
        out = {"group": list(self.moduli), "order": self.order, "status": self.status}
        if self.status == "Exact":
            out["value"] = self.lower
        else:
            out["lower"], out["upper"] = self.lower, self.upper
        out["method"] = self.method
        out["search_verified"] = self.search_verified
        if self.budget_exhausted:
            out["budget_exhausted"] = True
        return out

    def to_tsv(self) -> str:
        mods = ",".join(map(str, self.moduli))
        return (f"[{mods}]\t{self.order}\t{self.status}\t{self.lower}\t{self.upper}\t"
                f"{int(self.search_verified)}\t{self.method}")


def _search(G: AbelianGroup, budget: int, threads: int | None):
    result = max_dissociated(G, make_weightset("pm", G), SearchConfig(node_budget=budget, threads=threads))
    log.info("search %s: max_len=%d exhausted=%s nodes=%d budget=%d",
             G, result.max_len, result.exhausted, result.nodes_visited, budget)
    return result


def table_row(G: AbelianGroup, resolve: bool = False, budget: int = DEFAULT_BUDGET,
              threads: int | None = None) -> TableRow:
    status = exact_value(G, make_weightset("pm", G)).status
    row = TableRow(G.moduli, G.order, status.kind, status.lo, status.hi, status.method)
    if status.kind == "Exact" and G.moduli in EXCEPTIONAL_PM:
        # table values are re-derived, not trusted
        result = _search(G, budget, threads)
        if result.exhausted and result.max_len + 1 != status.lo:
            raise TableMismatch(f"search gives {result.max_len + 1} for {G}, table says {status.lo}")
        return TableRow(G.moduli, G.order, "Exact", status.lo, status.hi, status.method,
                        search_verified=result.exhausted, budget_exhausted=not result.exhausted)
    if status.kind == "Bracket" and resolve:
        result = _search(G, budget, threads)
        if result.exhausted:
            v = result.max_len + 1
            return TableRow(G.moduli, G.order, "Exact", v, v,
                            f"exhaustive search (budget {budget})", search_verified=True)
        lo = max(status.lo, result.max_len + 1)
        return TableRow(G.moduli, G.order, "Bracket", lo, status.hi, status.method, budget_exhausted=True)
    return row


def run_table(max_order: int, resolve: bool = False, budget: int = DEFAULT_BUDGET,
              threads: int | None = None) -> list[TableRow]:
    """One row per isomorphism class of order <= max_order, sorted by order."""
    return [table_row(G, resolve, budget, threads) for G in enumerate_groups(max_order)]
