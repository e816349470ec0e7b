"""Demand-driven validation of candidate garbage reads over the call graph."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..frontend.ast import Loc
from .callgraph import CallGraph, ClassHierarchy

CONFIRMED = "Confirmed"
FALSE_POSITIVE = "FalsePositive"


@dataclass(frozen=True)
class WPQuery:
    report_id: str
    field: str  # member DeclID
    anchor_function: str
    anchor_loc: Loc

    def to_json(self) -> dict:
        return {"report_id": self.report_id, "field": self.field,
                "anchor_function": self.anchor_function, "anchor_loc": self.anchor_loc.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "WPQuery":
        return cls(d["report_id"], d["field"], d["anchor_function"], Loc.from_json(d["anchor_loc"]))


@dataclass
class WPReport:
    report_id: str
    verdict: str
    chains: list  # entry-first lists of function DeclIDs
    stats: dict = field(default_factory=dict)
    field: str = ""
    anchor_function: str = ""

    def __post_init__(self):
        if (self.verdict == CONFIRMED) != bool(self.chains):
            raise ValueError("Confirmed reports need chains; false positives have none")

    def to_json(self) -> dict:
        return {"report_id": self.report_id, "verdict": self.verdict, "chains": self.chains,
                "stats": self.stats, "field": self.field, "anchor_function": self.anchor_function}

    @classmethod
    def from_json(cls, d: dict) -> "WPReport":
        return cls(d["report_id"], d["verdict"], [list(c) for c in d["chains"]], dict(d["stats"]),
                   d.get("field", ""), d.get("anchor_function", ""))


@dataclass
class ValidationConfig:
    chain_cap: int = 16
    max_depth: int = 64
    visit_budget: int = 1_000_000


def _reach(succ: dict, starts) -> set:
    seen, stack = set(), list(starts)
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        stack.extend(succ.get(n, ()))
    return seen


def crediting_functions(cg: CallGraph, stores: set, field_id: str, ch: Optional[ClassHierarchy]) -> set:
    """Functions whose presence on a chain discharges the load.

    A function credits when it stores the field itself, or when it calls a
    constructor of the field's class (or a subclass) from which a store is
    reachable in the call graph.
    """
    store_fns = {f for f, _ in stores}
    succ = cg.successor_map()
    ctors = set()
    if ch is not None:
        owner = field_id.split("::", 1)[0]
        if owner in ch.parent:
            ctors = {f"{c}::{c}" for c in ch.subclasses(owner)}
    credits = set(store_fns)
    ctor_ok = {c for c in ctors if _reach(succ, [c]) & store_fns}
    for n, callees in succ.items():
        if ctor_ok.intersection(callees):
            credits.add(n)
    return credits


def validate_garbage_read(query: WPQuery, cg: CallGraph, stores: set, entries: list,
                          ch: Optional[ClassHierarchy] = None,
                          cfg: Optional[ValidationConfig] = None) -> WPReport:
    """Confirm `query` if some entry-to-anchor call chain lacks a matching store.

    Chains are acyclic and enumerated depth-first with sorted successors, so
    the output is deterministic. Stores inside the anchor itself never
    discharge the load: the candidate exists because the local analysis saw
    a path through the anchor where the load precedes them. Only store-free
    chains are kept (at most `chain_cap`).
    """
    cfg = cfg or ValidationConfig()
    anchor = query.anchor_function
    if anchor not in cg.nodes:
        raise KeyError(f"anchor function {anchor} is not in the call graph")
    if not entries:
        raise ValueError("no entry points")
    succ = cg.successor_map()
    pred: dict = {}
    for caller, callees in succ.items():
        for c in callees:
            pred.setdefault(c, set()).add(caller)
    can_reach = _reach(pred, [anchor])
    stats = {"nodes_visited": 0, "chains_enumerated": 0}
    base = dict(report_id=query.report_id, field=query.field, anchor_function=anchor)
    live_entries = [e for e in sorted(set(entries)) if e in can_reach]
    if not live_entries:
        stats["note"] = "unreachable"
        return WPReport(verdict=FALSE_POSITIVE, chains=[], stats=stats, **base)
    credits = crediting_functions(cg, stores, query.field, ch)
    chains: list = []
    budget = [cfg.visit_budget]

    def dfs(node, path, on_path):
        if len(chains) >= cfg.chain_cap or budget[0] <= 0:
            return
        budget[0] -= 1
        stats["nodes_visited"] += 1
        if node == anchor:
            # the anchor's own stores were already ordered against the load by stage 1
            stats["chains_enumerated"] += 1
            chains.append(path + [node])
            return
        if node in credits:
            return
        if len(path) + 1 >= cfg.max_depth:
            return
        on_path.add(node)
        for nxt in succ.get(node, ()):
            if nxt in can_reach and nxt not in on_path:
                dfs(nxt, path + [node], on_path)
        on_path.discard(node)

    for e in live_entries:
        dfs(e, [], set())
    if budget[0] <= 0:
        stats["truncated"] = True
    if chains:
        return WPReport(verdict=CONFIRMED, chains=chains, stats=stats, **base)
    stats["note"] = "all loads have a matching store"
    return WPReport(verdict=FALSE_POSITIVE, chains=[], stats=stats, **base)
