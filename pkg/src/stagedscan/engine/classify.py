"""Cross-summary classification of candidate garbage reads."""
from __future__ import annotations

from ..checkers.base import CheckerFinding
from .summary import FunctionSummary

GARBAGE_READ_MESSAGE = "Potentially uninitialized object field"


def owner_of(decl_id: str) -> str | None:
    return decl_id.split("::", 1)[0] if "::" in decl_id else None


def classify_candidates(summaries: dict, classes: list) -> list[CheckerFinding]:
    """Flag member uses that no available constructor summary defines.

    `summaries` maps function DeclIDs to FunctionSummary; `classes` lists the
    ClassInfo records in scope. For every function of class C and every
    (member, site) in its UseWithoutDef set, a finding is emitted unless the
    member is in the Def set of the constructor of C or of one of its
    ancestors. A constructor without a summary (declared in another unit, or
    implicit) contributes nothing, which is the same as an empty constructor.
    """
    by_name = {c.name: c for c in classes}
    out = []
    for fid in sorted(summaries):
        cls = owner_of(fid)
        info = by_name.get(cls)
        if info is None:
            continue
        visible = {decl for decl, _ in info.fields.values()}
        defined: set = set()
        for anc in info.ancestors:
            s: FunctionSummary | None = summaries.get(f"{anc}::{anc}")
            if s is not None:
                defined |= set(s.def_set)
        for member, loc, path in sorted(summaries[fid].use_without_def_set):
            if member in visible and member not in defined:
                out.append(CheckerFinding(loc, 457, member, path, GARBAGE_READ_MESSAGE, fid))
    return sorted(set(out), key=lambda f: f.sort_key)
