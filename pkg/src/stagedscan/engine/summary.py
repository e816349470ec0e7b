"""Per-function Def / UseWithoutDef summaries over member declaration IDs."""
from __future__ import annotations

import copy
from dataclasses import dataclass, field

from ..frontend.ast import Loc

DEF = "def"
USE = "use"


@dataclass
class FunctionSummary:
    function: str
    def_set: dict = field(default_factory=dict)  # member DeclID -> first-def Loc
    use_without_def_set: set = field(default_factory=set)  # (member, use Loc, local path)
    truncated: bool = False
    paths_explored: int = 0

    def defined(self) -> set[str]:
        return set(self.def_set)

    def used_without_def(self) -> set[str]:
        return {m for m, _, _ in self.use_without_def_set}

    def to_json(self) -> dict:
        return {
            "function": self.function,
            "def_set": [[m, loc.to_json()] for m, loc in sorted(self.def_set.items())],
            "use_without_def_set": [[m, loc.to_json(), p] for m, loc, p in sorted(self.use_without_def_set)],
            "truncated": self.truncated,
            "paths_explored": self.paths_explored,
        }

    @classmethod
    def from_json(cls, d: dict) -> "FunctionSummary":
        return cls(
            d["function"],
            {m: Loc.from_json(loc) for m, loc in d["def_set"]},
            {(m, Loc.from_json(loc), p) for m, loc, p in d["use_without_def_set"]},
            d["truncated"],
            d["paths_explored"],
        )


def local_path(member: str, function: str) -> str:
    return f"{member}->{function}"


def apply_event(summary: FunctionSummary, kind: str, member: str, loc: Loc) -> None:
    """In-place form of `record_event`."""
    if kind == DEF:
        if member not in summary.def_set:
            summary.def_set[member] = loc
    elif kind == USE:
        if member not in summary.def_set:
            summary.use_without_def_set.add((member, loc, local_path(member, summary.function)))
    else:
        raise ValueError(f"unknown event kind {kind!r}")


def record_event(summary: FunctionSummary, kind: str, member: str, loc: Loc) -> FunctionSummary:
    """Return `summary` updated with one Def or Use event.

    A Def adds the member unless it is already defined (first definition
    wins). A Use adds (member, loc, path) to UseWithoutDef when the member is
    not yet in the Def set.
    """
    out = copy.deepcopy(summary)
    apply_event(out, kind, member, loc)
    return out


def merge_paths(function: str, per_path: list[FunctionSummary]) -> FunctionSummary:
    """Union of per-path summaries; the earliest location wins for Def entries."""
    merged = FunctionSummary(function)
    for s in per_path:
        for m, loc in s.def_set.items():
            prev = merged.def_set.get(m)
            if prev is None or loc < prev:
                merged.def_set[m] = loc
        merged.use_without_def_set |= s.use_without_def_set
    return merged
