"""CWE843: a value interpreted under a type it may not hold."""
from __future__ import annotations

from ..engine import domain as D
from .base import DOWNCAST, VAR_ACCESS, Checker, CheckerFinding, Event, summarized_function


def check_type_confusion(event: Event) -> list[CheckerFinding]:
    fn = summarized_function(event)
    if event.kind == VAR_ACCESS:
        v: D.VarV = event.data["value"]
        tag = event.data["tag"]
        bad = tag not in v.tags or (v.tainted and v.tags != frozenset({tag}))
        if not bad:
            return []
        decl = event.data["accessor"]
        msg = f"Value read as {tag} may hold another type"
    elif event.kind == DOWNCAST:
        v = event.data["value"]
        allowed = event.data["allowed"]
        if isinstance(v, D.ObjV) and v.classes <= allowed:
            return []
        decl = f"downcast<{event.data['target']}>"
        msg = f"Object downcast to {event.data['target']} may have another dynamic type"
    else:
        return []
    return [CheckerFinding(event.loc, 843, decl, f"{decl}->{fn}", msg, fn)]


class TypeConfusionChecker(Checker):
    id = "cwe843"
    cwe = 843

    def on_event(self, event: Event) -> list[CheckerFinding]:
        return check_type_confusion(event)
