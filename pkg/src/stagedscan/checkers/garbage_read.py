"""CWE457: reads of object fields that no constructor initializes."""
from __future__ import annotations

from .base import Checker, CheckerFinding


def check_garbage_read(ctx) -> list[CheckerFinding]:
    """Candidate garbage reads of one analyzed unit (see classify_candidates)."""
    from ..engine.classify import classify_candidates  # engine imports checkers.base

    return classify_candidates(ctx.summaries, list(ctx.program.classes.values()))


class GarbageReadChecker(Checker):
    id = "cwe457"
    cwe = 457

    def finish(self, ctx) -> list[CheckerFinding]:
        return check_garbage_read(ctx)
