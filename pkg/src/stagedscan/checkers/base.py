from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..frontend.ast import Loc

# event kinds delivered by the engine
MEMBER_USE = "member_use"
MEMBER_DEF = "member_def"
VAR_ACCESS = "var_access"  # as_int / as_int8 / as_bool on a var value
DOWNCAST = "downcast"
SIGN_CONVERSION = "sign_conversion"  # implicit equal-width signed -> unsigned
SIZE_SINK = "size_sink"  # value reaching a size parameter of alloc/read_buf


@dataclass
class Event:
    kind: str
    state: Any  # engine PathState; read-only for checkers
    node: Any  # AST node the event is attached to
    loc: Loc
    function: str  # DeclID of the function whose code produced the event
    data: dict = field(default_factory=dict)


@dataclass(frozen=True, order=True)
class CheckerFinding:
    loc: Loc
    cwe: int
    decl: str  # member DeclID or expression descriptor
    local_path: str
    message: str
    function: str

    def __post_init__(self):
        if not self.message or self.message != self.message.rstrip():
            raise ValueError("finding message must be non-empty without trailing whitespace")

    @property
    def sort_key(self):
        return (self.loc.file, self.loc.line, self.loc.col, self.cwe, self.decl, self.local_path)


def summarized_function(event: Event) -> str:
    """DeclID of the function being summarized (outermost frame of the path)."""
    return event.state.frames[0].fn.decl_id


class Checker:
    """Checkers observe engine events and return findings; they never mutate state."""

    id: str = ""
    cwe: int = 0

    def on_event(self, event: Event) -> list[CheckerFinding]:
        return []

    def finish(self, ctx) -> list[CheckerFinding]:
        return []
