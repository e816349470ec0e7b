from __future__ import annotations

from dataclasses import dataclass

from .ast import Loc


@dataclass(frozen=True, order=True)
class Diagnostic:
    loc: Loc
    message: str

    def __str__(self) -> str:
        return f"{self.loc.file}:{self.loc.line}:{self.loc.col}: error: {self.message}"


class FrontendError(Exception):
    """Raised when a unit or program fails to parse or check."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = sorted(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))
