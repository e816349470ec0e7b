"""MiniObj front end: lexing, parsing, name resolution and type checking."""
from . import ast
from .checker import INTRINSICS, ClassInfo, UnitSymbols
from .diagnostics import Diagnostic, FrontendError
from .parser import parse_syntax, tokenize
from .printer import print_unit
from .program import ProgramAST, load_files, load_sources, parse_unit, resolve_program, unit_decl_ids

__all__ = [
    "ast", "INTRINSICS", "ClassInfo", "UnitSymbols", "Diagnostic", "FrontendError",
    "parse_syntax", "tokenize", "print_unit", "ProgramAST", "load_files", "load_sources",
    "parse_unit", "resolve_program", "unit_decl_ids",
]
