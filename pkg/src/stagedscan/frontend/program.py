from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from . import ast as A
from .checker import ClassInfo, check_unit
from .diagnostics import Diagnostic, FrontendError
from .parser import parse_syntax


def parse_unit(source_text: str, unit_name: str, imports: Optional[Mapping[str, A.TranslationUnit]] = None,
               file: Optional[str] = None) -> A.TranslationUnit:
    """Parse and check one unit; `imports` maps unit names to already-checked units.

    Raises FrontendError carrying at least one diagnostic on failure.
    """
    unit = parse_syntax(source_text, unit_name, file)
    return check_unit(unit, dict(imports or {}))


@dataclass
class ProgramAST:
    units: dict  # name -> TranslationUnit, in dependency order
    classes: dict = field(default_factory=dict)  # name -> ClassInfo
    functions: dict = field(default_factory=dict)  # DeclID -> FunctionDecl
    globals: dict = field(default_factory=dict)  # name -> GlobalDecl

    def class_of(self, name: str) -> ClassInfo:
        return self.classes[name]

    def ctor(self, cls: str) -> A.FunctionDecl:
        """Constructor of `cls`: its definition when known, else its declaration."""
        decl = self.classes[cls].ctor
        return self.functions.get(decl.decl_id, decl)

    def subclasses(self, name: str) -> list[str]:
        """Reflexive-transitive subclasses of `name`, sorted."""
        return sorted(c for c, info in self.classes.items() if name in info.ancestors)

    def extent(self, decl_id: str) -> tuple[str, int, int]:
        fn = self.functions[decl_id]
        return fn.loc.file, fn.loc.line, fn.end_loc.line

    def function_at(self, loc: A.Loc) -> Optional[str]:
        """Innermost function whose source extent contains `loc`."""
        best = None
        for fid, fn in self.functions.items():
            if fn.body is None or fn.loc.file != loc.file:
                continue
            if fn.loc.line <= loc.line <= fn.end_loc.line:
                if best is None or fn.loc.line >= self.functions[best].loc.line:
                    best = fid
        return best


def unit_decl_ids(unit: A.TranslationUnit) -> list[str]:
    ids = []
    for d in unit.decls:
        if isinstance(d, A.ClassDecl):
            ids.extend(f.decl_id for f in d.fields)
            ids.extend(c.decl_id for c in d.ctors if c.body is not None)
            ids.extend(m.decl_id for m in d.methods)
        elif isinstance(d, A.FunctionDecl) and d.qualifier is not None:
            if d.decl_id is not None:
                ids.append(d.decl_id)
        elif isinstance(d, A.FunctionDecl):
            ids.append(d.decl_id)
        elif isinstance(d, A.GlobalDecl):
            ids.append(d.name)
    return ids


def resolve_program(units: list[A.TranslationUnit]) -> ProgramAST:
    """Bind a set of checked units into one program, rejecting conflicts."""
    diags = []
    by_name: dict = {}
    for u in units:
        if u.name in by_name:
            diags.append(Diagnostic(A.Loc(u.file, 1, 1), f"duplicate unit {u.name}"))
        by_name[u.name] = u
    owner: dict = {}
    prog = ProgramAST(units={})
    for u in units:
        for d in u.decls:
            if isinstance(d, A.Import) and d.name not in by_name:
                diags.append(Diagnostic(d.loc, f"unresolved import {d.name}"))
        for did in unit_decl_ids(u):
            if did in owner and owner[did] != u.name:
                diags.append(Diagnostic(A.Loc(u.file, 1, 1),
                                        f"conflicting definition of {did} (also in unit {owner[did]})"))
            owner.setdefault(did, u.name)
        syms = u.symbols
        for name, info in syms.classes.items():
            if name in prog.classes and prog.classes[name] is not info:
                continue
            prog.classes[name] = info
            prog.functions.setdefault(info.ctor.decl_id, info.ctor)
            for m in info.decl.methods:
                prog.functions[m.decl_id] = m
        for name, fn in syms.functions.items():
            prog.functions.setdefault(fn.decl_id, fn)
        for did, fn in syms.definitions.items():
            prog.functions[did] = fn
        prog.globals.update(syms.globals)
    if diags:
        raise FrontendError(diags)
    prog.units = {u.name: u for u in units}
    return prog


def import_order(syntax_units: dict) -> list[str]:
    """Topological order of unit names by imports; raises on cycles/unknowns."""
    diags = []
    order, state = [], {}

    def visit(name, trail):
        if state.get(name) == "done":
            return
        if state.get(name) == "active":
            u = syntax_units[name]
            diags.append(Diagnostic(A.Loc(u.file, 1, 1), f"import cycle: {' -> '.join(trail + [name])}"))
            return
        state[name] = "active"
        for imp in syntax_units[name].decls:
            if isinstance(imp, A.Import):
                if imp.name not in syntax_units:
                    diags.append(Diagnostic(imp.loc, f"unresolved import {imp.name}"))
                else:
                    visit(imp.name, trail + [name])
        state[name] = "done"
        order.append(name)

    for name in sorted(syntax_units):
        visit(name, [])
    if diags:
        raise FrontendError(diags)
    return order


def load_sources(sources: Mapping[str, tuple[str, str]]) -> ProgramAST:
    """Parse, check and resolve units given as {unit_name: (file, text)}."""
    syntax = {name: parse_syntax(text, name, file) for name, (file, text) in sources.items()}
    checked: dict = {}
    for name in import_order(syntax):
        u = syntax[name]
        deps = {d.name: checked[d.name] for d in u.decls if isinstance(d, A.Import) and d.name in checked}
        checked[name] = check_unit(u, deps)
    return resolve_program([checked[n] for n in import_order(syntax)])


def load_files(paths: list) -> ProgramAST:
    sources = {}
    for p in paths:
        p = Path(p)
        sources[p.stem] = (p.name, p.read_text(encoding="utf-8"))
    return load_sources(sources)
