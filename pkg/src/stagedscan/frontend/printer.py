"""Pretty-printer producing re-parseable MiniObj source."""
from __future__ import annotations

from . import ast as A

_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 4, "<=": 4, ">": 4, ">=": 4,
         "+": 5, "-": 5, "*": 6, "/": 6, "%": 6}


def type_str(t: A.Type) -> str:
    return str(t)


def expr_str(e: A.Expr, prec: int = 0) -> str:
    if isinstance(e, A.IntLit):
        return str(e.value)
    if isinstance(e, A.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, A.TagLit):
        return e.name
    if isinstance(e, A.Name):
        return e.ident
    if isinstance(e, A.This):
        return "this"
    if isinstance(e, A.FieldAccess):
        return f"{expr_str(e.obj, 9)}.{e.name}"
    if isinstance(e, A.Call):
        return f"{expr_str(e.callee, 9)}({', '.join(expr_str(a) for a in e.args)})"
    if isinstance(e, A.New):
        return f"new {e.cls}({', '.join(expr_str(a) for a in e.args)})"
    if isinstance(e, A.FuncRef):
        return f"&{e.name}"
    if isinstance(e, A.Cast):
        return f"cast<{type_str(e.to)}>({expr_str(e.expr)})"
    if isinstance(e, A.Downcast):
        return f"downcast<{e.cls}>({expr_str(e.expr)})"
    if isinstance(e, A.Unary):
        s = f"{e.op}{expr_str(e.expr, 8)}"
        return f"({s})" if prec > 8 else s
    if isinstance(e, A.Binary):
        p = _PREC[e.op]
        s = f"{expr_str(e.left, p)} {e.op} {expr_str(e.right, p + 1)}"
        return f"({s})" if prec > p else s
    raise TypeError(type(e).__name__)


def _params(ps) -> str:
    return ", ".join(f"{p.name}: {'ref ' if p.is_ref else ''}{type_str(p.type)}" for p in ps)


def _ret(t) -> str:
    return "" if t == A.VOID else f" -> {type_str(t)}"


def _block(stmts, ind: int) -> list[str]:
    out = []
    for s in stmts:
        out.extend(_stmt(s, ind))
    return out


def _stmt(s, ind: int) -> list[str]:
    pad = "  " * ind
    if isinstance(s, A.Let):
        ty = f": {type_str(s.type)}" if s.type is not None else ""
        return [f"{pad}let {s.name}{ty} = {expr_str(s.init)};"]
    if isinstance(s, A.Assign):
        return [f"{pad}{expr_str(s.target)} = {expr_str(s.value)};"]
    if isinstance(s, A.ExprStmt):
        return [f"{pad}{expr_str(s.expr)};"]
    if isinstance(s, A.Return):
        return [f"{pad}return;" if s.value is None else f"{pad}return {expr_str(s.value)};"]
    if isinstance(s, A.While):
        return [f"{pad}while ({expr_str(s.cond)}) {{", *_block(s.body, ind + 1), f"{pad}}}"]
    if isinstance(s, A.If):
        lines = [f"{pad}if ({expr_str(s.cond)}) {{", *_block(s.then, ind + 1)]
        if s.els is None:
            lines.append(f"{pad}}}")
        else:
            lines.append(f"{pad}}} else {{")
            lines.extend(_block(s.els, ind + 1))
            lines.append(f"{pad}}}")
        return lines
    raise TypeError(type(s).__name__)


def _function(fn: A.FunctionDecl, ind: int) -> list[str]:
    pad = "  " * ind
    if fn.kind == "extern":
        return [f"{pad}extern fn {fn.name}({_params(fn.params)}){_ret(fn.ret)};"]
    if fn.kind == "ctor":
        qual = f"{fn.qualifier}::" if fn.qualifier else ""
        if fn.body is None:
            return [f"{pad}{fn.name}({_params(fn.params)});"]
        head = f"{pad}{qual}{fn.name}({_params(fn.params)}) {{"
    else:
        virt = "virtual " if fn.virtual and fn.kind == "method" else ""
        head = f"{pad}{virt}fn {fn.name}({_params(fn.params)}){_ret(fn.ret)} {{"
    return [head, *_block(fn.body, ind + 1), f"{pad}}}"]


def print_unit(unit: A.TranslationUnit) -> str:
    lines = []
    for d in unit.decls:
        if isinstance(d, A.Import):
            lines.append(f"import {d.name};")
        elif isinstance(d, A.GlobalDecl):
            lines.append(f"global {d.name}: {type_str(d.type)} = {expr_str(d.init)};")
        elif isinstance(d, A.FunctionDecl):
            lines.extend(_function(d, 0))
        elif isinstance(d, A.ClassDecl):
            base = f" : {d.base}" if d.base else ""
            lines.append(f"class {d.name}{base} {{")
            for f in d.fields:
                lines.append(f"  {f.name}: {type_str(f.type)};")
            for c in d.ctors:
                lines.extend(_function(c, 1))
            for m in d.methods:
                lines.extend(_function(m, 1))
            lines.append("}")
    return "\n".join(lines) + "\n"
