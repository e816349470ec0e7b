"""Linking of per-unit IR modules and field store queries over the result."""
from __future__ import annotations

from pathlib import Path

from .model import IRError, IRModule

INTRINSIC_NAMES = frozenset({
    "extern_input", "as_int", "as_int8", "as_bool", "tag_of", "var_int", "var_bool", "alloc", "read_buf",
})


def link(modules: list, entries=None, name: str = "program") -> IRModule:
    """Merge modules into one program image.

    Raises IRError on duplicate symbols, unresolved call targets, missing
    entry points, or a derived vtable that does not extend its base's.
    Passing `entries=None` skips the entry check (partial links).
    """
    out = IRModule(name)
    errors = []
    for m in modules:
        for fid, fn in m.functions.items():
            if fid in out.functions:
                errors.append(f"duplicate symbol {fid} (units {out.functions[fid].unit} and {fn.unit})")
                continue
            out.functions[fid] = fn
        for cname, c in m.classes.items():
            if cname in out.classes:
                errors.append(f"duplicate class {cname}")
                continue
            out.classes[cname] = c
        for g, v in m.globals.items():
            if g in out.globals:
                errors.append(f"duplicate symbol {g}")
                continue
            out.globals[g] = v
        for x, sig in m.externs.items():
            prev = out.externs.get(x)
            if prev is not None and prev != sig:
                errors.append(f"conflicting extern declarations of {x}")
            out.externs[x] = sig
        for e in m.entries:
            if e not in out.entries:
                out.entries.append(e)
    for cname in sorted(out.classes):
        c = out.classes[cname]
        if c.base is None:
            continue
        base = out.classes.get(c.base)
        if base is None:
            continue  # checked once the whole program is present
        if [s for s, _ in c.vtable[: len(base.vtable)]] != [s for s, _ in base.vtable]:
            errors.append(f"vtable shape mismatch between {c.base} and {cname}")
    if entries is not None:
        for cname, c in sorted(out.classes.items()):
            if c.base is not None and c.base not in out.classes:
                errors.append(f"undefined class {c.base} (base of {cname})")
        for fid in sorted(out.functions):
            for ins in out.functions[fid].instructions():
                if ins.op == "call" and not ins.get("external") and ins["target"] not in out.functions:
                    errors.append(f"undefined symbol {ins['target']} (called from {fid})")
                elif ins.op == "funcref" and ins["target"] not in out.functions and ins["target"] not in out.externs:
                    errors.append(f"undefined symbol {ins['target']} (address taken in {fid})")
        for e in entries:
            if e not in out.functions:
                errors.append(f"missing entry point {e}")
        out.entries = list(entries)
    if errors:
        raise IRError("; ".join(dict.fromkeys(errors)))
    return out


def field_store_scan(program: IRModule, field: str, resolve_aliases: bool = False) -> set:
    """(function DeclID, store Loc) for every store to `field`.

    With `resolve_aliases`, a write through a reference parameter counts as a
    store to `field` when some direct call passes that field for the
    parameter (one level; the store is attributed to the callee).
    """
    known = {f for c in program.classes.values() for f, _ in c.fields}
    if field not in known:
        raise IRError(f"unknown field {field}")
    out = set()
    aliased: set = set()  # (callee, param name)
    for fid in sorted(program.functions):
        for ins in program.functions[fid].instructions():
            if ins.op == "store" and ins["field"] == field:
                out.add((fid, ins.loc))
            elif resolve_aliases and ins.op == "call" and ins.get("alias"):
                callee = program.functions.get(ins["target"])
                if callee is None:
                    continue
                for idx, f in ins["alias"].items():
                    if f == field and idx < len(callee.params):
                        aliased.add((callee.id, callee.params[idx]["name"]))
    for callee, param in aliased:
        for ins in program.functions[callee].instructions():
            if ins.op == "rstore" and ins["param"] == param:
                out.add((callee, ins.loc))
    return out


def write_module(module: IRModule, path) -> None:
    Path(path).write_text(module.dumps(), encoding="utf-8")


def read_module(path) -> IRModule:
    return IRModule.loads(Path(path).read_text(encoding="utf-8"))


__all__ = ["link", "field_store_scan", "write_module", "read_module"]
