"""Typed IR data model and its canonical JSON form.

Functions are lists of basic blocks; each block is a list of instructions
whose last element is the terminator (br, jmp or ret). Variables are named:
source locals and parameters keep their names, temporaries are `%N`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from ..frontend.ast import Loc

TERMINATORS = ("br", "jmp", "ret")

# op -> instruction fields (besides op and loc), in serialization order
OPS = {
    "const": ("dest", "type", "value"),
    "mov": ("dest", "src"),
    "gload": ("dest", "global"),
    "gstore": ("global", "src"),
    "load": ("dest", "obj", "field"),
    "store": ("obj", "field", "src"),
    "rload": ("dest", "param"),  # read through a reference parameter
    "rstore": ("param", "src"),  # write through a reference parameter
    "addr": ("dest", "kind", "name", "obj"),  # reference to a local, field or global
    "new": ("dest", "cls"),
    "call": ("dest", "target", "args", "alias", "external"),
    "vcall": ("dest", "recv", "cls", "slot", "args"),
    "icall": ("dest", "fn", "args"),
    "funcref": ("dest", "target"),
    "cast": ("dest", "kind", "src", "to", "implicit"),
    "binop": ("dest", "operator", "lhs", "rhs"),
    "unop": ("dest", "operator", "src"),
    "br": ("cond", "then", "else"),
    "jmp": ("target",),
    "ret": ("value",),
}


class IRError(Exception):
    pass


@dataclass
class Instr:
    op: str
    loc: Loc
    attrs: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.attrs.get(key)

    def get(self, key, default=None):
        return self.attrs.get(key, default)

    def to_json(self) -> dict:
        d = {"op": self.op, "loc": self.loc.to_json()}
        for k in OPS[self.op]:
            v = self.attrs.get(k)
            if v is not None:
                d[k] = v
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Instr":
        op = d["op"]
        if op not in OPS:
            raise IRError(f"unknown IR op {op!r}")
        attrs = {k: d[k] for k in OPS[op] if k in d}
        if "alias" in attrs:
            attrs["alias"] = {int(k): v for k, v in attrs["alias"].items()}
        return cls(op, Loc.from_json(d["loc"]), attrs)


def make(op: str, loc: Loc, **attrs) -> Instr:
    unknown = set(attrs) - set(OPS[op])
    if unknown:
        raise IRError(f"{op} has no attribute(s) {sorted(unknown)}")
    return Instr(op, loc, {k: v for k, v in attrs.items() if v is not None})


@dataclass
class Block:
    label: str
    instrs: list = field(default_factory=list)

    @property
    def terminator(self) -> Optional[Instr]:
        return self.instrs[-1] if self.instrs and self.instrs[-1].op in TERMINATORS else None

    def to_json(self) -> dict:
        return {"label": self.label, "instrs": [i.to_json() for i in self.instrs]}

    @classmethod
    def from_json(cls, d: dict) -> "Block":
        return cls(d["label"], [Instr.from_json(i) for i in d["instrs"]])


@dataclass
class IRFunction:
    id: str
    unit: str
    kind: str  # function | method | ctor
    owner: Optional[str]
    params: list  # [{"name", "type", "ref"}]; methods and ctors start with `this`
    ret: str
    locals: dict  # name -> type
    extent: tuple  # (file, first line, last line)
    blocks: list = field(default_factory=list)

    def instructions(self):
        for b in self.blocks:
            yield from b.instrs

    @property
    def source_map(self) -> dict:
        """(block label, index) -> location for every instruction."""
        return {(b.label, i): ins.loc for b in self.blocks for i, ins in enumerate(b.instrs)}

    def to_json(self) -> dict:
        return {
            "id": self.id, "unit": self.unit, "kind": self.kind, "owner": self.owner,
            "params": self.params, "ret": self.ret, "locals": self.locals,
            "extent": {"file": self.extent[0], "start": self.extent[1], "end": self.extent[2]},
            "blocks": [b.to_json() for b in self.blocks],
        }

    @classmethod
    def from_json(cls, d: dict) -> "IRFunction":
        e = d["extent"]
        return cls(d["id"], d["unit"], d["kind"], d["owner"], d["params"], d["ret"], d["locals"],
                   (e["file"], e["start"], e["end"]), [Block.from_json(b) for b in d["blocks"]])


@dataclass
class IRClass:
    name: str
    base: Optional[str]
    unit: str
    fields: list  # [[decl_id, type]] full layout, inherited first
    vtable: list  # [[slot, implementing DeclID]] in slot order

    def to_json(self) -> dict:
        return {"name": self.name, "base": self.base, "unit": self.unit,
                "fields": self.fields, "vtable": self.vtable}

    @classmethod
    def from_json(cls, d: dict) -> "IRClass":
        return cls(d["name"], d["base"], d["unit"], [list(f) for f in d["fields"]],
                   [list(v) for v in d["vtable"]])

    def slot_impl(self, slot: str) -> Optional[str]:
        for s, impl in self.vtable:
            if s == slot:
                return impl
        return None


@dataclass
class IRModule:
    """One lowered unit, or a linked program (then `entries` is set)."""

    name: str
    functions: dict = field(default_factory=dict)  # DeclID -> IRFunction
    classes: dict = field(default_factory=dict)  # name -> IRClass
    globals: dict = field(default_factory=dict)  # name -> {"type", "value", "unit"}
    externs: dict = field(default_factory=dict)  # name -> {"params", "ret"}
    entries: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "format": "mir-1",
            "name": self.name,
            "entries": list(self.entries),
            "functions": [self.functions[k].to_json() for k in sorted(self.functions)],
            "classes": [self.classes[k].to_json() for k in sorted(self.classes)],
            "globals": {k: self.globals[k] for k in sorted(self.globals)},
            "externs": {k: self.externs[k] for k in sorted(self.externs)},
        }

    @classmethod
    def from_json(cls, d: dict) -> "IRModule":
        if d.get("format") != "mir-1":
            raise IRError(f"unsupported IR format {d.get('format')!r}")
        m = cls(d["name"], entries=list(d["entries"]))
        for f in d["functions"]:
            m.functions[f["id"]] = IRFunction.from_json(f)
        for c in d["classes"]:
            m.classes[c["name"]] = IRClass.from_json(c)
        m.globals = dict(d["globals"])
        m.externs = dict(d["externs"])
        return m

    def dumps(self) -> str:
        return dumps_canonical(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "IRModule":
        return cls.from_json(json.loads(text))

    def field_owner(self, field_id: str) -> Optional[str]:
        """Class that declares `field_id` (first class whose own layout adds it)."""
        cls = field_id.split("::", 1)[0]
        c = self.classes.get(cls)
        if c is not None and any(f == field_id for f, _ in c.fields):
            return cls
        return None

    def subclasses(self, name: str) -> list[str]:
        out = []
        for c in self.classes:
            cur = c
            while cur is not None:
                if cur == name:
                    out.append(c)
                    break
                cur = self.classes[cur].base if cur in self.classes else None
        return sorted(out)


IRProgram = IRModule


def dumps_canonical(obj, compact: bool = True) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, trailing newline."""
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
