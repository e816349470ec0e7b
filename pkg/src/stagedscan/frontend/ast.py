"""AST node definitions for MiniObj.

Source locations and semantic annotations (types, resolved declarations,
implicit conversions) are excluded from equality so that two parses of the
same program compare equal regardless of layout.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, is_dataclass
from typing import Iterator, Optional, Union


@dataclass(frozen=True, order=True)
class Loc:
    file: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"

    def to_json(self) -> dict:
        return {"file": self.file, "line": self.line, "col": self.col}

    @classmethod
    def from_json(cls, d: dict) -> "Loc":
        return cls(d["file"], int(d["line"]), int(d["col"]))


NOLOC = Loc("<builtin>", 0, 0)


# --------------------------------------------------------------------------
# types

INT_TYPES = {"i8": (8, True), "i32": (32, True), "u8": (8, False), "u32": (32, False)}
PRIM_NAMES = set(INT_TYPES) | {"bool", "var", "buf", "tag", "void"}


@dataclass(frozen=True)
class PrimType:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ClassType:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class FnType:
    params: tuple
    ret: "Type"

    def __str__(self) -> str:
        ret = "" if self.ret == VOID else f" -> {self.ret}"
        return f"fn({', '.join(str(p) for p in self.params)}){ret}"


Type = Union[PrimType, ClassType, FnType]

I8, I32, U8, U32 = PrimType("i8"), PrimType("i32"), PrimType("u8"), PrimType("u32")
BOOL, VAR, BUF, TAG, VOID = (PrimType(n) for n in ("bool", "var", "buf", "tag", "void"))


def is_int(t) -> bool:
    return isinstance(t, PrimType) and t.name in INT_TYPES


def int_info(t) -> tuple[int, bool]:
    """(width, signed) of an integer type."""
    return INT_TYPES[t.name]


def int_range(t) -> tuple[int, int]:
    width, signed = int_info(t)
    if signed:
        return -(1 << (width - 1)), (1 << (width - 1)) - 1
    return 0, (1 << width) - 1


def wrap_int(value: int, t) -> int:
    width, signed = int_info(t)
    value &= (1 << width) - 1
    if signed and value >= 1 << (width - 1):
        value -= 1 << width
    return value


TAGS = ("Int", "Bool", "Ref")


# --------------------------------------------------------------------------
# base node

def _loc():
    return field(default=NOLOC, compare=False, repr=False)


def _ann(default=None):
    return field(default=default, compare=False, repr=False)


class Node:
    loc: Loc

    def children(self) -> Iterator["Node"]:
        for f in fields(self):
            if not f.compare:
                continue
            v = getattr(self, f.name)
            if isinstance(v, Node):
                yield v
            elif isinstance(v, (list, tuple)):
                for item in v:
                    if isinstance(item, Node):
                        yield item

    def walk(self) -> Iterator["Node"]:
        yield self
        for c in self.children():
            yield from c.walk()


# --------------------------------------------------------------------------
# expressions
#
# Every expression carries `ty` (its own type) and `conv` (target type of an
# implicit conversion applied to its value, or None).

@dataclass(eq=True)
class Expr(Node):
    pass


@dataclass(eq=True)
class IntLit(Expr):
    value: int
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()


@dataclass(eq=True)
class BoolLit(Expr):
    value: bool
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()


@dataclass(eq=True)
class TagLit(Expr):
    name: str
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()


@dataclass(eq=True)
class Name(Expr):
    ident: str
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()
    # one of local, param, field, global, function
    kind: Optional[str] = _ann()
    decl: Optional[str] = _ann()  # DeclID for field/global/function
    is_ref: bool = _ann(False)  # param passed by reference


@dataclass(eq=True)
class This(Expr):
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()


@dataclass(eq=True)
class FieldAccess(Expr):
    obj: Expr
    name: str
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()
    decl: Optional[str] = _ann()


@dataclass(eq=True)
class Call(Expr):
    callee: Expr
    args: list
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()
    # direct | method | vmethod | icall | intrinsic
    kind: Optional[str] = _ann()
    target: Optional[str] = _ann()  # DeclID (direct/method/vmethod) or intrinsic name
    recv: Optional[Expr] = _ann()  # receiver for method calls
    slot: Optional[str] = _ann()  # vtable slot name
    static_class: Optional[str] = _ann()
    ref_params: tuple = _ann(())  # per-argument by-reference flags


@dataclass(eq=True)
class New(Expr):
    cls: str
    args: list
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()
    ref_params: tuple = _ann(())


@dataclass(eq=True)
class FuncRef(Expr):
    name: str
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()


@dataclass(eq=True)
class Cast(Expr):
    to: Type
    expr: Expr
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()


@dataclass(eq=True)
class Downcast(Expr):
    cls: str
    expr: Expr
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()


@dataclass(eq=True)
class Unary(Expr):
    op: str
    expr: Expr
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()


@dataclass(eq=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr
    loc: Loc = _loc()
    ty: Optional[Type] = _ann()
    conv: Optional[Type] = _ann()


# --------------------------------------------------------------------------
# statements

@dataclass(eq=True)
class Stmt(Node):
    pass


@dataclass(eq=True)
class Let(Stmt):
    name: str
    type: Optional[Type]
    init: Expr
    loc: Loc = _loc()
    decl_type: Optional[Type] = _ann()


@dataclass(eq=True)
class Assign(Stmt):
    target: Expr
    value: Expr
    loc: Loc = _loc()


@dataclass(eq=True)
class ExprStmt(Stmt):
    expr: Expr
    loc: Loc = _loc()


@dataclass(eq=True)
class If(Stmt):
    cond: Expr
    then: list
    els: Optional[list]
    loc: Loc = _loc()


@dataclass(eq=True)
class While(Stmt):
    cond: Expr
    body: list
    loc: Loc = _loc()
    # local names written anywhere in the body (set by the checker)
    written: tuple = _ann(())


@dataclass(eq=True)
class Return(Stmt):
    value: Optional[Expr]
    loc: Loc = _loc()


# --------------------------------------------------------------------------
# declarations

@dataclass(eq=True)
class Param(Node):
    name: str
    type: Type
    is_ref: bool = False
    loc: Loc = _loc()


@dataclass(eq=True)
class FieldDecl(Node):
    name: str
    type: Type
    loc: Loc = _loc()
    decl_id: Optional[str] = _ann()


@dataclass(eq=True)
class FunctionDecl(Node):
    """Free function, method, constructor, or extern declaration.

    `body` is None for extern declarations and for constructors declared in
    a class but defined out of line (`C::C(...) { ... }` at top level).
    """
    name: str
    params: list
    ret: Type
    body: Optional[list]
    kind: str = "function"  # function | method | ctor | extern
    virtual: bool = False
    qualifier: Optional[str] = None  # class name of an out-of-line constructor definition
    loc: Loc = _loc()
    end_loc: Loc = _loc()
    decl_id: Optional[str] = _ann()
    owner: Optional[str] = _ann()  # class name for methods/ctors
    unit: Optional[str] = _ann()
    implicit: bool = _ann(False)
    locals: dict = _ann(None)  # name -> Type, including params


@dataclass(eq=True)
class ClassDecl(Node):
    name: str
    base: Optional[str]
    fields: list
    methods: list
    ctors: list
    loc: Loc = _loc()
    end_loc: Loc = _loc()
    unit: Optional[str] = _ann()


@dataclass(eq=True)
class GlobalDecl(Node):
    name: str
    type: Type
    init: Expr
    loc: Loc = _loc()
    unit: Optional[str] = _ann()


@dataclass(eq=True)
class Import(Node):
    name: str
    loc: Loc = _loc()


@dataclass(eq=True)
class TranslationUnit(Node):
    name: str
    decls: list
    file: str = field(default="", compare=False)
    source: str = field(default="", compare=False, repr=False)

    @property
    def imports(self) -> list[str]:
        return [d.name for d in self.decls if isinstance(d, Import)]

    @property
    def classes(self) -> list[ClassDecl]:
        return [d for d in self.decls if isinstance(d, ClassDecl)]

    @property
    def functions(self) -> list[FunctionDecl]:
        """Every function with a body declared in this unit, methods included."""
        out = []
        for d in self.decls:
            if isinstance(d, FunctionDecl) and d.body is not None:
                out.append(d)
            elif isinstance(d, ClassDecl):
                out.extend(c for c in d.ctors if c.body is not None)
                out.extend(d.methods)
        return out

    @property
    def source_map(self) -> dict[int, Loc]:
        """id(node) -> location for every node of the unit."""
        return {id(n): n.loc for n in self.walk() if n is not self}

    def line_text(self, line: int) -> str:
        lines = self.source.splitlines()
        return lines[line - 1] if 0 < line <= len(lines) else ""


def dump(node) -> object:
    """Plain-data rendering of a node tree (structure only), for fingerprints."""
    if isinstance(node, Node):
        out = {"_": type(node).__name__}
        for f in fields(node):
            if f.compare:
                out[f.name] = dump(getattr(node, f.name))
        return out
    if isinstance(node, (list, tuple)):
        return [dump(x) for x in node]
    if is_dataclass(node):
        return str(node)
    return node
