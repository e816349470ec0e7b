"""Name resolution and type checking for MiniObj units.

The checker annotates the AST in place (expression types, implicit
conversions, resolved declarations and call kinds) and attaches a
`UnitSymbols` table to the unit as `unit.symbols`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import ast as A
from .diagnostics import Diagnostic, FrontendError


@dataclass(frozen=True)
class Intrinsic:
    name: str
    params: tuple
    ret: A.Type
    size_param: Optional[int] = None


INTRINSICS = {
    i.name: i
    for i in [
        Intrinsic("extern_input", (), A.VAR),
        Intrinsic("as_int", (A.VAR,), A.I32),
        Intrinsic("as_int8", (A.VAR,), A.I8),
        Intrinsic("as_bool", (A.VAR,), A.BOOL),
        Intrinsic("tag_of", (A.VAR,), A.TAG),
        Intrinsic("var_int", (A.I32,), A.VAR),
        Intrinsic("var_bool", (A.BOOL,), A.VAR),
        Intrinsic("alloc", (A.I32,), A.BUF, size_param=0),
        Intrinsic("read_buf", (A.BUF, A.I32), A.VOID, size_param=1),
    ]
}

# accessor intrinsic -> tag it requires
ACCESSOR_TAG = {"as_int": "Int", "as_int8": "Int", "as_bool": "Bool"}


@dataclass
class ClassInfo:
    name: str
    base: Optional[str]
    decl: A.ClassDecl
    unit: str
    fields: dict = field(default_factory=dict)  # name -> (decl_id, type), inherited first
    methods: dict = field(default_factory=dict)  # name -> FunctionDecl, most-derived
    slots: list = field(default_factory=list)  # virtual slot names, vtable order
    vtable: dict = field(default_factory=dict)  # slot -> implementing decl_id
    ctor: Optional[A.FunctionDecl] = None
    ancestors: list = field(default_factory=list)  # self first, then base chain

    def is_virtual(self, method: str) -> bool:
        return method in self.slots


@dataclass
class UnitSymbols:
    classes: dict = field(default_factory=dict)  # name -> ClassInfo
    functions: dict = field(default_factory=dict)  # name -> FunctionDecl (free + extern)
    globals: dict = field(default_factory=dict)  # name -> GlobalDecl
    definitions: dict = field(default_factory=dict)  # DeclID -> out-of-line constructor definition

    def names(self) -> set[str]:
        return set(self.classes) | set(self.functions) | set(self.globals)


def fn_signature(fn: A.FunctionDecl) -> tuple:
    return tuple((p.is_ref, p.type) for p in fn.params), fn.ret


def implicit_ok(src: A.Type, dst: A.Type, classes: dict) -> bool:
    if src == dst:
        return True
    if A.is_int(src) and A.is_int(dst):
        return A.int_info(dst)[0] >= A.int_info(src)[0]
    if isinstance(src, A.ClassType) and isinstance(dst, A.ClassType):
        info = classes.get(src.name)
        return info is not None and dst.name in info.ancestors
    return False


def common_int(a: A.Type, b: A.Type) -> Optional[A.Type]:
    """Common arithmetic type: identical, or widening without a sign flip."""
    if a == b:
        return a
    (wa, sa), (wb, sb) = A.int_info(a), A.int_info(b)
    for narrow, wide, (wn, sn), (ww, sw) in ((a, b, (wa, sa), (wb, sb)), (b, a, (wb, sb), (wa, sa))):
        if ww > wn and (sn == sw or (not sn and sw)):
            return wide
    return None


def literal_value(e: A.Expr) -> Optional[int]:
    if isinstance(e, A.IntLit):
        return e.value
    if isinstance(e, A.Unary) and e.op == "-" and isinstance(e.expr, A.IntLit):
        return -e.expr.value
    return None


class _FnCtx:
    def __init__(self, fn: A.FunctionDecl, owner: Optional[ClassInfo]):
        self.fn = fn
        self.owner = owner
        self.scopes: list[dict] = [{}]
        self.all_locals: dict = {}
        self.params: dict = {}

    def lookup(self, name):
        for s in reversed(self.scopes):
            if name in s:
                return s[name]
        return None


class Checker:
    def __init__(self, unit: A.TranslationUnit, imports: dict):
        self.unit = unit
        self.imports = imports
        self.diags: list[Diagnostic] = []
        self.symbols = UnitSymbols()
        # visible tables: own + directly imported
        self.classes: dict = {}
        self.functions: dict = {}
        self.globals: dict = {}

    def err(self, loc, msg):
        self.diags.append(Diagnostic(loc, msg))

    # ------------------------------------------------------------------ driver

    def run(self) -> UnitSymbols:
        self.collect_imports()
        self.declare()
        self.build_classes()
        for d in self.unit.decls:
            if isinstance(d, A.GlobalDecl):
                self.check_global(d)
        for d in self.unit.decls:
            if isinstance(d, A.FunctionDecl) and d.qualifier is None:
                self.check_signature(d)
        for info in self.symbols.classes.values():
            for m in info.decl.methods + info.decl.ctors:
                self.check_signature(m)
        out_of_line = self.bind_ctor_definitions()
        for d in self.unit.decls:
            if isinstance(d, A.FunctionDecl) and d.qualifier is not None:
                if d in out_of_line:
                    self.check_signature(d)
                    self.check_function(d, self.classes[d.qualifier])
            elif isinstance(d, A.FunctionDecl) and d.body is not None:
                self.check_function(d, None)
            elif isinstance(d, A.ClassDecl) and d.name in self.symbols.classes:
                info = self.symbols.classes[d.name]
                for fn in d.ctors + d.methods:
                    if fn.body is not None:
                        self.check_function(fn, info)
        if self.diags:
            raise FrontendError(self.diags)
        return self.symbols

    def collect_imports(self):
        seen = set()
        for d in self.unit.decls:
            if not isinstance(d, A.Import):
                continue
            if d.name in seen:
                self.err(d.loc, f"duplicate import {d.name}")
                continue
            seen.add(d.name)
            dep = self.imports.get(d.name)
            if dep is None or not hasattr(dep, "symbols"):
                self.err(d.loc, f"unknown import {d.name}")
                continue
            syms: UnitSymbols = dep.symbols
            self.classes.update(syms.classes)
            self.functions.update(syms.functions)
            self.globals.update(syms.globals)

    def declare(self):
        imported = set(self.classes) | set(self.functions) | set(self.globals)
        own: set = set()
        for d in self.unit.decls:
            if isinstance(d, A.Import) or (isinstance(d, A.FunctionDecl) and d.qualifier is not None):
                continue
            name = d.name
            if name in own:
                self.err(d.loc, f"duplicate declaration of {name}")
                continue
            if name in imported:
                self.err(d.loc, f"conflicting definition of {name}")
                continue
            if name in INTRINSICS:
                self.err(d.loc, f"{name} is a reserved intrinsic name")
                continue
            own.add(name)
            d.unit = self.unit.name
            if isinstance(d, A.ClassDecl):
                info = ClassInfo(d.name, d.base, d, self.unit.name)
                self.symbols.classes[d.name] = info
                self.classes[d.name] = info
            elif isinstance(d, A.FunctionDecl):
                d.decl_id = d.name
                self.symbols.functions[d.name] = d
                self.functions[d.name] = d
            elif isinstance(d, A.GlobalDecl):
                self.symbols.globals[d.name] = d
                self.globals[d.name] = d

    # ----------------------------------------------------------------- classes

    def build_classes(self):
        own = self.symbols.classes
        for info in own.values():
            if info.base is not None and info.base not in self.classes:
                self.err(info.decl.loc, f"unknown base class {info.base}")
                info.base = None
        # cycle detection among own classes
        state: dict = {}
        order = []

        def visit(name, stack):
            if state.get(name) == "done":
                return True
            if state.get(name) == "active":
                return False
            state[name] = "active"
            info = own[name]
            ok = True
            if info.base in own:
                ok = visit(info.base, stack + [name])
            state[name] = "done"
            if not ok:
                return False
            order.append(name)
            return True

        for name in list(own):
            if not visit(name, []):
                info = own[name]
                self.err(info.decl.loc, f"inheritance cycle involving {name}")
                info.base = None
                state[name] = "done"
                if name not in order:
                    order.append(name)
        for name in order:
            self.layout_class(own[name])

    def layout_class(self, info: ClassInfo):
        d = info.decl
        base = self.classes.get(info.base) if info.base else None
        if base is not None:
            info.fields = dict(base.fields)
            info.methods = dict(base.methods)
            info.slots = list(base.slots)
            info.vtable = dict(base.vtable)
            info.ancestors = [info.name] + base.ancestors
        else:
            info.ancestors = [info.name]
        for f in d.fields:
            f.decl_id = f"{d.name}::{f.name}"
            if f.name in info.fields or any(m.name == f.name for m in d.methods):
                self.err(f.loc, f"duplicate declaration of {f.decl_id}")
                continue
            self.resolve_type(f.type, f.loc)
            info.fields[f.name] = (f.decl_id, f.type)
        own_methods = set()
        for m in d.methods:
            m.kind, m.owner, m.unit = "method", d.name, self.unit.name
            m.decl_id = f"{d.name}::{m.name}"
            if m.name in own_methods or m.name == d.name:
                self.err(m.loc, f"duplicate declaration of {m.decl_id}")
                continue
            own_methods.add(m.name)
            inherited = base.methods.get(m.name) if base else None
            if inherited is not None:
                if m.name not in info.slots:
                    self.err(m.loc, f"duplicate declaration of {m.decl_id} (base method is not virtual)")
                    continue
                if fn_signature(inherited) != fn_signature(m):
                    self.err(m.loc, f"override {m.decl_id} does not match the signature of {inherited.decl_id}")
                    continue
            elif m.virtual:
                info.slots.append(m.name)
            info.methods[m.name] = m
            if m.name in info.slots:
                info.vtable[m.name] = m.decl_id
        if len(d.ctors) > 1:
            for c in d.ctors[1:]:
                self.err(c.loc, f"duplicate declaration of constructor {d.name}::{d.name}")
        for c in d.ctors[:1]:
            if c.name != d.name:
                self.err(c.loc, f"constructor name {c.name} does not match class {d.name}")
        if d.ctors:
            ctor = d.ctors[0]
        else:
            ctor = A.FunctionDecl(d.name, [], A.VOID, [], kind="ctor", loc=d.loc, end_loc=d.end_loc)
            ctor.implicit = True
        ctor.kind, ctor.owner, ctor.unit = "ctor", d.name, self.unit.name
        ctor.decl_id = f"{d.name}::{d.name}"
        info.ctor = ctor
        if base is not None and base.ctor is not None and base.ctor.params:
            self.err(d.loc, f"base class {base.name} constructor must take no parameters")

    def resolve_type(self, t: A.Type, loc) -> bool:
        if isinstance(t, A.ClassType):
            if t.name not in self.classes:
                self.err(loc, f"unknown type {t.name}")
                return False
        elif isinstance(t, A.FnType):
            return all(self.resolve_type(p, loc) for p in t.params) and self.resolve_type(t.ret, loc)
        return True

    def check_signature(self, fn: A.FunctionDecl):
        for p in fn.params:
            self.resolve_type(p.type, p.loc)
            if p.type == A.VOID:
                self.err(p.loc, "parameter cannot have type void")
        self.resolve_type(fn.ret, fn.loc)

    def bind_ctor_definitions(self) -> list:
        """Attach out-of-line `C::C(...) { }` definitions to their declarations."""
        bound = []
        seen = set()
        for d in self.unit.decls:
            if not (isinstance(d, A.FunctionDecl) and d.qualifier is not None):
                continue
            info = self.classes.get(d.qualifier)
            if info is None:
                self.err(d.loc, f"unknown class {d.qualifier}")
                continue
            decl_id = f"{d.qualifier}::{d.name}"
            if d.name != d.qualifier:
                self.err(d.loc, f"only constructors can be defined outside their class ({decl_id})")
                continue
            proto = info.ctor
            if proto is None or proto.body is not None or proto.implicit:
                self.err(d.loc, f"no out-of-line constructor declaration for {decl_id}")
                continue
            if decl_id in seen:
                self.err(d.loc, f"duplicate declaration of {decl_id}")
                continue
            if fn_signature(proto) != fn_signature(d):
                self.err(d.loc, f"definition of {decl_id} does not match its declaration")
                continue
            seen.add(decl_id)
            d.kind, d.owner, d.unit, d.decl_id = "ctor", info.name, self.unit.name, decl_id
            self.symbols.definitions[decl_id] = d
            bound.append(d)
        return bound

    # ----------------------------------------------------------------- globals

    def check_global(self, g: A.GlobalDecl):
        if not self.resolve_type(g.type, g.loc):
            return
        init = g.init
        base = init.expr if isinstance(init, A.Cast) else init
        if literal_value(init) is None and not isinstance(base, (A.IntLit, A.BoolLit, A.TagLit, A.FuncRef)):
            self.err(init.loc, f"initializer of global {g.name} must be a constant")
            return
        ctx = _FnCtx(A.FunctionDecl(g.name, [], A.VOID, []), None)
        self.expect_expr(init, g.type, ctx)

    # --------------------------------------------------------------- functions

    def check_function(self, fn: A.FunctionDecl, owner: Optional[ClassInfo]):
        ctx = _FnCtx(fn, owner)
        for p in fn.params:
            if p.name in ctx.all_locals:
                self.err(p.loc, f"duplicate declaration of parameter {p.name}")
                continue
            ctx.scopes[0][p.name] = ("param", p.type, p.is_ref)
            ctx.all_locals[p.name] = p.type
        self.block(fn.body, ctx)
        fn.locals = dict(ctx.all_locals)

    def block(self, stmts, ctx: _FnCtx):
        ctx.scopes.append({})
        for s in stmts:
            self.stmt(s, ctx)
        ctx.scopes.pop()

    def stmt(self, s, ctx: _FnCtx):
        if isinstance(s, A.Let):
            if s.type is not None:
                ok = self.resolve_type(s.type, s.loc)
                ty = s.type if ok else None
                if ty == A.VOID:
                    self.err(s.loc, "local cannot have type void")
                    ty = None
                if ty is not None:
                    self.expect_expr(s.init, ty, ctx)
                else:
                    self.expr(s.init, ctx)
            else:
                ty = self.expr(s.init, ctx)
                if ty == A.VOID:
                    self.err(s.init.loc, "cannot bind a void value")
                    ty = None
                elif ty is not None and literal_value(s.init) is not None:
                    ty = s.init.ty = A.I32
            if s.name in ctx.all_locals:
                self.err(s.loc, f"duplicate declaration of local {s.name}")
            s.decl_type = ty
            ctx.scopes[-1][s.name] = ("local", ty, False)
            ctx.all_locals.setdefault(s.name, ty)
        elif isinstance(s, A.Assign):
            tty = self.lvalue(s.target, ctx)
            if tty is not None:
                self.expect_expr(s.value, tty, ctx)
            else:
                self.expr(s.value, ctx)
        elif isinstance(s, A.ExprStmt):
            self.expr(s.expr, ctx)
        elif isinstance(s, A.If):
            self.condition(s.cond, ctx)
            self.block(s.then, ctx)
            if s.els is not None:
                self.block(s.els, ctx)
        elif isinstance(s, A.While):
            self.condition(s.cond, ctx)
            self.block(s.body, ctx)
            s.written = tuple(sorted(written_locals(s.body)))
        elif isinstance(s, A.Return):
            ret = ctx.fn.ret
            if s.value is None:
                if ret != A.VOID:
                    self.err(s.loc, f"missing return value of type {ret}")
            elif ret == A.VOID:
                self.err(s.loc, "void function returns a value")
                self.expr(s.value, ctx)
            else:
                self.expect_expr(s.value, ret, ctx)

    def condition(self, e, ctx):
        t = self.expr(e, ctx)
        if t is not None and t != A.BOOL and not A.is_int(t):
            self.err(e.loc, f"condition must be bool or integer, not {t}")

    def lvalue(self, e, ctx) -> Optional[A.Type]:
        if isinstance(e, A.Name):
            t = self.expr(e, ctx)
            if e.kind == "function":
                self.err(e.loc, f"cannot assign to function {e.ident}")
                return None
            return t
        if isinstance(e, A.FieldAccess):
            return self.expr(e, ctx)
        self.err(e.loc, "invalid assignment target")
        return None

    # ------------------------------------------------------------- expressions

    def expect_expr(self, e, target: A.Type, ctx) -> None:
        lit = literal_value(e)
        if lit is not None and A.is_int(target):
            lo, hi = A.int_range(target)
            if not lo <= lit <= hi:
                self.err(e.loc, f"literal {lit} out of range for {target}")
            self.set_literal_type(e, target)
            return
        t = self.expr(e, ctx)
        if t is None:
            return
        self.coerce(e, t, target)

    def set_literal_type(self, e, t):
        e.ty = t
        if isinstance(e, A.Unary):
            e.expr.ty = t

    def coerce(self, e, src, dst):
        if src == dst:
            return
        if implicit_ok(src, dst, self.classes):
            if A.is_int(src):
                e.conv = dst
            return
        self.err(e.loc, f"cannot convert {src} to {dst}")

    def expr(self, e, ctx) -> Optional[A.Type]:
        t = self._expr(e, ctx)
        e.ty = t
        return t

    def _expr(self, e, ctx) -> Optional[A.Type]:
        if isinstance(e, A.IntLit):
            return A.I32
        if isinstance(e, A.BoolLit):
            return A.BOOL
        if isinstance(e, A.TagLit):
            return A.TAG
        if isinstance(e, A.This):
            if ctx.owner is None:
                self.err(e.loc, "'this' outside of a method")
                return None
            return A.ClassType(ctx.owner.name)
        if isinstance(e, A.Name):
            return self.name(e, ctx)
        if isinstance(e, A.FieldAccess):
            ot = self.expr(e.obj, ctx)
            if ot is None:
                return None
            if not isinstance(ot, A.ClassType):
                self.err(e.loc, f"member access on non-class type {ot}")
                return None
            info = self.classes[ot.name]
            if e.name in info.fields:
                e.decl, ft = info.fields[e.name]
                return ft
            if e.name in info.methods:
                self.err(e.loc, f"method {ot.name}::{e.name} used as value")
                return None
            self.err(e.loc, f"unknown member {e.name} of class {ot.name}")
            return None
        if isinstance(e, A.Call):
            return self.call(e, ctx)
        if isinstance(e, A.New):
            info = self.classes.get(e.cls)
            if info is None:
                self.err(e.loc, f"unknown type {e.cls}")
                for a in e.args:
                    self.expr(a, ctx)
                return None
            e.ref_params = self.arguments(e, info.ctor.params, e.args, ctx, f"{e.cls}::{e.cls}")
            return A.ClassType(e.cls)
        if isinstance(e, A.FuncRef):
            fn = self.functions.get(e.name)
            if fn is None:
                self.err(e.loc, f"unknown function {e.name}")
                return None
            if any(p.is_ref for p in fn.params):
                self.err(e.loc, f"cannot take a reference to {e.name}, which has reference parameters")
                return None
            return A.FnType(tuple(p.type for p in fn.params), fn.ret)
        if isinstance(e, A.Cast):
            if not self.resolve_type(e.to, e.loc):
                self.expr(e.expr, ctx)
                return None
            st = self.expr(e.expr, ctx)
            if st is None:
                return e.to
            if A.is_int(st) and A.is_int(e.to):
                return e.to
            if isinstance(st, A.FnType) and st == e.to:
                return e.to
            self.err(e.loc, f"invalid cast from {st} to {e.to}")
            return None
        if isinstance(e, A.Downcast):
            st = self.expr(e.expr, ctx)
            info = self.classes.get(e.cls)
            if info is None:
                self.err(e.loc, f"unknown type {e.cls}")
                return None
            if st is None:
                return A.ClassType(e.cls)
            if not isinstance(st, A.ClassType) or st.name not in info.ancestors:
                self.err(e.loc, f"invalid downcast from {st} to {e.cls}")
                return None
            return A.ClassType(e.cls)
        if isinstance(e, A.Unary):
            lit = literal_value(e)
            if lit is not None:
                self.expr(e.expr, ctx)
                return A.I32
            t = self.expr(e.expr, ctx)
            if t is None:
                return None
            if e.op == "!":
                if t != A.BOOL and not A.is_int(t):
                    self.err(e.loc, f"operator ! needs bool or integer, not {t}")
                return A.BOOL
            if not A.is_int(t):
                self.err(e.loc, f"operator - needs an integer, not {t}")
                return None
            return t
        if isinstance(e, A.Binary):
            return self.binary(e, ctx)
        raise AssertionError(f"unhandled expression {type(e).__name__}")

    def binary(self, e: A.Binary, ctx) -> Optional[A.Type]:
        op = e.op
        if op in ("&&", "||"):
            self.condition(e.left, ctx)
            self.condition(e.right, ctx)
            return A.BOOL
        ll, rl = literal_value(e.left), literal_value(e.right)
        if ll is not None and rl is None:
            rt = self.expr(e.right, ctx)
            if rt is None:
                return None
            if A.is_int(rt):
                self.expect_expr(e.left, rt, ctx)
            else:
                self.expr(e.left, ctx)
            lt = e.left.ty
        elif rl is not None and ll is None:
            lt = self.expr(e.left, ctx)
            if lt is None:
                return None
            if A.is_int(lt):
                self.expect_expr(e.right, lt, ctx)
            else:
                self.expr(e.right, ctx)
            rt = e.right.ty
        else:
            lt, rt = self.expr(e.left, ctx), self.expr(e.right, ctx)
            if lt is None or rt is None:
                return None
        if A.is_int(lt) and A.is_int(rt):
            ct = common_int(lt, rt)
            if ct is None:
                self.err(e.loc, f"mismatched operand types {lt} and {rt} for {op}")
                return None
            if lt != ct:
                e.left.conv = ct
            if rt != ct:
                e.right.conv = ct
            if op in ("+", "-", "*", "/", "%"):
                return ct
            return A.BOOL
        if op in ("==", "!=") and lt == rt and lt in (A.BOOL, A.TAG):
            return A.BOOL
        self.err(e.loc, f"invalid operand types {lt} and {rt} for {op}")
        return None

    def name(self, e: A.Name, ctx) -> Optional[A.Type]:
        local = ctx.lookup(e.ident)
        if local is not None:
            kind, ty, is_ref = local
            e.kind, e.is_ref = kind, is_ref
            return ty
        if ctx.owner is not None and e.ident in ctx.owner.fields:
            e.kind = "field"
            e.decl, ty = ctx.owner.fields[e.ident]
            return ty
        if e.ident in self.globals:
            e.kind, e.decl = "global", e.ident
            return self.globals[e.ident].type
        if e.ident in self.functions or e.ident in INTRINSICS:
            self.err(e.loc, f"function {e.ident} used as value (use &{e.ident})")
            e.kind = "function"
            return None
        self.err(e.loc, f"unknown identifier {e.ident}")
        return None

    def call(self, e: A.Call, ctx) -> Optional[A.Type]:
        c = e.callee
        if isinstance(c, A.Name):
            local = ctx.lookup(c.ident)
            if local is None and ctx.owner is not None and c.ident in ctx.owner.methods:
                recv = A.This(loc=c.loc)
                recv.ty = A.ClassType(ctx.owner.name)
                return self.method_call(e, ctx.owner, c.ident, recv, ctx)
            if local is None and c.ident in INTRINSICS:
                intr = INTRINSICS[c.ident]
                e.kind, e.target = "intrinsic", intr.name
                params = [A.Param(f"a{i}", t) for i, t in enumerate(intr.params)]
                e.ref_params = self.arguments(e, params, e.args, ctx, intr.name)
                return intr.ret
            if local is None and c.ident in self.functions:
                fn = self.functions[c.ident]
                c.kind, c.decl = "function", fn.decl_id
                e.kind, e.target = "direct", fn.decl_id
                e.ref_params = self.arguments(e, fn.params, e.args, ctx, fn.decl_id)
                return fn.ret
        if isinstance(c, A.FieldAccess):
            ot = self.expr(c.obj, ctx)
            if ot is None:
                for a in e.args:
                    self.expr(a, ctx)
                return None
            if isinstance(ot, A.ClassType) and c.name in self.classes[ot.name].methods:
                return self.method_call(e, self.classes[ot.name], c.name, c.obj, ctx)
        ft = self.expr(c, ctx)
        if ft is None:
            for a in e.args:
                self.expr(a, ctx)
            return None
        if not isinstance(ft, A.FnType):
            self.err(e.loc, f"called value of type {ft} is not a function")
            return None
        e.kind = "icall"
        params = [A.Param(f"a{i}", t) for i, t in enumerate(ft.params)]
        e.ref_params = self.arguments(e, params, e.args, ctx, "indirect call")
        return ft.ret

    def method_call(self, e: A.Call, info: ClassInfo, mname: str, recv, ctx):
        m = info.methods[mname]
        e.recv = recv
        e.static_class = info.name
        if info.is_virtual(mname):
            e.kind, e.slot, e.target = "vmethod", mname, info.vtable[mname]
        else:
            e.kind, e.target = "method", m.decl_id
        e.ref_params = self.arguments(e, m.params, e.args, ctx, m.decl_id)
        return m.ret

    def arguments(self, e, params, args, ctx, what) -> tuple:
        if len(params) != len(args):
            self.err(e.loc, f"{what} expects {len(params)} argument(s), got {len(args)}")
            for a in args:
                self.expr(a, ctx)
            return tuple(False for _ in args)
        refs = []
        for p, a in zip(params, args):
            refs.append(p.is_ref)
            if p.is_ref:
                if not isinstance(a, (A.Name, A.FieldAccess)):
                    self.err(a.loc, f"argument for reference parameter {p.name} must be a variable or field")
                    self.expr(a, ctx)
                    continue
                t = self.expr(a, ctx)
                if isinstance(a, A.Name) and a.kind not in ("local", "param", "field", "global"):
                    self.err(a.loc, f"argument for reference parameter {p.name} must be a variable or field")
                elif t is not None and t != p.type:
                    self.err(a.loc, f"reference argument has type {t}, expected {p.type}")
            else:
                self.expect_expr(a, p.type, ctx)
        return tuple(refs)


def written_locals(stmts) -> set[str]:
    """Local names assigned (directly or through reference arguments) in `stmts`."""
    out = set()
    for s in stmts:
        for n in s.walk():
            if isinstance(n, A.Let):
                out.add(n.name)
            elif isinstance(n, A.Assign) and isinstance(n.target, A.Name) and n.target.kind in ("local", "param"):
                out.add(n.target.ident)
            elif isinstance(n, (A.Call, A.New)):
                for is_ref, a in zip(n.ref_params, n.args):
                    if is_ref and isinstance(a, A.Name) and a.kind in ("local", "param"):
                        out.add(a.ident)
    return out


def check_unit(unit: A.TranslationUnit, imports: dict) -> A.TranslationUnit:
    """Check `unit` in place; sets `unit.symbols` (own declarations) and
    `unit.scope` (classes and functions visible in the unit, imports included)."""
    c = Checker(unit, imports)
    unit.symbols = c.run()
    unit.scope = UnitSymbols(dict(c.classes), dict(c.functions), dict(c.globals))
    return unit
