"""Lowering of checked MiniObj units to IR modules.

Lowering is unoptimized and 1:1 for member accesses: every syntactic field
read becomes one `load`, every field assignment one `store`.
"""
from __future__ import annotations

from typing import Optional

from ..frontend import ast as A
from .model import Block, IRClass, IRFunction, IRModule, make


def _t(t) -> str:
    return str(t)


class _FnLowering:
    def __init__(self, fn: A.FunctionDecl, classes: dict, functions: dict):
        self.fn = fn
        self.classes = classes  # name -> ClassInfo visible in the unit
        self.functions = functions  # DeclID -> FunctionDecl visible in the unit
        self.blocks: list[Block] = []
        self.cur: Optional[Block] = None
        self.ntemp = 0
        self.nlabel = 0
        self.refs = {p.name for p in fn.params if p.is_ref}

    # -- helpers ------------------------------------------------------------

    def temp(self) -> str:
        self.ntemp += 1
        return f"%{self.ntemp}"

    def new_block(self, hint: str) -> Block:
        b = Block(f"{hint}{self.nlabel}" if self.blocks else "entry")
        self.nlabel += 1
        self.blocks.append(b)
        return b

    def emit(self, op, loc, **attrs):
        if self.cur is None:
            # code after a return: give it an unreachable block of its own
            self.cur = self.new_block("dead")
        ins = make(op, loc, **attrs)
        self.cur.instrs.append(ins)
        if op in ("br", "jmp", "ret"):
            self.cur = None
        return ins

    # -- function -----------------------------------------------------------

    def run(self) -> IRFunction:
        fn = self.fn
        self.cur = self.new_block("entry")
        params = []
        if fn.owner is not None:
            params.append({"name": "this", "type": fn.owner, "ref": False})
        params += [{"name": p.name, "type": _t(p.type), "ref": p.is_ref} for p in fn.params]
        if fn.kind == "ctor":
            base = self.classes[fn.owner].base
            if base is not None:
                self.emit("call", fn.loc, target=f"{base}::{base}", args=["this"])
        self.stmts(fn.body or [])
        if self.cur is not None:
            self.emit("ret", fn.end_loc)
        locals_ = {k: _t(v) for k, v in sorted((fn.locals or {}).items())}
        extent = (fn.loc.file, fn.loc.line, fn.end_loc.line)
        return IRFunction(fn.decl_id, fn.unit, fn.kind, fn.owner, params, _t(fn.ret), locals_, extent, self.blocks)

    # -- statements ---------------------------------------------------------

    def stmts(self, stmts):
        for s in stmts:
            self.stmt(s)

    def stmt(self, s):
        if isinstance(s, A.Let):
            v = self.expr(s.init)
            self.emit("mov", s.loc, dest=s.name, src=v)
        elif isinstance(s, A.Assign):
            self.assign(s)
        elif isinstance(s, A.ExprStmt):
            self.expr(s.expr)
        elif isinstance(s, A.Return):
            v = self.expr(s.value) if s.value is not None else None
            self.emit("ret", s.loc, value=v)
        elif isinstance(s, A.If):
            c = self.expr(s.cond)
            then_b, join = self.new_block("then"), None
            else_b = self.new_block("else") if s.els is not None else None
            join = self.new_block("join")
            self.emit("br", s.loc, cond=c, then=then_b.label, **{"else": (else_b or join).label})
            self.cur = then_b
            self.stmts(s.then)
            if self.cur is not None:
                self.emit("jmp", s.loc, target=join.label)
            if else_b is not None:
                self.cur = else_b
                self.stmts(s.els)
                if self.cur is not None:
                    self.emit("jmp", s.loc, target=join.label)
            self.cur = join
        elif isinstance(s, A.While):
            head = self.new_block("loop")
            body = self.new_block("body")
            done = self.new_block("done")
            self.emit("jmp", s.loc, target=head.label)
            self.cur = head
            c = self.expr(s.cond)
            self.emit("br", s.loc, cond=c, then=body.label, **{"else": done.label})
            self.cur = body
            self.stmts(s.body)
            if self.cur is not None:
                self.emit("jmp", s.loc, target=head.label)
            self.cur = done
        else:
            raise AssertionError(type(s).__name__)

    def assign(self, s: A.Assign):
        t = s.target
        if isinstance(t, A.FieldAccess):
            obj = self.expr(t.obj)
            v = self.expr(s.value)
            self.emit("store", t.loc, obj=obj, field=t.decl, src=v)
            return
        v = self.expr(s.value)
        if t.kind == "field":
            self.emit("store", t.loc, obj="this", field=t.decl, src=v)
        elif t.kind == "global":
            self.emit("gstore", t.loc, **{"global": t.decl, "src": v})
        elif t.ident in self.refs:
            self.emit("rstore", t.loc, param=t.ident, src=v)
        else:
            self.emit("mov", t.loc, dest=t.ident, src=v)

    # -- expressions --------------------------------------------------------

    def expr(self, e) -> str:
        v = self._expr(e)
        if e.conv is not None and e.conv != e.ty:
            d = self.temp()
            self.emit("cast", e.loc, dest=d, kind="int" if A.is_int(e.ty) else "up", src=v,
                      to=_t(e.conv), implicit=True)
            v = d
        return v

    def _expr(self, e) -> str:
        if isinstance(e, (A.IntLit, A.BoolLit, A.TagLit)):
            d = self.temp()
            value = e.name if isinstance(e, A.TagLit) else e.value
            self.emit("const", e.loc, dest=d, type=_t(e.ty), value=value)
            return d
        if isinstance(e, A.This):
            return "this"
        if isinstance(e, A.Name):
            d = self.temp()
            if e.kind == "field":
                self.emit("load", e.loc, dest=d, obj="this", field=e.decl)
            elif e.kind == "global":
                self.emit("gload", e.loc, dest=d, **{"global": e.decl})
            elif e.ident in self.refs:
                self.emit("rload", e.loc, dest=d, param=e.ident)
            else:
                self.emit("mov", e.loc, dest=d, src=e.ident)
            return d
        if isinstance(e, A.FieldAccess):
            obj = self.expr(e.obj)
            d = self.temp()
            self.emit("load", e.loc, dest=d, obj=obj, field=e.decl)
            return d
        if isinstance(e, A.Unary):
            if e.op == "-" and isinstance(e.expr, A.IntLit):
                d = self.temp()
                self.emit("const", e.loc, dest=d, type=_t(e.ty), value=-e.expr.value)
                return d
            v = self.expr(e.expr)
            d = self.temp()
            self.emit("unop", e.loc, dest=d, operator=e.op, src=v)
            return d
        if isinstance(e, A.Binary):
            if e.op in ("&&", "||"):
                return self.short_circuit(e)
            lhs = self.expr(e.left)
            rhs = self.expr(e.right)
            d = self.temp()
            self.emit("binop", e.loc, dest=d, operator=e.op, lhs=lhs, rhs=rhs)
            return d
        if isinstance(e, A.FuncRef):
            d = self.temp()
            self.emit("funcref", e.loc, dest=d, target=e.name)
            return d
        if isinstance(e, A.Cast):
            v = self.expr(e.expr)
            d = self.temp()
            self.emit("cast", e.loc, dest=d, kind="int" if A.is_int(e.to) else "fn", src=v, to=_t(e.to))
            return d
        if isinstance(e, A.Downcast):
            v = self.expr(e.expr)
            d = self.temp()
            self.emit("cast", e.loc, dest=d, kind="down", src=v, to=e.cls)
            return d
        if isinstance(e, A.New):
            d = self.temp()
            self.emit("new", e.loc, dest=d, cls=e.cls)
            args, alias = self.args(e)
            self.emit("call", e.loc, target=f"{e.cls}::{e.cls}", args=[d] + args, alias=_shift(alias))
            return d
        if isinstance(e, A.Call):
            return self.call(e)
        raise AssertionError(type(e).__name__)

    def short_circuit(self, e: A.Binary) -> str:
        d = self.temp()
        lhs = self.expr(e.left)
        self.emit("mov", e.loc, dest=d, src=lhs)
        rhs_b, join = self.new_block("rhs"), self.new_block("join")
        if e.op == "&&":
            self.emit("br", e.loc, cond=d, then=rhs_b.label, **{"else": join.label})
        else:
            self.emit("br", e.loc, cond=d, then=join.label, **{"else": rhs_b.label})
        self.cur = rhs_b
        rhs = self.expr(e.right)
        self.emit("mov", e.loc, dest=d, src=rhs)
        self.emit("jmp", e.loc, target=join.label)
        self.cur = join
        return d

    def args(self, e) -> tuple[list, dict]:
        """Lower call arguments; by-reference ones become `addr` values.

        Returns (operands, alias) where alias maps argument index to the
        field DeclID for reference arguments naming a field.
        """
        out, alias = [], {}
        refs = e.ref_params or tuple(False for _ in e.args)
        for i, (a, is_ref) in enumerate(zip(e.args, refs)):
            if not is_ref:
                out.append(self.expr(a))
                continue
            d = self.temp()
            if isinstance(a, A.FieldAccess):
                obj = self.expr(a.obj)
                self.emit("addr", a.loc, dest=d, kind="field", name=a.decl, obj=obj)
                alias[i] = a.decl
            elif a.kind == "field":
                self.emit("addr", a.loc, dest=d, kind="field", name=a.decl, obj="this")
                alias[i] = a.decl
            elif a.kind == "global":
                self.emit("addr", a.loc, dest=d, kind="global", name=a.decl)
            elif a.ident in self.refs:
                self.emit("mov", a.loc, dest=d, src=a.ident)
            else:
                self.emit("addr", a.loc, dest=d, kind="local", name=a.ident)
            out.append(d)
        return out, alias

    def call(self, e: A.Call) -> str:
        d = self.temp() if e.ty != A.VOID else None
        if e.kind == "intrinsic":
            args, _ = self.args(e)
            self.emit("call", e.loc, dest=d, target=e.target, args=args, external=True)
        elif e.kind == "direct":
            args, alias = self.args(e)
            ext = True if self.functions[e.target].kind == "extern" else None
            self.emit("call", e.loc, dest=d, target=e.target, args=args, alias=alias or None, external=ext)
        elif e.kind == "method":
            recv = self.expr(e.recv)
            args, alias = self.args(e)
            self.emit("call", e.loc, dest=d, target=e.target, args=[recv] + args, alias=_shift(alias))
        elif e.kind == "vmethod":
            recv = self.expr(e.recv)
            args, _ = self.args(e)
            self.emit("vcall", e.loc, dest=d, recv=recv, cls=e.static_class, slot=e.slot, args=args)
        else:
            f = self.expr(e.callee)
            args, _ = self.args(e)
            self.emit("icall", e.loc, dest=d, fn=f, args=args)
        return d if d is not None else "%void"


def _shift(alias: dict) -> Optional[dict]:
    """Reindex alias positions past the leading receiver argument."""
    return {i + 1: f for i, f in alias.items()} or None


def lower_unit(unit: A.TranslationUnit) -> IRModule:
    """Lower one checked unit (its own classes, functions and globals)."""
    syms = unit.symbols
    visible_classes = unit.scope.classes
    visible_fns = {fn.decl_id: fn for fn in unit.scope.functions.values()}
    mod = IRModule(unit.name)
    for name, info in syms.classes.items():
        vtable = [[s, info.vtable[s]] for s in info.slots]
        mod.classes[name] = IRClass(name, info.base, unit.name, [[d, _t(t)] for d, t in info.fields.values()], vtable)
    bodies = []
    for d in unit.decls:
        if isinstance(d, A.FunctionDecl):
            if d.kind == "extern":
                mod.externs[d.name] = {"params": [_t(p.type) for p in d.params], "ret": _t(d.ret)}
            elif d.body is not None:
                bodies.append(d)
        elif isinstance(d, A.ClassDecl) and d.name in syms.classes:
            ctor = syms.classes[d.name].ctor
            if ctor.body is not None:
                bodies.append(ctor)
            bodies.extend(d.methods)
        elif isinstance(d, A.GlobalDecl):
            mod.globals[d.name] = {"type": _t(d.type), "value": _global_value(d.init), "unit": unit.name}
    for fn in bodies:
        mod.functions[fn.decl_id] = _FnLowering(fn, visible_classes, visible_fns).run()
    return mod


def _global_value(init):
    if isinstance(init, A.Cast):
        init = init.expr
    if isinstance(init, A.FuncRef):
        return {"funcref": init.name}
    if isinstance(init, A.Unary):
        return -init.expr.value
    if isinstance(init, A.TagLit):
        return init.name
    return init.value


