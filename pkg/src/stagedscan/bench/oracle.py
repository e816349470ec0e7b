"""Concrete interpreter used as ground truth for the bench corpus and property tests.

Runs a checked program from its entry point once for every sequence of
`extern_input()` results drawn from a small universe (depth-first over the
choices), recording what actually goes wrong at run time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..frontend import ast as A
from ..frontend.checker import ACCESSOR_TAG, INTRINSICS
from ..frontend.program import ProgramAST

I32_SAMPLE = (-2147483648, -65536, -129, -128, -2, -1, 0, 1, 2, 7, 127, 128, 255, 256, 65535, 2147483647)
I8_RANGE = tuple(range(-128, 128))


def int_universe(kind) -> tuple:
    """Integer payloads for `extern_input`: "i32" (sample), "i8" (exhaustive) or explicit values."""
    if kind in (None, "i32"):
        return I32_SAMPLE
    if kind == "i8":
        return I8_RANGE
    return tuple(int(v) for v in kind)


@dataclass(frozen=True)
class Defect:
    cwe: int
    loc: A.Loc
    decl: str  # field DeclID, accessor, downcast<C>, sign-conversion, sign-extension:<sink>
    function: str  # DeclID of the function executing when it happened
    chain: tuple  # call stack, entry first


@dataclass
class ExecutionFacts:
    defects: set = field(default_factory=set)
    call_targets: dict = field(default_factory=dict)  # (caller, loc) -> set of callee DeclIDs
    executions: int = 0
    partial: bool = False  # some budget ran out
    reasons: list = field(default_factory=list)

    def sites(self, cwe: Optional[int] = None) -> set:
        """(cwe, loc, decl, function) with call chains dropped."""
        return {(d.cwe, d.loc, d.decl, d.function) for d in self.defects if cwe is None or d.cwe == cwe}

    def chains(self, cwe: Optional[int] = None) -> set:
        return {d.chain for d in self.defects if cwe is None or d.cwe == cwe}


# ------------------------------------------------------------------ values

@dataclass(frozen=True)
class CInt:
    v: int
    widened: frozenset = frozenset()  # sign-extension sites where the value was negative


@dataclass(frozen=True)
class CVar:
    tag: str
    payload: object  # CInt, bool or None


@dataclass(frozen=True)
class CFn:
    target: str


@dataclass(frozen=True)
class CBuf:
    size: int


class CObj:
    def __init__(self, cls: str, field_ids):
        self.cls = cls
        self.fields: dict = {f: None for f in field_ids}
        self.init: set = set()


class _Trap(Exception):
    """The execution stops (failed access, null receiver, division by zero)."""


class _OutOfSteps(Exception):
    pass


class _OutOfInputs(Exception):
    pass


class _Return(Exception):
    def __init__(self, value):
        self.value = value


def _default(t):
    if A.is_int(t):
        return CInt(0)
    if t == A.BOOL:
        return False
    if t == A.TAG:
        return "Int"
    if t == A.VAR:
        return CVar("Int", CInt(0))
    if t == A.BUF:
        return CBuf(0)
    return None


# ------------------------------------------------------------------ places

class _Place:
    """Storage a reference parameter points to."""

    def __init__(self, kind, target, name, decl=None):
        self.kind, self.target, self.name, self.decl = kind, target, name, decl


@dataclass
class _Frame:
    fn: A.FunctionDecl
    locals: dict
    refs: dict  # param name -> _Place
    this: Optional[CObj]


class _Run:
    def __init__(self, oracle: "Oracle", choices: list):
        self.o = oracle
        self.prefix = choices
        self.trace: list = []  # (choice, arity)
        self.steps = 0
        self.frames: list = []
        self.globals: dict = {}

    # -- bookkeeping --------------------------------------------------------

    def tick(self):
        self.steps += 1
        if self.steps > self.o.step_budget:
            raise _OutOfSteps()

    def choose(self, n: int) -> int:
        i = len(self.trace)
        if i >= self.o.max_inputs:
            raise _OutOfInputs()
        c = self.prefix[i] if i < len(self.prefix) else 0
        self.trace.append((c, n))
        return c

    def defect(self, cwe, loc, decl):
        chain = tuple(f.fn.decl_id for f in self.frames)
        self.o.facts.defects.add(Defect(cwe, loc, decl, chain[-1], chain))

    @property
    def top(self) -> _Frame:
        return self.frames[-1]

    # -- entry --------------------------------------------------------------

    def run(self, entry: str):
        p = self.o.program
        for name in sorted(p.globals):
            g = p.globals[name]
            self.globals[name] = self.const_init(g.init)
        fn = p.functions[entry]
        self.invoke(fn, [], [], None, None)

    def const_init(self, e):
        if isinstance(e, A.IntLit):
            return self.conv(e, CInt(e.value))
        if isinstance(e, A.Unary) and isinstance(e.expr, A.IntLit):
            return self.conv(e, CInt(-e.expr.value))
        if isinstance(e, A.BoolLit):
            return e.value
        if isinstance(e, A.TagLit):
            return e.name
        if isinstance(e, A.FuncRef):
            return CFn(e.name)
        return _default(e.ty)

    # -- calls --------------------------------------------------------------

    def invoke(self, fn: A.FunctionDecl, vals, places, this, call):
        """Run `fn`; `call` is (caller DeclID, site Loc) for recording targets."""
        self.tick()
        if call is not None:
            self.o.facts.call_targets.setdefault(call, set()).add(fn.decl_id)
        if fn.kind == "extern" or (fn.body is None and fn.kind != "ctor"):
            return _default(fn.ret)
        locals_, refs = {}, {}
        for prm, v, pl in zip(fn.params, vals, places):
            if prm.is_ref:
                refs[prm.name] = pl
            else:
                locals_[prm.name] = v
        self.frames.append(_Frame(fn, locals_, refs, this))
        try:
            if fn.kind == "ctor" and this is not None:
                base = self.o.program.classes[fn.owner].base
                if base is not None:
                    bctor = self.o.program.ctor(base)
                    self.invoke(bctor, [], [], this, (fn.decl_id, fn.loc))
            self.block(fn.body or [])
        except _Return as r:
            return r.value
        finally:
            self.frames.pop()
        return _default(fn.ret)

    # -- statements ---------------------------------------------------------

    def block(self, stmts):
        for s in stmts:
            self.stmt(s)

    def stmt(self, s):
        self.tick()
        if isinstance(s, A.Let):
            self.top.locals[s.name] = self.ev(s.init)
        elif isinstance(s, A.Assign):
            self.assign(s.target, s.value)
        elif isinstance(s, A.ExprStmt):
            self.ev(s.expr)
        elif isinstance(s, A.If):
            if self.ev(s.cond):
                self.block(s.then)
            elif s.els is not None:
                self.block(s.els)
        elif isinstance(s, A.While):
            while self.ev(s.cond):
                self.block(s.body)
                self.tick()
        elif isinstance(s, A.Return):
            raise _Return(None if s.value is None else self.ev(s.value))
        else:
            raise AssertionError(type(s).__name__)

    def assign(self, t, value_expr):
        if isinstance(t, A.FieldAccess):
            obj = self.ev(t.obj)
            v = self.ev(value_expr)
            self.store_field(obj, t.decl, v)
            return
        v = self.ev(value_expr)
        if t.kind in ("local", "param"):
            pl = self.top.refs.get(t.ident)
            if pl is not None:
                self.write_place(pl, v)
            else:
                self.top.locals[t.ident] = v
        elif t.kind == "field":
            self.store_field(self.top.this, t.decl, v)
        elif t.kind == "global":
            self.globals[t.decl] = v

    def store_field(self, obj, decl, v):
        if obj is None:
            raise _Trap("null object")
        obj.fields[decl] = v
        obj.init.add(decl)

    def load_field(self, obj, decl, e):
        if obj is None:
            raise _Trap("null object")
        if decl not in obj.init:
            self.defect(457, e.loc, decl)
            return _default(e.ty)
        return obj.fields[decl]

    def write_place(self, pl: _Place, v):
        if pl.kind == "local":
            pl.target[pl.name] = v
        elif pl.kind == "field":
            self.store_field(pl.target, pl.decl, v)
        else:
            self.globals[pl.name] = v

    def read_place(self, pl: _Place, e):
        if pl.kind == "local":
            return pl.target.get(pl.name)
        if pl.kind == "field":
            return self.load_field(pl.target, pl.decl, e)
        return self.globals[pl.name]

    # -- expressions --------------------------------------------------------

    def ev(self, e):
        v = self._ev(e)
        return self.conv(e, v) if e.conv is not None else v

    def conv(self, e, v):
        if not (isinstance(v, CInt) and A.is_int(e.ty) and e.conv is not None and A.is_int(e.conv)):
            return v
        (sw, ss), (dw, ds) = A.int_info(e.ty), A.int_info(e.conv)
        if ss and not ds and sw == dw and v.v < 0:
            self.defect(195, e.loc, "sign-conversion")
        widened = v.widened
        if ss and dw > sw and v.v < 0:
            widened = widened | {e.loc}
        return CInt(A.wrap_int(v.v, e.conv), widened)

    def _ev(self, e):
        self.tick()
        if isinstance(e, A.IntLit):
            return CInt(e.value)
        if isinstance(e, A.BoolLit):
            return e.value
        if isinstance(e, A.TagLit):
            return e.name
        if isinstance(e, A.This):
            return self.top.this
        if isinstance(e, A.Name):
            if e.kind in ("local", "param"):
                pl = self.top.refs.get(e.ident)
                if pl is not None:
                    return self.read_place(pl, e)
                return self.top.locals.get(e.ident)
            if e.kind == "field":
                return self.load_field(self.top.this, e.decl, e)
            if e.kind == "global":
                return self.globals[e.decl]
            raise AssertionError(e.kind)
        if isinstance(e, A.FieldAccess):
            return self.load_field(self.ev(e.obj), e.decl, e)
        if isinstance(e, A.Unary):
            if e.op == "-" and isinstance(e.expr, A.IntLit):
                return CInt(-e.expr.value)
            v = self.ev(e.expr)
            if e.op == "!":
                return not v
            return CInt(A.wrap_int(-v.v, e.ty), v.widened)
        if isinstance(e, A.Binary):
            return self.binary(e)
        if isinstance(e, A.FuncRef):
            return CFn(e.name)
        if isinstance(e, A.Cast):
            v = self.ev(e.expr)
            if isinstance(v, CInt) and A.is_int(e.to):
                return CInt(A.wrap_int(v.v, e.to))
            return v
        if isinstance(e, A.Downcast):
            v = self.ev(e.expr)
            if v is None:
                raise _Trap("null object")
            if e.cls not in self.o.program.classes[v.cls].ancestors:
                self.defect(843, e.loc, f"downcast<{e.cls}>")
                raise _Trap("bad downcast")
            return v
        if isinstance(e, A.New):
            return self.new(e)
        if isinstance(e, A.Call):
            return self.call(e)
        raise AssertionError(type(e).__name__)

    def binary(self, e: A.Binary):
        if e.op == "&&":
            return bool(self.ev(e.left)) and bool(self.ev(e.right))
        if e.op == "||":
            return bool(self.ev(e.left)) or bool(self.ev(e.right))
        lv, rv = self.ev(e.left), self.ev(e.right)
        if isinstance(lv, CInt) and isinstance(rv, CInt):
            a, b = lv.v, rv.v
            if e.op in ("==", "!=", "<", "<=", ">", ">="):
                return {"==": a == b, "!=": a != b, "<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[e.op]
            if e.op in ("/", "%") and b == 0:
                raise _Trap("division by zero")
            if e.op == "+":
                r = a + b
            elif e.op == "-":
                r = a - b
            elif e.op == "*":
                r = a * b
            else:
                q = abs(a) // abs(b)
                q = q if (a >= 0) == (b >= 0) else -q
                r = q if e.op == "/" else a - q * b
            return CInt(A.wrap_int(r, e.ty), lv.widened | rv.widened)
        if e.op == "==":
            return lv == rv
        if e.op == "!=":
            return lv != rv
        raise AssertionError(e.op)

    def arg_values(self, e):
        vals, places = [], []
        refs = e.ref_params or tuple(False for _ in e.args)
        for a, is_ref in zip(e.args, refs):
            if is_ref:
                vals.append(None)
                places.append(self.place_of(a))
            else:
                vals.append(self.ev(a))
                places.append(None)
        return vals, places

    def place_of(self, a) -> _Place:
        if isinstance(a, A.FieldAccess):
            obj = self.ev(a.obj)
            if obj is None:
                raise _Trap("null object")
            return _Place("field", obj, a.name, a.decl)
        if a.kind in ("local", "param"):
            pl = self.top.refs.get(a.ident)
            return pl if pl is not None else _Place("local", self.top.locals, a.ident)
        if a.kind == "field":
            return _Place("field", self.top.this, a.ident, a.decl)
        return _Place("global", None, a.decl)

    def new(self, e: A.New):
        p = self.o.program
        info = p.classes[e.cls]
        obj = CObj(e.cls, [d for d, _ in info.fields.values()])
        vals, places = self.arg_values(e)
        self.invoke(p.ctor(e.cls), vals, places, obj, (self.top.fn.decl_id, e.loc))
        return obj

    def call(self, e: A.Call):
        p = self.o.program
        site = (self.top.fn.decl_id, e.loc)
        if e.kind == "intrinsic":
            return self.intrinsic(e)
        if e.kind in ("method", "vmethod"):
            recv = self.ev(e.recv)
            vals, places = self.arg_values(e)
            if recv is None:
                raise _Trap("null receiver")
            if e.kind == "method":
                fn = p.functions[e.target]
            else:
                fn = p.functions[p.classes[recv.cls].vtable[e.slot]]
            return self.invoke(fn, vals, places, recv, site)
        if e.kind == "direct":
            vals, places = self.arg_values(e)
            return self.invoke(p.functions[e.target], vals, places, None, site)
        f = self.ev(e.callee)
        vals, places = self.arg_values(e)
        if f is None:
            raise _Trap("null function")
        fn = p.functions.get(f.target)
        if fn is None:
            self.o.facts.call_targets.setdefault(site, set()).add(f.target)
            return _default(e.ty)
        return self.invoke(fn, vals, places, None, site)

    def intrinsic(self, e: A.Call):
        name = e.target
        intr = INTRINSICS[name]
        vals, _ = self.arg_values(e)
        if intr.size_param is not None:
            size = vals[intr.size_param]
            if size.v < 0:
                for loc in sorted(size.widened):
                    self.defect(194, loc, f"sign-extension:{name}")
        if name == "extern_input":
            universe = self.o.universe
            return universe[self.choose(len(universe))]
        if name in ACCESSOR_TAG:
            v = vals[0]
            if v.tag != ACCESSOR_TAG[name]:
                self.defect(843, e.loc, name)
                raise _Trap("bad tag")
            if name == "as_bool":
                return v.payload
            if name == "as_int":
                return v.payload
            return CInt(A.wrap_int(v.payload.v, A.I8), v.payload.widened)
        if name == "tag_of":
            return vals[0].tag
        if name == "var_int":
            return CVar("Int", vals[0])
        if name == "var_bool":
            return CVar("Bool", vals[0])
        if name == "alloc":
            return CBuf(max(vals[0].v, 0))
        return None


class Oracle:
    """Enumerates executions of `program` from `entry` over all input sequences."""

    def __init__(self, program: ProgramAST, ints=None, input_budget: int = 4096,
                 step_budget: int = 20000, max_inputs: int = 4):
        if input_budget < 1 or step_budget < 1:
            raise ValueError("budgets must be at least 1")
        self.program = program
        self.universe = tuple(CVar("Int", CInt(n)) for n in int_universe(ints)) + (
            CVar("Bool", False), CVar("Bool", True), CVar("Ref", None))
        self.input_budget = input_budget
        self.step_budget = step_budget
        self.max_inputs = max_inputs
        self.facts = ExecutionFacts()

    def run(self, entry: str = "main") -> ExecutionFacts:
        prefix: list = []
        while True:
            if self.facts.executions >= self.input_budget:
                self.facts.partial = True
                self.facts.reasons.append("input budget")
                break
            r = _Run(self, prefix)
            self.facts.executions += 1
            try:
                r.run(entry)
            except (_Trap, _Return):
                pass
            except _OutOfSteps:
                self.facts.partial = True
                self.facts.reasons.append("step budget")
            except _OutOfInputs:
                self.facts.partial = True
                self.facts.reasons.append("too many inputs")
            prefix = _next_prefix(r.trace)
            if prefix is None:
                break
        self.facts.reasons = sorted(set(self.facts.reasons))
        return self.facts


def _next_prefix(trace: list) -> Optional[list]:
    for i in range(len(trace) - 1, -1, -1):
        c, n = trace[i]
        if c + 1 < n:
            return [x for x, _ in trace[:i]] + [c + 1]
    return None


def oracle_interpret(program: ProgramAST, input_budget: int = 4096, step_budget: int = 20000,
                     entry: str = "main", ints=None) -> ExecutionFacts:
    """Ground-truth facts for `program`: every run-time defect over the input universe."""
    return Oracle(program, ints, input_budget, step_budget).run(entry)
