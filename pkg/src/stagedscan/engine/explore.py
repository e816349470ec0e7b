"""Path-sensitive forward exploration of MiniObj functions.

Each function is explored path by path over the abstract domain in
`domain`. Member reads and writes update a per-path Def/UseWithoutDef
summary; the function summary is the union over explored paths. Other
observations (var accessors, downcasts, integer conversions, size sinks)
are handed to the registered checkers as events.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Optional

from ..checkers.base import (
    DOWNCAST, MEMBER_DEF, MEMBER_USE, SIGN_CONVERSION, SIZE_SINK, VAR_ACCESS, Checker, CheckerFinding, Event,
)
from ..frontend import ast as A
from ..frontend.checker import ACCESSOR_TAG, INTRINSICS
from ..frontend.program import ProgramAST
from . import domain as D
from .summary import DEF, USE, FunctionSummary, apply_event, merge_paths

log = logging.getLogger(__name__)

CMP_OPS = ("<", "<=", ">", ">=", "==", "!=")


@dataclass
class EngineConfig:
    path_budget: int = 10_000
    loop_bound: int = 2
    inline_depth: int = 3
    step_budget: int = 100_000
    reverse_branches: bool = False  # explore else-branches first

    def validate(self):
        if self.path_budget < 1 or self.loop_bound < 0 or self.inline_depth < 0 or self.step_budget < 1:
            raise ValueError(f"invalid engine configuration {self}")


class Frame:
    __slots__ = ("fn", "locals", "refs", "this", "call_site")

    def __init__(self, fn, locals, refs, this, call_site):
        self.fn = fn
        self.locals = locals
        self.refs = refs
        self.this = this
        self.call_site = call_site

    def copy(self) -> "Frame":
        return Frame(self.fn, dict(self.locals), self.refs, self.this, self.call_site)


class PathState:
    """One path: call frames (for inlined callees), summary so far, and budget."""

    __slots__ = ("frames", "summary", "path_id", "steps")

    def __init__(self, frames, summary, path_id, steps):
        self.frames = frames
        self.summary = summary
        self.path_id = path_id
        self.steps = steps

    @property
    def top(self) -> Frame:
        return self.frames[-1]

    def fork(self) -> "PathState":
        s = self.summary
        summary = FunctionSummary(s.function, dict(s.def_set), set(s.use_without_def_set))
        return PathState([f.copy() for f in self.frames], summary, self.path_id, self.steps)

    def branch(self, loc, taken: bool) -> "PathState":
        self.path_id = self.path_id + ((loc.line, loc.col, taken),)
        return self


@dataclass
class AnalysisContext:
    unit: str
    program: ProgramAST
    config: EngineConfig
    summaries: dict = field(default_factory=dict)  # DeclID -> FunctionSummary
    findings: list = field(default_factory=list)  # CheckerFinding from path checkers

    @property
    def classes(self) -> list:
        return [info for info in self.program.classes.values() if info.unit == self.unit]


class _Budget(Exception):
    pass


class Explorer:
    def __init__(self, program: ProgramAST, unit: str, config: EngineConfig | None = None,
                 checkers: list[Checker] | None = None):
        self.program = program
        self.unit = unit
        self.cfg = config or EngineConfig()
        self.cfg.validate()
        self.checkers = list(checkers or [])
        self.findings: dict = {}
        self.local_fns = {fid: fn for fid, fn in program.functions.items()
                          if fn.unit == unit and fn.body is not None}
        self.truncated = False

    # ------------------------------------------------------------ entry points

    def explore_unit(self) -> AnalysisContext:
        ctx = AnalysisContext(self.unit, self.program, self.cfg)
        for fid in sorted(self.local_fns):
            ctx.summaries[fid] = self.explore(self.local_fns[fid])
        ctx.findings = sorted(self.findings.values(), key=lambda f: f.sort_key)
        return ctx

    def explore(self, fn: A.FunctionDecl) -> FunctionSummary:
        self.truncated = False
        this = None
        if fn.owner is not None:
            this = D.ObjV(frozenset(self.program.subclasses(fn.owner)))
        locals_ = {p.name: self.top(p.type) for p in fn.params}
        refs = {p.name: None for p in fn.params if p.is_ref}
        frame = Frame(fn, locals_, refs, this, None)
        st = PathState([frame], FunctionSummary(fn.decl_id), (), self.cfg.step_budget)
        results = self.run_body(fn, st)
        finals = [s for s, _ in results]
        if len(finals) > self.cfg.path_budget:
            finals = finals[: self.cfg.path_budget]
            self.truncated = True
        summary = merge_paths(fn.decl_id, [s.summary for s in finals])
        summary.truncated = self.truncated
        summary.paths_explored = len(finals)
        if self.truncated:
            log.warning("exploration of %s truncated after %d paths", fn.decl_id, len(finals))
        return summary

    def run_body(self, fn: A.FunctionDecl, st: PathState):
        if fn.kind != "ctor":
            return self.exec_block(fn.body, st)
        states = [st]
        info = self.program.classes[fn.owner]
        if info.base is not None:
            base_ctor = self.program.ctor(info.base)
            states = []
            for s, _ in self.call(base_ctor, st, [], [], st.top.this, fn.loc):
                states.append(s)
        out = []
        for s in states:
            out.extend(self.exec_block(fn.body, s))
        return out

    # ---------------------------------------------------------------- helpers

    def top(self, t):
        return D.top_of(t, self.program.subclasses)

    def emit(self, kind, st: PathState, node, loc, **data):
        if not self.checkers:
            return
        ev = Event(kind, st, node, loc, st.top.fn.decl_id, data)
        for c in self.checkers:
            for f in c.on_event(ev):
                key = (f.cwe, f.loc, f.decl)
                prev = self.findings.get(key)
                if prev is None or f.sort_key < prev.sort_key:
                    self.findings[key] = f

    def member_event(self, kind, st: PathState, member: str, node):
        # inlined callees report at the call site inside the summarized function
        loc = st.frames[1].call_site if len(st.frames) > 1 else node.loc
        apply_event(st.summary, kind, member, loc)
        self.emit(MEMBER_USE if kind == USE else MEMBER_DEF, st, node, loc, member=member)

    def step(self, st: PathState) -> bool:
        st.steps -= 1
        if st.steps < 0:
            self.truncated = True
            return False
        return True

    def cap(self, states: list) -> list:
        if len(states) > self.cfg.path_budget:
            self.truncated = True
            return states[: self.cfg.path_budget]
        return states

    # ------------------------------------------------------------- statements

    def exec_block(self, stmts, st: PathState) -> list:
        """Returns [(state, flow)] with flow None (fell through) or ('ret', value)."""
        live = [st]
        done = []
        for s in stmts:
            nxt = []
            for cur in live:
                if not self.step(cur):
                    continue
                for out, flow in self.exec_stmt(s, cur):
                    (done if flow is not None else nxt).append((out, flow) if flow is not None else out)
            live = self.cap(nxt)
            if not live:
                break
        return done + [(s, None) for s in live]

    def exec_stmt(self, s, st: PathState) -> list:
        if isinstance(s, A.Let):
            return [(s2, None) for s2 in self._bind_let(s, st)]
        if isinstance(s, A.Assign):
            return [(s2, None) for s2 in self.assign(s, st)]
        if isinstance(s, A.ExprStmt):
            return [(s2, None) for s2, _ in self.ev(s.expr, st)]
        if isinstance(s, A.Return):
            if s.value is None:
                return [(st, ("ret", None))]
            return [(s2, ("ret", v)) for s2, v in self.ev(s.value, st)]
        if isinstance(s, A.If):
            t, f = self.cond(s.cond, st)
            out = []
            order = [(False, f), (True, t)] if self.cfg.reverse_branches else [(True, t), (False, f)]
            for taken, states in order:
                for s2 in states:
                    s2.branch(s.loc, taken)
                    if taken:
                        out.extend(self.exec_block(s.then, s2))
                    elif s.els is not None:
                        out.extend(self.exec_block(s.els, s2))
                    else:
                        out.append((s2, None))
            return out
        if isinstance(s, A.While):
            return self.exec_while(s, st)
        raise AssertionError(type(s).__name__)

    def _bind_let(self, s: A.Let, st):
        out = []
        for s2, v in self.ev(s.init, st):
            s2.top.locals[s.name] = v
            out.append(s2)
        return out

    def exec_while(self, s: A.While, st: PathState) -> list:
        out, current = [], [st]
        for _ in range(self.cfg.loop_bound):
            nxt = []
            for c in current:
                t, f = self.cond(s.cond, c)
                out.extend((x.branch(s.loc, False), None) for x in f)
                for x in t:
                    for y, flow in self.exec_block(s.body, x.branch(s.loc, True)):
                        (out.append((y, flow)) if flow is not None else nxt.append(y))
            current = self.cap(nxt)
            if not current:
                return out
        # past the unroll bound: widen loop-written locals, run one abstract
        # iteration, and leave through the exit edge
        for c in current:
            self.widen(c, s.written)
            t, f = self.cond(s.cond, c)
            out.extend((x.branch(s.loc, False), None) for x in f)
            for x in t:
                for y, flow in self.exec_block(s.body, x.branch(s.loc, True)):
                    if flow is not None:
                        out.append((y, flow))
                        continue
                    self.widen(y, s.written)
                    _, f2 = self.cond(s.cond, y)
                    out.extend((z.branch(s.loc, False), None) for z in f2)
        return out

    def widen(self, st: PathState, names):
        frame = st.top
        for n in names:
            if n not in frame.locals:
                continue
            t = (frame.fn.locals or {}).get(n)
            top = self.top(t) if t is not None else D.TOP
            target = frame.refs.get(n) if n in frame.refs else None
            if target is not None and target[0] == "local":
                st.frames[target[1]].locals[target[2]] = top
            frame.locals[n] = top

    def assign(self, s: A.Assign, st: PathState) -> list:
        tgt = s.target
        if isinstance(tgt, A.FieldAccess):
            out = []
            for s1, _ in self.ev(tgt.obj, st):
                for s2, _ in self.ev(s.value, s1):
                    self.member_event(DEF, s2, tgt.decl, tgt)
                    out.append(s2)
            return out
        out = []
        for s2, v in self.ev(s.value, st):
            if tgt.kind == "field":
                self.member_event(DEF, s2, tgt.decl, tgt)
            elif tgt.kind in ("local", "param"):
                self.write_local(s2, tgt.ident, v)
            out.append(s2)
        return out

    def write_local(self, st: PathState, name: str, v):
        frame = st.top
        if name in frame.refs:
            target = frame.refs[name]
            if target is not None and target[0] == "local":
                st.frames[target[1]].locals[target[2]] = v
            # stores through a reference to a field are deliberately not
            # credited as member definitions
            frame.locals[name] = v
            return
        frame.locals[name] = v

    def read_local(self, st: PathState, e: A.Name):
        frame = st.top
        if e.ident in frame.refs:
            target = frame.refs[e.ident]
            if target is None:
                return frame.locals.get(e.ident, self.top(e.ty))
            if target[0] == "local":
                return st.frames[target[1]].locals.get(target[2], self.top(e.ty))
            return self.top(e.ty)
        return frame.locals.get(e.ident, self.top(e.ty))

    # ------------------------------------------------------------- conditions

    def cond(self, e, st: PathState):
        """Split `st` into (states where e holds, states where it does not)."""
        if isinstance(e, A.Unary) and e.op == "!":
            t, f = self.cond(e.expr, st)
            return f, t
        if isinstance(e, A.Binary) and e.op in ("&&", "||"):
            ta, fa = self.cond(e.left, st)
            if e.op == "&&":
                T, F = [], list(fa)
                for s in ta:
                    tb, fb = self.cond(e.right, s)
                    T += tb
                    F += fb
                return T, F
            T, F = list(ta), []
            for s in fa:
                tb, fb = self.cond(e.right, s)
                T += tb
                F += fb
            return T, F
        if isinstance(e, A.Binary) and e.op in CMP_OPS:
            T, F = [], []
            for s, (lv, rv) in self.ev_list([e.left, e.right], st):
                t, f = self.split_compare(e, s, lv, rv)
                T += t
                F += f
            return T, F
        T, F = [], []
        for s, v in self.ev(e, st):
            b = D.truthy(v)
            both = b.may_true and b.may_false
            if b.may_true:
                s1 = s.fork() if both else s
                if self._refine_truthy(e, s1, True):
                    T.append(s1)
            if b.may_false:
                if self._refine_truthy(e, s, False):
                    F.append(s)
        return T, F

    def _refine_truthy(self, e, st, want: bool) -> bool:
        name = self.refinable(e)
        if name is None:
            return True
        v = st.top.locals.get(name)
        if isinstance(v, D.BoolV):
            st.top.locals[name] = D.bool_const(want)
        elif isinstance(v, D.IntV):
            r = D.refine_truthy(v, want)
            if r is None:
                return False
            st.top.locals[name] = r
        return True

    def refinable(self, e) -> Optional[str]:
        """Local name whose value `e` denotes exactly, if any."""
        if not isinstance(e, A.Name) or e.kind not in ("local", "param") or e.is_ref:
            return None
        if e.conv is not None:
            (sw, ss), (dw, ds) = A.int_info(e.ty), A.int_info(e.conv)
            if not (dw > sw and (ss == ds or not ss)):
                return None
        return e.ident

    def split_compare(self, e: A.Binary, st: PathState, lv, rv):
        T, F = [], []
        outcomes = []
        if isinstance(lv, D.IntV) and isinstance(rv, D.IntV):
            for want in (True, False):
                op = e.op if want else D._NEG[e.op]
                r = D.refine(op, lv, rv)
                if r is not None:
                    outcomes.append((want, r))
            for i, (want, (nl, nr)) in enumerate(outcomes):
                s = st if i == len(outcomes) - 1 else st.fork()
                for side, nv in ((e.left, nl), (e.right, nr)):
                    name = self.refinable(side)
                    if name is not None:
                        old = s.top.locals.get(name)
                        if isinstance(old, D.IntV):
                            s.top.locals[name] = replace(old, lo=nv.lo, hi=nv.hi)
                (T if want else F).append(s)
            return T, F
        if isinstance(lv, D.TagV) and isinstance(rv, D.TagV):
            eq_possible = bool(lv.tags & rv.tags)
            ne_possible = not (len(lv.tags) == 1 and lv.tags == rv.tags)
            results = []
            for want_eq in (True, False):
                if (eq_possible if want_eq else ne_possible):
                    results.append(want_eq)
            for i, want_eq in enumerate(results):
                s = st if i == len(results) - 1 else st.fork()
                if not self._refine_tags(e, s, lv, rv, want_eq):
                    continue
                holds = want_eq if e.op == "==" else not want_eq
                (T if holds else F).append(s)
            return T, F
        if isinstance(lv, D.BoolV) and isinstance(rv, D.BoolV):
            vals = {(a == b) if e.op == "==" else (a != b) for a in lv.vals for b in rv.vals}
            if True in vals:
                T.append(st.fork() if False in vals else st)
            if False in vals:
                F.append(st)
            return T, F
        return [st.fork()], [st]

    def _refine_tags(self, e, st, lv, rv, want_eq) -> bool:
        for side, other in ((e.left, rv), (e.right, lv)):
            if not (isinstance(side, A.Call) and side.kind == "intrinsic" and side.target == "tag_of"):
                continue
            name = self.refinable(side.args[0])
            if name is None:
                continue
            v = st.top.locals.get(name)
            if not isinstance(v, D.VarV):
                continue
            if want_eq:
                tags = v.tags & other.tags
            else:
                tags = v.tags - other.tags if len(other.tags) == 1 else v.tags
            if not tags:
                return False
            st.top.locals[name] = replace(v, tags=frozenset(tags))
        return True

    # ------------------------------------------------------------ expressions

    def ev_list(self, exprs, st: PathState) -> list:
        results = [(st, [])]
        for e in exprs:
            nxt = []
            for s, vals in results:
                for s2, v in self.ev(e, s):
                    nxt.append((s2, vals + [v]))
            results = nxt
        return results

    def ev(self, e, st: PathState) -> list:
        results = self._ev(e, st)
        if e.conv is not None and A.is_int(e.ty):
            results = [(s, self.convert(s, e, v)) for s, v in results]
        return results

    def convert(self, st, e, v):
        if not isinstance(v, D.IntV):
            return self.top(e.conv)
        src, dst = e.ty, e.conv
        (sw, ss), (dw, ds) = A.int_info(src), A.int_info(dst)
        if ss and not ds and sw == dw:
            self.emit(SIGN_CONVERSION, st, e, e.loc, value=v, src=src, dst=dst)
        out = D.convert(v, src, dst)
        if ss and dw > sw and v.may_be_negative:
            out = replace(out, widened=out.widened | {e.loc})
        return out

    def _ev(self, e, st: PathState) -> list:
        if isinstance(e, A.IntLit):
            return [(st, D.IntV(e.value, e.value))]
        if isinstance(e, A.BoolLit):
            return [(st, D.bool_const(e.value))]
        if isinstance(e, A.TagLit):
            return [(st, D.TagV(frozenset({e.name})))]
        if isinstance(e, A.This):
            return [(st, st.top.this)]
        if isinstance(e, A.Name):
            if e.kind in ("local", "param"):
                return [(st, self.read_local(st, e))]
            if e.kind == "field":
                self.member_event(USE, st, e.decl, e)
            return [(st, self.top(e.ty))]
        if isinstance(e, A.FieldAccess):
            out = []
            for s, _ in self.ev(e.obj, st):
                self.member_event(USE, s, e.decl, e)
                out.append((s, self.top(e.ty)))
            return out
        if isinstance(e, A.Unary):
            if e.op == "-" and isinstance(e.expr, A.IntLit):
                return [(st, D.IntV(-e.expr.value, -e.expr.value))]
            out = []
            for s, v in self.ev(e.expr, st):
                if e.op == "!":
                    b = D.truthy(v)
                    out.append((s, D.BoolV(frozenset(not x for x in b.vals))))
                else:
                    out.append((s, D.negate(v, e.ty) if isinstance(v, D.IntV) else self.top(e.ty)))
            return out
        if isinstance(e, A.Binary):
            if e.op in ("&&", "||") or (e.op in CMP_OPS and not A.is_int(e.left.conv or e.left.ty)):
                t, f = self.cond(e, st)
                return [(s, D.bool_const(True)) for s in t] + [(s, D.bool_const(False)) for s in f]
            out = []
            for s, (lv, rv) in self.ev_list([e.left, e.right], st):
                if not (isinstance(lv, D.IntV) and isinstance(rv, D.IntV)):
                    out.append((s, self.top(e.ty)))
                elif e.op in CMP_OPS:
                    out.append((s, D.compare(e.op, lv, rv)))
                else:
                    out.append((s, D.arith(e.op, lv, rv, e.ty)))
            return out
        if isinstance(e, A.FuncRef):
            return [(st, D.FnV(frozenset({e.name})))]
        if isinstance(e, A.Cast):
            out = []
            for s, v in self.ev(e.expr, st):
                if isinstance(v, D.IntV) and A.is_int(e.to):
                    c = D.convert(v, e.expr.conv or e.expr.ty, e.to)
                    out.append((s, replace(c, widened=frozenset())))
                else:
                    out.append((s, v))
            return out
        if isinstance(e, A.Downcast):
            out = []
            subs = frozenset(self.program.subclasses(e.cls))
            for s, v in self.ev(e.expr, st):
                classes = v.classes if isinstance(v, D.ObjV) else subs
                self.emit(DOWNCAST, s, e, e.loc, value=v, target=e.cls, allowed=subs)
                narrowed = classes & subs
                if narrowed:
                    out.append((s, D.ObjV(narrowed)))
            return out
        if isinstance(e, A.New):
            return self.ev_new(e, st)
        if isinstance(e, A.Call):
            return self.ev_call(e, st)
        raise AssertionError(type(e).__name__)

    # ------------------------------------------------------------------ calls

    def ref_target(self, st: PathState, a):
        """Evaluate a by-reference argument to a target descriptor (no read)."""
        if isinstance(a, A.FieldAccess):
            return [(s, ("field", a.decl)) for s, _ in self.ev(a.obj, st)]
        if a.kind in ("local", "param"):
            frame = st.top
            if a.ident in frame.refs:
                return [(st, frame.refs[a.ident])]
            return [(st, ("local", len(st.frames) - 1, a.ident))]
        if a.kind == "field":
            return [(st, ("field", a.decl))]
        return [(st, ("global", a.decl))]

    def eval_args(self, e, st: PathState) -> list:
        """[(state, values, ref targets)] for a call's arguments, left to right."""
        results = [(st, [], [])]
        refs = e.ref_params or tuple(False for _ in e.args)
        for a, is_ref in zip(e.args, refs):
            nxt = []
            for s, vals, tgts in results:
                if is_ref:
                    for s2, t in self.ref_target(s, a):
                        nxt.append((s2, vals + [None], tgts + [t]))
                else:
                    for s2, v in self.ev(a, s):
                        nxt.append((s2, vals + [v], tgts + [None]))
            results = nxt
        return results

    def havoc_refs(self, st: PathState, fn_params, tgts):
        for t, p_type in zip(tgts, fn_params):
            if t is not None and t[0] == "local":
                st.frames[t[1]].locals[t[2]] = self.top(p_type)

    def call(self, fn: A.FunctionDecl, st: PathState, vals, tgts, this, call_loc) -> list:
        """Inline `fn` when it is local to the unit and within depth; else havoc."""
        if fn is None or fn.decl_id not in self.local_fns or len(st.frames) - 1 >= self.cfg.inline_depth:
            if fn is not None:
                self.havoc_refs(st, [p.type for p in fn.params], tgts)
                ret = self.top(fn.ret)
            else:
                ret = D.TOP
            return [(st, ret)]
        locals_, refs = {}, {}
        for p, v, t in zip(fn.params, vals, tgts):
            if p.is_ref:
                refs[p.name] = t
                if t is not None and t[0] == "local":
                    locals_[p.name] = st.frames[t[1]].locals.get(t[2], self.top(p.type))
                else:
                    locals_[p.name] = self.top(p.type)
            else:
                locals_[p.name] = v
        st.frames.append(Frame(fn, locals_, refs, this, call_loc))
        out = []
        for s, flow in self.run_body(fn, st):
            s.frames.pop()
            if flow is not None and flow[1] is not None:
                out.append((s, flow[1]))
            else:
                out.append((s, self.top(fn.ret)))
        return out

    def ev_new(self, e: A.New, st: PathState) -> list:
        ctor = self.program.ctor(e.cls)
        obj = D.ObjV(frozenset({e.cls}))
        out = []
        for s, vals, tgts in self.eval_args(e, st):
            for s2, _ in self.call(ctor, s, vals, tgts, obj, e.loc):
                out.append((s2, obj))
        return out

    def ev_call(self, e: A.Call, st: PathState) -> list:
        kind = e.kind
        if kind == "intrinsic":
            return self.ev_intrinsic(e, st)
        out = []
        if kind in ("method", "vmethod"):
            for s, recv in self.ev(e.recv, st):
                for s2, vals, tgts in self.eval_args(e, s):
                    if kind == "method":
                        fn = self.program.functions.get(e.target)
                        out.extend(self.call(fn, s2, vals, tgts, recv, e.loc))
                    else:
                        fn = self.program.functions.get(e.target)
                        self.havoc_refs(s2, [p.type for p in fn.params], tgts)
                        out.append((s2, self.top(e.ty)))
            return out
        if kind == "direct":
            fn = self.program.functions.get(e.target)
            for s, vals, tgts in self.eval_args(e, st):
                out.extend(self.call(fn, s, vals, tgts, None, e.loc))
            return out
        # indirect call: evaluate the callee value, then arguments; no inlining
        for s, _ in self.ev(e.callee, st):
            for s2, vals, tgts in self.eval_args(e, s):
                out.append((s2, self.top(e.ty)))
        return out

    def ev_intrinsic(self, e: A.Call, st: PathState) -> list:
        name = e.target
        intr = INTRINSICS[name]
        out = []
        for s, vals, _ in self.eval_args(e, st):
            if intr.size_param is not None:
                self.emit(SIZE_SINK, s, e.args[intr.size_param], e.args[intr.size_param].loc,
                          value=vals[intr.size_param], call=e)
            if name == "extern_input":
                out.append((s, D.VarV(D.ALL_TAGS, True)))
            elif name in ACCESSOR_TAG:
                v = vals[0] if isinstance(vals[0], D.VarV) else D.VarV(D.ALL_TAGS, True)
                tag = ACCESSOR_TAG[name]
                self.emit(VAR_ACCESS, s, e, e.loc, value=v, accessor=name, tag=tag)
                if tag not in v.tags:
                    continue  # the access always fails at run time; path ends
                arg = e.args[0]
                local = self.refinable(arg)
                if local is not None:
                    s.top.locals[local] = replace(v, tags=frozenset({tag}))
                if name == "as_bool":
                    out.append((s, D.BoolV(v.bool_payload)))
                elif name == "as_int":
                    out.append((s, D.IntV(v.int_payload.lo, v.int_payload.hi)))
                else:
                    out.append((s, D.convert(D.IntV(v.int_payload.lo, v.int_payload.hi), A.I32, A.I8)))
            elif name == "tag_of":
                v = vals[0]
                out.append((s, D.TagV(v.tags if isinstance(v, D.VarV) else D.ALL_TAGS)))
            elif name == "var_int":
                p = vals[0] if isinstance(vals[0], D.IntV) else D.int_top(A.I32)
                out.append((s, D.VarV(frozenset({"Int"}), False, int_payload=D.IntV(p.lo, p.hi))))
            elif name == "var_bool":
                p = vals[0] if isinstance(vals[0], D.BoolV) else D.BOOL_TOP
                out.append((s, D.VarV(frozenset({"Bool"}), False, bool_payload=p.vals)))
            elif name == "alloc":
                out.append((s, D.BufV()))
            else:
                out.append((s, D.TOP))
        return out


def explore_function(fn: A.FunctionDecl, cfg: EngineConfig, program: ProgramAST,
                     checkers: list[Checker] | None = None) -> tuple[FunctionSummary, list[CheckerFinding]]:
    """Explore one function of `program`; returns its summary and path-checker findings."""
    ex = Explorer(program, fn.unit, cfg, checkers)
    summary = ex.explore(fn)
    return summary, sorted(ex.findings.values(), key=lambda f: f.sort_key)


def explore_unit(program: ProgramAST, unit: str, cfg: EngineConfig | None = None,
                 checkers: list[Checker] | None = None) -> AnalysisContext:
    return Explorer(program, unit, cfg, checkers).explore_unit()
