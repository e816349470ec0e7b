"""Whole-program call graph: construction, CHA, RTA and indirect-call resolution."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from ..frontend.ast import Loc
from ..ir.model import IRModule

DIRECT = "direct"
DEVIRTUALIZED = "devirtualized"
RESOLVED_INDIRECT = "resolved-indirect"
CHA = "cha"  # one of several class-hierarchy targets of a virtual call


@dataclass(frozen=True, order=True)
class Edge:
    caller: str
    loc: Loc
    callee: str
    kind: str
    slot: Optional[str] = None

    def to_json(self) -> dict:
        d = {"caller": self.caller, "loc": self.loc.to_json(), "callee": self.callee, "kind": self.kind}
        if self.slot is not None:
            d["slot"] = self.slot
        return d


@dataclass(frozen=True, order=True)
class Site:
    """A virtual or indirect call site."""

    caller: str
    loc: Loc
    kind: str  # vcall | icall
    cls: Optional[str] = None  # static receiver class (vcall)
    slot: Optional[str] = None
    operand: Optional[str] = None  # callee value (icall)


@dataclass
class ClassHierarchy:
    parent: dict  # class -> base or None
    vtables: dict  # class -> {slot: implementing DeclID}
    instantiated: frozenset = frozenset()

    @classmethod
    def from_program(cls, program: IRModule) -> "ClassHierarchy":
        return cls({c.name: c.base for c in program.classes.values()},
                   {c.name: dict(map(tuple, c.vtable)) for c in program.classes.values()})

    def ancestors(self, name: str) -> list[str]:
        out = []
        cur = name
        while cur is not None and cur not in out:
            out.append(cur)
            cur = self.parent.get(cur)
        return out

    def subclasses(self, name: str) -> list[str]:
        """Reflexive-transitive subclasses, sorted."""
        return sorted(c for c in self.parent if name in self.ancestors(c))

    def overrides(self, slot: str) -> dict:
        """class -> implementing DeclID of `slot`, for classes that have the slot."""
        return {c: vt[slot] for c, vt in sorted(self.vtables.items()) if slot in vt}

    def targets(self, cls: str, slot: str, only=None) -> list[str]:
        out = set()
        for c in self.subclasses(cls):
            if only is not None and c not in only:
                continue
            impl = self.vtables.get(c, {}).get(slot)
            if impl is not None:
                out.add(impl)
        return sorted(out)


@dataclass
class CallGraph:
    nodes: list
    edges: set = field(default_factory=set)
    sites: list = field(default_factory=list)  # every vcall / icall site
    unresolved: dict = field(default_factory=dict)  # (caller, loc) -> reason

    def copy(self) -> "CallGraph":
        return CallGraph(list(self.nodes), set(self.edges), list(self.sites), dict(self.unresolved))

    def successors(self, fn: str) -> list[str]:
        return sorted({e.callee for e in self.edges if e.caller == fn})

    def successor_map(self) -> dict:
        out: dict = {n: set() for n in self.nodes}
        for e in self.edges:
            out.setdefault(e.caller, set()).add(e.callee)
        return {k: sorted(v) for k, v in out.items()}

    def site_targets(self, caller: str, loc: Loc) -> list[str]:
        return sorted({e.callee for e in self.edges if e.caller == caller and e.loc == loc})

    def has_edge(self, caller: str, callee: str) -> bool:
        return any(e.caller == caller and e.callee == callee for e in self.edges)

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [e.to_json() for e in sorted(self.edges)],
            "unresolved": [{"caller": c, "loc": loc.to_json(), "reason": r}
                           for (c, loc), r in sorted(self.unresolved.items())],
        }


def build_callgraph(program: IRModule) -> CallGraph:
    """Direct edges (constructor calls included); vcall/icall sites unresolved."""
    cg = CallGraph(sorted(program.functions))
    for fid in cg.nodes:
        for ins in program.functions[fid].instructions():
            if ins.op == "call":
                callee = "external" if ins.get("external") else ins["target"]
                cg.edges.add(Edge(fid, ins.loc, callee, DIRECT))
            elif ins.op == "vcall":
                cg.sites.append(Site(fid, ins.loc, "vcall", cls=ins["cls"], slot=ins["slot"]))
                cg.unresolved[(fid, ins.loc)] = "virtual"
            elif ins.op == "icall":
                cg.sites.append(Site(fid, ins.loc, "icall", operand=ins["fn"]))
                cg.unresolved[(fid, ins.loc)] = "indirect"
    cg.sites.sort()
    return cg


def devirtualize_cha(cg: CallGraph, ch: ClassHierarchy) -> CallGraph:
    """Add class-hierarchy targets to vcall sites; single-target sites are devirtualized."""
    out = cg.copy()
    for s in cg.sites:
        if s.kind != "vcall":
            continue
        targets = ch.targets(s.cls, s.slot)
        if len(targets) == 1:
            out.edges.add(Edge(s.caller, s.loc, targets[0], DEVIRTUALIZED, s.slot))
            out.unresolved.pop((s.caller, s.loc), None)
        else:
            for t in targets:
                out.edges.add(Edge(s.caller, s.loc, t, CHA, s.slot))
    return out


def _defs(fn) -> dict:
    out: dict = {}
    for ins in fn.instructions():
        d = ins.get("dest")
        if d is not None:
            out.setdefault(d, []).append(ins)
    return out


def _constant_targets(program: IRModule, fn, operand: str, seen=None):
    """Function constants an operand may hold: a set, or None if not constant."""
    seen = set() if seen is None else seen
    if (fn.id, operand) in seen:
        return set()
    seen.add((fn.id, operand))
    defs = _defs(fn).get(operand)
    if not defs:
        return None  # parameter or `this`
    if any(i.op == "addr" and i["kind"] == "local" and i["name"] == operand for i in fn.instructions()):
        return None  # written through a reference
    out = set()
    for ins in defs:
        if ins.op == "funcref":
            out.add(ins["target"])
        elif ins.op == "mov" or (ins.op == "cast" and ins["kind"] == "fn"):
            sub = _constant_targets(program, fn, ins["src"], seen)
            if sub is None:
                return None
            out |= sub
        elif ins.op == "gload":
            sub = _global_targets(program, ins["global"], seen)
            if sub is None:
                return None
            out |= sub
        else:
            return None
    return out


def _global_targets(program: IRModule, name: str, seen):
    g = program.globals.get(name)
    if g is None:
        return None
    if any(i.op == "addr" and i["kind"] == "global" and i["name"] == name
           for f in program.functions.values() for i in f.instructions()):
        return None
    out = set()
    v = g["value"]
    if isinstance(v, dict) and "funcref" in v:
        out.add(v["funcref"])
    for fid in sorted(program.functions):
        f = program.functions[fid]
        for ins in f.instructions():
            if ins.op == "gstore" and ins["global"] == name:
                sub = _constant_targets(program, f, ins["src"], seen)
                if sub is None:
                    return None
                out |= sub
    return out


def resolve_indirect(cg: CallGraph, program: IRModule) -> CallGraph:
    """Resolve icall sites whose callee is a single reaching function constant."""
    out = cg.copy()
    for s in cg.sites:
        if s.kind != "icall":
            continue
        targets = _constant_targets(program, program.functions[s.caller], s.operand)
        if targets is None or not targets:
            continue
        if len(targets) > 1:
            out.unresolved[(s.caller, s.loc)] = "multiple reaching constants"
            continue
        (t,) = targets
        callee = t if t in program.functions else "external"
        out.edges.add(Edge(s.caller, s.loc, callee, RESOLVED_INDIRECT))
        out.unresolved.pop((s.caller, s.loc), None)
    return out


def instantiated_classes(cg: CallGraph, program: IRModule, ch: ClassHierarchy, entries) -> tuple[frozenset, set]:
    """RTA fixpoint: (classes with a reachable `new`, reachable functions)."""
    vsites: dict = {}
    for s in cg.sites:
        vsites.setdefault(s.caller, []).append(s)
    plain: dict = {}
    for e in cg.edges:
        if e.kind in (DIRECT, RESOLVED_INDIRECT):
            plain.setdefault(e.caller, set()).add(e.callee)
    address_taken = set()
    for f in program.functions.values():
        address_taken |= {i["target"] for i in f.instructions() if i.op == "funcref"}
    address_taken |= {g["value"]["funcref"] for g in program.globals.values()
                      if isinstance(g["value"], dict) and "funcref" in g["value"]}
    reachable: set = set()
    inst: set = set()
    work = [e for e in entries if e in program.functions]
    while work:
        while work:
            f = work.pop()
            if f in reachable or f not in program.functions:
                continue
            reachable.add(f)
            inst |= {ins["cls"] for ins in program.functions[f].instructions() if ins.op == "new"}
            work.extend(plain.get(f, ()))
        # dispatch sites may reach more code now that more classes exist
        for f in sorted(reachable):
            for s in vsites.get(f, ()):
                if s.kind == "vcall":
                    work.extend(ch.targets(s.cls, s.slot, inst))
                elif (s.caller, s.loc) in cg.unresolved:
                    work.extend(sorted(address_taken))
        work = [w for w in work if w not in reachable]
    return frozenset(inst), reachable


def rta_prune(cg: CallGraph, ch: ClassHierarchy) -> CallGraph:
    """Keep only virtual-call targets whose class is in `ch.instantiated`."""
    out = cg.copy()
    for s in cg.sites:
        if s.kind != "vcall":
            continue
        key = (s.caller, s.loc)
        keep = ch.targets(s.cls, s.slot, ch.instantiated)
        out.edges = {e for e in out.edges if not (e.caller == s.caller and e.loc == s.loc and e.kind in (CHA, DEVIRTUALIZED))}
        if len(keep) == 1:
            out.edges.add(Edge(s.caller, s.loc, keep[0], DEVIRTUALIZED, s.slot))
            out.unresolved.pop(key, None)
        elif not keep:
            out.unresolved[key] = "no instantiated receiver"
        else:
            for t in keep:
                out.edges.add(Edge(s.caller, s.loc, t, CHA, s.slot))
            out.unresolved[key] = "virtual"
    return out


@dataclass
class CallGraphConfig:
    cha: bool = True
    rta: bool = True


def final_callgraph(program: IRModule, entries, cfg: CallGraphConfig | None = None) -> tuple[CallGraph, ClassHierarchy]:
    """build -> resolve_indirect -> CHA -> RTA, as configured."""
    cfg = cfg or CallGraphConfig()
    ch = ClassHierarchy.from_program(program)
    cg = resolve_indirect(build_callgraph(program), program)
    if cfg.cha:
        cg = devirtualize_cha(cg, ch)
    if cfg.rta:
        inst, _ = instantiated_classes(cg, program, ch, entries)
        ch = replace(ch, instantiated=inst)
        cg = rta_prune(cg, ch)
    return cg, ch
