"""Hypothesis strategies producing random MiniObj programs for property tests."""
from dataclasses import dataclass, field

from hypothesis import strategies as st

FIELDS = ("f0", "f1", "f2", "f3")


# ------------------------------------------------------- straight-line code

@dataclass
class Line:
    text: str
    reads: list  # fields read, left to right
    writes: str = None  # field stored after the reads


@st.composite
def expressions(draw, locals_, depth=0):
    """(text, fields read in evaluation order)."""
    choices = ["lit", "param", "field", "this_field"] + (["local"] if locals_ else [])
    if depth < 2:
        choices += ["bin", "bin"]
    kind = draw(st.sampled_from(choices))
    if kind == "lit":
        return str(draw(st.integers(0, 9))), []
    if kind == "param":
        return "p", []
    if kind == "local":
        return draw(st.sampled_from(sorted(locals_))), []
    if kind == "field":
        f = draw(st.sampled_from(FIELDS))
        return f, [f]
    if kind == "this_field":
        f = draw(st.sampled_from(FIELDS))
        return f"this.{f}", [f]
    lt, lr = draw(expressions(locals_, depth + 1))
    rt, rr = draw(expressions(locals_, depth + 1))
    op = draw(st.sampled_from(["+", "-", "*"]))
    return f"({lt} {op} {rt})", lr + rr


@st.composite
def straight_line_bodies(draw):
    locals_: set = set()
    lines = []
    for i in range(draw(st.integers(0, 12))):
        kind = draw(st.sampled_from(["store", "this_store", "let", "assign_local", "discard"]))
        e, reads = draw(expressions(locals_))
        if kind == "store":
            f = draw(st.sampled_from(FIELDS))
            lines.append(Line(f"{f} = {e};", reads, f))
        elif kind == "this_store":
            f = draw(st.sampled_from(FIELDS))
            lines.append(Line(f"this.{f} = {e};", reads, f))
        elif kind == "assign_local" and locals_:
            lines.append(Line(f"{draw(st.sampled_from(sorted(locals_)))} = {e};", reads))
        elif kind == "discard":
            lines.append(Line(f"let d{i}: i32 = {e};", reads))
            locals_.add(f"d{i}")
        else:
            lines.append(Line(f"let l{i}: i32 = {e};", reads))
            locals_.add(f"l{i}")
    return lines


HEADER = "class C {\n" + "".join(f"  {f}: i32;\n" for f in FIELDS) + "  C() {}\n\n  fn m(p: i32) -> i32 {\n"
BODY_INDENT = "    "
FIRST_BODY_LINE = HEADER.count("\n") + 1


def straight_line_source(lines: list) -> str:
    body = "".join(BODY_INDENT + ln.text + "\n" for ln in lines)
    return HEADER + body + BODY_INDENT + "return 0;\n  }\n}\n"


def reference_gen_kill(lines: list) -> tuple:
    """Def set {field: first line} and UseWithoutDef {(field, line)} of a straight-line body."""
    defs: dict = {}
    uses: set = set()
    for i, ln in enumerate(lines):
        line_no = FIRST_BODY_LINE + i
        for f in ln.reads:
            if f not in defs:
                uses.add((f, line_no))
        if ln.writes is not None and ln.writes not in defs:
            defs[ln.writes] = line_no
    return defs, uses


# ------------------------------------------------------- branching code

@st.composite
def branchy_blocks(draw, depth=0, counter=None):
    counter = counter if counter is not None else [0]
    out = []
    for _ in range(draw(st.integers(1, 4))):
        kinds = ["store", "read"] + (["if", "while"] if depth < 2 else [])
        kind = draw(st.sampled_from(kinds))
        f = draw(st.sampled_from(FIELDS))
        if kind == "store":
            out.append(f"{f} = p + {draw(st.integers(0, 3))};")
        elif kind == "read":
            counter[0] += 1
            out.append(f"let r{counter[0]}: i32 = {f};")
        elif kind == "if":
            k = draw(st.integers(-2, 2))
            then = draw(branchy_blocks(depth + 1, counter))
            els = draw(st.one_of(st.none(), branchy_blocks(depth + 1, counter)))
            s = f"if (p > {k}) {{ {' '.join(then)} }}"
            if els is not None:
                s += f" else {{ {' '.join(els)} }}"
            out.append(s)
        else:
            counter[0] += 1
            i = f"k{counter[0]}"
            body = draw(branchy_blocks(depth + 1, counter))
            out.append(f"let {i}: i32 = 0; while ({i} < {draw(st.integers(1, 3))}) {{ {' '.join(body)} {i} = {i} + 1; }}")
    return out


def branchy_source(stmts: list) -> str:
    return HEADER + "".join(BODY_INDENT + s + "\n" for s in stmts) + BODY_INDENT + "return 0;\n  }\n}\n"


# ------------------------------------------------------- class hierarchies

@dataclass
class Hierarchy:
    parents: list  # index of base class or None
    slots: dict  # slot -> introducing class index
    overrides: set  # (class index, slot) with its own body
    sites: list = field(default_factory=list)  # (slot, static class, [classes instantiated])

    def has_slot(self, c: int, slot: str) -> bool:
        while c is not None:
            if self.slots.get(slot) == c:
                return True
            c = self.parents[c]
        return False

    def subclasses(self, c: int) -> list:
        out = []
        for d in range(len(self.parents)):
            x = d
            while x is not None and x != c:
                x = self.parents[x]
            if x == c:
                out.append(d)
        return out


@st.composite
def hierarchies(draw):
    n = draw(st.integers(1, 6))
    parents = [None] + [draw(st.one_of(st.none(), st.integers(0, i - 1))) for i in range(1, n)]
    h = Hierarchy(parents, {}, set())
    for j in range(draw(st.integers(1, 3))):
        h.slots[f"s{j}"] = draw(st.integers(0, n - 1))
    for c in range(n):
        for s, intro in h.slots.items():
            if c != intro and h.has_slot(c, s) and draw(st.booleans()):
                h.overrides.add((c, s))
    for _ in range(draw(st.integers(1, 3))):
        s = draw(st.sampled_from(sorted(h.slots)))
        holders = [c for c in range(n) if h.has_slot(c, s)]
        static = draw(st.sampled_from(holders))
        subs = h.subclasses(static)
        objs = draw(st.lists(st.sampled_from(subs), min_size=1, max_size=2))
        h.sites.append((s, static, objs))
    return h


def hierarchy_source(h: Hierarchy) -> str:
    out = []
    for c, p in enumerate(h.parents):
        head = f"class C{c}" + (f" : C{p}" if p is not None else "")
        members = [f"  C{c}() {{}}"]
        for s, intro in sorted(h.slots.items()):
            if intro == c or (c, s) in h.overrides:
                members.append(f"  virtual fn {s}() -> i32 {{\n    return {c};\n  }}")
        out.append(head + " {\n" + "\n\n".join(members) + "\n}\n")
    body = ["  let v: var = extern_input();", "  let t: i32 = 0;"]
    for k, (s, static, objs) in enumerate(h.sites):
        body.append(f"  let o{k}: C{static} = new C{objs[0]}();")
        if len(objs) > 1:
            body.append(f"  if (tag_of(v) == Int) {{\n    o{k} = new C{objs[1]}();\n  }}")
        body.append(f"  t = t + o{k}.{s}();")
    body.append("  return t;")
    out.append("fn main() -> i32 {\n" + "\n".join(body) + "\n}\n")
    return "\n".join(out)
