import itertools
import json

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from stagedscan.frontend import ast as A
from stagedscan.ir import IRError, IRModule, dumps_canonical, field_store_scan, link, lower_unit
from stagedscan.wpa import final_callgraph

from conftest import CORPUS, SAMPLES, program_of


def case_files(d):
    return {p.name: p.read_text() for p in sorted(d.glob("*.mo"))}


ALL_CASES = sorted(CORPUS.glob("cwe*/*")) + sorted(p for p in SAMPLES.iterdir() if p.is_dir())


def lowered(files):
    prog = program_of(files)
    return prog, {name: lower_unit(u) for name, u in prog.units.items()}


def syntactic_field_accesses(prog, unit):
    """{field: [reads, writes]} from the AST of `unit`."""
    counts: dict = {}
    for fn in prog.functions.values():
        if fn.unit != unit or fn.body is None:
            continue
        writes = set()
        for s in (n for st_ in fn.body for n in st_.walk()):
            if isinstance(s, A.Assign) and (isinstance(s.target, A.FieldAccess) or
                                           (isinstance(s.target, A.Name) and s.target.kind == "field")):
                writes.add(id(s.target))
                counts.setdefault(s.target.decl, [0, 0])[1] += 1
        for n in (n for st_ in fn.body for n in st_.walk()):
            if id(n) in writes:
                continue
            # a method callee is a FieldAccess without a field decl
            if isinstance(n, A.FieldAccess) and n.decl is not None or isinstance(n, A.Name) and n.kind == "field":
                counts.setdefault(n.decl, [0, 0])[0] += 1
    return counts


def test_load_store_counts_match_ast():
    for d in ALL_CASES:
        prog, mods = lowered(case_files(d))
        for unit, mod in mods.items():
            ir: dict = {}
            for fn in mod.functions.values():
                for ins in fn.instructions():
                    if ins.op == "load":
                        ir.setdefault(ins["field"], [0, 0])[0] += 1
                    elif ins.op == "store":
                        ir.setdefault(ins["field"], [0, 0])[1] += 1
                    elif ins.op == "addr" and ins["kind"] == "field":
                        ir.setdefault(ins["name"], [0, 0])[0] += 1
            assert ir == syntactic_field_accesses(prog, unit), (d.name, unit)


def test_instruction_locations_inside_function_extent():
    for d in ALL_CASES:
        _, mods = lowered(case_files(d))
        for mod in mods.values():
            for fn in mod.functions.values():
                file, start, end = fn.extent
                for ins in fn.instructions():
                    assert ins.loc.file == file and start <= ins.loc.line <= end, (fn.id, ins)


def test_serialization_round_trip_and_canonical_text():
    for d in ALL_CASES[::7]:
        _, mods = lowered(case_files(d))
        for mod in mods.values():
            text = mod.dumps()
            again = IRModule.loads(text)
            assert again.dumps() == text
            assert text.endswith("\n") and "\n" not in text[:-1]
            assert json.loads(text)["format"] == "mir-1"


def test_unknown_format_rejected():
    with pytest.raises(IRError):
        IRModule.from_json({"format": "mir-0", "name": "x", "entries": []})


def test_dumps_canonical_sorts_keys():
    assert dumps_canonical({"b": 1, "a": [2]}) == '{"a":[2],"b":1}\n'
    assert dumps_canonical({"b": 1, "a": 2}, compact=False) == '{\n  "a": 2,\n  "b": 1\n}\n'


def test_ctor_calls_base_ctor_and_new_calls_ctor(listing1_files):
    _, mods = lowered(listing1_files)
    main = mods["main"].functions["main"]
    ops = [(i.op, i.get("target") or i.get("cls")) for i in main.instructions() if i.op in ("new", "call")]
    assert ops[:2] == [("new", "foo"), ("call", "foo::foo")]
    _, mods = lowered({"main.mo": "class B {\n  B() {}\n}\n\nclass D : B {\n  D() {}\n}\n"})
    first = next(mods["main"].functions["D::D"].instructions())
    assert (first.op, first["target"], first["args"]) == ("call", "B::B", ["this"])


def test_vtable_layout_and_implicit_cast():
    text = """class B {
  B() {}

  virtual fn f() -> i32 {
    return 1;
  }
}

class D : B {
  D() {}

  virtual fn f() -> i32 {
    return 2;
  }
}

fn g(n: i8) -> i32 {
  return n;
}
"""
    _, mods = lowered({"main.mo": text})
    m = mods["main"]
    assert m.classes["D"].vtable == [["f", "D::f"]] and m.classes["B"].vtable == [["f", "B::f"]]
    casts = [i for i in m.functions["g"].instructions() if i.op == "cast"]
    assert casts and casts[0]["implicit"] is True and casts[0]["to"] == "i32"


# ------------------------------------------------------------ linking

def multi_unit_modules():
    out = []
    for d in ALL_CASES:
        if len(list(d.glob("*.mo"))) >= 2:
            _, mods = lowered(case_files(d))
            out.append([mods[k] for k in sorted(mods)])
    return out


MULTI = multi_unit_modules()


def shape(prog: IRModule) -> tuple:
    cg, _ = final_callgraph(prog, ["main"])
    return (sorted(prog.functions), {c: v.vtable for c, v in prog.classes.items()},
            sorted((e.caller, str(e.loc), e.callee, e.kind) for e in cg.edges))


def test_link_associative_and_order_independent():
    assert len(MULTI) >= 10
    three = [mods for mods in MULTI if len(mods) >= 3]
    assert three
    for mods in three:
        a, b, c = mods[:3]
        rest = mods[3:]
        left = link([link([a, b]), c] + rest, ["main"])
        right = link([a, link([b, c])] + rest, ["main"])
        assert shape(left) == shape(right)
    for mods in MULTI:
        base = shape(link(mods, ["main"]))
        for perm in itertools.islice(itertools.permutations(mods), 6):
            assert shape(link(list(perm), ["main"])) == base


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(MULTI), st.randoms())
def test_link_any_grouping(mods, rnd):
    mods = list(mods)
    rnd.shuffle(mods)
    cut = rnd.randint(0, len(mods))
    grouped = [link(mods[:cut])] + mods[cut:] if cut else mods
    assert shape(link(grouped, ["main"])) == shape(link(mods, ["main"]))


def test_link_errors():
    _, a = lowered({"main.mo": "fn main() -> i32 {\n  return 0;\n}\n"})
    with pytest.raises(IRError, match="duplicate symbol main"):
        link([a["main"], a["main"]], ["main"])
    with pytest.raises(IRError, match="missing entry point start"):
        link([a["main"]], ["start"])
    _, mods = lowered({"lib.mo": "fn helper() -> i32 {\n  return 1;\n}\n",
                       "main.mo": "import lib;\n\nfn main() -> i32 {\n  return helper();\n}\n"})
    with pytest.raises(IRError, match="undefined symbol helper"):
        link([mods["main"]], ["main"])
    assert link([mods["main"]]).functions  # partial link skips symbol checks


def test_field_store_scan_with_and_without_aliases():
    d = SAMPLES / "listing3"
    prog, mods = lowered(case_files(d))
    program = link(list(mods.values()), ["main"])
    assert field_store_scan(program, "AltSvc::https") == set()
    aliased = field_store_scan(program, "AltSvc::https", resolve_aliases=True)
    assert {f for f, _ in aliased} == {"scheme_is_https"}
    with pytest.raises(IRError):
        field_store_scan(program, "AltSvc::nope")
