import pytest

from stagedscan.checkers import ALL_CHECKERS, REGISTRY, make_checkers
from stagedscan.engine import analyze_unit

from conftest import CORPUS, program_of


def findings(text: str, checkers=ALL_CHECKERS, extra=None):
    files = {"main.mo": text}
    files.update(extra or {})
    prog = program_of(files)
    out = []
    for unit in prog.units:
        _, fs = analyze_unit(prog, unit, None, make_checkers(checkers))
        out.extend(fs)
    return out


def by_cwe(fs, cwe):
    return [(f.loc.line, f.decl) for f in fs if f.cwe == cwe]


def test_registry_ids():
    assert ALL_CHECKERS == ("cwe194", "cwe195", "cwe457", "cwe843")
    assert {c.cwe for c in REGISTRY.values()} == {194, 195, 457, 843}
    with pytest.raises(ValueError):
        make_checkers(["cwe999"])


def test_garbage_read_only_in_owner_methods():
    text = """class C {
  x: i32;
  C() {}

  fn get() -> i32 {
    return x;
  }
}

fn peek(c: C) -> i32 {
  return c.x;
}

fn main() -> i32 {
  return 0;
}
"""
    fs = findings(text, ["cwe457"])
    assert by_cwe(fs, 457) == [(6, "C::x")]
    f = fs[0]
    assert f.local_path == "C::x->C::get"
    assert f.message == "Potentially uninitialized object field"


def test_garbage_read_silenced_by_ctor_def():
    text = "class C {\n  x: i32;\n  C() { x = 1; }\n\n  fn get() -> i32 {\n    return x;\n  }\n}\n"
    assert findings(text, ["cwe457"]) == []


def test_type_confusion_unchecked_and_checked():
    bad = "fn main() -> i32 {\n  let v: var = extern_input();\n  return as_int(v);\n}\n"
    good = ("fn main() -> i32 {\n  let v: var = extern_input();\n  if (tag_of(v) == Int) {\n"
            "    return as_int(v);\n  }\n  return 0;\n}\n")
    assert by_cwe(findings(bad, ["cwe843"]), 843) == [(3, "as_int")]
    assert findings(good, ["cwe843"]) == []


def test_type_confusion_constant_tag_mismatch():
    text = "fn main() -> i32 {\n  let v: var = var_bool(true);\n  return as_int(v);\n}\n"
    assert by_cwe(findings(text, ["cwe843"]), 843) == [(3, "as_int")]


def test_downcast_of_known_sibling():
    text = """class A {
  A() {}
}

class B : A {
  B() {}
}

class D : A {
  D() {}
}

fn main() -> i32 {
  let a: A = new D();
  let b: B = downcast<B>(a);
  return 0;
}
"""
    assert by_cwe(findings(text, ["cwe843"]), 843) == [(15, "downcast<B>")]


def test_sign_conversion_implicit_but_not_explicit():
    pre = "fn main() -> i32 {\n  let v: var = extern_input();\n  if (tag_of(v) != Int) {\n    return 0;\n  }\n  let n: i32 = as_int(v);\n"
    assert by_cwe(findings(pre + "  let u: u32 = n;\n  return 0;\n}\n", ["cwe195"]), 195)
    assert findings(pre + "  let u: u32 = cast<u32>(n);\n  return 0;\n}\n", ["cwe195"]) == []
    assert findings(pre + "  if (n >= 0) {\n    let u: u32 = n;\n  }\n  return 0;\n}\n", ["cwe195"]) == []


def test_sign_extension_reports_widening_site():
    text = """fn main() -> i32 {
  let v: var = extern_input();
  if (tag_of(v) != Int) {
    return 0;
  }
  let s: i8 = as_int8(v);
  let n: i32 = s;
  alloc(n);
  return 0;
}
"""
    fs = findings(text, ["cwe194"])
    assert [f.loc.line for f in fs if f.cwe == 194] == [7]
    assert findings(text.replace("let n: i32 = s;", "let n: i32 = cast<i32>(s);"), ["cwe194"]) == []


def test_checker_independence_on_corpus():
    cases = sorted(CORPUS.glob("cwe*/*"))[::3]
    for d in cases:
        files = {p.name: p.read_text() for p in d.glob("*.mo")}
        prog = program_of(files)
        for unit in prog.units:
            _, together = analyze_unit(prog, unit, None, make_checkers(ALL_CHECKERS))
            for cid in ALL_CHECKERS:
                _, alone = analyze_unit(prog, unit, None, make_checkers([cid]))
                cwe = REGISTRY[cid].cwe
                assert [f for f in together if f.cwe == cwe] == alone, (d.name, cid)


def test_findings_sorted_and_paths_name_unit_functions():
    for d in sorted(CORPUS.glob("cwe*/*_bad"))[::2]:
        files = {p.name: p.read_text() for p in d.glob("*.mo")}
        prog = program_of(files)
        for unit in prog.units:
            _, fs = analyze_unit(prog, unit, None, make_checkers(ALL_CHECKERS))
            assert fs == sorted(fs, key=lambda f: f.sort_key)
            local = {fid for fid, fn in prog.functions.items() if fn.unit == unit}
            for f in fs:
                assert f.function in local
                assert f.local_path.split("->")[-1] in local
