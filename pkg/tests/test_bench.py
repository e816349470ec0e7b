import json

import pytest

from stagedscan.bench import TEMPLATES, CorpusError, Template, case_dirs, generate_corpus, int_universe, oracle_interpret
from stagedscan.bench.corpus import label_case, site_matched
from stagedscan.bench.templates import one
from stagedscan.frontend.ast import Loc
from stagedscan.reports import emit_candidate
from stagedscan.checkers import CheckerFinding

from conftest import CORPUS, GOLDEN, SAMPLES, program_of


def facts_for(text, **kw):
    return oracle_interpret(program_of({"main.mo": text}), **kw)


def test_int_universe():
    assert len(int_universe("i32")) == 16 and int_universe(None) == int_universe("i32")
    assert int_universe("i8") == tuple(range(-128, 128))
    assert int_universe([3, "4"]) == (3, 4)


def test_oracle_listing1():
    prog = program_of({p.name: p.read_text() for p in (SAMPLES / "listing1").glob("*.mo")})
    facts = oracle_interpret(prog)
    assert facts.sites() == {(457, Loc("foo.mo", 13, 10), "foo::x", "foo::isZero")}
    assert facts.chains() == {("main", "foo::isZero")}
    assert facts.executions == 1 and not facts.partial


def test_oracle_enumerates_inputs_and_traps():
    text = "fn main() -> i32 {\n  let v: var = extern_input();\n  return as_int(v);\n}\n"
    facts = facts_for(text, ints=[0, 1])
    assert facts.executions == 5  # two ints, two bools, one ref
    assert facts.sites(843) == {(843, Loc("main.mo", 3, 10), "as_int", "main")}


def test_oracle_sign_defects():
    text = """fn main() -> i32 {
  let v: var = extern_input();
  if (tag_of(v) != Int) {
    return 0;
  }
  let n: i32 = as_int(v);
  let u: u32 = n;
  let s: i8 = cast<i8>(n);
  let w: i32 = s;
  alloc(w);
  return 0;
}
"""
    facts = facts_for(text, ints=[-1, 5])
    assert {d[0] for d in facts.sites()} == {194, 195}
    assert {(d[0], d[1].line) for d in facts.sites()} == {(195, 7), (194, 9)}


def test_oracle_budgets_mark_partial():
    loop = "fn main() -> i32 {\n  let i: i32 = 0;\n  while (i < 100000) {\n    i = i + 1;\n  }\n  return i;\n}\n"
    facts = facts_for(loop, step_budget=500)
    assert facts.partial and facts.reasons == ["step budget"]
    many = "fn main() -> i32 {\n" + "".join(f"  let v{i}: var = extern_input();\n" for i in range(3)) + "  return 0;\n}\n"
    facts = facts_for(many, ints="i32", input_budget=100)
    assert facts.partial and "input budget" in facts.reasons
    with pytest.raises(ValueError):
        oracle_interpret(program_of({"main.mo": many}), input_budget=0)


def test_oracle_records_virtual_targets():
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

fn main() -> i32 {
  let b: B = new D();
  return b.f();
}
"""
    facts = facts_for(text)
    assert facts.call_targets[("main", Loc("main.mo", 19, 11))] == {"D::f"}
    assert facts.call_targets[("D::D", Loc("main.mo", 10, 3))] == {"B::B"}


# ------------------------------------------------------------ corpus

def test_corpus_size_and_layout():
    dirs = case_dirs(CORPUS)
    by_cwe: dict = {}
    for d in dirs:
        by_cwe.setdefault(d.parent.name, []).append(d)
        assert (d / "manifest.json").exists() and list(d.glob("*.mo"))
    assert sorted(by_cwe) == ["cwe194", "cwe195", "cwe457", "cwe843"]
    assert all(len(v) >= 40 for v in by_cwe.values())
    assert len(dirs) >= 160


def test_every_template_has_twenty_pairs():
    for cwe in (194, 195, 457, 843):
        assert len([t for t in TEMPLATES if t.cwe == cwe]) >= 20


def test_committed_corpus_matches_generator(tmp_path):
    generate_corpus(tmp_path)
    fresh = {str(p.relative_to(tmp_path)): p.read_bytes() for p in sorted(tmp_path.rglob("*")) if p.is_file()}
    committed = {str(p.relative_to(CORPUS)): p.read_bytes() for p in sorted(CORPUS.rglob("*"))
                 if p.is_file() and "out" not in p.relative_to(CORPUS).parts}
    assert fresh == committed


def test_labels_agree_with_oracle():
    for d in case_dirs(CORPUS):
        exp = json.loads((d / "expected.json").read_text())
        assert not exp["oracle"]["partial"]
        assert (exp["variant"] == "bad") == bool(exp["sites"]), d.name


def test_label_case_rejects_mislabeled_variants():
    wrong = Template(843, "wrong", "good variant traps",
                     lambda bad: one("fn main() -> i32 {\n  return as_int(var_bool(true));\n}\n"))
    with pytest.raises(CorpusError, match="good variant"):
        label_case(wrong, False)
    clean = Template(843, "clean", "bad variant never traps",
                     lambda bad: one("fn main() -> i32 {\n  return 0;\n}\n"))
    with pytest.raises(CorpusError, match="no defect"):
        label_case(clean, True)


def test_site_matching_rule():
    site = {"loc": {"file": "m.mo", "line": 5, "col": 3}, "decl": "C::x", "function": "C::get",
            "regions": [{"file": "m.mo", "start": 4, "end": 6, "function": "C::get"},
                        {"file": "m.mo", "start": 10, "end": 14, "function": "main"}]}

    def rep(line, decl="C::x", cwe=457):
        return emit_candidate(CheckerFinding(Loc("m.mo", line, 1), cwe, decl, f"{decl}->f", "msg", "f"))

    assert site_matched(site, 457, [rep(5)])
    assert site_matched(site, 457, [rep(12)])
    assert not site_matched(site, 457, [rep(8)])
    assert not site_matched(site, 457, [rep(5, "C::y")])
    assert not site_matched(site, 457, [rep(5, cwe=843)])


def test_golden_bench_results(tmp_path):
    from stagedscan.bench import run_corpus
    res = run_corpus(CORPUS, tmp_path, jobs=4)
    produced = (tmp_path / "bench-results.json").read_bytes()
    assert produced == (GOLDEN / "bench-results.json").read_bytes()
    summary = res.to_json()
    assert summary["overall"]["fn"] == 0
    assert summary["cwes"]["cwe843"]["fpr"] == 0.0
    timing = json.loads((tmp_path / "timing.json").read_text())
    assert timing["cases"] == len(case_dirs(CORPUS))
