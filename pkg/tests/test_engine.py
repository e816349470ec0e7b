import json

import pytest
from hypothesis import HealthCheck, given, settings

from stagedscan.bench import oracle_interpret
from stagedscan.engine import EngineConfig, FunctionSummary, analyze_unit, merge_paths, record_event
from stagedscan.engine.summary import DEF, USE
from stagedscan.frontend import load_sources
from stagedscan.frontend.ast import Loc

import gen
from conftest import CORPUS, program_of

QUICK = settings(deadline=None, suppress_health_check=[HealthCheck.too_slow])


def summary_of(text: str, cfg=None, fn="C::m") -> FunctionSummary:
    prog = program_of({"main.mo": text})
    ctx, _ = analyze_unit(prog, "main", cfg)
    return ctx.summaries[fn]


def member_sets(s: FunctionSummary) -> tuple:
    return set(s.def_set), {m for m, _, _ in s.use_without_def_set}


# ------------------------------------------------------------ gen-kill

def gen_kill_matches(lines) -> None:
    s = summary_of(gen.straight_line_source(lines))
    defs, uses = gen.reference_gen_kill(lines)
    assert {m.split("::")[1]: loc.line for m, loc in s.def_set.items()} == defs
    assert {(m.split("::")[1], loc.line) for m, loc, _ in s.use_without_def_set} == uses
    assert s.paths_explored == 1 and not s.truncated


@settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(gen.straight_line_bodies())
def test_gen_kill_equivalence(lines):
    gen_kill_matches(lines)


def test_gen_kill_read_then_write_same_statement():
    lines = [gen.Line("f0 = f0 + 1;", ["f0"], "f0"), gen.Line("let a: i32 = f0;", ["f0"])]
    gen_kill_matches(lines)
    defs, uses = gen.reference_gen_kill(lines)
    assert defs == {"f0": gen.FIRST_BODY_LINE} and uses == {("f0", gen.FIRST_BODY_LINE)}


def test_record_event_is_pure_and_first_def_wins():
    a, b = Loc("m.mo", 1, 1), Loc("m.mo", 2, 1)
    s0 = FunctionSummary("F")
    s1 = record_event(s0, DEF, "C::x", b)
    s2 = record_event(s1, DEF, "C::x", a)
    s3 = record_event(s2, USE, "C::x", a)
    s4 = record_event(s3, USE, "C::y", a)
    assert s0.def_set == {} and s2.def_set == {"C::x": b}
    assert s3.use_without_def_set == set()
    assert s4.used_without_def() == {"C::y"}
    with pytest.raises(ValueError):
        record_event(s0, "read", "C::x", a)


def test_merge_paths_unions_and_keeps_earliest_def():
    a, b = Loc("m.mo", 1, 1), Loc("m.mo", 5, 1)
    p1 = FunctionSummary("F", {"C::x": b}, {("C::y", a, "C::y->F")})
    p2 = FunctionSummary("F", {"C::x": a, "C::z": b}, set())
    m = merge_paths("F", [p1, p2])
    assert m.def_set == {"C::x": a, "C::z": b}
    assert m.used_without_def() == {"C::y"}
    assert FunctionSummary.from_json(json.loads(json.dumps(m.to_json()))) == m


# ------------------------------------------------------------ paths

def test_branch_read_on_one_path_only():
    s = summary_of(gen.HEADER + "    if (p > 0) { f0 = 1; }\n    let a: i32 = f0;\n    return 0;\n  }\n}\n")
    assert member_sets(s) == ({"C::f0"}, {"C::f0"})
    assert s.paths_explored == 2


def test_infeasible_branch_is_pruned():
    s = summary_of(gen.HEADER + "    let q: i32 = 1;\n    if (q > 5) { let a: i32 = f0; }\n    return 0;\n  }\n}\n")
    assert member_sets(s) == (set(), set())


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(gen.branchy_blocks())
def test_path_order_independence(stmts):
    text = gen.branchy_source(stmts)
    fwd = summary_of(text, EngineConfig(reverse_branches=False))
    rev = summary_of(text, EngineConfig(reverse_branches=True))
    assert fwd.to_json()["def_set"] == rev.to_json()["def_set"]
    assert fwd.use_without_def_set == rev.use_without_def_set


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(gen.branchy_blocks())
def test_monotone_in_loop_bound_and_path_budget(stmts):
    text = gen.branchy_source(stmts)
    prev = None
    for lb in (0, 1, 2, 3):
        d, u = member_sets(summary_of(text, EngineConfig(loop_bound=lb)))
        cur = d | u
        if prev is not None:
            assert prev <= cur
        prev = cur
    prev = None
    for pb in (1, 2, 8, 10_000):
        d, u = member_sets(summary_of(text, EngineConfig(path_budget=pb)))
        cur = d | u
        if prev is not None:
            assert prev <= cur
        prev = cur


def test_path_budget_truncation_is_reported():
    stmts = " ".join(f"if (p > {k}) {{ f0 = {k}; }}" for k in range(8))
    s = summary_of(gen.HEADER + "    " + stmts + "\n    return 0;\n  }\n}\n", EngineConfig(path_budget=4))
    assert s.truncated and s.paths_explored == 4


def test_loop_body_read_after_write_in_previous_iteration():
    text = gen.HEADER + """    let i: i32 = 0;
    while (i < 3) {
      let a: i32 = f0;
      f0 = a + 1;
      i = i + 1;
    }
    return 0;
  }
}
"""
    s = summary_of(text)
    assert member_sets(s) == ({"C::f0"}, {"C::f0"})
    assert {loc.line for _, loc, _ in s.use_without_def_set} == {gen.FIRST_BODY_LINE + 2}


def test_inlined_callee_events_attributed_to_call_site():
    text = """class C {
  x: i32;
  C() {}

  fn get() -> i32 {
    return x;
  }

  fn m() -> i32 {
    return get();
  }
}
"""
    s = summary_of(text)
    assert [(m, loc.line) for m, loc, _ in s.use_without_def_set] == [("C::x", 10)]


def test_ref_param_store_is_not_a_def():
    text = """fn set(out: ref i32) {
  out = 1;
}

class C {
  x: i32;
  C() {}

  fn m() -> i32 {
    set(x);
    return x;
  }
}
"""
    s = summary_of(text)
    assert "C::x" not in s.def_set and s.used_without_def() == {"C::x"}


def test_engine_config_validation():
    with pytest.raises(ValueError):
        EngineConfig(path_budget=0).validate()
    with pytest.raises(ValueError):
        EngineConfig(loop_bound=-1).validate()


# ------------------------------------------------------------ oracle

def test_oracle_uninit_reads_appear_in_summaries():
    checked = 0
    for d in sorted(CORPUS.glob("cwe457/*_bad")):
        files = {p.name: p.read_text() for p in d.glob("*.mo")}
        prog = load_sources({n[:-3]: (n, t) for n, t in files.items()})
        facts = oracle_interpret(prog)
        uses = set()
        for unit in prog.units:
            ctx, _ = analyze_unit(prog, unit)
            for s in ctx.summaries.values():
                uses |= {(m, loc, s.function) for m, loc, _ in s.use_without_def_set}
        for defect in facts.defects:
            chain = set(defect.chain) | {defect.function}
            assert any(m == defect.decl and (loc == defect.loc or f in chain) for m, loc, f in uses), (d.name, defect)
            checked += 1
    assert checked >= 20
