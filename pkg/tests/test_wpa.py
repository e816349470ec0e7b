import time

import pytest
from hypothesis import HealthCheck, given, settings

from stagedscan.bench import oracle_interpret
from stagedscan.frontend.ast import Loc
from stagedscan.ir import field_store_scan
from stagedscan.wpa import (
    CHA, CONFIRMED, DEVIRTUALIZED, FALSE_POSITIVE, CallGraph, CallGraphConfig, Edge, ValidationConfig, WPQuery,
    WPReport, final_callgraph, validate_garbage_read,
)

import gen
from conftest import CORPUS, ir_of, program_of


def vcall_sites(cg):
    return {(s.caller, s.loc) for s in cg.sites if s.kind == "vcall"}


def check_hierarchy(h: gen.Hierarchy):
    text = gen.hierarchy_source(h)
    files = {"main.mo": text}
    facts = oracle_interpret(program_of(files), ints=[0])
    assert not facts.partial
    prog = ir_of(files)
    cha, _ = final_callgraph(prog, ["main"], CallGraphConfig(rta=False))
    rta, _ = final_callgraph(prog, ["main"])
    sites = vcall_sites(cha)
    assert len(sites) == len(h.sites)
    for caller, loc in sites:
        observed = facts.call_targets.get((caller, loc), set())
        assert observed, (caller, loc)
        cha_t = set(cha.site_targets(caller, loc))
        rta_t = set(rta.site_targets(caller, loc))
        assert observed <= cha_t
        assert rta_t <= cha_t
        assert observed <= rta_t
        kinds = {e.kind for e in rta.edges if e.caller == caller and e.loc == loc}
        if kinds == {DEVIRTUALIZED}:
            assert len(observed) == 1
            assert observed == rta_t


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(gen.hierarchies())
def test_cha_rta_against_oracle(h):
    check_hierarchy(h)


def test_hierarchy_suite_runtime():
    t0 = time.perf_counter()
    h = gen.Hierarchy([None, 0, 0, 1, 1, 2], {"s0": 0, "s1": 1, "s2": 2},
                      {(1, "s0"), (3, "s0"), (4, "s1"), (5, "s2")},
                      [("s0", 0, [3, 5]), ("s1", 1, [4]), ("s2", 2, [5, 2])])
    check_hierarchy(h)
    assert time.perf_counter() - t0 < 1.0


def test_rta_devirtualizes_single_instantiated_class():
    h = gen.Hierarchy([None, 0, 0], {"s0": 0}, {(1, "s0"), (2, "s0")}, [("s0", 0, [1])])
    prog = ir_of({"main.mo": gen.hierarchy_source(h)})
    cha, _ = final_callgraph(prog, ["main"], CallGraphConfig(rta=False))
    rta, ch = final_callgraph(prog, ["main"])
    (site,) = vcall_sites(cha)
    assert cha.site_targets(*site) == ["C0::s0", "C1::s0", "C2::s0"]
    assert {e.kind for e in cha.edges if (e.caller, e.loc) == site} == {CHA}
    assert rta.site_targets(*site) == ["C1::s0"]
    assert ch.instantiated == frozenset({"C1"})


def test_indirect_call_through_constant_function_pointer():
    text = """fn a() -> i32 {
  return 1;
}

fn b() -> i32 {
  return 2;
}

fn main() -> i32 {
  let f: fn() -> i32 = &a;
  return f();
}
"""
    cg, _ = final_callgraph(ir_of({"main.mo": text}), ["main"])
    assert cg.successors("main") == ["a"]
    assert not cg.unresolved


# ------------------------------------------------------------ validation

def toy_graph(edges):
    nodes = sorted({x for e in edges for x in e})
    return CallGraph(nodes, {Edge(a, Loc("t.mo", i + 1, 1), b, "direct") for i, (a, b) in enumerate(edges)})


def q(field="C::x", anchor="get"):
    return WPQuery("deadbeef", field, anchor, Loc("t.mo", 1, 1))


def test_validation_confirms_store_free_chain():
    cg = toy_graph([("main", "init"), ("main", "get"), ("init", "set")])
    r = validate_garbage_read(q(), cg, set(), ["main"])
    assert r.verdict == CONFIRMED and r.chains == [["main", "get"]]


def test_validation_store_on_every_chain_is_false_positive():
    cg = toy_graph([("main", "use"), ("use", "get")])
    r = validate_garbage_read(q(), cg, {("use", Loc("t.mo", 9, 1))}, ["main"])
    assert r.verdict == FALSE_POSITIVE and r.stats["note"] == "all loads have a matching store"


def test_validation_unreachable_anchor():
    cg = toy_graph([("main", "a"), ("other", "get")])
    r = validate_garbage_read(q(), cg, set(), ["main"])
    assert r.verdict == FALSE_POSITIVE and r.stats["note"] == "unreachable"


def test_validation_anchor_own_store_does_not_discharge():
    cg = toy_graph([("main", "get")])
    r = validate_garbage_read(q(), cg, {("get", Loc("t.mo", 4, 1))}, ["main"])
    assert r.verdict == CONFIRMED


def test_validation_chain_cap_and_determinism():
    edges = [("main", f"m{i}") for i in range(6)] + [(f"m{i}", "get") for i in range(6)]
    cg = toy_graph(edges)
    r1 = validate_garbage_read(q(), cg, set(), ["main"], cfg=ValidationConfig(chain_cap=3))
    r2 = validate_garbage_read(q(), cg, set(), ["main"], cfg=ValidationConfig(chain_cap=3))
    assert r1.chains == [["main", "m0", "get"], ["main", "m1", "get"], ["main", "m2", "get"]]
    assert r1.to_json() == r2.to_json()


def test_wp_report_shape_is_enforced():
    with pytest.raises(ValueError):
        WPReport("x", CONFIRMED, [])
    with pytest.raises(ValueError):
        WPReport("x", FALSE_POSITIVE, [["main"]])


def test_ctor_of_subclass_credits_caller():
    text = """class B {
  x: i32;
  B() {}

  fn get() -> i32 {
    return x;
  }
}

class D : B {
  D() { x = 1; }
}

fn main() -> i32 {
  let b: B = new D();
  return b.get();
}
"""
    prog = ir_of({"main.mo": text})
    cg, ch = final_callgraph(prog, ["main"])
    r = validate_garbage_read(WPQuery("r", "B::x", "B::get", Loc("main.mo", 6, 12)), cg,
                              field_store_scan(prog, "B::x"), ["main"], ch)
    assert r.verdict == FALSE_POSITIVE


# ------------------------------------------------------------ corpus-wide

def corpus_programs(pattern):
    for d in sorted(CORPUS.glob(pattern)):
        files = {p.name: p.read_text() for p in d.glob("*.mo")}
        yield d, files


def test_chains_replay_as_call_graph_edges(tmp_path):
    from stagedscan.driver import load_manifest
    from stagedscan.driver.pipeline import run_stage1, run_stage2
    n = 0
    for d, _ in corpus_programs("cwe457/*_bad"):
        m = load_manifest(d / "manifest.json")
        m.out = tmp_path / d.name
        s1 = run_stage1(m)
        s2 = run_stage2(m, s1)
        prog = ir_of({p.name: p.read_text() for p in d.glob("*.mo")})
        cg, _ = final_callgraph(prog, ["main"])
        for w in s2.wp_reports:
            for chain in w.chains:
                assert chain[0] == "main" and chain[-1] == w.anchor_function
                for a, b in zip(chain, chain[1:]):
                    assert cg.has_edge(a, b), (d.name, a, b)
                n += 1
    assert n >= 20


def test_oracle_chains_replay_in_final_call_graph():
    for d, files in corpus_programs("cwe457/*_bad"):
        facts = oracle_interpret(program_of(files))
        cg, _ = final_callgraph(ir_of(files), ["main"])
        for chain in facts.chains(457):
            for a, b in zip(chain, chain[1:]):
                assert cg.has_edge(a, b), (d.name, chain)


def test_cha_sound_on_corpus_executions():
    for d, files in corpus_programs("cwe*/*"):
        prog = program_of(files)
        facts = oracle_interpret(prog, ints=[0, -1, 1])
        cha, _ = final_callgraph(ir_of(files), ["main"], CallGraphConfig(rta=False))
        for (caller, loc), targets in facts.call_targets.items():
            if (caller, loc) in vcall_sites(cha):
                assert targets <= set(cha.site_targets(caller, loc)), d.name
