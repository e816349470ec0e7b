import json

import jsonschema
import pytest

from stagedscan.checkers import CheckerFinding
from stagedscan.driver.manifest import load_schema
from stagedscan.frontend.ast import Loc
from stagedscan.reports import (
    CandidateReport, ReportError, emit_candidate, load_candidate, parse_candidate, query_for, render_wp_text,
    report_id, write_candidate,
)
from stagedscan.wpa import CONFIRMED, FALSE_POSITIVE, WPReport

from conftest import GOLDEN, ROOT, SAMPLES, ir_of, run_sample

GOLDEN_RUNS = {
    "listing1": ("listing1", False),
    "listing1_init": ("listing1_init", False),
    "listing3": ("listing3", False),
    "listing3_aliases": ("listing3", True),
}


def finding(line=13, col=10):
    return CheckerFinding(Loc("foo.mo", line, col), 457, "foo::x", "foo::x->foo::isZero",
                          "Potentially uninitialized object field", "foo::isZero")


def test_report_id_is_stable_and_content_addressed():
    decl = {"class": "foo", "member": "x"}
    a = report_id(457, decl, "foo::x->foo::isZero", Loc("foo.mo", 13, 10))
    assert a == report_id(457, dict(decl), "foo::x->foo::isZero", Loc("foo.mo", 13, 10))
    assert a == "650ac0d5"
    assert a != report_id(457, decl, "foo::x->foo::isZero", Loc("foo.mo", 13, 11))


def test_emit_parse_round_trip(tmp_path):
    r = emit_candidate(finding(), source_line="    if (!x) {")
    assert r.verify_id()
    path = write_candidate(r, tmp_path)
    back = load_candidate(path)
    assert back == r
    program = ir_of({p.name: p.read_text() for p in (SAMPLES / "listing1").glob("*.mo")})
    q = parse_candidate(path, program)
    assert (q.report_id, q.field, q.anchor_function, q.anchor_loc) == (r.id, "foo::x", "foo::isZero", r.loc)


def test_stale_report_is_rejected():
    program = ir_of({p.name: p.read_text() for p in (SAMPLES / "listing1").glob("*.mo")})
    r = emit_candidate(CheckerFinding(Loc("foo.mo", 1, 1), 457, "foo::gone", "foo::gone->foo::isZero",
                                      "Potentially uninitialized object field", "foo::isZero"))
    with pytest.raises(ReportError, match="stale"):
        query_for(r, program)


def test_malformed_report_json(tmp_path):
    p = tmp_path / "report-00000000.json"
    p.write_text("{not json")
    with pytest.raises(ReportError):
        load_candidate(p)
    with pytest.raises(ReportError):
        CandidateReport.from_json({"id": "x"})


def test_text_rendering_caret_under_column():
    text = emit_candidate(finding(), source_line="    if (!x) {").render_text()
    lines = text.splitlines()
    assert lines[4] == "foo.mo:13:10: warning: Potentially uninitialized object field"
    assert lines[6].index("^") == 9


def test_wp_text_lists_chain_callee_first():
    r = WPReport("650ac0d5", CONFIRMED, [["main", "foo::isZero"]])
    text = render_wp_text(r, ["main"])
    assert "Candidate callchain is: \n\nfoo::isZero()\nmain\n" in text
    fp = WPReport("650ac0d5", FALSE_POSITIVE, [], {"note": "unreachable"})
    assert "false positive (unreachable)" in render_wp_text(fp, ["main"])


def test_bundled_schema_matches_docs_copy():
    assert load_schema("report-schema.json") == json.loads((ROOT / "docs" / "report-schema.json").read_text())
    assert load_schema("manifest-schema.json") == json.loads((ROOT / "docs" / "manifest-schema.json").read_text())


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden_outputs(name, tmp_path):
    sample, aliases = GOLDEN_RUNS[name]
    out = tmp_path / "out"
    run_sample(sample, out, aliases)
    produced = sorted((out / "reports").glob("report-*")) + sorted((out / "wp").glob("wp-report-*"))
    expected = sorted(p.name for p in (GOLDEN / name).iterdir() if p.name != "summary.json")
    assert [p.name for p in produced] == expected
    for p in produced:
        assert p.read_bytes() == (GOLDEN / name / p.name).read_bytes(), p.name
    assert (out / "summary.json").read_bytes() == (GOLDEN / name / "summary.json").read_bytes()
    schema = load_schema("report-schema.json")
    for p in produced:
        if p.suffix == ".json":
            jsonschema.validate(json.loads(p.read_text()), schema)


def test_text_and_json_agree_in_goldens():
    for d in sorted(p for p in GOLDEN.iterdir() if p.is_dir()):
        for j in d.glob("report-*.json"):
            r = CandidateReport.from_json(json.loads(j.read_text()))
            assert (d / f"{j.stem}.txt").read_text() == r.render_text()
        for j in d.glob("wp-report-*.json"):
            w = WPReport.from_json(json.loads(j.read_text()))
            assert (d / f"{j.stem}.txt").read_text() == render_wp_text(w, ["main"])
