import json
import logging
import subprocess
import sys

import pytest

from stagedscan.driver import BuildCache, ManifestError, load_manifest, parse_manifest, run_all
from stagedscan.driver.cache import unit_key
from stagedscan.driver.cli import main
from stagedscan.driver.pipeline import import_closure, imports_of, run_stage1

from conftest import SAMPLES, copy_project


def tree(d):
    """{relative path: bytes} of a report directory, without timings and the cache."""
    return {str(p.relative_to(d)): p.read_bytes() for p in sorted(d.rglob("*"))
            if p.is_file() and p.name != "timing.json" and ".cache" not in p.parts}


@pytest.fixture
def listing1(tmp_path):
    return copy_project(SAMPLES / "listing1", tmp_path / "listing1")


def test_cli_run_confirmed_exits_one(listing1, capsys):
    rc = main(["run", "--manifest", str(listing1 / "manifest.json"), "-q"])
    assert rc == 1
    out = capsys.readouterr().out
    assert "candidates: 1  confirmed: 1  false positives: 0" in out
    summary = json.loads((listing1 / "out" / "summary.json").read_text())
    assert summary["reports"][0]["verdict"] == "Confirmed"


def test_cli_exit_zero_and_false_positive(tmp_path):
    proj = copy_project(SAMPLES / "listing1_init", tmp_path / "p")
    assert main(["run", "--manifest", str(proj / "manifest.json"), "-q"]) == 0
    proj1 = copy_project(SAMPLES / "listing1", tmp_path / "q")
    assert main(["run", "--manifest", str(proj1 / "manifest.json"), "-q", "--exit-zero"]) == 0


def test_cli_stage1_then_stage2(listing1):
    m = str(listing1 / "manifest.json")
    assert main(["stage1", "--manifest", m, "-q"]) == 0
    assert list((listing1 / "out" / "reports").glob("report-*.json"))
    assert main(["stage2", "--manifest", m, "-q"]) == 1
    assert (listing1 / "out" / "wp" / "wp-report-650ac0d5.json").exists()


def test_cli_overrides(listing1, tmp_path):
    out = tmp_path / "elsewhere"
    rc = main(["run", "--manifest", str(listing1 / "manifest.json"), "-q", "--checkers", "cwe843",
               "--out", str(out), "--loop-bound", "0"])
    assert rc == 0
    assert not list((out / "reports").glob("*.json"))
    with pytest.raises(SystemExit):
        main(["run", "--manifest", str(listing1 / "manifest.json"), "--checkers", "cwe1"])


def test_cli_frontend_error_exits_two(tmp_path, capsys):
    proj = copy_project(SAMPLES / "listing1", tmp_path / "p")
    (proj / "main.mo").write_text("fn main() -> i32 {\n  return nope;\n}\n")
    assert main(["run", "--manifest", str(proj / "manifest.json"), "-q"]) == 2
    assert "nope" in capsys.readouterr().err


def test_manifest_errors(tmp_path):
    with pytest.raises(ManifestError, match="units"):
        parse_manifest({}, tmp_path)
    with pytest.raises(ManifestError, match="does not exist"):
        parse_manifest({"units": ["a.mo"]}, tmp_path)
    (tmp_path / "a").mkdir()
    (tmp_path / "a" / "x.mo").write_text("")
    (tmp_path / "x.mo").write_text("")
    with pytest.raises(ManifestError, match="same unit name"):
        parse_manifest({"units": ["x.mo", "a/x.mo"]}, tmp_path)
    with pytest.raises(ManifestError):
        parse_manifest({"units": ["x.mo"], "engine": {"path_budget": 0}}, tmp_path)
    with pytest.raises(ManifestError):
        load_manifest(tmp_path / "missing.json")
    assert main(["run", "--manifest", str(tmp_path / "missing.json")]) == 2


def test_import_scan_and_closure():
    assert imports_of("import a;\nimport b;\nfn f() {}\n", "x.mo") == ["a", "b"]
    assert import_closure("c", {"c": ["b"], "b": ["a"], "a": []}) == ["a", "b", "c"]


def test_cache_key_depends_on_imports_and_config():
    src = {"a": ("a.mo", "class A { A() {} }\n"), "b": ("b.mo", "import a;\n")}
    k = unit_key("b", src, {"x": 1})
    assert k == unit_key("b", dict(src), {"x": 1})
    assert k != unit_key("b", {**src, "a": ("a.mo", "class A { A() {} }\n// edit\n")}, {"x": 1})
    assert k != unit_key("b", src, {"x": 2})


def test_cache_hits_and_clearing_keeps_reports(listing1, caplog):
    m = load_manifest(listing1 / "manifest.json")
    cache = BuildCache(listing1 / "cache")
    run_all(m, cache=cache)
    first = tree(m.out)
    with caplog.at_level(logging.INFO, logger="stagedscan.driver"):
        s1 = run_stage1(m, cache=cache)
    assert sorted(s1.cache_hits) == ["foo", "main"] and s1.analyzed == []
    assert "stage1: cache hit for unit foo" in caplog.text
    cache.clear()
    run_all(m, cache=cache)
    assert tree(m.out) == first


def test_parallel_equals_serial_and_idempotent(tmp_path):
    a = copy_project(SAMPLES / "listing1_init", tmp_path / "a")
    b = copy_project(SAMPLES / "listing1_init", tmp_path / "b")
    ma, mb = load_manifest(a / "manifest.json"), load_manifest(b / "manifest.json")
    run_all(ma, jobs=1)
    run_all(mb, jobs=4)
    assert tree(ma.out) == tree(mb.out)
    before = tree(ma.out)
    run_all(ma, jobs=1)
    assert tree(ma.out) == before


def test_timing_identity(listing1):
    m = load_manifest(listing1 / "manifest.json")
    run_all(m, cache=BuildCache(listing1 / "nocache"))
    t = json.loads((m.out / "timing.json").read_text())
    assert abs(t["TA_x"] - (t["SA_x"] + t["WPA_x"])) <= t["timer_resolution"]
    assert t["WPAvg_t"] == pytest.approx(t["WPA"] / t["queries"])
    assert t["units_analyzed"] == 2


def test_console_script_entry_point(listing1):
    r = subprocess.run([sys.executable, "-m", "stagedscan", "run", "--manifest", str(listing1 / "manifest.json")],
                       capture_output=True, text=True)
    assert r.returncode == 1
    assert "confirmed: 1" in r.stdout
    assert "stage1: analyzing unit foo" in r.stderr


def test_cache_dir_env_override(listing1, tmp_path, monkeypatch):
    shared = tmp_path / "shared-cache"
    monkeypatch.setenv("ANALYZER_CACHE_DIR", str(shared))
    m = load_manifest(listing1 / "manifest.json")
    run_all(m)
    assert list(shared.rglob("*.json")) and not (m.out / ".cache").exists()
    s1 = run_stage1(m)
    assert s1.analyzed == []
