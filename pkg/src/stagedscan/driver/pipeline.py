"""Stage 1 (per-unit exploration), IR linking, and stage 2 (candidate validation)."""
from __future__ import annotations

import json
import logging
import shutil
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from ..checkers import make_checkers
from ..engine import EngineConfig, analyze_unit
from ..frontend import FrontendError, load_sources
from ..frontend.parser import tokenize
from ..ir import IRError, IRModule, dumps_canonical, field_store_scan, link, lower_unit
from ..reports import CandidateReport, ReportError, emit_candidate, query_for, write_candidate, write_wp
from ..wpa import CONFIRMED, ValidationConfig, final_callgraph, validate_garbage_read
from .cache import BuildCache, unit_key
from .manifest import Manifest

log = logging.getLogger("stagedscan.driver")

CLOCK = time.perf_counter
TIMER_RESOLUTION = time.get_clock_info("perf_counter").resolution


# ------------------------------------------------------------------ stage 1

def imports_of(text: str, file: str) -> list[str]:
    """Names imported by a unit (token scan; syntax errors surface later)."""
    try:
        toks = tokenize(text, file)
    except FrontendError:
        return []
    out = []
    for a, b, c in zip(toks, toks[1:], toks[2:]):
        if a.kind == "kw" and a.text == "import" and b.kind == "ident" and c.text == ";":
            out.append(b.text)
    return out


def import_closure(unit: str, graph: dict) -> list[str]:
    seen, stack = set(), [unit]
    while stack:
        u = stack.pop()
        if u in seen or u not in graph:
            continue
        seen.add(u)
        stack.extend(graph[u])
    return sorted(seen)


def analyze_unit_job(unit: str, sources: dict, config: dict) -> dict:
    """Stage 1 for one unit: parse (with imports), lower, explore, check, emit.

    Runs in a worker process; takes and returns plain data only.
    """
    t0 = CLOCK()
    try:
        program = load_sources(sources)
    except FrontendError as e:
        return {"unit": unit, "error": str(e)}
    tu = program.units[unit]
    module = lower_unit(tu)
    t1 = CLOCK()
    checkers = make_checkers(config["checkers"])
    ctx, findings = analyze_unit(program, unit, EngineConfig(**config["engine"]), checkers)
    reports = []
    for f in findings:
        s = ctx.summaries.get(f.function)
        meta = {"truncated": bool(s and s.truncated), "paths_explored": s.paths_explored if s else 0}
        reports.append(emit_candidate(f, meta, tu.line_text(f.loc.line)).to_json())
    t2 = CLOCK()
    truncated = sorted(fid for fid, s in ctx.summaries.items() if s.truncated)
    return {
        "unit": unit,
        "reports": sorted(reports, key=lambda r: r["id"]),
        "ir": module.to_json(),
        "truncated": truncated,
        "n_t": t1 - t0,
        "sa": t2 - t1,
    }


@dataclass
class Stage1Result:
    reports: list = field(default_factory=list)  # CandidateReport, sorted by id
    modules: dict = field(default_factory=dict)  # unit -> IRModule
    errors: dict = field(default_factory=dict)  # unit -> message
    analyzed: list = field(default_factory=list)  # units run this time (cache misses)
    cache_hits: list = field(default_factory=list)
    n_t: float = 0.0
    sa: float = 0.0


def _stage1_config(m: Manifest) -> dict:
    return {"engine": asdict(m.engine), "checkers": list(m.checkers)}


def _reset_dir(path: Path) -> None:
    if path.exists():
        shutil.rmtree(path)
    path.mkdir(parents=True)


def run_stage1(m: Manifest, jobs: int = 1, cache: Optional[BuildCache] = None) -> Stage1Result:
    cache = cache or BuildCache.for_output(m.out)
    sources = {p.stem: (p.name, p.read_text(encoding="utf-8")) for p in m.units}
    graph = {u: imports_of(text, file) for u, (file, text) in sources.items()}
    config = _stage1_config(m)
    results: dict = {}
    pending = []
    for unit in sorted(sources):
        subset = {u: sources[u] for u in import_closure(unit, graph)}
        key = unit_key(unit, subset, config)
        hit = cache.get(key)
        if hit is not None and "error" not in hit:
            log.info("stage1: cache hit for unit %s", unit)
            results[unit] = hit
        else:
            log.info("stage1: analyzing unit %s", unit)
            pending.append((unit, subset, key))
    if jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(pending))) as pool:
            futures = [pool.submit(analyze_unit_job, u, s, config) for u, s, _ in pending]
            outputs = [f.result() for f in futures]
    else:
        outputs = [analyze_unit_job(u, s, config) for u, s, _ in pending]
    for (unit, _, key), out in zip(pending, outputs):
        results[unit] = out
        if "error" not in out:
            cache.put(key, out)

    analyzed = {u for u, _, _ in pending}
    res = Stage1Result(analyzed=[u for u, _, _ in pending],
                       cache_hits=sorted(set(sources) - {u for u, _, _ in pending}))
    reports_dir, ir_dir = m.out / "reports", m.out / "ir"
    _reset_dir(reports_dir)
    _reset_dir(ir_dir)
    for unit in sorted(results):
        out = results[unit]
        if "error" in out:
            log.error("stage1: unit %s failed:\n%s", unit, out["error"])
            res.errors[unit] = out["error"]
            continue
        for fid in out["truncated"]:
            log.warning("stage1: exploration of %s was truncated by the path budget", fid)
        if unit in analyzed:
            # cached results carry the timings of the run that produced them
            res.n_t += out["n_t"]
            res.sa += out["sa"]
        module = IRModule.from_json(out["ir"])
        res.modules[unit] = module
        (ir_dir / f"{unit}.mir.json").write_text(module.dumps(), encoding="utf-8")
        for r in out["reports"]:
            res.reports.append(CandidateReport.from_json(r))
    res.reports.sort(key=lambda r: r.id)
    for r in res.reports:
        write_candidate(r, reports_dir)
    log.info("stage1: %d unit(s) analyzed, %d cache hit(s), %d report(s)",
             len(res.analyzed), len(res.cache_hits), len(res.reports))
    return res


# ------------------------------------------------------------------ stage 2

@dataclass
class Stage2Result:
    wp_reports: list = field(default_factory=list)  # WPReport, sorted by id
    errors: dict = field(default_factory=dict)  # report id or "link" -> message
    total: float = 0.0  # wall time of the whole stage
    queries: int = 0
    query_times: dict = field(default_factory=dict)


def load_stage1_outputs(m: Manifest) -> Stage1Result:
    """Reports and IR modules previously written by stage 1."""
    res = Stage1Result()
    for p in sorted((m.out / "reports").glob("report-*.json")):
        res.reports.append(CandidateReport.from_json(json.loads(p.read_text(encoding="utf-8"))))
    for p in sorted((m.out / "ir").glob("*.mir.json")):
        res.modules[p.name[: -len(".mir.json")]] = IRModule.loads(p.read_text(encoding="utf-8"))
    res.reports.sort(key=lambda r: r.id)
    return res


def default_entries(m: Manifest, functions) -> list[str]:
    if m.entries:
        return list(m.entries)
    return ["main"] if "main" in functions else []


def run_stage2(m: Manifest, stage1: Optional[Stage1Result] = None) -> Stage2Result:
    t0 = CLOCK()
    s1 = stage1 if stage1 is not None else load_stage1_outputs(m)
    res = Stage2Result()
    wp_dir = m.out / "wp"
    _reset_dir(wp_dir)
    candidates = [r for r in s1.reports if r.cwe == 457]
    if s1.errors:
        res.errors["link"] = "stage 1 failed for unit(s) " + ", ".join(sorted(s1.errors))
        res.total = CLOCK() - t0
        return res
    all_fns = {f for mod in s1.modules.values() for f in mod.functions}
    entries = default_entries(m, all_fns)
    try:
        program = link([s1.modules[u] for u in sorted(s1.modules)], entries)
    except IRError as e:
        res.errors["link"] = str(e)
        res.total = CLOCK() - t0
        return res
    if not entries and candidates:
        res.errors["link"] = "no entry points (declare \"entries\" in the manifest or define main)"
        res.total = CLOCK() - t0
        return res
    (m.out / "program.mir.json").write_text(program.dumps(), encoding="utf-8")
    cg, ch = final_callgraph(program, entries)
    (m.out / "callgraph.json").write_text(dumps_canonical(cg.to_json(), compact=False), encoding="utf-8")
    vcfg = ValidationConfig(chain_cap=m.wpa.chain_cap)
    stores_by_field: dict = {}
    for r in candidates:
        tq = CLOCK()
        try:
            q = query_for(r, program)
        except ReportError as e:
            res.errors[r.id] = str(e)
            continue
        if q.field not in stores_by_field:
            stores_by_field[q.field] = field_store_scan(program, q.field, m.wpa.resolve_ref_aliases)
        wp = validate_garbage_read(q, cg, stores_by_field[q.field], entries, ch, vcfg)
        write_wp(wp, entries, wp_dir)
        res.wp_reports.append(wp)
        res.query_times[r.id] = CLOCK() - tq
    res.queries = len(candidates)
    res.total = CLOCK() - t0
    return res


# ------------------------------------------------------------------ whole run

@dataclass
class ExitSummary:
    candidates: int = 0  # garbage-read candidates sent to stage 2
    confirmed: int = 0
    false_positives: int = 0
    stage1_final: int = 0  # findings of checkers without a second stage
    errors: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)

    def exit_code(self, exit_zero: bool = False) -> int:
        if self.errors:
            return 2
        if exit_zero:
            return 0
        return 1 if self.confirmed + self.stage1_final > 0 else 0

    def to_json(self) -> dict:
        return {
            "candidates": self.candidates, "confirmed": self.confirmed,
            "false_positives": self.false_positives, "stage1_final": self.stage1_final,
            "errors": dict(sorted(self.errors.items())), "reports": self.reports,
        }


def timing_json(s1: Stage1Result, s2: Optional[Stage2Result]) -> dict:
    n_t = s1.n_t
    wpa = s2.total if s2 is not None else 0.0
    queries = s2.queries if s2 is not None else 0
    norm = (lambda x: x / n_t) if n_t > 0 else (lambda x: 0.0)
    sa_x, wpa_x = norm(s1.sa), norm(wpa)
    return {
        "N_t": n_t,
        "SA": s1.sa,
        "WPA": wpa,
        "SA_x": sa_x,
        "WPA_x": wpa_x,
        "TA_x": sa_x + wpa_x,
        "WPAvg_t": wpa / queries if queries else 0.0,
        "queries": queries,
        "timer_resolution": TIMER_RESOLUTION,
        "units_analyzed": len(s1.analyzed),
        "cache_hits": len(s1.cache_hits),
    }


def summarize(s1: Stage1Result, s2: Optional[Stage2Result]) -> ExitSummary:
    out = ExitSummary()
    verdicts = {w.report_id: w.verdict for w in (s2.wp_reports if s2 else [])}
    for r in s1.reports:
        entry = {"id": r.id, "cwe": r.cwe, "local_path": r.local_path, "loc": str(r.loc)}
        if r.cwe == 457:
            out.candidates += 1
            v = verdicts.get(r.id)
            if v is not None:
                entry["verdict"] = v
                if v == CONFIRMED:
                    out.confirmed += 1
                else:
                    out.false_positives += 1
        else:
            out.stage1_final += 1
        out.reports.append(entry)
    out.errors.update({f"unit {u}": msg for u, msg in s1.errors.items()})
    if s2 is not None:
        out.errors.update(s2.errors)
    return out


def write_run_outputs(m: Manifest, s1: Stage1Result, s2: Optional[Stage2Result]) -> ExitSummary:
    summary = summarize(s1, s2)
    (m.out / "summary.json").write_text(dumps_canonical(summary.to_json(), compact=False), encoding="utf-8")
    (m.out / "timing.json").write_text(dumps_canonical(timing_json(s1, s2), compact=False), encoding="utf-8")
    return summary


def run_all(m: Manifest, jobs: int = 1, cache: Optional[BuildCache] = None) -> ExitSummary:
    m.out.mkdir(parents=True, exist_ok=True)
    s1 = run_stage1(m, jobs, cache)
    s2 = run_stage2(m, s1)
    return write_run_outputs(m, s1, s2)
