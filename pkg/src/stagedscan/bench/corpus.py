"""Corpus generation (oracle-labeled) and the detection-rate harness."""
from __future__ import annotations

import json
import logging
import shutil
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..driver.manifest import load_manifest
from ..driver.pipeline import CLOCK, run_stage1, run_stage2, timing_json, write_run_outputs
from ..frontend.program import load_sources
from ..ir.model import dumps_canonical
from ..reports import decl_id
from ..wpa.validate import CONFIRMED
from .oracle import oracle_interpret
from .templates import TEMPLATES, Template

log = logging.getLogger(__name__)

CWES = (194, 195, 457, 843)


class CorpusError(Exception):
    pass


# ------------------------------------------------------------------ generation

def case_id(t: Template, index: int, bad: bool) -> str:
    return f"{index:02d}_{t.name}_{'bad' if bad else 'good'}"


def label_case(t: Template, bad: bool, input_budget: int = 4096, step_budget: int = 20000) -> tuple:
    """Build one case and check its variant against the oracle.

    Returns (CaseSource, ExecutionFacts, expected sites). Raises CorpusError
    when the oracle disagrees with the variant or could not finish.
    """
    src = t.make(bad)
    sources = {Path(f).stem: (f, text) for f, text in src.files.items()}
    program = load_sources(sources)
    facts = oracle_interpret(program, input_budget, step_budget, ints=src.ints)
    what = f"{t.cwe}/{t.name}/{'bad' if bad else 'good'}"
    if facts.partial:
        raise CorpusError(f"{what}: oracle incomplete ({', '.join(facts.reasons)})")
    own = {d for d in facts.defects if d.cwe == t.cwe}
    others = {d.cwe for d in facts.defects} - {t.cwe}
    if others:
        raise CorpusError(f"{what}: unrelated defects of CWE {sorted(others)}")
    if bad and not own:
        raise CorpusError(f"{what}: bad variant has no defect at run time")
    if not bad and own:
        raise CorpusError(f"{what}: good variant has a defect at run time")
    regions: dict = {}
    for d in own:
        key = (d.loc, d.decl, d.function)
        for fn in (*d.chain, d.function):
            if fn in program.functions:
                regions.setdefault(key, set()).add(program.extent(fn) + (fn,))
    sites = []
    for (loc, decl, fn) in sorted(regions, key=lambda k: (k[0].file, k[0].line, k[0].col, k[1])):
        sites.append({
            "loc": loc.to_json(), "decl": decl, "function": fn,
            "regions": [{"file": f, "start": s, "end": e, "function": g}
                        for f, s, e, g in sorted(regions[(loc, decl, fn)])],
        })
    return src, facts, sites


def write_case(root: Path, t: Template, index: int, bad: bool, **budgets) -> Path:
    src, facts, sites = label_case(t, bad, **budgets)
    cid = case_id(t, index, bad)
    d = root / f"cwe{t.cwe}" / cid
    if d.exists():
        shutil.rmtree(d)
    d.mkdir(parents=True)
    for name, text in src.files.items():
        (d / name).write_text(text, encoding="utf-8")
    units = src.units or sorted(src.files)
    manifest = {"units": units, "entries": ["main"], "checkers": [f"cwe{t.cwe}"], "out": "out",
                "oracle": {"ints": src.ints}}
    (d / "manifest.json").write_text(dumps_canonical(manifest, compact=False), encoding="utf-8")
    expected = {
        "id": cid, "cwe": t.cwe, "variant": "bad" if bad else "good", "template": t.name,
        "description": t.summary,
        "oracle": {"ints": src.ints, "executions": facts.executions, "partial": facts.partial},
        "sites": sites,
    }
    (d / "expected.json").write_text(dumps_canonical(expected, compact=False), encoding="utf-8")
    return d


def generate_corpus(root, cwes=CWES, **budgets) -> list:
    """Write every template's bad and good case under `root`; returns the case dirs."""
    root = Path(root)
    out = []
    for cwe in cwes:
        shutil.rmtree(root / f"cwe{cwe}", ignore_errors=True)
        ts = [t for t in TEMPLATES if t.cwe == cwe]
        for i, t in enumerate(ts, 1):
            for bad in (True, False):
                out.append(write_case(root, t, i, bad, **budgets))
    return out


def case_dirs(root) -> list:
    return sorted(p.parent for p in Path(root).glob("cwe*/*/expected.json"))


# ------------------------------------------------------------------ evaluation

def final_reports(s1, s2) -> list:
    """Reports that survive the whole pipeline: Confirmed garbage reads and all others."""
    verdicts = {w.report_id: w.verdict for w in (s2.wp_reports if s2 else [])}
    return [r for r in s1.reports if r.cwe != 457 or verdicts.get(r.id) == CONFIRMED]


def site_matched(site: dict, cwe: int, reports: list) -> bool:
    """A report of the same CWE points at the defect or into a function on a call chain to it."""
    for r in reports:
        if r.cwe != cwe:
            continue
        if cwe == 457 and decl_id(r.decl) != site["decl"]:
            continue
        if r.loc.to_json() == site["loc"]:
            return True
        for g in site["regions"]:
            if r.loc.file == g["file"] and g["start"] <= r.loc.line <= g["end"]:
                return True
    return False


@dataclass
class CaseOutcome:
    case: str
    cwe: int
    variant: str
    tp: int = 0
    fn: int = 0
    fp: int = 0
    tn: int = 0
    reports: list = field(default_factory=list)  # "cwe@loc" of final reports
    errors: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"case": self.case, "cwe": self.cwe, "variant": self.variant, "tp": self.tp, "fn": self.fn,
                "fp": self.fp, "tn": self.tn, "reports": self.reports, "errors": self.errors}


def evaluate_case(case_dir, out_root=None) -> CaseOutcome:
    case_dir = Path(case_dir)
    expected = json.loads((case_dir / "expected.json").read_text(encoding="utf-8"))
    m = load_manifest(case_dir / "manifest.json")
    if out_root is not None:
        m.out = (Path(out_root) / f"cwe{expected['cwe']}" / expected["id"]).resolve()
    m.out.mkdir(parents=True, exist_ok=True)
    s1 = run_stage1(m, jobs=1)
    s2 = run_stage2(m, s1)
    summary = write_run_outputs(m, s1, s2)
    finals = final_reports(s1, s2)
    cwe = expected["cwe"]
    out = CaseOutcome(expected["id"], cwe, expected["variant"])
    out.reports = sorted(f"{r.cwe}@{r.loc}" for r in finals)
    out.errors = sorted(f"{k}: {v}" for k, v in summary.errors.items())
    out.timing = timing_json(s1, s2)
    if expected["variant"] == "bad":
        for site in expected["sites"]:
            if site_matched(site, cwe, finals):
                out.tp += 1
            else:
                out.fn += 1
    elif any(r.cwe == cwe for r in finals):
        out.fp = 1
    else:
        out.tn = 1
    return out


def _evaluate(args):
    return evaluate_case(*args)


def rates(rows: list) -> dict:
    tp, fn = sum(r.tp for r in rows), sum(r.fn for r in rows)
    fp, tn = sum(r.fp for r in rows), sum(r.tn for r in rows)
    return {
        "tp": tp, "fn": fn, "fp": fp, "tn": tn,
        "tpr": round(tp / (tp + fn), 4) if tp + fn else 0.0,
        "fpr": round(fp / (fp + tn), 4) if fp + tn else 0.0,
    }


@dataclass
class BenchResult:
    cases: list  # CaseOutcome, sorted by (cwe, case)
    wall: float = 0.0

    def per_cwe(self) -> dict:
        return {f"cwe{c}": rates([r for r in self.cases if r.cwe == c])
                for c in sorted({r.cwe for r in self.cases})}

    def to_json(self) -> dict:
        return {"cwes": self.per_cwe(), "overall": rates(self.cases), "cases": [c.to_json() for c in self.cases]}

    def timing(self) -> dict:
        keys = ("N_t", "SA", "WPA", "SA_x", "WPA_x", "TA_x")
        tot = {k: sum(c.timing.get(k, 0.0) for c in self.cases) for k in ("N_t", "SA", "WPA")}
        n = len(self.cases) or 1
        return {
            "cases": len(self.cases),
            "wall": self.wall,
            "totals": tot,
            "mean": {k: sum(c.timing.get(k, 0.0) for c in self.cases) / n for k in keys},
            "queries": sum(c.timing.get("queries", 0) for c in self.cases),
        }

    def render_text(self) -> str:
        lines = [f"{'cwe':8}{'TP':>5}{'FN':>5}{'FP':>5}{'TN':>5}{'TPR':>8}{'FPR':>8}"]
        for name, r in list(self.per_cwe().items()) + [("overall", rates(self.cases))]:
            lines.append(f"{name:8}{r['tp']:5}{r['fn']:5}{r['fp']:5}{r['tn']:5}{r['tpr']:8.3f}{r['fpr']:8.3f}")
        missed = [c for c in self.cases if c.fn]
        noisy = [c for c in self.cases if c.fp]
        if missed:
            lines += ["", "false negatives:"] + [f"  cwe{c.cwe}/{c.case}" for c in missed]
        if noisy:
            lines += ["", "false positives:"] + [f"  cwe{c.cwe}/{c.case}: {', '.join(c.reports)}" for c in noisy]
        errs = [c for c in self.cases if c.errors]
        if errs:
            lines += ["", "errors:"] + [f"  cwe{c.cwe}/{c.case}: {'; '.join(c.errors)}" for c in errs]
        return "\n".join(lines) + "\n"


def run_corpus(root, out_dir, jobs: int = 1, cwes: Optional[list] = None) -> BenchResult:
    """Run the full pipeline on every case under `root`, writing results to `out_dir`."""
    t0 = CLOCK()
    out_dir = Path(out_dir).resolve()
    dirs = [d for d in case_dirs(root) if cwes is None or int(d.parent.name[3:]) in cwes]
    if not dirs:
        raise CorpusError(f"no cases under {root}")
    args = [(d, out_dir / "cases") for d in dirs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_evaluate, args))
    else:
        rows = [_evaluate(a) for a in args]
    rows.sort(key=lambda r: (r.cwe, r.case))
    res = BenchResult(rows, CLOCK() - t0)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "bench-results.json").write_text(dumps_canonical(res.to_json(), compact=False), encoding="utf-8")
    (out_dir / "bench-results.txt").write_text(res.render_text(), encoding="utf-8")
    (out_dir / "timing.json").write_text(dumps_canonical(res.timing(), compact=False), encoding="utf-8")
    return res
