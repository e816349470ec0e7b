"""Candidate and whole-program report formats, their text renderings, and query construction."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .frontend.ast import Loc
from .ir.model import IRModule, dumps_canonical
from .wpa.validate import CONFIRMED, WPQuery, WPReport


class ReportError(Exception):
    pass


def decl_json(decl: str, cwe: int) -> dict:
    if cwe == 457 and "::" in decl:
        cls, member = decl.split("::", 1)
        return {"class": cls, "member": member}
    return {"expr": decl}


def decl_id(decl: dict) -> str:
    if "member" in decl:
        return f"{decl['class']}::{decl['member']}"
    return decl["expr"]


def report_id(cwe: int, decl: dict, local_path: str, loc: Loc) -> str:
    payload = {"cwe": cwe, "decl": decl, "local_path": local_path, "loc": loc.to_json()}
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:8]


@dataclass
class CandidateReport:
    id: str
    cwe: int
    decl: dict
    local_path: str
    loc: Loc
    message: str
    engine_meta: dict = field(default_factory=dict)
    source_line: str = ""  # flagged source line; not part of the id

    @property
    def function(self) -> str:
        return self.local_path.split("->")[-1]

    def verify_id(self) -> bool:
        return self.id == report_id(self.cwe, self.decl, self.local_path, self.loc)

    def to_json(self) -> dict:
        return {
            "id": self.id, "cwe": self.cwe, "decl": self.decl, "local_path": self.local_path,
            "loc": self.loc.to_json(), "message": self.message, "engine_meta": self.engine_meta,
            "source_line": self.source_line,
        }

    @classmethod
    def from_json(cls, d: dict) -> "CandidateReport":
        try:
            return cls(d["id"], int(d["cwe"]), dict(d["decl"]), d["local_path"], Loc.from_json(d["loc"]),
                       d["message"], dict(d.get("engine_meta", {})), d.get("source_line", ""))
        except (KeyError, TypeError, ValueError) as e:
            raise ReportError(f"malformed candidate report: {e}") from None

    def render_text(self) -> str:
        caret = "".join(ch if ch == "\t" else " " for ch in self.source_line[: self.loc.col - 1]) + "^"
        lines = [
            f"// report-{self.id}",
            f"Local Path to Bug: {self.local_path}",
            "",
            "Annotated Source Code",
            f"{self.loc}: warning: {self.message}",
            self.source_line,
            caret,
            "1 warning generated.",
        ]
        return "\n".join(lines) + "\n"


def emit_candidate(finding, engine_meta: Optional[dict] = None, source_line: str = "") -> CandidateReport:
    """Build the report for one checker finding (deterministic id)."""
    decl = decl_json(finding.decl, finding.cwe)
    rid = report_id(finding.cwe, decl, finding.local_path, finding.loc)
    meta = dict(engine_meta or {"truncated": False, "paths_explored": 0})
    return CandidateReport(rid, finding.cwe, decl, finding.local_path, finding.loc, finding.message, meta,
                           source_line)


def write_candidate(report: CandidateReport, out_dir) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"report-{report.id}.json"
    path.write_text(dumps_canonical(report.to_json(), compact=False), encoding="utf-8")
    (out_dir / f"report-{report.id}.txt").write_text(report.render_text(), encoding="utf-8")
    return path


def load_candidate(path) -> CandidateReport:
    path = Path(path)
    try:
        d = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ReportError(f"{path.name}: malformed JSON: {e}") from None
    return CandidateReport.from_json(d)


def query_for(report: CandidateReport, program: IRModule) -> WPQuery:
    field_id = decl_id(report.decl)
    anchor = report.function
    known_fields = {f for c in program.classes.values() for f, _ in c.fields}
    if anchor not in program.functions or field_id not in known_fields:
        raise ReportError(f"stale report {report.id}: {field_id} or {anchor} not in the current program")
    return WPQuery(report.id, field_id, anchor, report.loc)


def parse_candidate(path, program: IRModule) -> WPQuery:
    """Stage-2 query for a candidate report file, checked against `program`."""
    return query_for(load_candidate(path), program)


# ------------------------------------------------------------ WP reports

def render_wp_text(report: WPReport, entries: list) -> str:
    lines = [
        f"---------- report-{report.report_id} ---------",
        f"[+] Parsing bug report report-{report.report_id}.json",
        f"[+] Running whole-program analysis against {', '.join(entries)}",
        "---------------------------------------",
    ]
    if report.verdict == CONFIRMED:
        for chain in report.chains:
            lines += ["Candidate callchain is: ", ""]
            rev = list(reversed(chain))
            lines.append(f"{rev[0]}()")
            lines.extend(rev[1:])
            lines.append("-----------------------")
    else:
        note = report.stats.get("note", "")
        lines.append(f"No candidate callchain: false positive ({note})")
        lines.append("-----------------------")
    return "\n".join(lines) + "\n"


def write_wp(report: WPReport, entries: list, out_dir) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"wp-report-{report.report_id}.json"
    path.write_text(dumps_canonical(report.to_json(), compact=False), encoding="utf-8")
    (out_dir / f"wp-report-{report.report_id}.txt").write_text(render_wp_text(report, entries), encoding="utf-8")
    return path
