"""`analyzer` command line: run, stage1 and stage2 over a project manifest."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from ..checkers import ALL_CHECKERS
from .manifest import Manifest, ManifestError, load_manifest
from .pipeline import load_stage1_outputs, run_stage1, run_stage2, write_run_outputs

log = logging.getLogger("stagedscan.driver")


def _checker_list(text: str) -> list[str]:
    ids = sorted({c.strip() for c in text.split(",") if c.strip()})
    unknown = [c for c in ids if c not in ALL_CHECKERS]
    if unknown or not ids:
        raise argparse.ArgumentTypeError(
            f"unknown checker(s) {', '.join(unknown) or '<none>'}; choose from {', '.join(ALL_CHECKERS)}")
    return ids


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _non_negative(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be at least 0")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="analyzer", description="Two-stage static analyzer for MiniObj projects.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "stage 1, link, stage 2"), ("stage1", "per-unit analysis only"),
                        ("stage2", "validate existing stage-1 reports")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--manifest", required=True, type=Path, help="project manifest (JSON)")
        s.add_argument("--jobs", type=_positive, default=1, help="parallel stage-1 workers")
        s.add_argument("--path-budget", type=_positive, help="max paths explored per function")
        s.add_argument("--loop-bound", type=_non_negative, help="loop unrolling bound")
        s.add_argument("--chain-cap", type=_positive, help="max call chains kept per report")
        s.add_argument("--resolve-ref-aliases", action="store_true", default=None,
                       help="credit stores made through reference parameters")
        s.add_argument("--checkers", type=_checker_list, help=f"comma list from {','.join(ALL_CHECKERS)}")
        s.add_argument("--out", type=Path, help="output directory (overrides the manifest)")
        s.add_argument("--exit-zero", action="store_true", help="exit 0 even when bugs are found")
        s.add_argument("-v", "--verbose", action="store_true", help="debug logging")
        s.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    return p


def apply_overrides(m: Manifest, args) -> Manifest:
    engine, wpa = m.engine, m.wpa
    if args.path_budget is not None:
        engine = replace(engine, path_budget=args.path_budget)
    if args.loop_bound is not None:
        engine = replace(engine, loop_bound=args.loop_bound)
    if args.chain_cap is not None:
        wpa = replace(wpa, chain_cap=args.chain_cap)
    if args.resolve_ref_aliases:
        wpa = replace(wpa, resolve_ref_aliases=True)
    m = replace(m, engine=engine, wpa=wpa)
    if args.checkers is not None:
        m = replace(m, checkers=args.checkers)
    if args.out is not None:
        m = replace(m, out=args.out.resolve())
    return m


def _print_summary(summary) -> None:
    print(f"candidates: {summary.candidates}  confirmed: {summary.confirmed}  "
          f"false positives: {summary.false_positives}  stage-1 findings: {summary.stage1_final}")
    for key, msg in sorted(summary.errors.items()):
        print(f"error: {key}: {msg}", file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")
    try:
        m = apply_overrides(load_manifest(args.manifest), args)
    except ManifestError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    m.out.mkdir(parents=True, exist_ok=True)
    if args.command == "stage1":
        s1 = run_stage1(m, args.jobs)
        summary = write_run_outputs(m, s1, None)
    elif args.command == "stage2":
        s1 = load_stage1_outputs(m)
        s2 = run_stage2(m, s1)
        summary = write_run_outputs(m, s1, s2)
    else:
        s1 = run_stage1(m, args.jobs)
        s2 = run_stage2(m, s1)
        summary = write_run_outputs(m, s1, s2)
    _print_summary(summary)
    return summary.exit_code(args.exit_zero)
