"""Path-sensitive intraprocedural engine producing per-function summaries."""
from .classify import GARBAGE_READ_MESSAGE, classify_candidates
from .explore import AnalysisContext, EngineConfig, Explorer, PathState, explore_function, explore_unit
from .summary import DEF, USE, FunctionSummary, local_path, merge_paths, record_event


def analyze_unit(program, unit: str, cfg: EngineConfig | None = None, checkers=()) -> tuple:
    """Explore every function of `unit` and run `checkers` (Checker instances).

    Returns (context, findings) with findings sorted by location then CWE.
    """
    ctx = explore_unit(program, unit, cfg, list(checkers))
    findings = set(ctx.findings)
    for c in checkers:
        findings.update(c.finish(ctx))
    return ctx, sorted(findings, key=lambda f: f.sort_key)


__all__ = [
    "AnalysisContext", "EngineConfig", "Explorer", "PathState", "FunctionSummary", "DEF", "USE",
    "GARBAGE_READ_MESSAGE", "analyze_unit", "classify_candidates", "explore_function", "explore_unit",
    "local_path", "merge_paths", "record_event",
]
