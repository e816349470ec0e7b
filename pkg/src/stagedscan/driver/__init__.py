"""Manifest-driven pipeline: stage 1 per unit, IR link, stage 2 per candidate."""
from .cache import CACHE_ENV, BuildCache, unit_key
from .manifest import Manifest, ManifestError, WPAConfig, load_manifest, parse_manifest
from .pipeline import (
    ExitSummary, Stage1Result, Stage2Result, analyze_unit_job, load_stage1_outputs, run_all, run_stage1,
    run_stage2, timing_json,
)

__all__ = [
    "CACHE_ENV", "BuildCache", "ExitSummary", "Manifest", "ManifestError", "Stage1Result", "Stage2Result",
    "WPAConfig", "analyze_unit_job", "load_manifest", "load_stage1_outputs", "parse_manifest", "run_all",
    "run_stage1", "run_stage2", "timing_json", "unit_key",
]
