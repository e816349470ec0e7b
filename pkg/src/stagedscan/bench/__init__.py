"""Labeled corpus, ground-truth oracle and detection-rate harness."""
from .corpus import BenchResult, CaseOutcome, CorpusError, case_dirs, evaluate_case, generate_corpus, run_corpus
from .oracle import Defect, ExecutionFacts, Oracle, int_universe, oracle_interpret
from .templates import TEMPLATES, Template

__all__ = [
    "BenchResult", "CaseOutcome", "CorpusError", "case_dirs", "evaluate_case", "generate_corpus", "run_corpus",
    "Defect", "ExecutionFacts", "Oracle", "int_universe", "oracle_interpret", "TEMPLATES", "Template",
]
