"""Whole-program validation of candidate reports over the linked IR."""
from .callgraph import (
    CHA, DEVIRTUALIZED, DIRECT, RESOLVED_INDIRECT, CallGraph, CallGraphConfig, ClassHierarchy, Edge, Site,
    build_callgraph, devirtualize_cha, final_callgraph, instantiated_classes, resolve_indirect, rta_prune,
)
from .validate import (
    CONFIRMED, FALSE_POSITIVE, ValidationConfig, WPQuery, WPReport, crediting_functions, validate_garbage_read,
)

__all__ = [
    "CHA", "DEVIRTUALIZED", "DIRECT", "RESOLVED_INDIRECT", "CONFIRMED", "FALSE_POSITIVE",
    "CallGraph", "CallGraphConfig", "ClassHierarchy", "Edge", "Site", "ValidationConfig", "WPQuery", "WPReport",
    "build_callgraph", "crediting_functions", "devirtualize_cha", "final_callgraph", "instantiated_classes",
    "resolve_indirect", "rta_prune", "validate_garbage_read",
]
