"""Pluggable checkers over engine events, selectable by stable ID."""
from .base import Checker, CheckerFinding, Event
from .garbage_read import GarbageReadChecker, check_garbage_read
from .sign import SignConversionChecker, SignExtensionChecker, check_sign_conversion, check_sign_extension
from .type_confusion import TypeConfusionChecker, check_type_confusion

REGISTRY = {
    c.id: c for c in (GarbageReadChecker, TypeConfusionChecker, SignConversionChecker, SignExtensionChecker)
}
ALL_CHECKERS = tuple(sorted(REGISTRY))


def make_checkers(ids) -> list[Checker]:
    unknown = [i for i in ids if i not in REGISTRY]
    if unknown:
        raise ValueError(f"unknown checker(s): {', '.join(unknown)} (known: {', '.join(ALL_CHECKERS)})")
    return [REGISTRY[i]() for i in sorted(set(ids))]


__all__ = [
    "Checker", "CheckerFinding", "Event", "REGISTRY", "ALL_CHECKERS", "make_checkers",
    "check_garbage_read", "check_type_confusion", "check_sign_conversion", "check_sign_extension",
]
