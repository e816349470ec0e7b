"""CWE195 (signed to unsigned conversion) and CWE194 (unexpected sign extension)."""
from __future__ import annotations

from ..engine import domain as D
from .base import SIGN_CONVERSION, SIZE_SINK, Checker, CheckerFinding, Event, summarized_function


def check_sign_conversion(event: Event) -> list[CheckerFinding]:
    """Equal-width signed to unsigned conversion of a possibly negative value."""
    if event.kind != SIGN_CONVERSION:
        return []
    v = event.data["value"]
    if not (isinstance(v, D.IntV) and v.may_be_negative):
        return []
    fn = summarized_function(event)
    decl = "sign-conversion"
    msg = f"Possibly negative {event.data['src']} value converted to {event.data['dst']}"
    return [CheckerFinding(event.loc, 195, decl, f"{decl}->{fn}", msg, fn)]


def check_sign_extension(event: Event) -> list[CheckerFinding]:
    """Size argument that is negative after sign-extending a narrower value.

    One finding per widening site recorded in the value's provenance; the
    finding is located at the widening conversion.
    """
    if event.kind != SIZE_SINK:
        return []
    v = event.data["value"]
    if not (isinstance(v, D.IntV) and v.widened and v.may_be_negative):
        return []
    fn = summarized_function(event)
    sink = event.data["call"].target
    out = []
    for loc in sorted(v.widened):
        decl = f"sign-extension:{sink}"
        msg = f"Sign-extended value may be negative when used as {sink} size"
        out.append(CheckerFinding(loc, 194, decl, f"{decl}->{fn}", msg, fn))
    return out


class SignConversionChecker(Checker):
    id = "cwe195"
    cwe = 195

    def on_event(self, event: Event) -> list[CheckerFinding]:
        return check_sign_conversion(event)


class SignExtensionChecker(Checker):
    id = "cwe194"
    cwe = 194

    def on_event(self, event: Event) -> list[CheckerFinding]:
        return check_sign_extension(event)
