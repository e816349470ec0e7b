"""Abstract values used for branch feasibility during path exploration.

Integers are intervals (plus the set of sign-extension sites whose source
could have been negative), booleans are sets of possible constants, `var`
values carry the set of possible tags, and class references carry the set
of possible dynamic classes.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from ..frontend import ast as A

ALL_TAGS = frozenset(A.TAGS)
I32_RANGE = A.int_range(A.I32)


@dataclass(frozen=True)
class IntV:
    lo: int
    hi: int
    widened: frozenset = frozenset()  # sign-extension sites (Loc) with a possibly negative source

    def __post_init__(self):
        assert self.lo <= self.hi, (self.lo, self.hi)

    @property
    def may_be_negative(self) -> bool:
        return self.lo < 0

    def singleton(self) -> Optional[int]:
        return self.lo if self.lo == self.hi else None


@dataclass(frozen=True)
class BoolV:
    vals: frozenset

    @property
    def may_true(self) -> bool:
        return True in self.vals

    @property
    def may_false(self) -> bool:
        return False in self.vals


@dataclass(frozen=True)
class VarV:
    tags: frozenset
    tainted: bool
    int_payload: IntV = IntV(*I32_RANGE)
    bool_payload: frozenset = frozenset({True, False})

    def __post_init__(self):
        assert self.tags and self.tags <= ALL_TAGS


@dataclass(frozen=True)
class ObjV:
    classes: frozenset


@dataclass(frozen=True)
class FnV:
    targets: Optional[frozenset]  # None = unknown


@dataclass(frozen=True)
class TagV:
    tags: frozenset


@dataclass(frozen=True)
class BufV:
    pass


@dataclass(frozen=True)
class Top:
    pass


TOP = Top()
BOOL_TOP = BoolV(frozenset({True, False}))


def bool_const(b: bool) -> BoolV:
    return BoolV(frozenset({b}))


def int_top(t) -> IntV:
    return IntV(*A.int_range(t))


def top_of(t, subclasses=None):
    """Unknown value of type `t`; `subclasses(name)` lists dynamic classes."""
    if A.is_int(t):
        return int_top(t)
    if t == A.BOOL:
        return BOOL_TOP
    if t == A.VAR:
        return VarV(ALL_TAGS, True)
    if t == A.TAG:
        return TagV(ALL_TAGS)
    if t == A.BUF:
        return BufV()
    if isinstance(t, A.ClassType):
        return ObjV(frozenset(subclasses(t.name)) if subclasses else frozenset({t.name}))
    if isinstance(t, A.FnType):
        return FnV(None)
    return TOP


# ---------------------------------------------------------------- integers

def fit(lo: int, hi: int, t, widened=frozenset()) -> IntV:
    """Interval of type `t`; any overflow degrades to the full range."""
    tlo, thi = A.int_range(t)
    if lo < tlo or hi > thi:
        return IntV(tlo, thi, widened)
    return IntV(lo, hi, widened)


def convert(v: IntV, src, dst) -> IntV:
    """Value-level effect of an integer conversion (wrap-around semantics)."""
    dlo, dhi = A.int_range(dst)
    if dlo <= v.lo and v.hi <= dhi:
        return IntV(v.lo, v.hi, v.widened)
    width = A.int_info(dst)[0]
    for shift in (1 << width, -(1 << width)):
        if dlo <= v.lo + shift and v.hi + shift <= dhi:
            return IntV(v.lo + shift, v.hi + shift, v.widened)
    return IntV(dlo, dhi, v.widened)


def arith(op: str, a: IntV, b: IntV, t) -> IntV:
    """Interval result of `a op b` in type `t`; sign-extension sites of both operands carry over."""
    r = _arith(op, a, b, t)
    w = a.widened | b.widened
    return replace(r, widened=w) if w else r


def _arith(op: str, a: IntV, b: IntV, t) -> IntV:
    tlo, thi = A.int_range(t)
    if op == "+":
        return fit(a.lo + b.lo, a.hi + b.hi, t)
    if op == "-":
        return fit(a.lo - b.hi, a.hi - b.lo, t)
    if op == "*":
        c = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi]
        return fit(min(c), max(c), t)
    if op == "/":
        if b.lo <= 0 <= b.hi:
            return IntV(tlo, thi)
        c = [_tdiv(x, y) for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
        return fit(min(c), max(c), t)
    if op == "%":
        if b.lo <= 0 <= b.hi:
            return IntV(tlo, thi)
        m = max(abs(b.lo), abs(b.hi)) - 1
        if a.lo >= 0:
            return fit(0, min(a.hi, m), t)
        if a.hi <= 0:
            return fit(max(a.lo, -m), 0, t)
        return fit(-m, m, t)
    raise ValueError(op)


def _tdiv(x: int, y: int) -> int:
    q = abs(x) // abs(y)
    return q if (x >= 0) == (y >= 0) else -q


def negate(a: IntV, t) -> IntV:
    return fit(-a.hi, -a.lo, t, a.widened)


def compare(op: str, a: IntV, b: IntV) -> BoolV:
    vals = set()
    if _may(op, a, b):
        vals.add(True)
    if _may(_NEG[op], a, b):
        vals.add(False)
    return BoolV(frozenset(vals))


_NEG = {"<": ">=", ">=": "<", "<=": ">", ">": "<=", "==": "!=", "!=": "=="}
_SWAP = {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "==": "==", "!=": "!="}


def _may(op, a: IntV, b: IntV) -> bool:
    if op == "<":
        return a.lo < b.hi
    if op == "<=":
        return a.lo <= b.hi
    if op == ">":
        return a.hi > b.lo
    if op == ">=":
        return a.hi >= b.lo
    if op == "==":
        return a.lo <= b.hi and b.lo <= a.hi
    if op == "!=":
        return not (a.lo == a.hi == b.lo == b.hi)
    raise ValueError(op)


def refine(op: str, a: IntV, b: IntV) -> Optional[tuple[IntV, IntV]]:
    """Narrow (a, b) assuming `a op b` holds; None when infeasible."""
    if not _may(op, a, b):
        return None
    alo, ahi, blo, bhi = a.lo, a.hi, b.lo, b.hi
    if op == "<":
        ahi, blo = min(ahi, bhi - 1), max(blo, alo + 1)
    elif op == "<=":
        ahi, blo = min(ahi, bhi), max(blo, alo)
    elif op in (">", ">="):
        rb, ra = refine(_SWAP[op], b, a)
        return ra, rb
    elif op == "==":
        alo, ahi = max(alo, blo), min(ahi, bhi)
        blo, bhi = alo, ahi
    elif op == "!=":
        if blo == bhi:
            if alo == blo:
                alo += 1
            if ahi == blo:
                ahi -= 1
        if alo == ahi:
            if blo == alo:
                blo += 1
            if bhi == alo:
                bhi -= 1
    if alo > ahi or blo > bhi:
        return None
    return replace(a, lo=alo, hi=ahi), replace(b, lo=blo, hi=bhi)


def truthy(v) -> BoolV:
    if isinstance(v, BoolV):
        return v
    if isinstance(v, IntV):
        vals = set()
        if not (v.lo == v.hi == 0):
            vals.add(True)
        if v.lo <= 0 <= v.hi:
            vals.add(False)
        return BoolV(frozenset(vals))
    return BOOL_TOP


def refine_truthy(v: IntV, want: bool) -> Optional[IntV]:
    if want:
        return refine("!=", v, IntV(0, 0))[0] if _may("!=", v, IntV(0, 0)) else None
    r = refine("==", v, IntV(0, 0))
    return r[0] if r else None
