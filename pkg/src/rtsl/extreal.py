"""Exact extended-real arithmetic.

Values are either `fractions.Fraction` (exact, auto-reduced) or the
singleton `INF`.  Nonnegative values play the role of runtime magnitudes;
signed finite values appear only in the amortized calculus.  There is no
representation of -infinity anywhere.

The two deliberately non-standard conventions live here:

* ``0 * INF == INF * 0 == 0``
* ``monus(INF, INF) == 0`` while ``monus(INF, finite) == INF``
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import SignedOverflow


class Infinity:
    """Positive infinity, totally ordered above every Fraction."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("rtsl-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INF = Infinity()

Ext = Union[Fraction, Infinity]

ZERO = Fraction(0)
ONE = Fraction(1)


def is_inf(a: Ext) -> bool:
    return a is INF


def is_finite(a: Ext) -> bool:
    return a is not INF


def ext_add(a: Ext, b: Ext) -> Ext:
    if a is INF or b is INF:
        return INF
    return a + b


def ext_mul(a: Ext, b: Ext) -> Ext:
    if a is INF:
        if b == 0:
            return ZERO
        if b is not INF and b < 0:
            raise SignedOverflow("negative * inf has no representation")
        return INF
    if b is INF:
        if a == 0:
            return ZERO
        if a < 0:
            raise SignedOverflow("negative * inf has no representation")
        return INF
    return a * b


def ext_min(a: Ext, b: Ext) -> Ext:
    if a is INF:
        return b
    if b is INF:
        return a
    return a if a <= b else b


def ext_max(a: Ext, b: Ext) -> Ext:
    if a is INF or b is INF:
        return INF
    return a if a >= b else b


def ext_monus(a: Ext, b: Ext) -> Ext:
    """max(a - b, 0) with monus(INF, INF) = 0 and monus(INF, finite) = INF."""
    if b is INF:
        return ZERO
    if a is INF:
        return INF
    d = a - b
    return d if d > 0 else ZERO


def ext_sub_signed(a: Ext, b: Ext) -> Ext:
    """True subtraction a - b; b must be finite (no -inf exists)."""
    if b is INF:
        raise SignedOverflow("cannot subtract inf")
    if a is INF:
        return INF
    return a - b


def ext_le(a: Ext, b: Ext) -> bool:
    if b is INF:
        return True
    if a is INF:
        return False
    return a <= b


def ext_arith(op: str, a: Ext, b: Ext) -> Ext:
    """Dispatcher mirroring the documented operation table."""
    if op == "add":
        return ext_add(a, b)
    if op == "mul":
        return ext_mul(a, b)
    if op == "min":
        return ext_min(a, b)
    if op == "monus":
        return ext_monus(a, b)
    if op == "sub_signed":
        return ext_sub_signed(a, b)
    raise ValueError(f"unknown op {op!r}")


def ext_sum(values) -> Ext:
    total: Ext = ZERO
    for v in values:
        total = ext_add(total, v)
    return total


def fmt(a: Ext) -> str:
    """Bit-exact rendering: "num/den" for rationals, "inf" otherwise."""
    if a is INF:
        return "inf"
    if a.denominator == 1:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"
