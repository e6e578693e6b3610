"""Exact extended values: rationals plus a ``-inf`` bottom element.

All arithmetic is exact; floating point never enters a comparison.  The
bottom element follows the usual extended-valued conventions: it absorbs
addition, compares below every finite value, and ``-inf <= -inf`` holds.
A maximum over an empty collection is ``-inf`` (pass ``default=NEG_INF``
to :func:`max`).
"""

from __future__ import annotations

import re
from fractions import Fraction

__all__ = [
    "NEG_INF",
    "NegInfinity",
    "ExtValue",
    "is_finite",
    "as_ext_value",
    "parse_rational",
    "ext_to_json",
    "ext_to_str",
]

from .errors import InputError


class NegInfinity:
    """Absorbing bottom element for extended-rational arithmetic."""

    __slots__ = ()
    _instance = None

    def __new__(cls) -> "NegInfinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __add__(self, other):
        if isinstance(other, (NegInfinity, Fraction, int)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        # -inf minus a finite value stays at the bottom; -inf - (-inf) is undefined
        if isinstance(other, (Fraction, int)):
            return self
        return NotImplemented

    def __rsub__(self, other):
        raise ArithmeticError("positive infinity is not representable")

    def __neg__(self):
        raise ArithmeticError("positive infinity is not representable")

    def __lt__(self, other):
        if isinstance(other, NegInfinity):
            return False
        if isinstance(other, (Fraction, int)):
            return True
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (NegInfinity, Fraction, int)):
            return True
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (NegInfinity, Fraction, int)):
            return False
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, NegInfinity):
            return True
        if isinstance(other, (Fraction, int)):
            return False
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, NegInfinity)

    def __ne__(self, other):
        return not isinstance(other, NegInfinity)

    def __hash__(self):
        return hash("-inf")

    def __repr__(self):
        return "-inf"


NEG_INF = NegInfinity()

ExtValue = Fraction | NegInfinity

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def is_finite(v: ExtValue) -> bool:
    return not isinstance(v, NegInfinity)


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational literal: an integer or a ``p/q`` string.

    Decimal notation is rejected so values never pass through floats.
    """
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise InputError(f"not an exact rational (use an integer or 'p/q'): {text!r}")
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise InputError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def as_ext_value(x) -> ExtValue:
    """Normalize an input to an exact extended value; floats are rejected."""
    if isinstance(x, NegInfinity):
        return NEG_INF
    if isinstance(x, bool):
        raise InputError(f"boolean is not a value: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if x.strip() in ("-inf", "-infinity"):
            return NEG_INF
        return parse_rational(x)
    if isinstance(x, float):
        raise InputError("floating point values are rejected; use an exact 'p/q' string")
    raise InputError(f"unsupported value: {x!r}")


def ext_to_json(v: ExtValue):
    """Render a value for JSON output: int, 'p/q' string, or '-inf'."""
    if isinstance(v, NegInfinity):
        return "-inf"
    if v.denominator == 1:
        return int(v)
    return f"{v.numerator}/{v.denominator}"


def ext_to_str(v: ExtValue) -> str:
    if isinstance(v, NegInfinity):
        return "-inf"
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"
