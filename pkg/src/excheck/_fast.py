"""Integer-scaled table views for the exhaustive scanners.

Values are rescaled by the least common denominator so every comparison in
the hot loops is pure integer arithmetic.  The ``-inf`` entries become a
sentinel placed far enough below the finite range that any two-term sum
containing the sentinel compares strictly below any two-term sum of finite
entries; loops must still skip tuples whose left-hand side would contain a
sentinel (those are vacuous by convention).
"""

from __future__ import annotations

from math import lcm

from .core import SetFunction
from .values import is_finite

__all__ = ["IntTable"]


class IntTable:
    __slots__ = ("n", "size", "scale", "lo", "hi", "neg", "vals", "sent", "dom")

    def __init__(self, f: SetFunction, extra_denominator: int = 1):
        scale = extra_denominator
        for v in f.table:
            if is_finite(v):
                scale = lcm(scale, v.denominator)
        vals: list[int | None] = []
        dom: list[int] = []
        lo = hi = None
        for mask, v in enumerate(f.table):
            if is_finite(v):
                iv = v.numerator * (scale // v.denominator)
                vals.append(iv)
                dom.append(mask)
                if lo is None or iv < lo:
                    lo = iv
                if hi is None or iv > hi:
                    hi = iv
            else:
                vals.append(None)
        assert lo is not None and hi is not None
        # sentinel + any finite value < 2*lo, so sentinel sums lose every comparison
        neg = lo - 2 * (hi - lo) - 1
        self.n = f.n
        self.size = 1 << f.n
        self.scale = scale
        self.lo = lo
        self.hi = hi
        self.neg = neg
        self.vals = vals
        self.sent = [neg if v is None else v for v in vals]
        self.dom = dom
