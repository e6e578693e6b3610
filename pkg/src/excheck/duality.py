"""Conjugates, submodularity spot checks, duality-gap reports, and the
big-M price construction that reduces slice conjugates to the global one.

The dual side of the gap report is searched exhaustively over integer
points of a box after all values are rescaled to integers, so every number
that enters a comparison is exact.  The sweep is vectorized over int64
grids with an overflow guard that falls back to plain Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor

import numpy as np

from ._fast import IntTable
from .checkers import Verdict, Witness
from .core import (
    PriceVector,
    SetFunction,
    slice_pair,
    validate_exchange_args,
)
from .errors import EmptySliceError, InputError, InternalCheckError
from .sets import elements_of, iter_bits
from .values import NEG_INF, ExtValue, ext_to_str, is_finite

__all__ = [
    "conjugate",
    "conjugate_argmax",
    "check_submodular_pair",
    "DualityReport",
    "fenchel_gap",
    "BigMPair",
    "big_m_vectors",
]

_MAX_BOX_POINTS = 10**10
_MAX_SLAB_ENTRIES = 2 * 10**8
_INT64_SAFE = 1 << 60


def conjugate(f: SetFunction, p: PriceVector) -> Fraction:
    """Convex conjugate value: max over all Z of f(Z) minus the price of Z.

    Always finite because the effective domain is nonempty.
    """
    return conjugate_argmax(f, p)[0]


def conjugate_argmax(f: SetFunction, p: PriceVector) -> tuple[Fraction, int]:
    """Conjugate value together with the smallest maximizing subset."""
    if len(p) != f.n:
        raise InputError(f"price vector length {len(p)} does not match ground set {f.n}")
    sums = p.subset_sums
    best = None
    best_mask = 0
    for m in f.dom_masks:
        v = f.table[m] - sums[m]
        if best is None or v > best:
            best = v
            best_mask = m
    assert best is not None
    return best, best_mask


def check_submodular_pair(f: SetFunction, p: PriceVector, p2: PriceVector) -> Verdict:
    """Check g(p) + g(p2) >= g(p join p2) + g(p meet p2) exactly.

    This lower-bound form holds whenever the conjugate is submodular,
    which discrete concavity of f guarantees; general functions can fail
    it, and the witness then records both sides.
    """
    lhs = conjugate(f, p) + conjugate(f, p2)
    rhs = conjugate(f, p.join(p2)) + conjugate(f, p.meet(p2))
    if lhs >= rhs:
        return Verdict(True)
    return Verdict(
        False,
        Witness("conjugate-submodularity", prices=(("p", p), ("p2", p2)), lhs=lhs, rhs=rhs),
    )


@dataclass(frozen=True)
class DualityReport:
    """Both sides of the exchange duality on one (X, Y, I) instance.

    ``gap`` is dual minus primal (never negative); ``None`` encodes an
    infinite gap (primal is -inf while the dual stays finite).  ``q_star``
    is populated only when the gap closes.  ``box_radius`` records the
    search radius actually used, in original (unscaled) units, and
    ``scale`` the denominator-clearing factor, so a nonzero gap is
    diagnosable.
    """

    primal: ExtValue
    dual: ExtValue
    q_star: PriceVector | None
    gap: Fraction | None
    y0_elements: tuple[int, ...]
    box_radius: Fraction
    scale: int
    note: str | None = None


def _scaled_slice_items(f1: SetFunction, scale: int) -> list[tuple[int, int]]:
    items = []
    for mask, v in enumerate(f1.table):
        if is_finite(v):
            items.append((mask, v.numerator * (scale // v.denominator)))
    return items


def _grid_conjugate(items, a, axes, shape, sign):
    """Max over items of v + sign * q(J) on the grid of the trailing axes.

    ``a`` is the fixed value of the leading coordinate.
    """
    acc = None
    for mask, v in items:
        t0 = v + (sign * a if mask & 1 else 0)
        expr = None
        for d, ax in enumerate(axes):
            if mask >> (d + 1) & 1:
                expr = ax if expr is None else expr + ax
        if expr is None:
            if acc is None:
                acc = np.full(shape, t0, dtype=np.int64)
            else:
                np.maximum(acc, t0, out=acc)
        else:
            arr = t0 + expr if sign > 0 else t0 - expr
            if acc is None:
                acc = np.broadcast_to(arr, shape).copy()
            else:
                np.maximum(acc, arr, out=acc)
    assert acc is not None
    return acc


def _dual_sweep(items1, items2, k, radius, primal_int):
    """Exhaustive min of g1(q) + g2(-q) over integer q in [-R, R]^k.

    Returns (minimum, q as int tuple), taking the lexicographically first
    minimizer.  Every visited point is checked against the primal value.
    """
    if k == 0:
        total = items1[0][1] + items2[0][1]
        if primal_int is not None and total < primal_int:
            raise InternalCheckError("weak duality failed on the empty ground set")
        return total, ()

    m = 2 * radius + 1
    if m**k > _MAX_BOX_POINTS:
        raise InputError(
            f"dual box has {m}^{k} integer points; shrink box_radius or the instance"
        )
    bound = max(abs(v) for _, v in items1 + items2) + radius * k
    if 2 * bound >= _INT64_SAFE or m ** (k - 1) > _MAX_SLAB_ENTRIES:
        return _dual_sweep_py(items1, items2, k, radius, primal_int)

    shape = (m,) * (k - 1)
    axis_vals = np.arange(-radius, radius + 1, dtype=np.int64)
    axes = []
    for d in range(k - 1):
        sh = [1] * (k - 1)
        sh[d] = m
        axes.append(axis_vals.reshape(sh))

    best_val = None
    best_q: tuple[int, ...] = ()
    for a in range(-radius, radius + 1):
        g1 = _grid_conjugate(items1, a, axes, shape, sign=-1)
        g2 = _grid_conjugate(items2, a, axes, shape, sign=+1)
        total = g1 + g2
        if primal_int is not None and bool((total < primal_int).any()):
            raise InternalCheckError("weak duality failed during the dual sweep")
        mn = int(total.min())
        if best_val is None or mn < best_val:
            flat = int(total.argmin())
            idx = np.unravel_index(flat, shape) if shape else ()
            best_val = mn
            best_q = (a,) + tuple(int(i) - radius for i in idx)
    assert best_val is not None
    return best_val, best_q


def _dual_sweep_py(items1, items2, k, radius, primal_int):
    best_val = None
    best_q: tuple[int, ...] = ()
    for q in product(range(-radius, radius + 1), repeat=k):
        g1 = max(v - sum(q[b.bit_length() - 1] for b in iter_bits(mask)) for mask, v in items1)
        g2 = max(v + sum(q[b.bit_length() - 1] for b in iter_bits(mask)) for mask, v in items2)
        total = g1 + g2
        if primal_int is not None and total < primal_int:
            raise InternalCheckError("weak duality failed during the dual sweep")
        if best_val is None or total < best_val:
            best_val, best_q = total, q
    assert best_val is not None
    return best_val, best_q


def fenchel_gap(
    f: SetFunction, X: int, Y: int, I: int, box_radius: Fraction | None = None
) -> DualityReport:
    """Compare both sides of the exchange duality on one instance.

    The primal side enumerates J over subsets of Y\\X; the dual side
    exhaustively minimizes g1(q) + g2(-q) over integer q in a box, after
    clearing denominators.  The default radius is twice the finite value
    range plus one (in cleared units); a caller-supplied ``box_radius`` is
    interpreted in original units and floored onto the integer grid.
    Practical cap: |Y\\X| up to about 10.
    """
    validate_exchange_args(f, X, Y, I)
    t = IntTable(f)
    scale = t.scale
    default_radius = 2 * (t.hi - t.lo) + 1
    if box_radius is None:
        radius = default_radius
    else:
        br = Fraction(box_radius)
        if br < 0:
            raise InputError("box_radius must be nonnegative")
        radius = floor(br * scale)

    y0 = Y & ~X
    try:
        sp = slice_pair(f, X, Y, I)
    except EmptySliceError as e:
        return DualityReport(
            primal=NEG_INF,
            dual=NEG_INF,
            q_star=None,
            gap=Fraction(0),
            y0_elements=elements_of(y0),
            box_radius=Fraction(radius, scale),
            scale=scale,
            note=f"degenerate instance: {e}; both sides are -inf",
        )

    k = len(sp.elements)
    items1 = _scaled_slice_items(sp.f1, scale)
    items2 = _scaled_slice_items(sp.f2, scale)

    primal_int = None
    vals2 = dict(items2)
    for mask, v1 in items1:
        v2 = vals2.get(mask)
        if v2 is None:
            continue
        total = v1 + v2
        if primal_int is None or total > primal_int:
            primal_int = total

    dual_int, q_ints = _dual_sweep(items1, items2, k, radius, primal_int)

    dual = Fraction(dual_int, scale)
    if primal_int is None:
        return DualityReport(
            primal=NEG_INF,
            dual=dual,
            q_star=None,
            gap=None,
            y0_elements=sp.elements,
            box_radius=Fraction(radius, scale),
            scale=scale,
            note="primal is -inf (the slices have disjoint finite supports); gap is infinite",
        )

    primal = Fraction(primal_int, scale)
    gap = dual - primal
    if gap < 0:
        raise InternalCheckError("dual fell below primal; the sweep is broken")
    q_star = None
    note = None
    q_frac = PriceVector(tuple(Fraction(qi, scale) for qi in q_ints))
    if gap == 0:
        q_star = q_frac
    else:
        note = (
            f"no certificate in the box [-{Fraction(radius, scale)}, {Fraction(radius, scale)}]"
            f"^{k}; best q = ({','.join(ext_to_str(v) for v in q_frac.entries)})"
        )
    return DualityReport(
        primal=primal,
        dual=dual,
        q_star=q_star,
        gap=gap,
        y0_elements=sp.elements,
        box_radius=Fraction(radius, scale),
        scale=scale,
        note=note,
    )


@dataclass(frozen=True)
class BigMPair:
    """Threshold M and the two price vectors that pin conjugate maximizers.

    Entries by region: the Y\\X part carries q; the kept part of X\\Y gets
    (-M, +M); the moved part I gets (+M, -M); the intersection gets
    (-M, -M); everything outside X u Y gets (+M, +M).
    """

    m_value: Fraction
    p1: PriceVector
    p2: PriceVector


def big_m_vectors(
    f: SetFunction,
    X: int,
    Y: int,
    I: int,
    q: PriceVector,
    m_value: Fraction | None = None,
) -> BigMPair:
    """Build the big-M price pair for (X, Y, I, q) and verify its relations.

    M defaults to twice the finite value range plus the total absolute
    price mass of q plus one; a larger M may be supplied.  Four relations
    are checked exactly (two equalities reducing the slice conjugates to
    the global conjugate, two lower bounds on the join and meet); any
    failure raises :class:`InternalCheckError` since they hold by
    construction for every admissible M.
    """
    validate_exchange_args(f, X, Y, I)
    try:
        sp = slice_pair(f, X, Y, I)
    except EmptySliceError as e:
        raise InputError(f"big-M relations need nonempty slice domains: {e}") from None
    if len(q) != len(sp.elements):
        raise InputError(
            f"q must have one entry per element of Y\\X (expected {len(sp.elements)})"
        )

    lo, hi = f.value_range
    threshold = 2 * (hi - lo) + q.abs_sum() + 1
    if m_value is None:
        m = threshold
    else:
        m = Fraction(m_value)
        if m < threshold:
            raise InputError(f"M must be at least the threshold {threshold}, got {m}")

    c = X & Y
    x0_keep = (X & ~Y) & ~I
    y0 = Y & ~X
    pos = {e: idx for idx, e in enumerate(sp.elements)}

    e1 = []
    e2 = []
    for e in range(1, f.n + 1):
        bit = 1 << (e - 1)
        if bit & y0:
            e1.append(q.entries[pos[e]])
            e2.append(q.entries[pos[e]])
        elif bit & x0_keep:
            e1.append(-m)
            e2.append(m)
        elif bit & I:
            e1.append(m)
            e2.append(-m)
        elif bit & c:
            e1.append(-m)
            e2.append(-m)
        else:
            e1.append(m)
            e2.append(m)
    p1 = PriceVector(tuple(e1))
    p2 = PriceVector(tuple(e2))

    q_total = sum(q.entries, Fraction(0))
    g1q = conjugate(sp.f1, q)
    g2mq = conjugate(sp.f2, -q)
    gp1 = conjugate(f, p1)
    gp2 = conjugate(f, p2)
    gjoin = conjugate(f, p1.join(p2))
    gmeet = conjugate(f, p1.meet(p2))

    if g1q != gp1 - m * (x0_keep.bit_count() + c.bit_count()):
        raise InternalCheckError("big-M reduction of the first slice conjugate failed")
    if g2mq != gp2 - m * (I.bit_count() + c.bit_count()) + q_total:
        raise InternalCheckError("big-M reduction of the second slice conjugate failed")
    if not (gjoin >= f.table[Y] - q_total + m * c.bit_count()):
        raise InternalCheckError("big-M join lower bound failed")
    if not (gmeet >= f.table[X] + m * X.bit_count()):
        raise InternalCheckError("big-M meet lower bound failed")

    return BigMPair(m_value=m, p1=p1, p2=p2)
