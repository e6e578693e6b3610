"""Exhaustive checkers for exchange axioms of set functions and set families.

Every checker returns a :class:`Verdict`; a failing verdict carries a
:class:`Witness` naming the violated condition, the quantified tuple, and
both sides of the inequality so the violation can be replayed exactly.
Quantified tuples are scanned in lexicographic bitmask order (X outer, Y
middle, elements or I inner), so witnesses are canonical.  The sweeps may
be partitioned across threads; contiguous chunks reduce to the earliest
hit, which keeps the reported witness identical for any thread count.

Exhaustive triple-quantified scans are practical up to roughly n = 12.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ._fast import IntTable
from .core import PriceVector, SetFamily, SetFunction, validate_exchange_args
from .errors import InputError
from .sets import elements_of, iter_bits, iter_submasks, set_str, submasks_smallest_first
from .values import NEG_INF, ExtValue, ext_to_json, ext_to_str

__all__ = [
    "Witness",
    "Verdict",
    "ExchangeCertificate",
    "FAMILY_AXIOMS",
    "check_single_exchange",
    "find_exchange_set",
    "check_multiple_exchange",
    "check_valuated_matroid",
    "check_local",
    "maximizer_exchange",
    "check_family",
    "find_base_exchange",
    "is_generalized_matroid",
]

FAMILY_AXIOMS = ("b-exc", "b-exc-m", "b-exc-pm")


@dataclass(frozen=True)
class Witness:
    """A violating assignment together with both sides of the inequality.

    ``sets`` and ``elements`` are (name, bitmask) and (name, 1-based label)
    pairs; ``prices`` carries any price vectors involved.  For most
    conditions the violation is ``lhs > rhs``; for conditions stated as a
    lower bound (conjugate submodularity) it is ``lhs < rhs``.
    """

    condition: str
    sets: tuple[tuple[str, int], ...] = ()
    elements: tuple[tuple[str, int], ...] = ()
    prices: tuple[tuple[str, PriceVector], ...] = ()
    lhs: ExtValue | None = None
    rhs: ExtValue | None = None

    def set_mask(self, name: str) -> int:
        return dict(self.sets)[name]

    def element(self, name: str) -> int:
        return dict(self.elements)[name]

    def price(self, name: str) -> PriceVector:
        return dict(self.prices)[name]

    def as_dict(self) -> dict:
        out: dict = {"condition": self.condition}
        for name, mask in self.sets:
            out[name] = list(elements_of(mask))
        for name, label in self.elements:
            out[name] = label
        for name, p in self.prices:
            out[name] = [ext_to_json(v) for v in p.entries]
        if self.lhs is not None:
            out["lhs"] = ext_to_json(self.lhs)
        if self.rhs is not None:
            out["rhs"] = ext_to_json(self.rhs)
        return out

    def describe(self) -> str:
        bits = [self.condition]
        bits += [f"{name}={set_str(mask)}" for name, mask in self.sets]
        bits += [f"{name}={label}" for name, label in self.elements]
        for name, p in self.prices:
            bits.append(f"{name}=({','.join(ext_to_str(v) for v in p.entries)})")
        if self.lhs is not None and self.rhs is not None:
            bits.append(f"lhs={ext_to_str(self.lhs)} rhs={ext_to_str(self.rhs)}")
        return " ".join(bits)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    witness: Witness | None = None

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise InputError("failing verdicts require a witness")

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class ExchangeCertificate:
    """A successful exchange: value sum does not drop after swapping I and J."""

    j_set: int
    lhs: ExtValue
    rhs: ExtValue

    def __post_init__(self):
        if not (self.lhs <= self.rhs):
            raise InputError("certificate violates lhs <= rhs")


def _first_hit(items, scan, threads: int):
    """Run ``scan`` over contiguous chunks of ``items``; earliest hit wins."""
    if threads <= 1 or len(items) <= 8:
        return scan(items)
    nchunks = min(len(items), threads * 4)
    step = (len(items) + nchunks - 1) // nchunks
    chunks = [items[i : i + step] for i in range(0, len(items), step)]
    hit = None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(scan, chunk) for chunk in chunks]
        for fut in futures:
            result = fut.result()
            if result is not None:
                hit = result
                break
    return hit


# ----------------------------------------------------------------------
# single-item exchange (discrete concavity)


def check_single_exchange(f: SetFunction, threads: int = 1) -> Verdict:
    """Check the one-item exchange axiom of discrete concavity.

    For every X, Y in the effective domain and i in X\\Y the sum f(X)+f(Y)
    must not exceed the best of removing i from X (adding it to Y) or
    swapping i against some j in Y\\X.  Tuples with an infinite left-hand
    side hold vacuously.
    """
    t = IntTable(f)
    s = t.sent
    dom = t.dom

    def scan(xs):
        for X in xs:
            fx = s[X]
            for Y in dom:
                lhs = fx + s[Y]
                xd = X & ~Y
                while xd:
                    ib = xd & -xd
                    xd ^= ib
                    xi = X ^ ib
                    yi = Y | ib
                    best = s[xi] + s[yi]
                    if lhs > best:
                        yd = Y & ~X
                        while yd:
                            jb = yd & -yd
                            yd ^= jb
                            cand = s[xi | jb] + s[yi ^ jb]
                            if cand > best:
                                best = cand
                                if lhs <= best:
                                    break
                        if lhs > best:
                            return (X, Y, ib)
        return None

    hit = _first_hit(dom, scan, threads)
    if hit is None:
        return Verdict(True)
    X, Y, ib = hit
    return Verdict(False, _single_exchange_witness(f, X, Y, ib))


def _single_exchange_witness(f: SetFunction, X: int, Y: int, ib: int) -> Witness:
    tab = f.table
    lhs = tab[X] + tab[Y]
    best: ExtValue = tab[X ^ ib] + tab[Y | ib]
    for jb in iter_bits(Y & ~X):
        best = max(best, tab[(X ^ ib) | jb] + tab[(Y | ib) ^ jb])
    return Witness(
        "mnat-exc",
        sets=(("X", X), ("Y", Y)),
        elements=(("i", ib.bit_length()),),
        lhs=lhs,
        rhs=best,
    )


# ----------------------------------------------------------------------
# multi-item exchange


def find_exchange_set(f: SetFunction, X: int, Y: int, I: int) -> ExchangeCertificate | None:
    """Search for J inside Y\\X with f(X)+f(Y) <= f((X\\I)uJ) + f((Y\\J)uI).

    Returns the certificate with minimum |J| (ties: smallest bitmask), or
    None when no J works.  Requires X, Y in the effective domain and I
    inside X\\Y.
    """
    validate_exchange_args(f, X, Y, I)
    tab = f.table
    lhs = tab[X] + tab[Y]
    xmi = X ^ I
    for J in submasks_smallest_first(Y & ~X):
        rhs = tab[xmi | J] + tab[(Y & ~J) | I]
        if lhs <= rhs:
            return ExchangeCertificate(j_set=J, lhs=lhs, rhs=rhs)
    return None


def check_multiple_exchange(f: SetFunction, threads: int = 1) -> Verdict:
    """Check the multi-item exchange axiom over every (X, Y, I).

    Worst-case cost grows as 4^n times the submask count of X\\Y, hence the
    documented exhaustive-scan cap.
    """
    t = IntTable(f)
    s = t.sent
    dom = t.dom

    def scan(xs):
        for X in xs:
            fx = s[X]
            for Y in dom:
                lhs = fx + s[Y]
                xd = X & ~Y
                yd = Y & ~X
                if not xd:
                    continue
                for I in iter_submasks(xd):
                    if not I:
                        continue  # J = empty reproduces (X, Y)
                    xmi = X ^ I
                    found = False
                    for J in iter_submasks(yd):
                        if s[xmi | J] + s[(Y & ~J) | I] >= lhs:
                            found = True
                            break
                    if not found:
                        return (X, Y, I)
        return None

    hit = _first_hit(dom, scan, threads)
    if hit is None:
        return Verdict(True)
    X, Y, I = hit
    tab = f.table
    best: ExtValue = NEG_INF
    for J in iter_submasks(Y & ~X):
        best = max(best, tab[(X ^ I) | J] + tab[(Y & ~J) | I])
    return Verdict(
        False,
        Witness(
            "mnat-exc-m",
            sets=(("X", X), ("Y", Y), ("I", I)),
            lhs=tab[X] + tab[Y],
            rhs=best,
        ),
    )


# ----------------------------------------------------------------------
# valuated matroids


def check_valuated_matroid(f: SetFunction, threads: int = 1) -> Verdict:
    """Check the valuated-matroid axioms.

    The effective domain must be equi-cardinal and every (X, Y, i) must
    admit a value-preserving swap against some j in Y\\X (no pure
    deletion branch here; the empty swap maximum counts as -inf).
    """
    t = IntTable(f)
    s = t.sent
    dom = t.dom

    card = dom[0].bit_count()
    for m in dom[1:]:
        if m.bit_count() != card:
            return Verdict(
                False,
                Witness(
                    "valuated-matroid:cardinality",
                    sets=(("X", dom[0]), ("Y", m)),
                    lhs=Fraction(card),
                    rhs=Fraction(m.bit_count()),
                ),
            )

    empty_max = 2 * t.neg - 1  # below any two-term sum

    def scan(xs):
        for X in xs:
            fx = s[X]
            for Y in dom:
                lhs = fx + s[Y]
                xd = X & ~Y
                while xd:
                    ib = xd & -xd
                    xd ^= ib
                    xi = X ^ ib
                    yi = Y | ib
                    best = empty_max
                    yd = Y & ~X
                    while yd:
                        jb = yd & -yd
                        yd ^= jb
                        cand = s[xi | jb] + s[yi ^ jb]
                        if cand > best:
                            best = cand
                            if lhs <= best:
                                break
                    if lhs > best:
                        return (X, Y, ib)
        return None

    hit = _first_hit(dom, scan, threads)
    if hit is None:
        return Verdict(True)
    X, Y, ib = hit
    tab = f.table
    best: ExtValue = NEG_INF
    for jb in iter_bits(Y & ~X):
        best = max(best, tab[(X ^ ib) | jb] + tab[(Y | ib) ^ jb])
    return Verdict(
        False,
        Witness(
            "valuated-matroid:exchange",
            sets=(("X", X), ("Y", Y)),
            elements=(("i", ib.bit_length()),),
            lhs=tab[X] + tab[Y],
            rhs=best,
        ),
    )


# ----------------------------------------------------------------------
# local characterization


def check_local(f: SetFunction, threads: int = 1) -> Verdict:
    """Check the local characterization of the one-item exchange axiom.

    The effective domain must satisfy the one-item family exchange
    condition, and three families of small inequalities must hold: (i)
    adding two items is submodular against adding each separately, (ii)
    and (iii) the stated best-of-two swap bounds on triples and disjoint
    pairs.  The first failing family is reported.
    """
    t = IntTable(f)
    dom = t.dom

    hit = _scan_b_exc(frozenset(dom), dom, threads)
    if hit is not None:
        X, Y, ib = hit
        return Verdict(
            False,
            Witness(
                "local:domain",
                sets=(("X", X), ("Y", Y)),
                elements=(("i", ib.bit_length()),),
            ),
        )

    xs_all = list(range(t.size))
    tab = f.table

    hit = _first_hit(xs_all, lambda xs: _scan_local_pairs(t, xs), threads)
    if hit is not None:
        X, ib, jb = hit
        lhs = tab[X | ib | jb] + tab[X]
        rhs = tab[X | ib] + tab[X | jb]
        return Verdict(
            False,
            Witness(
                "local:i",
                sets=(("X", X),),
                elements=(("i", ib.bit_length()), ("j", jb.bit_length())),
                lhs=lhs,
                rhs=rhs,
            ),
        )

    hit = _first_hit(xs_all, lambda xs: _scan_local_triples(t, xs), threads)
    if hit is not None:
        X, ib, jb, kb = hit
        lhs = tab[X | ib | jb] + tab[X | kb]
        rhs = max(tab[X | ib | kb] + tab[X | jb], tab[X | jb | kb] + tab[X | ib])
        return Verdict(
            False,
            Witness(
                "local:ii",
                sets=(("X", X),),
                elements=(
                    ("i", ib.bit_length()),
                    ("j", jb.bit_length()),
                    ("k", kb.bit_length()),
                ),
                lhs=lhs,
                rhs=rhs,
            ),
        )

    hit = _first_hit(xs_all, lambda xs: _scan_local_quads(t, xs), threads)
    if hit is not None:
        X, ib, jb, kb, lb = hit
        lhs = tab[X | ib | jb] + tab[X | kb | lb]
        rhs = max(tab[X | ib | kb] + tab[X | jb | lb], tab[X | jb | kb] + tab[X | ib | lb])
        return Verdict(
            False,
            Witness(
                "local:iii",
                sets=(("X", X),),
                elements=(
                    ("i", ib.bit_length()),
                    ("j", jb.bit_length()),
                    ("k", kb.bit_length()),
                    ("l", lb.bit_length()),
                ),
                lhs=lhs,
                rhs=rhs,
            ),
        )

    return Verdict(True)


def _free_bits(t: IntTable, X: int) -> list[int]:
    return [1 << i for i in range(t.n) if not X >> i & 1]


def _scan_local_pairs(t: IntTable, xs):
    vals, s = t.vals, t.sent
    for X in xs:
        if vals[X] is None:
            continue
        free = _free_bits(t, X)
        for ib, jb in combinations(free, 2):
            top = vals[X | ib | jb]
            if top is None:
                continue
            if top + vals[X] > s[X | ib] + s[X | jb]:
                return (X, ib, jb)
    return None


def _scan_local_triples(t: IntTable, xs):
    vals, s = t.vals, t.sent
    for X in xs:
        free = _free_bits(t, X)
        for ib, jb in combinations(free, 2):
            top = vals[X | ib | jb]
            if top is None:
                continue
            for kb in free:
                if kb == ib or kb == jb:
                    continue
                side = vals[X | kb]
                if side is None:
                    continue
                lhs = top + side
                if lhs > s[X | ib | kb] + s[X | jb] and lhs > s[X | jb | kb] + s[X | ib]:
                    return (X, ib, jb, kb)
    return None


def _scan_local_quads(t: IntTable, xs):
    vals, s = t.vals, t.sent
    for X in xs:
        free = _free_bits(t, X)
        pairs = list(combinations(free, 2))
        for a in range(len(pairs)):
            ib, jb = pairs[a]
            top = vals[X | ib | jb]
            if top is None:
                continue
            for b in range(a + 1, len(pairs)):
                kb, lb = pairs[b]
                if (ib | jb) & (kb | lb):
                    continue
                side = vals[X | kb | lb]
                if side is None:
                    continue
                lhs = top + side
                if lhs > s[X | ib | kb] + s[X | jb | lb] and lhs > s[X | jb | kb] + s[X | ib | lb]:
                    return (X, ib, jb, kb, lb)
    return None


# ----------------------------------------------------------------------
# exchanges among maximizers


def maximizer_exchange(f: SetFunction, X: int, Y: int, I: int) -> int | None:
    """Find J inside Y\\X keeping both swapped sets on the maximizer set.

    X and Y must themselves maximize f.  Returns the smallest such J by
    (cardinality, bitmask), or None when none exists; existence is
    guaranteed for discrete-concave functions.
    """
    amax = frozenset(f.argmax_masks)
    if X not in amax:
        raise InputError(f"X={set_str(X)} does not maximize the function")
    if Y not in amax:
        raise InputError(f"Y={set_str(Y)} does not maximize the function")
    if I & ~(X & ~Y):
        raise InputError(f"I={set_str(I)} is not a subset of X\\Y={set_str(X & ~Y)}")
    xmi = X ^ I
    for J in submasks_smallest_first(Y & ~X):
        if (xmi | J) in amax and ((Y & ~J) | I) in amax:
            return J
    return None


# ----------------------------------------------------------------------
# family axioms


def _scan_b_exc(members: frozenset[int], ms, threads: int):
    def scan(xs):
        for X in xs:
            for Y in ms:
                xd = X & ~Y
                while xd:
                    ib = xd & -xd
                    xd ^= ib
                    if (X ^ ib) in members and (Y | ib) in members:
                        continue
                    ok = False
                    yd = Y & ~X
                    while yd:
                        jb = yd & -yd
                        yd ^= jb
                        if ((X ^ ib) | jb) in members and ((Y | ib) ^ jb) in members:
                            ok = True
                            break
                    if not ok:
                        return (X, Y, ib)
        return None

    return _first_hit(list(ms), scan, threads)


def _scan_b_exc_m(members: frozenset[int], ms, threads: int):
    def scan(xs):
        for X in xs:
            for Y in ms:
                xd = X & ~Y
                if not xd:
                    continue
                yd = Y & ~X
                for I in iter_submasks(xd):
                    if not I:
                        continue
                    xmi = X ^ I
                    found = False
                    for J in iter_submasks(yd):
                        if (xmi | J) in members and ((Y & ~J) | I) in members:
                            found = True
                            break
                    if not found:
                        return (X, Y, I)
        return None

    return _first_hit(list(ms), scan, threads)


def _scan_b_exc_pm(members: frozenset[int], ms, threads: int):
    def scan(xs):
        for X in xs:
            for Y in ms:
                xd = X & ~Y
                while xd:
                    ib = xd & -xd
                    xd ^= ib
                    yd0 = Y & ~X
                    if (X ^ ib) not in members:
                        ok = False
                        yd = yd0
                        while yd:
                            jb = yd & -yd
                            yd ^= jb
                            if ((X ^ ib) | jb) in members:
                                ok = True
                                break
                        if not ok:
                            return (X, Y, ib, "a")
                    if (Y | ib) not in members:
                        ok = False
                        yd = yd0
                        while yd:
                            kb = yd & -yd
                            yd ^= kb
                            if ((Y | ib) ^ kb) in members:
                                ok = True
                                break
                        if not ok:
                            return (X, Y, ib, "b")
        return None

    return _first_hit(list(ms), scan, threads)


def check_family(family: SetFamily, axiom: str, threads: int = 1) -> Verdict:
    """Check a set-family exchange axiom: one of ``b-exc``, ``b-exc-m``,
    ``b-exc-pm``.

    A family passing ``b-exc`` is a generalized matroid.  The witness of a
    failing ``b-exc-pm`` names the clause (``a``: leaving X, ``b``:
    entering Y) that has no repair.
    """
    ax = axiom.strip().lower()
    if ax not in FAMILY_AXIOMS:
        raise InputError(f"unknown family axiom {axiom!r}; expected one of {FAMILY_AXIOMS}")
    if not family.members:
        raise InputError("the family has no members")
    members = family.members
    ms = family.sorted_members

    if ax == "b-exc":
        hit = _scan_b_exc(members, ms, threads)
        if hit is None:
            return Verdict(True)
        X, Y, ib = hit
        return Verdict(
            False,
            Witness("bnat-exc", sets=(("X", X), ("Y", Y)), elements=(("i", ib.bit_length()),)),
        )
    if ax == "b-exc-m":
        hit = _scan_b_exc_m(members, ms, threads)
        if hit is None:
            return Verdict(True)
        X, Y, I = hit
        return Verdict(False, Witness("bnat-exc-m", sets=(("X", X), ("Y", Y), ("I", I))))
    hit = _scan_b_exc_pm(members, ms, threads)
    if hit is None:
        return Verdict(True)
    X, Y, ib, clause = hit
    return Verdict(
        False,
        Witness(
            f"bnat-exc-pm:{clause}",
            sets=(("X", X), ("Y", Y)),
            elements=(("i", ib.bit_length()),),
        ),
    )


def is_generalized_matroid(family: SetFamily, threads: int = 1) -> bool:
    """A family is a generalized matroid exactly when it passes ``b-exc``."""
    return check_family(family, "b-exc", threads).passed


def find_base_exchange(family: SetFamily, X: int, Y: int, I: int) -> int | None:
    """Find J inside Y\\X with (X\\I)uJ and (Y\\J)uI both in the family.

    Minimum |J| first, ties by bitmask.  Returns None when no J exists
    (impossible for matroid basis families).
    """
    if X not in family.members:
        raise InputError(f"X={set_str(X)} is not a member of the family")
    if Y not in family.members:
        raise InputError(f"Y={set_str(Y)} is not a member of the family")
    if I & ~(X & ~Y):
        raise InputError(f"I={set_str(I)} is not a subset of X\\Y={set_str(X & ~Y)}")
    xmi = X ^ I
    for J in submasks_smallest_first(Y & ~X):
        if (xmi | J) in family.members and ((Y & ~J) | I) in family.members:
            return J
    return None
