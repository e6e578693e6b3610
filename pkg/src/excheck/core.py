"""Core types: set functions, set families, price vectors, and restrictions.

A :class:`SetFunction` is a dense table of exact extended values over all
2^n subsets of {1..n}, with at least one finite entry.  All types are
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import EmptySliceError, InputError
from .sets import elements_of, iter_bits, set_str
from .values import NEG_INF, ExtValue, as_ext_value, is_finite

__all__ = [
    "MAX_GROUND_SIZE",
    "SetFunction",
    "SetFamily",
    "PriceVector",
    "SlicePair",
    "effective_domain",
    "shift_by_price",
    "slice_pair",
    "with_value",
]

# Dense tables get large fast; one million entries is the ceiling.
MAX_GROUND_SIZE = 20


def _check_mask(mask: int, n: int, name: str = "subset") -> None:
    if not isinstance(mask, int) or isinstance(mask, bool) or mask < 0 or mask >= (1 << n):
        raise InputError(f"{name} out of range for ground set of size {n}: {mask!r}")


@dataclass(frozen=True)
class SetFunction:
    """Extended-rational set function given by its full value table.

    ``table[S]`` is the value on the subset whose characteristic bitmask is
    ``S``.  Entries are exact rationals or ``NEG_INF``; at least one entry
    must be finite.  ``n = 0`` is permitted (a single-entry table) so that
    restrictions to an empty ground set are representable; external file
    formats require ``1 <= n <= 20``.
    """

    n: int
    table: tuple[ExtValue, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0 or self.n > MAX_GROUND_SIZE:
            raise InputError(f"ground-set size must be in 0..{MAX_GROUND_SIZE}, got {self.n!r}")
        tab = tuple(as_ext_value(v) for v in self.table)
        if len(tab) != (1 << self.n):
            raise InputError(f"table must have exactly {1 << self.n} entries, got {len(tab)}")
        if not any(is_finite(v) for v in tab):
            raise InputError("effective domain is empty: every entry is -inf")
        object.__setattr__(self, "table", tab)

    @classmethod
    def from_entries(cls, n: int, entries) -> "SetFunction":
        """Build from (mask, value) pairs; unmentioned subsets are -inf."""
        tab: list[ExtValue] = [NEG_INF] * (1 << n)
        seen = set()
        for mask, value in entries:
            _check_mask(mask, n)
            if mask in seen:
                raise InputError(f"duplicate subset {set_str(mask)}")
            seen.add(mask)
            tab[mask] = as_ext_value(value)
        return cls(n, tuple(tab))

    @classmethod
    def from_callable(cls, n: int, fn) -> "SetFunction":
        return cls(n, tuple(fn(mask) for mask in range(1 << n)))

    def value(self, subset: int) -> ExtValue:
        """Value on a subset; total for every in-range mask."""
        _check_mask(subset, self.n)
        return self.table[subset]

    @cached_property
    def dom_masks(self) -> tuple[int, ...]:
        """Masks with finite value, ascending."""
        return tuple(m for m, v in enumerate(self.table) if is_finite(v))

    @cached_property
    def value_range(self) -> tuple[Fraction, Fraction]:
        """(min, max) over the finite entries."""
        finite = [self.table[m] for m in self.dom_masks]
        return (min(finite), max(finite))

    @cached_property
    def max_value(self) -> Fraction:
        return self.value_range[1]

    @cached_property
    def argmax_masks(self) -> tuple[int, ...]:
        top = self.max_value
        return tuple(m for m in self.dom_masks if self.table[m] == top)


@dataclass(frozen=True)
class SetFamily:
    """A family of subsets of {1..n}, kept as a frozenset of bitmasks."""

    n: int
    members: frozenset[int]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0 or self.n > MAX_GROUND_SIZE:
            raise InputError(f"ground-set size must be in 0..{MAX_GROUND_SIZE}, got {self.n!r}")
        mem = frozenset(self.members)
        for m in mem:
            _check_mask(m, self.n, "member")
        object.__setattr__(self, "members", mem)

    @cached_property
    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class PriceVector:
    """Exact rational price per ground-set element (entry i prices element i+1)."""

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        norm = []
        for v in self.entries:
            fv = as_ext_value(v)
            if not is_finite(fv):
                raise InputError("prices must be finite rationals")
            norm.append(fv)
        object.__setattr__(self, "entries", tuple(norm))

    @classmethod
    def zeros(cls, n: int) -> "PriceVector":
        return cls((Fraction(0),) * n)

    def __len__(self) -> int:
        return len(self.entries)

    def entry(self, element: int) -> Fraction:
        """Price of a 1-based element."""
        if element < 1 or element > len(self.entries):
            raise InputError(f"element {element} out of range")
        return self.entries[element - 1]

    def sum_over(self, mask: int) -> Fraction:
        total = Fraction(0)
        for bit in iter_bits(mask):
            total += self.entries[bit.bit_length() - 1]
        return total

    @cached_property
    def subset_sums(self) -> tuple[Fraction, ...]:
        """Sums over every mask of the full ground set (dynamic programming)."""
        n = len(self.entries)
        sums = [Fraction(0)] * (1 << n)
        for m in range(1, 1 << n):
            low = m & -m
            sums[m] = sums[m ^ low] + self.entries[low.bit_length() - 1]
        return tuple(sums)

    def __add__(self, other: "PriceVector") -> "PriceVector":
        if len(other) != len(self):
            raise InputError("price vectors have different lengths")
        return PriceVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "PriceVector":
        return PriceVector(tuple(-a for a in self.entries))

    def join(self, other: "PriceVector") -> "PriceVector":
        """Component-wise maximum."""
        if len(other) != len(self):
            raise InputError("price vectors have different lengths")
        return PriceVector(tuple(max(a, b) for a, b in zip(self.entries, other.entries)))

    def meet(self, other: "PriceVector") -> "PriceVector":
        """Component-wise minimum."""
        if len(other) != len(self):
            raise InputError("price vectors have different lengths")
        return PriceVector(tuple(min(a, b) for a, b in zip(self.entries, other.entries)))

    def leq(self, other: "PriceVector") -> bool:
        """Component-wise <=."""
        if len(other) != len(self):
            raise InputError("price vectors have different lengths")
        return all(a <= b for a, b in zip(self.entries, other.entries))

    def abs_sum(self) -> Fraction:
        return sum((abs(a) for a in self.entries), Fraction(0))


@dataclass(frozen=True)
class SlicePair:
    """Two restrictions of a set function used by the exchange analysis.

    For fixed X, Y, I the first function maps J inside y0 = Y\\X to the value
    on (X\\I) u J, the second to the value on (Y\\J) u I.  Both live on the
    ground set y0, relabelled 1..k in ascending order of the parent labels
    recorded in ``elements``.
    """

    y0: int
    elements: tuple[int, ...]
    f1: SetFunction
    f2: SetFunction

    def to_parent_mask(self, local_mask: int) -> int:
        out = 0
        for bit in iter_bits(local_mask):
            out |= 1 << (self.elements[bit.bit_length() - 1] - 1)
        return out


def effective_domain(f: SetFunction) -> SetFamily:
    """The family of subsets where the function is finite."""
    return SetFamily(f.n, frozenset(f.dom_masks))


def shift_by_price(f: SetFunction, p: PriceVector) -> SetFunction:
    """Subtract the additive price of each subset; -inf entries stay -inf."""
    if len(p) != f.n:
        raise InputError(f"price vector length {len(p)} does not match ground set {f.n}")
    sums = p.subset_sums
    tab = tuple(v - sums[m] if is_finite(v) else NEG_INF for m, v in enumerate(f.table))
    return SetFunction(f.n, tab)


def validate_exchange_args(f: SetFunction, X: int, Y: int, I: int) -> None:
    """Shared precondition: X, Y finite, I inside X\\Y."""
    _check_mask(X, f.n, "X")
    _check_mask(Y, f.n, "Y")
    _check_mask(I, f.n, "I")
    if not is_finite(f.table[X]):
        raise InputError(f"X={set_str(X)} is not in the effective domain")
    if not is_finite(f.table[Y]):
        raise InputError(f"Y={set_str(Y)} is not in the effective domain")
    if I & ~(X & ~Y):
        raise InputError(f"I={set_str(I)} is not a subset of X\\Y={set_str(X & ~Y)}")


def slice_pair(f: SetFunction, X: int, Y: int, I: int) -> SlicePair:
    """Restrict f to the two exchange slices determined by (X, Y, I).

    Requires X and Y in the effective domain and I inside X\\Y.  Raises
    :class:`EmptySliceError` when either restriction is -inf everywhere,
    which cannot happen for discrete-concave functions but is reachable in
    general.
    """
    validate_exchange_args(f, X, Y, I)
    c = X & Y
    x0 = X & ~Y
    y0 = Y & ~X
    elems = elements_of(y0)
    k = len(elems)
    parent_bits = [1 << (e - 1) for e in elems]
    base1 = (x0 & ~I) | c
    base2 = I | c

    t1: list[ExtValue] = []
    t2: list[ExtValue] = []
    for local in range(1 << k):
        jp = 0
        for i in range(k):
            if local >> i & 1:
                jp |= parent_bits[i]
        t1.append(f.table[base1 | jp])
        t2.append(f.table[base2 | (y0 & ~jp)])

    try:
        f1 = SetFunction(k, tuple(t1))
    except InputError:
        raise EmptySliceError(
            f"slice through (X\\I) u J has empty effective domain for "
            f"X={set_str(X)}, Y={set_str(Y)}, I={set_str(I)}"
        ) from None
    try:
        f2 = SetFunction(k, tuple(t2))
    except InputError:
        raise EmptySliceError(
            f"slice through (Y\\J) u I has empty effective domain for "
            f"X={set_str(X)}, Y={set_str(Y)}, I={set_str(I)}"
        ) from None
    return SlicePair(y0=y0, elements=elems, f1=f1, f2=f2)


def with_value(f: SetFunction, subset: int, value) -> SetFunction:
    """Copy of f with one table entry replaced."""
    _check_mask(subset, f.n)
    tab = list(f.table)
    tab[subset] = as_ext_value(value)
    return SetFunction(f.n, tuple(tab))
