"""Demand correspondences and the buyer-side substitutes conditions.

The quantifier over all real price vectors is not enumerable, so the
gross-substitutes and single-improvement checks sample: a found violation
is exact and final, while the absence of one is reported as "no violation
found (sampled)", never as a proof.  Exact certification goes through the
exchange checkers via the known equivalences.  Price sampling is seeded
and fully deterministic: a half-integer grid by default, preceded by an
exhaustive integer sweep when the ground set and radius are small enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor
from random import Random

from ._fast import IntTable
from .checkers import Verdict, Witness, check_multiple_exchange
from .core import PriceVector, SetFamily, SetFunction
from .errors import InputError, InternalCheckError
from .sets import iter_bits, iter_submasks
from .values import ExtValue

__all__ = [
    "DemandSet",
    "demand",
    "PriceSampler",
    "check_gs_at",
    "check_gs_sampled",
    "check_si_at",
    "check_si_sampled",
    "check_nc_at",
    "check_nc_sampled",
    "check_snc",
    "SampledVerdict",
    "EquivalenceReport",
    "equivalence_report",
]

_PHASE1_MAX_GRID = 100_000
_PHASE1_MAX_N = 4


@dataclass(frozen=True)
class DemandSet:
    """Argmax family of the price-shifted function, with the attained value."""

    price: PriceVector
    members: SetFamily
    value: ExtValue


def demand(f: SetFunction, p: PriceVector) -> DemandSet:
    """Exact argmax of f(Z) - p(Z) over all subsets."""
    if len(p) != f.n:
        raise InputError(f"price vector length {len(p)} does not match ground set {f.n}")
    sums = p.subset_sums
    best = None
    members: list[int] = []
    for m in f.dom_masks:
        v = f.table[m] - sums[m]
        if best is None or v > best:
            best = v
            members = [m]
        elif v == best:
            members.append(m)
    assert best is not None
    return DemandSet(price=p, members=SetFamily(f.n, frozenset(members)), value=best)


@dataclass(frozen=True)
class PriceSampler:
    """Deterministic price stream: seed, sample count, grid step, radius.

    ``radius`` defaults to twice the finite value range plus one, resolved
    per function.  The same seed always yields the same stream, hence the
    same verdicts and witnesses.
    """

    seed: int
    count: int = 200
    grid_step: Fraction = Fraction(1, 2)
    radius: Fraction | None = None

    def __post_init__(self):
        step = Fraction(self.grid_step)
        if step <= 0:
            raise InputError("grid_step must be positive")
        object.__setattr__(self, "grid_step", step)
        if self.radius is not None:
            r = Fraction(self.radius)
            if r < 0:
                raise InputError("radius must be nonnegative")
            object.__setattr__(self, "radius", r)
        if self.count < 0:
            raise InputError("count must be nonnegative")

    def radius_for(self, f: SetFunction) -> Fraction:
        if self.radius is not None:
            return self.radius
        lo, hi = f.value_range
        return 2 * (hi - lo) + 1

    def _phase1_radius(self, f: SetFunction) -> int | None:
        """Integer radius for the exhaustive sweep, or None when too large."""
        ri = floor(self.radius_for(f))
        if f.n > _PHASE1_MAX_N or (2 * ri + 1) ** f.n > _PHASE1_MAX_GRID:
            return None
        return ri

    def _random_price(self, rng: Random, n: int, radius: Fraction) -> PriceVector:
        step = self.grid_step
        kmax = floor(radius / step)
        return PriceVector(tuple(step * rng.randint(-kmax, kmax) for _ in range(n)))

    def iter_prices(self, f: SetFunction):
        """Integer sweep (when small), then ``count`` random grid prices."""
        ri = self._phase1_radius(f)
        if ri is not None:
            for combo in product(range(-ri, ri + 1), repeat=f.n):
                yield PriceVector(tuple(Fraction(c) for c in combo))
        rng = Random(2 * self.seed)
        radius = self.radius_for(f)
        for _ in range(self.count):
            yield self._random_price(rng, f.n, radius)

    def iter_price_pairs(self, f: SetFunction):
        """Pairs p <= q; q raises a coordinate subset of p.

        The integer sweep pairs each grid point with one unit raise per
        coordinate; the random phase raises a random subset by random
        grid increments.
        """
        ri = self._phase1_radius(f)
        one = Fraction(1)
        if ri is not None:
            for combo in product(range(-ri, ri + 1), repeat=f.n):
                p = PriceVector(tuple(Fraction(c) for c in combo))
                for c in range(f.n):
                    q = PriceVector(
                        tuple(v + one if i == c else v for i, v in enumerate(p.entries))
                    )
                    yield p, q
        rng = Random(2 * self.seed + 1)
        radius = self.radius_for(f)
        step = self.grid_step
        kmax = max(1, floor(radius / step))
        for _ in range(self.count):
            p = self._random_price(rng, f.n, radius)
            raised = [rng.random() < 0.5 for _ in range(f.n)]
            q = PriceVector(
                tuple(
                    v + step * rng.randint(1, kmax) if raised[i] else v
                    for i, v in enumerate(p.entries)
                )
            )
            yield p, q

    def price_count(self, f: SetFunction) -> int:
        ri = self._phase1_radius(f)
        phase1 = (2 * ri + 1) ** f.n if ri is not None else 0
        return phase1 + self.count

    def pair_count(self, f: SetFunction) -> int:
        ri = self._phase1_radius(f)
        phase1 = ((2 * ri + 1) ** f.n) * f.n if ri is not None else 0
        return phase1 + self.count


# ----------------------------------------------------------------------
# scaled-integer helpers for the sampled sweeps


class _ScaledView:
    """Integer view of the table shared by every price in a sampled run."""

    def __init__(self, f: SetFunction, extra_denominator: int):
        self.f = f
        self.t = IntTable(f, extra_denominator=extra_denominator)

    def price_ints(self, p: PriceVector) -> list[int]:
        s = self.t.scale
        out = []
        for v in p.entries:
            if s % v.denominator:
                raise InternalCheckError("sampled price outside the scaled grid")
            out.append(v.numerator * (s // v.denominator))
        return out

    def price_sums(self, pint: list[int]) -> list[int]:
        n = self.t.n
        sums = [0] * (1 << n)
        for m in range(1, 1 << n):
            low = m & -m
            sums[m] = sums[m ^ low] + pint[low.bit_length() - 1]
        return sums

    def demand_members(self, sums: list[int]) -> tuple[list[int], int]:
        vals = self.t.vals
        best = None
        members: list[int] = []
        for mask in self.t.dom:
            v = vals[mask] - sums[mask]
            if best is None or v > best:
                best = v
                members = [mask]
            elif v == best:
                members.append(mask)
        assert best is not None
        return members, best


def _fixed_price_mask(p: PriceVector, q: PriceVector) -> int:
    mask = 0
    for i, (a, b) in enumerate(zip(p.entries, q.entries)):
        if a == b:
            mask |= 1 << i
    return mask


def _gs_violating_bundle(dp: list[int], dq: list[int], eqmask: int) -> int | None:
    for X in dp:
        fixed = X & eqmask
        if fixed == 0:
            continue
        if not any(fixed & ~Y == 0 for Y in dq):
            return X
    return None


# ----------------------------------------------------------------------
# gross substitutes


def check_gs_at(f: SetFunction, p: PriceVector, q: PriceVector) -> Verdict:
    """Substitutes condition at one price pair p <= q.

    Every bundle demanded at p must have its fixed-price part contained in
    some bundle demanded at q.
    """
    if not p.leq(q):
        raise InputError("gross-substitutes checks need p <= q componentwise")
    dp = demand(f, p).members.sorted_members
    dq = demand(f, q).members.sorted_members
    eqmask = _fixed_price_mask(p, q)
    bad = _gs_violating_bundle(list(dp), list(dq), eqmask)
    if bad is None:
        return Verdict(True)
    return Verdict(False, Witness("gs", sets=(("X", bad),), prices=(("p", p), ("q", q))))


def check_gs_sampled(f: SetFunction, sampler: PriceSampler) -> Verdict:
    """Scan the sampled price pairs for a substitutes violation.

    Pass means no sampled violation; it is not a proof.  The first
    violating pair (lowest sample index) is reported, with the witness
    recomputed by the exact at-price check.
    """
    view = _ScaledView(f, sampler.grid_step.denominator)
    for idx, (p, q) in enumerate(sampler.iter_price_pairs(f)):
        dp, _ = view.demand_members(view.price_sums(view.price_ints(p)))
        dq, _ = view.demand_members(view.price_sums(view.price_ints(q)))
        bad = _gs_violating_bundle(dp, dq, _fixed_price_mask(p, q))
        if bad is not None:
            exact = check_gs_at(f, p, q)
            if exact.passed:
                raise InternalCheckError("scaled sweep disagrees with the exact check")
            w = exact.witness
            assert w is not None
            return Verdict(
                False,
                Witness(w.condition, sets=w.sets, prices=w.prices, elements=(("sample", idx),)),
            )
    return Verdict(True)


# ----------------------------------------------------------------------
# single improvement


def check_si_at(f: SetFunction, p: PriceVector) -> Verdict:
    """At price p, every suboptimal bundle in the domain must improve by
    adding, dropping, or swapping a single good."""
    if len(p) != f.n:
        raise InputError(f"price vector length {len(p)} does not match ground set {f.n}")
    sums = p.subset_sums
    tab = f.table
    full = (1 << f.n) - 1
    best = demand(f, p).value
    for X in f.dom_masks:
        v = tab[X] - sums[X]
        if v == best:
            continue
        if _si_improves(tab, sums, X, v, full):
            continue
        return Verdict(
            False,
            Witness("si", sets=(("X", X),), prices=(("p", p),), lhs=v, rhs=best),
        )
    return Verdict(True)


def _si_improves(tab, sums, X, v, full) -> bool:
    for ib in iter_bits(X):
        m = X ^ ib
        if tab[m] - sums[m] > v:
            return True
    for jb in iter_bits(full & ~X):
        m = X | jb
        if tab[m] - sums[m] > v:
            return True
    for ib in iter_bits(X):
        for jb in iter_bits(full & ~X):
            m = (X ^ ib) | jb
            if tab[m] - sums[m] > v:
                return True
    return False


def check_si_sampled(f: SetFunction, sampler: PriceSampler) -> Verdict:
    """Scan sampled prices for a single-improvement violation (refutation
    only; a pass is not a proof)."""
    view = _ScaledView(f, sampler.grid_step.denominator)
    vals = view.t.vals
    full = (1 << f.n) - 1
    for idx, p in enumerate(sampler.iter_prices(f)):
        sums = view.price_sums(view.price_ints(p))
        _, best = view.demand_members(sums)
        for X in view.t.dom:
            v = vals[X] - sums[X]
            if v == best:
                continue
            if _si_improves_int(vals, sums, X, v, full):
                continue
            exact = check_si_at(f, p)
            if exact.passed:
                raise InternalCheckError("scaled sweep disagrees with the exact check")
            w = exact.witness
            assert w is not None
            return Verdict(
                False,
                Witness(
                    w.condition,
                    sets=w.sets,
                    prices=w.prices,
                    elements=(("sample", idx),),
                    lhs=w.lhs,
                    rhs=w.rhs,
                ),
            )
    return Verdict(True)


def _si_improves_int(vals, sums, X, v, full) -> bool:
    for ib in iter_bits(X):
        m = X ^ ib
        w = vals[m]
        if w is not None and w - sums[m] > v:
            return True
    for jb in iter_bits(full & ~X):
        m = X | jb
        w = vals[m]
        if w is not None and w - sums[m] > v:
            return True
    for ib in iter_bits(X):
        for jb in iter_bits(full & ~X):
            m = (X ^ ib) | jb
            w = vals[m]
            if w is not None and w - sums[m] > v:
                return True
    return False


# ----------------------------------------------------------------------
# no complementarities


def _nc_violation(members: list[int], simultaneous: bool) -> tuple[int, int, int] | None:
    mset = frozenset(members)
    for X in members:
        for Y in members:
            xd = X & ~Y
            if not xd:
                continue
            yd = Y & ~X
            for I in iter_submasks(xd):
                if not I:
                    continue
                xmi = X ^ I
                ok = False
                for J in iter_submasks(yd):
                    if (xmi | J) not in mset:
                        continue
                    if simultaneous and ((Y & ~J) | I) not in mset:
                        continue
                    ok = True
                    break
                if not ok:
                    return (X, Y, I)
    return None


def check_nc_at(f: SetFunction, p: PriceVector, simultaneous: bool = False) -> Verdict:
    """No-complementarities condition over the demand set at price p.

    For demanded X, Y and I inside X\\Y some J inside Y\\X must keep
    (X\\I) u J demanded; with ``simultaneous`` the counterpart (Y\\J) u I
    must stay demanded too.
    """
    members = list(demand(f, p).members.sorted_members)
    hit = _nc_violation(members, simultaneous)
    if hit is None:
        return Verdict(True)
    X, Y, I = hit
    cond = "ncsim" if simultaneous else "nc"
    return Verdict(
        False, Witness(cond, sets=(("X", X), ("Y", Y), ("I", I)), prices=(("p", p),))
    )


def check_nc_sampled(
    f: SetFunction, sampler: PriceSampler, simultaneous: bool = False
) -> Verdict:
    """Scan sampled prices for a no-complementarities violation."""
    view = _ScaledView(f, sampler.grid_step.denominator)
    for idx, p in enumerate(sampler.iter_prices(f)):
        members, _ = view.demand_members(view.price_sums(view.price_ints(p)))
        if _nc_violation(members, simultaneous) is None:
            continue
        exact = check_nc_at(f, p, simultaneous)
        if exact.passed:
            raise InternalCheckError("scaled sweep disagrees with the exact check")
        w = exact.witness
        assert w is not None
        return Verdict(
            False,
            Witness(w.condition, sets=w.sets, prices=w.prices, elements=(("sample", idx),)),
        )
    return Verdict(True)


# ----------------------------------------------------------------------
# strong no complementarities and the combined report


def check_snc(f: SetFunction, threads: int = 1) -> Verdict:
    """Price-free strong condition; identical to the multi-item exchange check."""
    return check_multiple_exchange(f, threads)


@dataclass(frozen=True)
class SampledVerdict:
    verdict: Verdict
    samples: int


@dataclass(frozen=True)
class EquivalenceReport:
    """Verdicts of the three exact checks and four sampled conditions.

    The exact verdicts always agree with one another, and a sampled
    refutation can only appear when the exact checks fail; either
    inconsistency raises :class:`InternalCheckError`.
    """

    single_exchange: Verdict
    multiple_exchange: Verdict
    local: Verdict
    gs: SampledVerdict
    si: SampledVerdict
    nc: SampledVerdict
    ncsim: SampledVerdict

    @property
    def exact_pass(self) -> bool:
        return self.single_exchange.passed

    @property
    def all_pass(self) -> bool:
        return self.exact_pass and all(
            sv.verdict.passed for sv in (self.gs, self.si, self.nc, self.ncsim)
        )


def equivalence_report(
    f: SetFunction, sampler: PriceSampler, threads: int = 1
) -> EquivalenceReport:
    """Run all seven checks and cross-validate their consistency."""
    from .checkers import check_local, check_single_exchange

    single = check_single_exchange(f, threads)
    multiple = check_snc(f, threads)
    local = check_local(f, threads)
    if not (single.passed == multiple.passed == local.passed):
        raise InternalCheckError(
            "exact checks disagree: "
            f"single={single.status} multiple={multiple.status} local={local.status}"
        )

    gs = SampledVerdict(check_gs_sampled(f, sampler), sampler.pair_count(f))
    si = SampledVerdict(check_si_sampled(f, sampler), sampler.price_count(f))
    nc = SampledVerdict(check_nc_sampled(f, sampler, False), sampler.price_count(f))
    ncsim = SampledVerdict(check_nc_sampled(f, sampler, True), sampler.price_count(f))

    if single.passed:
        for name, sv in (("gs", gs), ("si", si), ("nc", nc), ("ncsim", ncsim)):
            if not sv.verdict.passed:
                raise InternalCheckError(
                    f"sampled {name} refutation on a function passing the exact checks"
                )
    return EquivalenceReport(
        single_exchange=single,
        multiple_exchange=multiple,
        local=local,
        gs=gs,
        si=si,
        nc=nc,
        ncsim=ncsim,
    )
