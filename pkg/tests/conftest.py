"""Shared instances used across the suite.

rank2: n=3, value min(|S|, 2) everywhere (a rank function; passes all
    discrete-concavity checks; maximizers are the sets with >= 2 elements).
wmat: n=3, additive weights (0, 1, 2) on the two-element subsets, -inf
    elsewhere (a valuated matroid on the uniform matroid U(2,3)).
comp: n=2 with values 0, 1, 1, 3: the two goods are complements, so every
    substitutes-side condition fails.
"""

from fractions import Fraction

import pytest

from excheck import MatroidSpec, SetFunction, gen_weighted_matroid


@pytest.fixture(scope="session")
def rank2() -> SetFunction:
    return SetFunction.from_callable(3, lambda m: Fraction(min(m.bit_count(), 2)))


@pytest.fixture(scope="session")
def wmat() -> SetFunction:
    return gen_weighted_matroid(MatroidSpec.uniform(2, 3, weights=(0, 1, 2)))


@pytest.fixture(scope="session")
def comp() -> SetFunction:
    return SetFunction(2, (Fraction(0), Fraction(1), Fraction(1), Fraction(3)))


@pytest.fixture(scope="session")
def k4() -> MatroidSpec:
    return MatroidSpec.graphic([(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
