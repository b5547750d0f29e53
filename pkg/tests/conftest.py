from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from stfharmonics.maxwell import AngularPolynomial, UnitVec
from stfharmonics.sym_tensor import SymTensor, exponent_tuples

# Points of the unit sphere with rational coordinates keep every evaluation exact.
RATIONAL_POINTS = [
    UnitVec(Fraction(3, 5), Fraction(4, 5), Fraction(0)),
    UnitVec(Fraction(2, 7), Fraction(3, 7), Fraction(6, 7)),
    UnitVec(Fraction(1, 3), Fraction(2, 3), Fraction(2, 3)),
    UnitVec(Fraction(-2, 3), Fraction(1, 3), Fraction(-2, 3)),
    UnitVec(Fraction(0), Fraction(0), Fraction(1)),
]

small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=6)


@st.composite
def rational_tensors(draw, min_rank: int = 0, max_rank: int = 4, dim: int = 3) -> SymTensor:
    rank = draw(st.integers(min_rank, max_rank))
    keys = exponent_tuples(rank, dim)
    values = draw(st.lists(small_fractions, min_size=len(keys), max_size=len(keys)))
    return SymTensor(rank, dim, dict(zip(keys, values)))


@st.composite
def rational_polynomials(draw, max_rank: int = 4) -> AngularPolynomial:
    terms = draw(st.lists(rational_tensors(max_rank=max_rank), min_size=1, max_size=3))
    return AngularPolynomial(terms)


@pytest.fixture
def rational_points() -> list[UnitVec]:
    return list(RATIONAL_POINTS)
