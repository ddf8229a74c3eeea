"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from pslab.series import SparsePoly

coefficient = st.complex_numbers(min_magnitude=0.05, max_magnitude=3.0, allow_nan=False, allow_infinity=False)


@st.composite
def polys(draw, dimension=2, max_degree=4, max_terms=6, unit_constant=False):
    n = draw(st.integers(1, dimension)) if dimension is None else dimension
    index = st.tuples(*[st.integers(0, max_degree)] * n).filter(lambda L: sum(L) <= max_degree)
    terms = draw(st.dictionaries(index, coefficient, max_size=max_terms))
    if unit_constant:
        terms[(0,) * n] = draw(coefficient.filter(lambda c: abs(c) > 0.5))
    return SparsePoly(n, terms)
