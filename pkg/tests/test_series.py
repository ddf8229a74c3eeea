import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pslab.series import (
    DimensionError,
    SingularInversionError,
    SparsePoly,
    TruncatedSeries,
    dilate,
    multi_indices,
    poly_mul,
    series_reciprocal,
)
from strategies import polys

z1 = SparsePoly.variable(0, 2)
z2 = SparsePoly.variable(1, 2)
one = SparsePoly.constant(1, 2)


def close(a: SparsePoly, b: SparsePoly, tol=1e-12):
    keys = set(a.terms) | set(b.terms)
    return all(abs(a.coeff(L) - b.coeff(L)) <= tol * max(1.0, abs(b.coeff(L))) for L in keys)


def test_difference_of_squares():
    assert poly_mul(one + z1, one - z1, 2).base == one - z1 * z1


def test_product_with_one_is_identity():
    f = 1 - 3 * z1 * z2 + (2 + 1j) * z2**3
    assert poly_mul(f, one).base == f


def test_binomial_cube():
    s = z1 + z2
    cube = poly_mul(poly_mul(s, s).base, s).base
    assert [cube.coeff((k, 3 - k)).real for k in range(4)] == [math.comb(3, k) for k in range(4)]


def test_truncation_is_by_total_degree():
    p = poly_mul(one + z1 + z2, one + z1 * z2, 2).base
    assert p.total_degree == 2
    assert p.coeff((1, 1)) == 1 and p.coeff((2, 1)) == 0


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        poly_mul(z1, SparsePoly.variable(0, 3))


def test_no_stored_zeros():
    p = (one + z1) - z1
    assert p.terms == {(0, 0): 1}
    assert SparsePoly(2, {(1, 0): 0.0}).is_zero


def test_truncated_series_rejects_high_terms():
    with pytest.raises(ValueError):
        TruncatedSeries(z1 * z1, 1)


def test_geometric_reciprocal():
    h = series_reciprocal(1 - SparsePoly.variable(0, 1), 5).base
    assert h.terms == {(k,): 1 for k in range(6)}


def test_reciprocal_of_one():
    assert series_reciprocal(one, 7).base == one


def test_reciprocal_of_averaged_linear():
    f = one - (z1 + z2) / 2
    h = series_reciprocal(f, 4).base
    for j in range(5):
        for j1 in range(j + 1):
            assert h.coeff((j1, j - j1)) == pytest.approx(2.0**-j * math.comb(j, j1), rel=1e-15)
    back = poly_mul(f, h, 4).base
    assert close(back, one)


def test_reciprocal_singular():
    with pytest.raises(SingularInversionError):
        series_reciprocal(z1 + z2, 3)


def test_dilate_examples():
    f = 1 - 2 * z1 + z1 * z2
    assert dilate(f, 1) == f
    assert dilate(one - z1, 0) == one
    assert dilate(z1 * z2, 0.5) == 0.25 * z1 * z2
    with pytest.raises(ValueError):
        dilate(f, 1.5)


def test_evaluation_and_gradient():
    f = 1 - 2 * z1 * z2 + z2**2
    z = np.array([0.3 + 0.1j, -0.2j])
    assert f(z) == pytest.approx(1 - 2 * z[0] * z[1] + z[1] ** 2)
    assert np.allclose(f.gradient(z), [-2 * z[1], -2 * z[0] + 2 * z[1]])
    pts = np.array([[0, 0], [1, 1]], dtype=complex)
    assert np.allclose(f(pts), [1, 0])


def test_active_variables_and_parts():
    f = 1 + z2 + 3 * z2**2
    assert f.active_variables() == (1,)
    assert f.homogeneous_part(2) == 3 * z2**2
    assert len(list(multi_indices(3, 4))) == math.comb(6, 2)


@settings(max_examples=60, deadline=None)
@given(polys(unit_constant=True), st.integers(0, 8))
def test_reciprocal_is_inverse(f, cap):
    back = poly_mul(f, series_reciprocal(f, cap), cap).base
    scale = max(1.0, max(abs(c) for c in back.terms.values()))
    for L, c in back.terms.items():
        target = 1.0 if sum(L) == 0 else 0.0
        assert abs(c - target) <= 1e-12 * scale * max(1.0, abs(f.constant_term) ** -cap)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), st.floats(0, 1))
def test_dilate_is_multiplicative(f, g, r):
    assert close(dilate(poly_mul(f, g).base, r), poly_mul(dilate(f, r), dilate(g, r)).base, 1e-12)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys(), st.integers(0, 6))
def test_mul_commutative_associative(a, b, c, cap):
    assert close(poly_mul(a, b, cap).base, poly_mul(b, a, cap).base, 1e-13)
    left = poly_mul(poly_mul(a, b, cap), c, cap).base
    right = poly_mul(a, poly_mul(b, c, cap), cap).base
    assert close(left, right, 1e-12)
