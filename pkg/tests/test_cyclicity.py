import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pslab.cyclicity import (
    UnconvergedWarning,
    boundary_zero_scan,
    cyclicity_verdict,
    default_r_grid,
    dilation_quotient_norm,
    dilation_sweep,
    dilation_sweep_multi,
    interior_zero_scan,
)
from pslab.domains import Ellipsoid, Polydisk, omega_lambda
from pslab.expr import parse_poly
from pslab.norms import function_norm_sq, monomial_norm_sq
from pslab.series import SingularInversionError, SparsePoly, dilate, poly_mul, series_reciprocal

BIDISK = Polydisk(2)
BALL = Ellipsoid((1, 1))


def edge_quotient(beta, r):
    """||1||^2 + (1-r)^2 sum_{j>=1} (j+2)^beta r^{2j-2} for f = 1 - z1 on the bidisk."""
    return 2.0**beta + (1 - r) ** 2 * float(mpmath.lerchphi(r * r, -beta, 3))


def ball_linear_quotient(beta, r, c):
    """Same quotient for f = 1 - c (z1 + z2) on the ball; ||(z1+z2)^j||^2 = 2^j (j+2)^beta / (j+1)."""
    term = lambda j: (1 - r) ** 2 * r ** (2 * j - 2) * (2 * c * c) ** j * mpmath.mpf(j + 2) ** beta / (j + 1)
    return 2.0**beta + float(mpmath.nsum(term, [1, mpmath.inf]))


def test_quotient_at_zero_radius():
    q = dilation_quotient_norm(parse_poly("1-z1", 2), BIDISK, 0, 0.0, 10)
    assert q.Q == pytest.approx(2.0, rel=1e-15) and q.tail_fraction == 0


@pytest.mark.parametrize("spec", [BIDISK, BALL, omega_lambda(1, 2, 3)])
@pytest.mark.parametrize("r", [0.1, 0.9])
def test_constant_function(spec, r):
    one = SparsePoly.constant(1, 2)
    assert dilation_quotient_norm(one, spec, 1.2, r, 20).Q == pytest.approx(monomial_norm_sq(spec, 1.2, (0, 0)))


def test_edge_quotient_matches_series():
    f = parse_poly("1-z1", 2)
    r = 0.9
    q = dilation_quotient_norm(f, BIDISK, 1, r, 2000)
    assert q.Q == pytest.approx(edge_quotient(1, r), rel=1e-8)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("r", [0.5, 0.9, 0.99])
def test_two_variable_engine_matches_collapsed_forms(beta, r):
    cap = int(math.ceil(30 / (1 - r)))
    for c in (0.5, 1 / math.sqrt(2)):
        f = SparsePoly(2, {(0, 0): 1, (1, 0): -c, (0, 1): -c})
        q = dilation_quotient_norm(f, BALL, beta, r, cap)
        assert q.tail_fraction < 1e-3
        assert q.Q == pytest.approx(ball_linear_quotient(beta, r, c), rel=1e-6)
    # a one-variable polynomial pushed through the generic sparse path
    q = dilation_quotient_norm(parse_poly("1-z1", 2), BIDISK, beta, r, cap, method="sparse")
    assert q.tail_fraction < 1e-3
    assert q.Q == pytest.approx(edge_quotient(beta, r), rel=1e-6)


polys_nonvanishing_at_zero = st.builds(
    lambda cs: parse_poly(f"1 + ({cs[0]})*z1 + ({cs[1]})*z2^2 + ({cs[2]})*z1*z2", 2),
    st.tuples(*[st.floats(-0.4, 0.4).map(lambda x: round(x, 3))] * 3),
)


@settings(max_examples=25, deadline=None)
@given(
    polys_nonvanishing_at_zero,
    st.sampled_from([BIDISK, BALL, Ellipsoid((1, 2.5)), omega_lambda(2, 1, 5)]),
    st.floats(-1, 3),
    st.floats(0, 0.9),
)
def test_fast_engine_matches_sparse_definition(f, spec, beta, r):
    cap = 40
    literal = function_norm_sq(poly_mul(f, series_reciprocal(dilate(f, r), cap), cap), spec, beta)
    assert dilation_quotient_norm(f, spec, beta, r, cap).Q == pytest.approx(literal, rel=1e-10)
    assert dilation_quotient_norm(f, spec, beta, r, cap, method="sparse").Q == pytest.approx(literal, rel=1e-12)


def test_subnormal_radius_does_not_overflow():
    f = parse_poly("1 + 0.25*z1 + 0.25*z2^2")
    r = 1.1125369292536007e-308
    literal = function_norm_sq(poly_mul(f, series_reciprocal(dilate(f, r), 40), 40), BIDISK, 0.0)
    assert dilation_quotient_norm(f, BIDISK, 0.0, r, 40).Q == pytest.approx(literal, rel=1e-12)


def test_three_active_variables_use_sparse_path():
    f = parse_poly("1 - (z1+z2+z3)/4", 3)
    spec = Polydisk(3)
    literal = function_norm_sq(poly_mul(f, series_reciprocal(dilate(f, 0.5), 12), 12), spec, 1.0)
    assert dilation_quotient_norm(f, spec, 1.0, 0.5, 12).Q == pytest.approx(literal, rel=1e-12)


def test_quotient_errors():
    with pytest.raises(SingularInversionError):
        dilation_quotient_norm(parse_poly("z1+z2"), BIDISK, 0, 0.5, 10)
    with pytest.raises(ValueError):
        dilation_quotient_norm(parse_poly("1-z1", 2), BIDISK, 0, 1.0, 10)
    with pytest.warns(UnconvergedWarning):
        dilation_quotient_norm(parse_poly("1-z1", 2), BIDISK, 2, 0.99, 20)


@pytest.mark.parametrize("beta", [0.5, 1.0, 1.5, 2.0])
def test_edge_growth_exponents(beta):
    _, fit = dilation_sweep(parse_poly("1-z1", 2), BIDISK, beta)
    assert fit.exponent == pytest.approx(max(0.0, beta - 1), abs=0.05)


def test_bounded_evidence_below_threshold():
    sweep, fit = dilation_sweep(parse_poly("1-z1", 2), BIDISK, 0.5)
    assert fit.plateau and fit.bounded_evidence
    assert all(sweep.converged)
    assert all(v >= 0 for v in sweep.values) and all(0 <= t <= 1 for t in sweep.tail_fraction)


def test_sweep_validation():
    f = parse_poly("1-z1", 2)
    with pytest.raises(ValueError):
        dilation_sweep(f, BIDISK, 1, [0.5, 0.4])
    with pytest.raises(ValueError):
        dilation_sweep(f, BIDISK, 1, [0.5, 0.75], [10])


def test_sweep_deterministic_across_threads():
    f = parse_poly("1 - (z1+z2)/2")
    grid = default_r_grid(7)
    a = dilation_sweep_multi(f, BALL, [1.0, 2.0], grid, threads=1)
    b = dilation_sweep_multi(f, BALL, [1.0, 2.0], grid, threads=3)
    assert [s.values for s, _ in a] == [s.values for s, _ in b]


def test_interior_zero_scan_examples():
    w = interior_zero_scan(parse_poly("z1 - 1/2", 2), BIDISK, 8)
    assert w is not None and abs(w[0] - 0.5) < 1e-12
    assert interior_zero_scan(parse_poly("1 - z1", 2), BIDISK, 8) is None
    f = parse_poly("1 - 2*z1*z2")
    w = interior_zero_scan(f, BIDISK, 8)
    assert w is not None and abs(f(w)) < 1e-12
    assert abs(abs(w[0] * w[1]) - 0.5) < 1e-12 and max(abs(w)) < 1


def test_boundary_zero_scan():
    (z,) = boundary_zero_scan(parse_poly("1 - z1", 2), BIDISK)
    assert z.free == (1,) and abs(z.point[0] - 1) < 1e-12
    zs = boundary_zero_scan(parse_poly("1 - (z1+z2)/2"), BIDISK)
    assert any(np.allclose(b.point, [1, 1], atol=1e-7) for b in zs)
    zs = boundary_zero_scan(parse_poly("1 - (z1+z2)/sqrt2".replace("sqrt2", repr(math.sqrt(2)))), BALL)
    assert any(np.allclose(b.point, [2**-0.5, 2**-0.5], atol=1e-6) for b in zs)


@pytest.mark.parametrize(
    "poly, beta, label",
    [
        ("1 - z1", 1.5, "NONCYCLIC(positive capacity)"),
        ("z1 - 1/2", 0.3, "NONCYCLIC(interior zero)"),
        ("z1 - 1/2", 4.0, "NONCYCLIC(interior zero)"),
        ("1 - (z1+z2)/2", 2.5, "NONCYCLIC(bounded point evaluation)"),
        ("1 - z1", 0.5, "CYCLIC-EVIDENCE(bounded dilation sweep)"),
    ],
)
def test_verdict_examples(poly, beta, label):
    v = cyclicity_verdict(parse_poly(poly, 2), BIDISK, beta)
    assert v.label == label


def test_point_evaluation_verdict_names_the_zero():
    v = cyclicity_verdict(parse_poly("1 - (z1+z2)/2"), BIDISK, 2.5)
    assert np.allclose(np.array(v.details["zero"])[:, 0], [1, 1], atol=1e-7)


def test_user_boundary_zero_is_used():
    # an ellipsoid of dimension three is not scanned, so the zero must be supplied
    f = parse_poly("1 - z1", 3)
    spec = Polydisk(3)
    v = cyclicity_verdict(f, spec, 3.5, boundary_zero=[1, 1, 1])
    assert v.kind == "NONCYCLIC"


@pytest.mark.parametrize("poly, betas", [("1 - z1", [0.5, 1.0, 1.5, 2.0, 2.5]), ("1 - (z1+z2)/2", [0.5, 1.0, 2.0, 2.5, 3.0])])
def test_verdicts_monotone_in_beta(poly, betas):
    kinds = [cyclicity_verdict(parse_poly(poly, 2), BIDISK, b, budget=9).kind for b in betas]
    first_non = next((i for i, k in enumerate(kinds) if k == "NONCYCLIC"), len(kinds))
    assert "CYCLIC-EVIDENCE" not in kinds[first_non:]
    assert kinds[0] == "CYCLIC-EVIDENCE" and kinds[-1] == "NONCYCLIC"
