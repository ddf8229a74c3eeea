import json
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pslab.domains import (
    DegenerateDomainError,
    DomainError,
    Ellipsoid,
    Face,
    Polydisk,
    PolyhedralReinhardt,
    approximate_reinhardt,
    contains,
    domain_from_json,
    normalize_face,
    omega_lambda,
    on_measure_support,
    parse_domain,
    polydisk_as_polyhedral,
    vertex_tori,
)


def test_polydisk_as_polyhedral_single_torus():
    (t,) = vertex_tori(polydisk_as_polyhedral(3))
    assert t.radii == (1.0, 1.0, 1.0) and t.weight == 1.0


def test_omega_lambda_four():
    tori = vertex_tori(omega_lambda(1, 1, 4))
    assert [t.radii for t in tori] == [pytest.approx((0.25, 1.0)), pytest.approx((1.0, 0.25))]
    assert [t.weight for t in tori] == [0.5, 0.5]


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("lam", [2.0, 10.0])
def test_omega_lambda_closed_forms(m, n, lam):
    tori = {t.radii[0] < 1: t for t in vertex_tori(omega_lambda(m, n, lam))}
    t1, t2 = tori[True], tori[False]  # |z1| < 1 on the first torus
    assert t1.radii == pytest.approx((lam ** (-1 / m), 1.0), rel=1e-14)
    assert t2.radii == pytest.approx((1.0, lam ** (-1 / n)), rel=1e-14)
    assert t1.weight == pytest.approx(m / (m + n), abs=1e-15)
    assert t2.weight == pytest.approx(n / (m + n), abs=1e-15)


@pytest.mark.parametrize("spec", [omega_lambda(2, 3, 10.0), polydisk_as_polyhedral(2), omega_lambda(1, 1, 1.0)])
def test_weights_sum_to_one(spec):
    assert abs(math.fsum(t.weight for t in vertex_tori(spec)) - 1.0) <= 1e-15


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.floats(1.0, 50.0), st.floats(-2.0, 0.0))
def test_radii_scale_with_level(m, n, lam, r):
    spec = omega_lambda(m, n, lam)
    base = vertex_tori(spec)
    shifted = vertex_tori(spec, level=r)
    assert len(base) == len(shifted)
    for a, b in zip(base, shifted):
        assert all(0 < x <= 1 for x in a.radii)
        assert np.allclose(np.array(b.radii), np.array(a.radii) * math.exp(r), rtol=1e-12)
        assert a.weight == b.weight


def test_face_validation():
    with pytest.raises(DomainError):
        Face(2.0, (1, 1))
    with pytest.raises(DomainError):
        Face(0.5, (1, 0))
    f = normalize_face(4.0, (1, 1))
    assert f.row == (Fraction(1, 2), Fraction(1, 2)) and f.lam == pytest.approx(2.0)
    with pytest.raises(DomainError):
        PolyhedralReinhardt(2, (Face(1.0, (1, 0)),))


def test_degenerate_faces():
    spec = PolyhedralReinhardt(2, (Face(1.0, (0.5, 0.5)), Face(2.0, (0.5, 0.5))))
    with pytest.raises(DegenerateDomainError):
        vertex_tori(spec)


def test_non_simple_vertex_counted_once():
    # three faces through (0, 0) in the log-plane
    spec = PolyhedralReinhardt(2, (Face(1, (1, 0)), Face(1, (0, 1)), Face(1, (Fraction(1, 2), Fraction(1, 2)))))
    (t,) = vertex_tori(spec)
    assert t.radii == (1.0, 1.0) and t.weight == 1.0


def test_parse_and_json_round_trip():
    assert parse_domain("polydisk:3") == Polydisk(3)
    assert parse_domain("ball:2") == Ellipsoid((1.0, 1.0))
    spec = parse_domain("omega:2,1,10")
    again = domain_from_json(json.loads(json.dumps(spec.to_json())))
    assert [t.radii for t in vertex_tori(again)] == pytest.approx([t.radii for t in vertex_tori(spec)])
    doc = {
        "kind": "polyhedral",
        "dimension": 2,
        "normalize": True,
        "faces": [
            {"lambda": 1, "exponents": [[1, 1], [0, 1]]},
            {"lambda": 1, "exponents": [0, 1]},
            {"lambda": 4, "exponents": [[1, 1], [1, 1]]},
        ],
    }
    assert [t.weight for t in vertex_tori(domain_from_json(doc))] == [0.5, 0.5]
    for bad in ["torus:2", "ellipsoid:0.5,1", "omega:1,1"]:
        with pytest.raises(DomainError):
            parse_domain(bad)


def test_contains_and_support():
    ball = Ellipsoid((1, 1))
    pts = np.array([[0.5, 0.5], [0.8, 0.8]], dtype=complex)
    assert contains(ball, pts).tolist() == [True, False]
    assert on_measure_support(Polydisk(2), (1, 1))
    assert not on_measure_support(Polydisk(2), (1, 0.5))
    assert on_measure_support(omega_lambda(1, 1, 4), (0.25, 1))
    assert on_measure_support(ball, (math.sqrt(0.5), math.sqrt(0.5)))


def _log_ball(count):
    t = (np.arange(count) + 0.5) / count
    return np.stack([0.5 * np.log(t), 0.5 * np.log1p(-t)], axis=1)


def test_polydisk_samples_add_no_faces():
    X = np.array([[0.0, -0.5], [-0.3, 0.0], [0.0, 0.0]])
    spec, steps = approximate_reinhardt(X, 3)
    assert steps == [] and len(spec.faces) == 2


def test_symmetric_ball_sample_gives_diagonal_normal():
    x = 0.5 * math.log(0.5)
    spec, steps = approximate_reinhardt([[x, x]], 1)
    assert steps[0].normal == pytest.approx((0.5, 0.5), abs=1e-9)
    assert steps[0].offset == pytest.approx(-x, abs=1e-12)


def _vertex_gap(k, count=256):
    spec, _ = approximate_reinhardt(_log_ball(count), k)
    # outer approximation: vertices sit outside the ball, by a shrinking margin
    return max(sum(r**2 for r in t.radii) - 1.0 for t in vertex_tori(spec))


def test_refinement_converges_on_ball():
    gaps = [_vertex_gap(k) for k in (4, 16, 64)]
    assert all(g >= -1e-9 for g in gaps)
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[1] - gaps[2] < gaps[0] - gaps[1]


def test_inseparable_sample_is_skipped():
    # a sample that is not on the boundary of the log-convex hull
    X = np.array([[-1.0, 0.0], [0.0, -1.0], [-0.6, -0.6]])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spec, steps = approximate_reinhardt(X, 3)
    assert any("not separable" in str(w.message) for w in caught)
    assert all(s.sample != (-0.6, -0.6) for s in steps)
