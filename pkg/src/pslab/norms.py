"""Monomial norms, function norms and derived quantities.

The squared norm of ``z^L`` in the space of index ``beta`` factors as

    base(L) * grade(L) ** beta

with ``grade = p (l_1/p_1 + ... + l_n/p_n) + n`` on the ellipsoid
(``p`` the geometric mean of the exponents) and ``grade = |L| + n`` on the
polydisk and on polyhedral domains.  ``base`` is the Hardy-space norm:
a ratio of Gamma functions on the ellipsoid, one on the polydisk and the
vertex-torus average ``C_L`` on polyhedral domains.  ``beta = 0`` is the
Hardy space, ``beta < 0`` a weighted Bergman space and ``beta > 0`` a
Dirichlet-type space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from .domains import DomainSpec, Ellipsoid, Polydisk, PolyhedralReinhardt, vertex_tori
from .series import DimensionError, SparsePoly, TruncatedSeries, multi_indices_upto, shell_array
from .summation import SeriesSum, count_poly, interpolating_poly, poly_power_sum


@lru_cache(maxsize=64)
def _tori_arrays(spec: PolyhedralReinhardt):
    tori = vertex_tori(spec)
    logw = np.log(np.array([t.weight for t in tori]))
    logR = np.log(np.array([t.radii for t in tori]))
    return logw, logR


def norm_parts(spec: DomainSpec, L) -> tuple[np.ndarray, np.ndarray]:
    """``(log base, log grade)`` for an integer array ``L`` of shape ``(..., n)``."""
    L = np.asarray(L)
    n = spec.dimension
    if L.shape[-1] != n:
        raise DimensionError(f"multi-index length {L.shape[-1]} != dimension {n}")
    deg = L.sum(axis=-1)
    if isinstance(spec, Polydisk):
        return np.zeros(deg.shape), np.log(deg + n)
    if isinstance(spec, Ellipsoid):
        p = np.asarray(spec.exponents)
        x = L / p
        s = x.sum(axis=-1)
        base = gammaln(n) + gammaln(x + 1).sum(axis=-1) - gammaln(s + n)
        return base, np.log(spec.mean_exponent * s + n)
    if isinstance(spec, PolyhedralReinhardt):
        logw, logR = _tori_arrays(spec)
        expo = logw + 2.0 * np.tensordot(L, logR, axes=([-1], [1]))
        return logsumexp(expo, axis=-1), np.log(deg + n)
    raise TypeError(f"unsupported domain {spec!r}")


def log_monomial_norm_sq(spec: DomainSpec, beta: float, L) -> np.ndarray:
    base, grade = norm_parts(spec, L)
    return base + beta * grade


def monomial_norm_sq(
    spec: DomainSpec, beta: float, L: Sequence[int], *, classical_constant: bool = False
) -> float:
    """Squared norm of ``z^L`` in the space of index ``beta`` on ``spec``.

    ``classical_constant`` multiplies back the ``n^{alpha+1} = n^{-beta}``
    prefactor of the integral definition on the ellipsoid, which is dropped
    by default so that all domains share one normalization.
    """
    L = tuple(int(x) for x in L)
    if any(x < 0 for x in L):
        raise ValueError("multi-index entries must be nonnegative")
    value = float(np.exp(log_monomial_norm_sq(spec, beta, np.array(L))))
    if classical_constant and isinstance(spec, Ellipsoid):
        value *= spec.dimension ** (-beta)
    return value


def norm_table(spec: DomainSpec, beta: float, max_degree: int) -> dict[tuple[int, ...], float]:
    """Squared monomial norms for every ``|L| <= max_degree``."""
    Ls = list(multi_indices_upto(spec.dimension, max_degree))
    vals = np.exp(log_monomial_norm_sq(spec, beta, np.array(Ls)))
    return dict(zip(Ls, vals.tolist()))


def bergman_ellipsoid_monomial_norm_sq(p: Sequence[float], L: Sequence[int]) -> float:
    """Squared norm of ``z^L`` for the normalized volume measure of the ellipsoid."""
    p = np.asarray(p, dtype=float)
    L = np.asarray(L, dtype=float)
    if np.any(p < 1):
        raise ValueError("ellipsoid exponents must be >= 1")
    log_norm = (
        gammaln(np.sum(1 / p) + 1)
        - np.sum(gammaln(1 / p))
        + np.sum(gammaln((L + 1) / p))
        - gammaln(np.sum((L + 1) / p) + 1)
    )
    return float(np.exp(log_norm))


def _poly(f) -> SparsePoly:
    return f.base if isinstance(f, TruncatedSeries) else f


def function_norm_sq(f, spec: DomainSpec, beta: float) -> float:
    """``sum_L |a_L|^2 ||z^L||^2`` with correctly rounded summation."""
    f = _poly(f)
    if f.dimension != spec.dimension:
        raise DimensionError("polynomial and domain dimensions differ")
    if f.is_zero():
        return 0.0
    Ls = np.array(list(f.terms.keys()))
    coeffs = np.array(list(f.terms.values()))
    logs = log_monomial_norm_sq(spec, beta, Ls)
    return math.fsum((np.abs(coeffs) ** 2 * np.exp(logs)).tolist())


def classical_polydisk_norm_sq(f, alpha: float) -> float:
    """Classical weighted Bergman norm ``sum |a_L|^2 prod (l_i + 1)^{-(alpha+1)}``."""
    f = _poly(f)
    return math.fsum(
        abs(c) ** 2 * math.prod((l + 1) ** (-(alpha + 1)) for l in L) for L, c in f.terms.items()
    )


def dirichlet_bidisk_norm_sq(f, s: float) -> float:
    """Anisotropic Dirichlet norm ``sum |a_J|^2 ((j_1 + 1)(j_2 + 1))^s`` on the bidisk."""
    f = _poly(f)
    if f.dimension != 2:
        raise DimensionError("the anisotropic Dirichlet norm is defined on the bidisk")
    return math.fsum(abs(c) ** 2 * ((L[0] + 1) * (L[1] + 1)) ** s for L, c in f.terms.items())


def parameter_shift(f, s: float, t: float, spec: DomainSpec) -> SparsePoly:
    """Map from the index-``t`` space to the index-``s`` space.

    The coefficient at ``L`` is multiplied by ``||z^L||_t / ||z^L||_s``; the
    map is an isometry, ``||R f||_s = ||f||_t``.  Indices are in the
    ``beta`` convention.
    """
    f = _poly(f)
    if f.is_zero():
        return f
    Ls = np.array(list(f.terms.keys()))
    _, grade = norm_parts(spec, Ls)
    factors = np.exp(0.5 * (t - s) * grade)
    return SparsePoly(f.dimension, {L: c * w for (L, c), w in zip(f.terms.items(), factors)})


@dataclass(frozen=True)
class PSEReport:
    kind: str  # "exact" or "asymptotic"
    betas: tuple[float, ...]
    max_degree: int
    max_rel_error: float  # exact identity residual (exact kind)
    min_ratio: float  # double ratio range (asymptotic kind; 1, 1 for exact)
    max_ratio: float
    constant: float
    bounded: bool

    def to_json(self) -> dict:
        return self.__dict__ | {"betas": list(self.betas)}


def pse_check(spec: DomainSpec, betas: Sequence[float], max_degree: int) -> PSEReport:
    """Check parameter-shift equivalence of the monomial norms up to ``|L| <= max_degree``.

    ``betas`` is ``(b, b')`` or ``(b, b', g, g')`` with ``b - b' = g - g'``;
    with two entries the second pair is the first shifted by one.  On the
    polydisk and polyhedral domains the ratio ``||z^L||^2_b / ||z^L||^2_b'``
    must equal ``(|L| + n)^{b - b'}``; on the ellipsoid the double ratio of
    the two pairs is scanned and its range reported.
    """
    betas = tuple(float(b) for b in betas)
    if len(betas) == 2:
        betas = betas + (betas[0] + 1.0, betas[1] + 1.0)
    if len(betas) != 4:
        raise ValueError("betas must have 2 or 4 entries")
    b, b2, g, g2 = betas
    if abs((b - b2) - (g - g2)) > 1e-12:
        raise ValueError("the two index pairs must have equal shifts")
    n = spec.dimension
    Ls = np.concatenate([shell_array(n, d) for d in range(max_degree + 1)])
    nb = log_monomial_norm_sq(spec, b, Ls)
    nb2 = log_monomial_norm_sq(spec, b2, Ls)
    ng = log_monomial_norm_sq(spec, g, Ls)
    ng2 = log_monomial_norm_sq(spec, g2, Ls)
    double = np.exp((nb - nb2) - (ng - ng2))
    lo, hi = float(double.min()), float(double.max())
    const = max(hi, 1 / lo)
    if isinstance(spec, (Polydisk, PolyhedralReinhardt)):
        target = (b - b2) * np.log(Ls.sum(axis=1) + n)
        err = 0.0
        for x, y in ((nb - nb2, target), (ng - ng2, (g - g2) * np.log(Ls.sum(axis=1) + n))):
            err = max(err, float(np.max(np.abs(np.expm1(x - y)))))
        return PSEReport("exact", betas, max_degree, err, lo, hi, const, True)
    return PSEReport("asymptotic", betas, max_degree, 0.0, lo, hi, const, bool(np.isfinite(const)))


def duality_pairing(f, g, spec: DomainSpec) -> complex:
    """``<f, g> = sum a_L conj(b_L) ||z^L||^2_0`` (Hardy-space pairing)."""
    f, g = _poly(f), _poly(g)
    if f.dimension != g.dimension or f.dimension != spec.dimension:
        raise DimensionError("pairing needs a shared dimension")
    common = [L for L in f.terms if L in g.terms]
    if not common:
        return 0j
    logs = log_monomial_norm_sq(spec, 0.0, np.array(common))
    vals = [f.terms[L] * g.terms[L].conjugate() * w for L, w in zip(common, np.exp(logs))]
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def cf_transfer_ratio(j: int, beta: float) -> float:
    """``4^{-j} binom(2j, j) (j+2)^beta / (j+2)^{beta - 1/2}``.

    Squared norm of ``((z_1 + z_2)/2)^j`` on the bidisk against that of
    ``z^j`` in the one-variable space of index ``beta - 1/2``.
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    log_num = -2 * j * math.log(2) + gammaln(2 * j + 1) - 2 * gammaln(j + 1) + beta * math.log(j + 2)
    log_den = (beta - 0.5) * math.log(j + 2)
    return float(math.exp(log_num - log_den))


def graded_power_sum(n: int, beta: float) -> SeriesSum:
    """``sum_L (|L| + n)^{-beta}`` over all multi-indices of length ``n``."""
    return poly_power_sum(count_poly(n, n), beta, n)


def algebra_constant_sq(beta: float, n: int) -> float:
    """``K^2 = 2 * 2^{beta-1} * sum_L (|L|+n)^{-beta}`` bounding ``||fg|| <= K ||f|| ||g||`` on the polydisk."""
    s = graded_power_sum(n, beta)
    return 2 * 2 ** (beta - 1) * s.value


CLASSICAL_SHELL_LIMIT = 20000


@dataclass(frozen=True)
class WitnessSums:
    degrees: tuple[int, ...]
    classical: tuple[float, ...]
    poletsky_stessin: tuple[float, ...]
    classical_limit: float

    def to_json(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in self.__dict__.items()}


def inclusion_witness_sums(
    degrees: Sequence[int], alpha: float = 2.0, eps: float = 1.0
) -> WitnessSums:
    """Partial sums (over ``|L| <= D``) of both squared norms of the bidisk witness.

    The witness is ``f = sum ((l_1+1)(l_2+1))^{(alpha-eps)/2} z^L``.  Its
    classical weighted Bergman norm is ``zeta(1+eps)^2`` while the norm on
    the polydisk with the ``log max`` exhaustion diverges once
    ``eps <= alpha/2``.
    """
    degrees = tuple(sorted(int(d) for d in degrees))
    D = degrees[-1]
    q = alpha - eps
    # classical shells: sum_{l1+l2=j} ((l1+1)(l2+1))^{-(1+eps)}
    cls_shell = _shell_sums(lambda a, b: (a * b) ** (-(1 + eps)), min(D, CLASSICAL_SHELL_LIMIT))
    # PS shells: sum_{l1+l2=j} ((l1+1)(l2+1))^q / (j+2)^{alpha+1}
    j = np.arange(D + 1, dtype=float)
    if float(q).is_integer() and q >= 0:
        coeffs = _convolution_power_poly(int(q))
        m = j + 2
        top = np.zeros_like(m)
        for k, c in enumerate(coeffs):
            top += float(c) * m**k
        ps_shell = top / m ** (alpha + 1)
    else:
        ps_shell = _shell_sums(lambda a, b: (a * b) ** q, D) / (j + 2) ** (alpha + 1)
    cls_cum = np.cumsum(cls_shell)
    ps_cum = np.cumsum(ps_shell)
    # degrees past the shell limit are not computed (O(D^2) terms)
    classical = tuple(float(cls_cum[d]) if d < cls_cum.size else math.nan for d in degrees)
    from scipy.special import zeta

    limit = float(zeta(1 + eps)) ** 2
    return WitnessSums(degrees, classical, tuple(float(ps_cum[d]) for d in degrees), limit)


def _shell_sums(term, D: int) -> np.ndarray:
    out = np.empty(D + 1)
    for j in range(D + 1):
        a = np.arange(1, j + 2, dtype=float)
        out[j] = float(np.sum(term(a, j + 2 - a)))
    return out


def _convolution_power_poly(q: int) -> list[Fraction]:
    """Polynomial ``P`` in ``m`` with ``P(m) = sum_{a=1}^{m-1} a^q (m-a)^q``."""
    deg = 2 * q + 1
    pts = [Fraction(sum(a**q * (m - a) ** q for a in range(1, m))) for m in range(deg + 1)]
    return interpolating_poly(pts)
