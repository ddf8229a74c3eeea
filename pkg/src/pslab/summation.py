"""Summation of slowly convergent positive series.

Two routes are provided.  When the shell terms are a polynomial times a
power, ``P(m) m^{-beta}``, the sum is exact in terms of Hurwitz zeta
values.  Otherwise partial sums are combined with a power-law tail fitted on
a geometric subsequence of terms; a decay exponent at or below one is
reported as divergence (comparison with the harmonic series).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import zeta

DIVERGENCE_SLACK = 0.02


@dataclass(frozen=True)
class SeriesSum:
    value: float  # math.inf when divergent
    partial: float
    tail: float
    tail_bound: float
    exponent: float  # fitted (or exact) decay exponent of the terms
    terms_used: int

    @property
    def divergent(self) -> bool:
        return math.isinf(self.value)


def count_poly(k: int, shift: int) -> np.ndarray:
    """Coefficients (low to high, in ``m``) of ``binom(m - shift + k - 1, k - 1)``.

    This counts multi-indices of length ``k`` with ``|L| = m - shift``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    coeffs = np.array([1.0])
    for t in range(1, k):
        coeffs = P.polymul(coeffs, np.array([t - shift, 1.0]))
    return coeffs / math.factorial(k - 1)


def poly_power_sum(coeffs, beta: float, m0: int) -> SeriesSum:
    """``sum_{m >= m0} P(m) m^{-beta}`` for a polynomial ``P`` (coefficients low to high).

    Exact via ``sum_k c_k zeta(beta - k, m0)``; divergent as soon as the
    leading power ``deg P - beta`` is ``>= -1``.
    """
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if m0 < 1:
        raise ValueError("m0 must be >= 1")
    if coeffs.size == 0:
        return SeriesSum(0.0, 0.0, 0.0, 0.0, math.inf, 0)
    deg = coeffs.size - 1
    exponent = beta - deg
    if exponent <= 1:
        return SeriesSum(math.inf, math.inf, math.inf, math.inf, exponent, 0)
    total = math.fsum(float(c) * float(zeta(beta - k, m0)) for k, c in enumerate(coeffs) if c)
    return SeriesSum(total, total, 0.0, 0.0, exponent, 0)


def fitted_tail_sum(terms, index_offset: float = 1.0, *, min_terms: int = 64) -> SeriesSum:
    """Sum a positive sequence ``terms[j]`` (``j = 0..J``) plus an estimated tail.

    The decay exponent ``a`` of ``terms[j] ~ c (j + index_offset)^{-a}`` is
    fitted on the geometric subsequence ``J/8, J/4, J/2, J``.  ``a <= 1``
    (up to :data:`DIVERGENCE_SLACK`) means divergence.  A geometric decay
    (ratio test) gets a geometric tail instead.  The tail of a power law is
    the integral ``c (J + offset + 1/2)^{1-a} / (a - 1)``; the reported
    bound is the gap between the integral from ``J + offset`` and from
    ``J + offset + 1``.
    """
    t = np.asarray(terms, dtype=float)
    J = t.size - 1
    partial = math.fsum(t.tolist())
    if J + 1 < min_terms:
        raise ValueError(f"need at least {min_terms} terms to estimate a tail")
    if t[-1] == 0.0 or partial == 0.0:
        return SeriesSum(partial, partial, 0.0, 0.0, math.inf, J + 1)
    idx = np.array([J // 8, J // 4, J // 2, J])
    vals = t[idx]
    if np.any(vals <= 0):
        return SeriesSum(partial, partial, 0.0, 0.0, math.inf, J + 1)
    x = np.log(idx + index_offset)
    y = np.log(vals)
    slope, _ = np.polyfit(x, y, 1)
    a = -float(slope)
    # geometric decay shows up as a log-log slope that keeps steepening
    ratio = t[-1] / t[-2] if t[-2] > 0 else 0.0
    local = -(y[-1] - y[-2]) / (x[-1] - x[-2])
    if ratio < 1 and local > 4 * max(a, 1.0) and local > 20:
        tail = t[-1] * ratio / (1 - ratio)
        return SeriesSum(partial + tail, partial, tail, tail, local, J + 1)
    if a <= 1 + DIVERGENCE_SLACK:
        return SeriesSum(math.inf, partial, math.inf, math.inf, a, J + 1)
    c = t[-1] * (J + index_offset) ** a
    lo = c * (J + index_offset + 1) ** (1 - a) / (a - 1)
    hi = c * (J + index_offset) ** (1 - a) / (a - 1)
    tail = c * (J + index_offset + 0.5) ** (1 - a) / (a - 1)
    return SeriesSum(partial + tail, partial, tail, hi - lo, a, J + 1)


def interpolating_poly(values: list[Fraction]) -> list[Fraction]:
    """Exact coefficients (low to high) of the polynomial through ``(i, values[i])``."""
    n = len(values)
    coeffs = [Fraction(0)] * n
    for i, yi in enumerate(values):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for k in range(n):
            if k == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= k * basis[t + 1]
            denom *= i - k
        for t, b in enumerate(basis):
            coeffs[t] += yi * b / denom
    return coeffs
