"""Sparse multivariate polynomials and total-degree truncated power series.

Coefficients are double-precision complex numbers keyed by exponent tuples
(multi-indices).  Every operation returns a new object; nothing is mutated
after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as _cartesian
from typing import Iterable, Mapping

import numpy as np

MultiIndex = tuple[int, ...]


class DimensionError(ValueError):
    """Operands live in different ambient dimensions."""


class SingularInversionError(ZeroDivisionError):
    """The series to be inverted has a vanishing constant term."""


def degree(L: MultiIndex) -> int:
    return sum(L)


def _order_key(L: MultiIndex):
    return (sum(L), L)


@dataclass(frozen=True, eq=False)
class SparsePoly:
    """Polynomial ``sum_L a_L z^L`` in ``dimension`` complex variables."""

    dimension: int
    terms: Mapping[MultiIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        clean = {}
        for L, c in self.terms.items():
            L = tuple(int(x) for x in L)
            if len(L) != self.dimension:
                raise DimensionError(f"multi-index {L} does not have length {self.dimension}")
            if any(x < 0 for x in L):
                raise ValueError(f"negative exponent in {L}")
            c = complex(c)
            if c != 0:
                clean[L] = clean.get(L, 0j) + c
        clean = {L: c for L, c in sorted(clean.items(), key=lambda kv: _order_key(kv[0])) if c != 0}
        object.__setattr__(self, "terms", clean)

    # construction helpers
    @classmethod
    def constant(cls, value, dimension: int) -> "SparsePoly":
        return cls(dimension, {(0,) * dimension: value})

    @classmethod
    def variable(cls, i: int, dimension: int) -> "SparsePoly":
        """The coordinate function ``z_{i+1}`` (``i`` is zero based)."""
        L = [0] * dimension
        L[i] = 1
        return cls(dimension, {tuple(L): 1.0})

    @classmethod
    def from_dense(cls, coeffs) -> "SparsePoly":
        arr = np.asarray(coeffs, dtype=complex)
        terms = {tuple(int(x) for x in idx): c for idx, c in np.ndenumerate(arr) if c != 0}
        return cls(arr.ndim, terms)

    # inspection
    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = SparsePoly.constant(other, self.dimension)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.dimension == other.dimension and self.terms == other.terms

    __hash__ = None

    def coeff(self, L: Iterable[int]) -> complex:
        return self.terms.get(tuple(L), 0j)

    @property
    def constant_term(self) -> complex:
        return self.coeff((0,) * self.dimension)

    @property
    def total_degree(self) -> int:
        return max((sum(L) for L in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def active_variables(self) -> tuple[int, ...]:
        """Indices of variables that appear with a positive exponent."""
        return tuple(i for i in range(self.dimension) if any(L[i] > 0 for L in self.terms))

    def homogeneous_part(self, d: int) -> "SparsePoly":
        return SparsePoly(self.dimension, {L: c for L, c in self.terms.items() if sum(L) == d})

    def __call__(self, z):
        """Evaluate at ``z`` of shape ``(..., dimension)``."""
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.dimension:
            raise DimensionError(f"point has {z.shape[-1]} coordinates, expected {self.dimension}")
        out = np.zeros(z.shape[:-1], dtype=complex)
        for L, c in self.terms.items():
            out = out + c * np.prod(z ** np.array(L), axis=-1)
        return out

    def gradient(self, z):
        """Complex partial derivatives at ``z``; shape ``(..., dimension)``."""
        z = np.asarray(z, dtype=complex)
        grads = []
        for i in range(self.dimension):
            g = np.zeros(z.shape[:-1], dtype=complex)
            for L, c in self.terms.items():
                if L[i] == 0:
                    continue
                M = list(L)
                M[i] -= 1
                g = g + c * L[i] * np.prod(z ** np.array(M), axis=-1)
            grads.append(g)
        return np.stack(grads, axis=-1)

    # arithmetic
    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.dimension != self.dimension:
                raise DimensionError(f"dimension mismatch: {self.dimension} vs {other.dimension}")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return SparsePoly.constant(other, self.dimension)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for L, c in other.terms.items():
            terms[L] = terms.get(L, 0j) + c
        return SparsePoly(self.dimension, terms)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.dimension, {L: -c for L, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return SparsePoly(self.dimension, {L: c * other for L, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other).base

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            if other == 0:
                raise ZeroDivisionError("division by zero constant")
            return self * (1 / other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = SparsePoly.constant(1, self.dimension)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self):
        if not self.terms:
            return f"SparsePoly({self.dimension}, 0)"
        return f"SparsePoly({self.dimension}, {self.to_string()})"

    def to_string(self) -> str:
        parts = []
        for L, c in self.terms.items():
            mono = "*".join(
                f"z{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(L) if e
            )
            coef = _format_complex(c)
            if not mono:
                parts.append(coef)
            elif coef == "1":
                parts.append(mono)
            elif coef == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        """List of ``[exponents, [re, im]]`` pairs in canonical order."""
        return [[list(L), [c.real, c.imag]] for L, c in self.terms.items()]


def _format_complex(c: complex) -> str:
    if c.imag == 0:
        x = c.real
        return repr(int(x)) if x.is_integer() and abs(x) < 1e15 else repr(x)
    return f"({c.real!r}{c.imag:+}i)"


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Power series known exactly up to total degree ``cap``."""

    base: SparsePoly
    cap: int

    def __post_init__(self):
        if self.cap < 0:
            raise ValueError("cap must be nonnegative")
        if any(sum(L) > self.cap for L in self.base.terms):
            raise ValueError("stored term exceeds the truncation cap")

    @property
    def dimension(self) -> int:
        return self.base.dimension

    @property
    def terms(self):
        return self.base.terms

    def coeff(self, L) -> complex:
        return self.base.coeff(L)


def _as_poly(x) -> SparsePoly:
    return x.base if isinstance(x, TruncatedSeries) else x


def poly_mul(a, b, cap: int | None = None) -> TruncatedSeries:
    """Product of ``a`` and ``b`` with all terms of total degree > ``cap`` dropped.

    ``cap=None`` keeps the full product.
    """
    a, b = _as_poly(a), _as_poly(b)
    if a.dimension != b.dimension:
        raise DimensionError(f"dimension mismatch: {a.dimension} vs {b.dimension}")
    if cap is not None and cap < 0:
        raise ValueError("cap must be nonnegative")
    out: dict[MultiIndex, complex] = {}
    for La, ca in a.terms.items():
        da = sum(La)
        if cap is not None and da > cap:
            continue
        for Lb, cb in b.terms.items():
            if cap is not None and da + sum(Lb) > cap:
                continue
            L = tuple(x + y for x, y in zip(La, Lb))
            out[L] = out.get(L, 0j) + ca * cb
    poly = SparsePoly(a.dimension, out)
    return TruncatedSeries(poly, poly.total_degree if cap is None else cap)


def series_reciprocal(f, cap: int) -> TruncatedSeries:
    """Truncated power series ``h`` with ``f*h = 1`` through total degree ``cap``.

    Coefficients follow the triangular recursion
    ``h_L = -(1/f_0) sum_{K != 0} f_K h_{L-K}``, processed by total degree and
    then lexicographically, so the result is bit-reproducible.
    """
    f = _as_poly(f)
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    f0 = f.constant_term
    if f0 == 0:
        raise SingularInversionError("series_reciprocal needs f(0) != 0")
    n = f.dimension
    shifts = [(K, c) for K, c in f.terms.items() if any(K)]
    zero = (0,) * n
    h: dict[MultiIndex, complex] = {zero: 1 / f0}
    frontier = {zero}
    inv0 = 1 / f0
    by_degree: dict[int, set] = {}
    for M in frontier:
        for K, _ in shifts:
            L = tuple(x + y for x, y in zip(K, M))
            if sum(L) <= cap:
                by_degree.setdefault(sum(L), set()).add(L)
    for d in range(1, cap + 1):
        cands = sorted(by_degree.pop(d, ()))
        for L in cands:
            acc = 0j
            for K, c in shifts:
                M = tuple(x - y for x, y in zip(L, K))
                if min(M) < 0:
                    continue
                hm = h.get(M)
                if hm is not None:
                    acc += c * hm
            if acc == 0:
                continue
            h[L] = -inv0 * acc
            for K, _ in shifts:
                L2 = tuple(x + y for x, y in zip(K, L))
                d2 = sum(L2)
                if d2 <= cap:
                    by_degree.setdefault(d2, set()).add(L2)
    return TruncatedSeries(SparsePoly(n, h), cap)


def dilate(f, r: float) -> SparsePoly:
    """``f_r(z) = f(r z)``: scales the coefficient at ``L`` by ``r**|L|``."""
    f = _as_poly(f)
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"dilation radius must lie in [0, 1], got {r}")
    return SparsePoly(f.dimension, {L: c * r ** sum(L) for L, c in f.terms.items()})


def multi_indices(n: int, d: int):
    """All multi-indices of length ``n`` and total degree ``d`` (lexicographic)."""
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in multi_indices(n - 1, d - first):
            yield (first,) + rest


def multi_indices_upto(n: int, cap: int):
    for d in range(cap + 1):
        yield from sorted(multi_indices(n, d))


def shell_array(n: int, d: int) -> np.ndarray:
    """Array of shape ``(count, n)`` listing the multi-indices with ``|L| = d``."""
    if n == 1:
        return np.array([[d]], dtype=np.int64)
    if n == 2:
        i = np.arange(d + 1, dtype=np.int64)
        return np.stack([i, d - i], axis=1)
    rows = [L for L in _cartesian(range(d + 1), repeat=n - 1) if sum(L) <= d]
    arr = np.array(rows, dtype=np.int64).reshape(-1, n - 1)
    return np.concatenate([arr, d - arr.sum(axis=1, keepdims=True)], axis=1)
