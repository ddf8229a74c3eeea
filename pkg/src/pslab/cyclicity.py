"""Radial-dilation cyclicity diagnostics.

For ``f`` with ``f(0) != 0`` the quotient ``f / f_r`` is a power series;
``Q(r) = ||f / f_r||^2`` stays bounded as ``r -> 1`` exactly when the
dilation test certifies cyclicity.  Bounded ``sup_r Q`` cannot be decided
from finitely many ``r``, so sweeps only ever report *evidence*.

Since monomials are orthogonal, ``Q`` is a sum over homogeneous degrees.
The quotient series is generated degree by degree and normed on the fly:

* one active variable: the reciprocal is a linear recurrence (IIR filter);
* two active variables: homogeneous parts are vectors, products are
  convolutions, and each part carries its own power-of-two scale so
  binomial-size coefficients cannot overflow against tiny Gamma weights;
* otherwise: the sparse series arithmetic of :mod:`pslab.series`.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import least_squares
from scipy.signal import lfilter
from scipy.special import gammaln, logsumexp

from . import capacity
from .domains import DomainSpec, Ellipsoid, Polydisk, PolyhedralReinhardt, contains, vertex_tori
from .norms import function_norm_sq, log_monomial_norm_sq, norm_parts
from .series import SingularInversionError, SparsePoly, dilate, poly_mul, series_reciprocal

log = logging.getLogger(__name__)

CONVERGED_TAIL = 1e-3
FLAG_TAIL = 0.1
FIT_POINTS = 6
BOUNDED_EXPONENT = 0.05
MAX_RESIDUAL = 0.1
PLATEAU_RISE = 0.05


class UnconvergedWarning(RuntimeWarning):
    pass


class QuotientNorm(NamedTuple):
    Q: float
    tail_fraction: float


# ---------------------------------------------------------------------------
# per-degree weights


class _Weights:
    """Log base and log grade of the monomial norms on one homogeneous degree."""

    def __init__(self, spec: DomainSpec, active: tuple[int, ...], cap: int):
        self.spec = spec
        self.active = active
        self.n = spec.dimension
        self.fast = None
        if isinstance(spec, Ellipsoid) and len(active) == 2:
            p = np.asarray(spec.exponents)
            a, b = active
            idx = np.arange(cap + 1)
            self.fast = ("ellipsoid", gammaln(idx / p[a] + 1), gammaln(idx / p[b] + 1), p[a], p[b])
        elif isinstance(spec, Polydisk):
            self.fast = ("polydisk",)
        elif isinstance(spec, PolyhedralReinhardt) and len(active) == 2:
            tori = vertex_tori(spec)
            logw = np.log([t.weight for t in tori])[:, None]
            logR = np.log([t.radii for t in tori])
            self.fast = ("polyhedral", logw, 2 * logR[:, active[0]][:, None], 2 * logR[:, active[1]][:, None])

    def parts(self, d: int):
        """``(base, grade)`` arrays over the index ``i`` of ``z_a^i z_b^{d-i}`` (scalars when constant)."""
        n = self.n
        if self.fast is not None:
            kind = self.fast[0]
            if kind == "polydisk":
                return 0.0, math.log(d + n)
            i = np.arange(d + 1)
            if kind == "ellipsoid":
                _, ta, tb, pa, pb = self.fast
                s = i / pa + (d - i) / pb
                pgeo = self.spec.mean_exponent
                if pa == pb:
                    s0 = d / pa
                    base = gammaln(n) + ta[: d + 1] + tb[d::-1] - gammaln(s0 + n)
                    return base, math.log(pgeo * s0 + n)
                base = gammaln(n) + ta[: d + 1] + tb[d::-1] - gammaln(s + n)
                return base, np.log(pgeo * s + n)
            _, logw, ra, rb = self.fast
            base = logsumexp(logw + ra * i + rb * (d - i), axis=0)
            return base, math.log(d + n)
        L = np.zeros((d + 1 if len(self.active) == 2 else 1, n), dtype=np.int64)
        if len(self.active) == 2:
            L[:, self.active[0]] = np.arange(d + 1)
            L[:, self.active[1]] = d - np.arange(d + 1)
        else:
            L[:, self.active[0]] = d
        return norm_parts(self.spec, L)


def _scaled(vec: np.ndarray):
    m = float(np.max(np.abs(vec))) if vec.size else 0.0
    if m == 0.0 or not math.isfinite(m):
        return vec, 0
    e = math.frexp(m)[1]
    # two steps: 2**-e alone overflows when m is subnormal
    h = -e // 2
    return vec * math.ldexp(1.0, h) * math.ldexp(1.0, -e - h), e


def _combine(items):
    """Sum of ``vec * 2**e`` over ``(vec, e)`` pairs of equal length, rescaled."""
    items = [(v, e) for v, e in items if v.size and np.any(v)]
    if not items:
        return None
    E = max(e for _, e in items)
    acc = sum(v * math.ldexp(1.0, e - E) for v, e in items)
    v, e = _scaled(acc)
    return v, e + E


def _degree_contributions(f: SparsePoly, spec: DomainSpec, betas: np.ndarray, r: float, cap: int) -> np.ndarray:
    """Per-degree contributions to ``||f/f_r||^2``; shape ``(len(betas), cap + 1)``."""
    if f.dimension != spec.dimension:
        raise ValueError("polynomial and domain dimensions differ")
    f0 = f.constant_term
    if f0 == 0:
        raise SingularInversionError("f(0) = 0: the dilation quotient is not a power series")
    active = f.active_variables()
    out = np.zeros((betas.size, cap + 1))
    if not active:
        base, grade = norm_parts(spec, np.zeros((1, spec.dimension), dtype=np.int64))
        out[:, 0] = np.exp(base[0] + betas * grade[0])
        return out
    if len(active) == 1:
        return _contrib_1d(f, spec, betas, r, cap, active[0])
    if len(active) == 2:
        return _contrib_2d(f, spec, betas, r, cap, active)
    return _contrib_sparse(f, spec, betas, r, cap)


def _contrib_1d(f, spec, betas, r, cap, a) -> np.ndarray:
    m = f.total_degree
    c = np.zeros(m + 1, dtype=complex)
    for L, v in f.terms.items():
        c[L[a]] = v
    cr = c * r ** np.arange(m + 1)
    impulse = np.zeros(cap + 1, dtype=complex)
    impulse[0] = 1.0
    h = lfilter(np.array([1.0 + 0j]), cr, impulse)
    g = np.convolve(c, h)[: cap + 1]
    L = np.zeros((cap + 1, spec.dimension), dtype=np.int64)
    L[:, a] = np.arange(cap + 1)
    base, grade = norm_parts(spec, L)
    with np.errstate(divide="ignore"):
        lg = np.log(np.abs(g) ** 2)
    return np.exp(lg[None, :] + base[None, :] + betas[:, None] * grade[None, :])


def _homogeneous_vectors(f: SparsePoly, active) -> list[np.ndarray]:
    a, b = active
    m = f.total_degree
    parts = [np.zeros(k + 1, dtype=complex) for k in range(m + 1)]
    for L, v in f.terms.items():
        parts[L[a] + L[b]][L[a]] += v
    return parts


def _contrib_2d(f, spec, betas, r, cap, active) -> np.ndarray:
    F = _homogeneous_vectors(f, active)
    m = len(F) - 1
    Fr = [F[k] * r**k for k in range(m + 1)]
    inv0 = 1.0 / F[0][0]
    weights = _Weights(spec, active, cap)
    out = np.zeros((betas.size, cap + 1))
    hist: deque = deque(maxlen=m + 1)  # (vec, exp) for h_{d}, h_{d-1}, ...
    ln2 = math.log(2.0)
    for d in range(cap + 1):
        if d == 0:
            h_d = (np.array([inv0]), 0)
            h_d = _scaled(h_d[0])
        else:
            terms = []
            for k in range(1, min(d, m) + 1):
                hv, he = hist[k - 1]
                if Fr[k].any():
                    terms.append((np.convolve(Fr[k], hv), he))
            comb = _combine(terms)
            h_d = None if comb is None else (-inv0 * comb[0], comb[1])
        hist.appendleft(h_d if h_d is not None else (np.zeros(d + 1, dtype=complex), 0))
        terms = []
        for k in range(0, min(d, m) + 1):
            hv, he = hist[k]
            if F[k].any() and hv.any():
                terms.append((np.convolve(F[k], hv), he))
        g_d = _combine(terms)
        if g_d is None:
            continue
        v, e = g_d
        with np.errstate(divide="ignore"):
            lv = np.log(v.real**2 + v.imag**2)
        base, grade = weights.parts(d)
        w = lv + base
        if np.isscalar(grade):
            M = float(np.max(w))
            if not math.isfinite(M):
                continue
            s = math.log(float(np.sum(np.exp(w - M))))
            out[:, d] = np.exp(M + s + 2 * e * ln2 + betas * grade)
        else:
            tot = w[None, :] + betas[:, None] * grade[None, :]
            out[:, d] = np.exp(logsumexp(tot, axis=1) + 2 * e * ln2)
    return out


def _contrib_sparse(f, spec, betas, r, cap) -> np.ndarray:
    g = poly_mul(f, series_reciprocal(dilate(f, r), cap), cap).base
    out = np.zeros((betas.size, cap + 1))
    Ls = np.array(list(g.terms.keys()))
    coeffs = np.array(list(g.terms.values()))
    degs = Ls.sum(axis=1)
    for bi, beta in enumerate(betas):
        vals = np.abs(coeffs) ** 2 * np.exp(log_monomial_norm_sq(spec, beta, Ls))
        out[bi] = np.bincount(degs, weights=vals, minlength=cap + 1)
    return out


def _tail_fraction(contrib: np.ndarray) -> np.ndarray:
    """Share of the top decile of degrees in the degree >= 1 part of ``Q``.

    The constant term (always ``||1||^2``) is left out of the denominator;
    otherwise it would hide an unconverged tail when ``Q`` is close to it.
    """
    cap = contrib.shape[1] - 1
    cut = int(math.floor(0.9 * cap)) + 1
    tot = contrib[:, 1:].sum(axis=1)
    top = contrib[:, cut:].sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(tot > 0, top / tot, 0.0)
    return frac


def dilation_quotient_norm(
    f: SparsePoly, spec: DomainSpec, beta: float, r: float, cap: int, *, method: str = "auto"
) -> QuotientNorm:
    """``Q = ||f / f_r||^2`` truncated at total degree ``cap``, with the share of its top-decile degrees.

    ``method="sparse"`` forces the literal sparse composition
    ``poly_mul(f, series_reciprocal(dilate(f, r), cap), cap)``.
    """
    if not 0 <= r < 1:
        raise ValueError("r must lie in [0, 1)")
    betas = np.array([float(beta)])
    if method == "sparse":
        if f.constant_term == 0:
            raise SingularInversionError("f(0) = 0")
        contrib = _contrib_sparse(f, spec, betas, r, cap)
    elif method == "auto":
        contrib = _degree_contributions(f, spec, betas, r, cap)
    else:
        raise ValueError(f"unknown method {method!r}")
    tf = float(_tail_fraction(contrib)[0])
    if tf >= FLAG_TAIL:
        warnings.warn(f"dilation quotient unconverged at r={r}, cap={cap} (tail {tf:.3g})", UnconvergedWarning, stacklevel=2)
    return QuotientNorm(math.fsum(contrib[0].tolist()), tf)


# ---------------------------------------------------------------------------
# sweeps


def default_r_grid(kmax: int = 12, kmin: int = 1) -> list[float]:
    """``r_k = 1 - 2^{-k}``."""
    return [1.0 - 2.0**-k for k in range(kmin, kmax + 1)]


def default_cap(f: SparsePoly, r: float) -> int:
    factor = 40 if len(f.active_variables()) <= 1 else 8
    return int(math.ceil(factor / (1.0 - r)))


@dataclass
class SweepResult:
    r_grid: list[float]
    values: list[float]
    caps: list[int]
    tail_fraction: list[float]
    excess: list[float]  # Q(r) minus the constant-term contribution ||1||^2
    beta: float

    @property
    def converged(self) -> list[bool]:
        return [t < CONVERGED_TAIL for t in self.tail_fraction]

    def to_json(self) -> dict:
        return {
            "beta": self.beta,
            "r_grid": self.r_grid,
            "values": self.values,
            "caps": self.caps,
            "tail_fraction": self.tail_fraction,
            "excess": self.excess,
            "converged": self.converged,
        }


@dataclass
class FitResult:
    exponent: float  # growth exponent e in Q ~ (1-r)^{-e}, clipped at 0
    intercept: float
    residual: float
    raw_exponent: float
    points: int
    plateau: bool
    bounded_evidence: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def fit_growth(sweep: SweepResult, points: int = FIT_POINTS) -> FitResult:
    """Least-squares growth exponent over the last converged grid points.

    The constant term of ``f/f_r`` is always 1, so ``Q = ||1||^2 + D(r)``.
    The fit is done on ``log D`` against ``log(1 - r)``; a decaying ``D``
    (negative raw exponent) means ``Q`` is bounded and the exponent is 0.
    """
    idx = [i for i, ok in enumerate(sweep.converged) if ok][-points:]
    if len(idx) < 2:
        return FitResult(math.nan, math.nan, math.inf, math.nan, len(idx), False, False)
    x = np.log([1 - sweep.r_grid[i] for i in idx])
    D = np.array([sweep.excess[i] for i in idx])
    Q = np.array([sweep.values[i] for i in idx])
    tail_idx = idx[-3:]
    rise = sweep.values[tail_idx[-1]] / sweep.values[tail_idx[0]] - 1
    plateau = bool(rise <= PLATEAU_RISE)
    if np.all(D <= 0):
        return FitResult(0.0, -math.inf, 0.0, 0.0, len(idx), plateau, plateau)
    D = np.maximum(D, np.finfo(float).tiny)
    y = np.log(D)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    raw = -float(slope)
    exponent = max(0.0, raw)
    bounded = exponent <= BOUNDED_EXPONENT and plateau and rms <= MAX_RESIDUAL
    del Q
    return FitResult(exponent, float(intercept), rms, raw, len(idx), plateau, bool(bounded))


def dilation_sweep_multi(
    f: SparsePoly,
    spec: DomainSpec,
    betas: Sequence[float],
    r_grid: Sequence[float] | None = None,
    cap_schedule: Callable[[float], int] | Sequence[int] | None = None,
    threads: int = 1,
) -> list[tuple[SweepResult, FitResult]]:
    """Dilation sweeps for several indices sharing one series computation per ``r``."""
    r_grid = list(default_r_grid() if r_grid is None else r_grid)
    if any(not 0 < r < 1 for r in r_grid) or any(b <= a for a, b in zip(r_grid, r_grid[1:])):
        raise ValueError("r_grid must be increasing inside (0, 1)")
    if cap_schedule is None:
        caps = [default_cap(f, r) for r in r_grid]
    elif callable(cap_schedule):
        caps = [int(cap_schedule(r)) for r in r_grid]
    else:
        caps = [int(c) for c in cap_schedule]
        if len(caps) != len(r_grid):
            raise ValueError("cap_schedule must match r_grid")
    b = np.asarray(betas, dtype=float)

    def one(i):
        return _degree_contributions(f, spec, b, r_grid[i], caps[i])

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            contribs = list(ex.map(one, range(len(r_grid))))
    else:
        contribs = [one(i) for i in range(len(r_grid))]

    results = []
    for bi, beta in enumerate(b):
        values, excess, tails = [], [], []
        for c in contribs:
            values.append(math.fsum(c[bi].tolist()))
            excess.append(math.fsum(c[bi, 1:].tolist()))
            tails.append(float(_tail_fraction(c[bi : bi + 1])[0]))
        sweep = SweepResult(list(r_grid), values, caps, tails, excess, float(beta))
        results.append((sweep, fit_growth(sweep)))
    return results


def dilation_sweep(
    f: SparsePoly,
    spec: DomainSpec,
    beta: float,
    r_grid: Sequence[float] | None = None,
    cap_schedule=None,
    threads: int = 1,
) -> tuple[SweepResult, FitResult]:
    return dilation_sweep_multi(f, spec, [beta], r_grid, cap_schedule, threads)[0]


# ---------------------------------------------------------------------------
# zeros


def _polish_slice(f: SparsePoly, z: np.ndarray, iters: int = 60) -> np.ndarray:
    """Damped Newton on the coordinate slice with the largest partial derivative."""
    z = z.astype(complex).copy()
    val = complex(f(z))
    for _ in range(iters):
        if abs(val) < 1e-15:
            break
        grad = f.gradient(z)
        i = int(np.argmax(np.abs(grad)))
        if grad[i] == 0:
            break
        step = val / grad[i]
        t = 1.0
        while t > 1e-6:
            cand = z.copy()
            cand[i] -= t * step
            cv = complex(f(cand))
            if abs(cv) < abs(val):
                z, val = cand, cv
                break
            t *= 0.5
        else:
            break
    return z


def interior_zero_scan(f: SparsePoly, spec: DomainSpec, grid_density: int = 8, candidates: int = 24):
    """A point of the domain where ``f`` vanishes, or ``None`` if none was found.

    Points on a grid of graded moduli and angles are ranked by ``|f|``; the
    best are polished by damped Newton steps on a one-dimensional slice and
    accepted when ``|f| < 1e-12`` strictly inside the domain.  Not finding a
    zero proves nothing.
    """
    n = spec.dimension
    m = grid_density
    moduli = (np.arange(m) + 0.5) / m
    angles = np.linspace(0, 2 * np.pi, 2 * m, endpoint=False)
    per_coord = (moduli[:, None] * np.exp(1j * angles)[None, :]).ravel()
    per_coord = np.concatenate([[0.0], per_coord])
    if n >= 3:
        per_coord = per_coord[:: max(1, per_coord.size // 40)]
    grids = np.meshgrid(*([per_coord] * n), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    pts = pts[contains(spec, pts, margin=1e-6)]
    if pts.size == 0:
        return None
    vals = np.abs(f(pts))
    order = np.argsort(vals, kind="stable")[:candidates]
    for j in order:
        z = _polish_slice(f, pts[j])
        if abs(complex(f(z))) < 1e-12 and bool(contains(spec, z[None, :], margin=1e-9)[0]):
            return z
    return None


@dataclass(frozen=True)
class BoundaryZero:
    point: tuple[complex, ...]
    radii: tuple[float, ...]  # the support torus (or boundary point moduli)
    free: tuple[int, ...]  # coordinates along which the zero extends to a full circle


def _torus_zero_search(f: SparsePoly, radii: np.ndarray, active: tuple[int, ...], tol=1e-10):
    n = f.dimension
    base = radii.astype(complex).copy()
    k = len(active)
    found = []
    if k == 1:
        a = active[0]
        coeffs = np.zeros(f.total_degree + 1, dtype=complex)
        for L, c in f.terms.items():
            coeffs[L[a]] += c * np.prod([radii[i] ** L[i] for i in range(n) if i != a])
        roots = np.roots(coeffs[::-1]) if np.any(coeffs[1:]) else np.array([])
        for root in roots:
            if abs(abs(root) - radii[a]) < 1e-9 * max(1.0, radii[a]):
                z = base.copy()
                z[a] = radii[a] * root / abs(root)
                found.append(z)
        return found
    M = {2: 96, 3: 24}.get(k, 10)
    th = np.linspace(0, 2 * np.pi, M, endpoint=False)
    grids = np.meshgrid(*([th] * k), indexing="ij")
    T = np.stack([g.ravel() for g in grids], axis=1)

    def point(theta):
        z = base.copy()
        z[list(active)] = radii[list(active)] * np.exp(1j * theta)
        return z

    Z = np.tile(base, (T.shape[0], 1))
    Z[:, list(active)] = radii[list(active)] * np.exp(1j * T)
    vals = np.abs(f(Z))
    for j in np.argsort(vals, kind="stable")[:12]:
        res = least_squares(
            lambda t: [complex(f(point(t))).real, complex(f(point(t))).imag],
            T[j],
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
        )
        z = point(res.x)
        if abs(complex(f(z))) < tol and not any(np.allclose(z, y, atol=1e-7) for y in found):
            found.append(z)
    return found


def boundary_zero_scan(f: SparsePoly, spec: DomainSpec) -> list[BoundaryZero]:
    """Zeros of ``f`` on the support of the boundary measure.

    On tori (polydisk, polyhedral vertex tori) variables that ``f`` does not
    depend on are free, so each zero found in the active variables spans a
    product subtorus.  On the two-dimensional ellipsoid the boundary is
    searched directly.
    """
    active = f.active_variables()
    if not active:
        return []
    n = spec.dimension
    if isinstance(spec, Polydisk):
        tori = [np.ones(n)]
    elif isinstance(spec, PolyhedralReinhardt):
        tori = [np.asarray(t.radii) for t in vertex_tori(spec)]
    else:
        return _ellipsoid_zero_search(f, spec)
    free = tuple(i for i in range(n) if i not in active)
    out = []
    for R in tori:
        for z in _torus_zero_search(f, R, active):
            out.append(BoundaryZero(tuple(complex(x) for x in z), tuple(float(x) for x in R), free))
    return out


def _ellipsoid_zero_search(f: SparsePoly, spec: Ellipsoid) -> list[BoundaryZero]:
    if spec.dimension != 2:
        return []
    p = np.asarray(spec.exponents)

    def point(x):
        t, a, b = x
        t = min(max(t, 0.0), 1.0)
        return np.array([t ** (1 / (2 * p[0])) * np.exp(1j * a), (1 - t) ** (1 / (2 * p[1])) * np.exp(1j * b)])

    ts = np.linspace(0, 1, 33)
    th = np.linspace(0, 2 * np.pi, 48, endpoint=False)
    G = np.array(np.meshgrid(ts, th, th, indexing="ij")).reshape(3, -1).T
    Z = np.stack([point(x) for x in G])
    vals = np.abs(f(Z))
    found = []
    for j in np.argsort(vals, kind="stable")[:12]:
        res = least_squares(
            lambda x: [complex(f(point(x))).real, complex(f(point(x))).imag],
            G[j],
            bounds=([0, -np.inf, -np.inf], [1, np.inf, np.inf]),
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
        )
        z = point(res.x)
        if abs(complex(f(z))) < 1e-10 and not any(np.allclose(z, y.point, atol=1e-7) for y in found):
            found.append(BoundaryZero(tuple(complex(x) for x in z), tuple(float(abs(x)) for x in z), ()))
    return found


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    kind: str  # NONCYCLIC, CYCLIC-EVIDENCE or INCONCLUSIVE
    reason: str
    details: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return f"{self.kind}({self.reason})" if self.reason else self.kind

    def to_json(self) -> dict:
        return {"verdict": self.label, "kind": self.kind, "reason": self.reason, "details": self.details}


def _jsonable_point(z) -> list:
    return [[complex(x).real, complex(x).imag] for x in z]


def cyclicity_verdict(
    f: SparsePoly,
    spec: DomainSpec,
    beta: float,
    budget: int = 10,
    boundary_zero=None,
    threads: int = 1,
) -> Verdict:
    """Graded cyclicity verdict for ``f`` in the space of index ``beta``.

    Certificates are tried in order: an interior zero, positive capacity of
    a product subtorus of the boundary zero set, a bounded point evaluation
    at a boundary zero.  Failing those, a dilation sweep over
    ``r = 1 - 2^{-k}``, ``k <= budget``, can give cyclic evidence.
    """
    if f.dimension != spec.dimension:
        raise ValueError("polynomial and domain dimensions differ")
    z = interior_zero_scan(f, spec)
    if z is not None:
        return Verdict("NONCYCLIC", "interior zero", {"witness": _jsonable_point(z)})

    zeros = boundary_zero_scan(f, spec)
    for bz in zeros:
        if not bz.free:
            continue
        factors = tuple(
            capacity.Circle(bz.radii[i]) if i in bz.free else capacity.Fixed(bz.point[i])
            for i in range(spec.dimension)
        )
        mu = capacity.MeasureSpec((capacity.MeasureComponent(1.0, factors),))
        e = capacity.energy(mu, spec, beta)
        if math.isfinite(e):
            return Verdict(
                "NONCYCLIC",
                "positive capacity",
                {"measure": str(mu), "energy": e, "capacity_lower_bound": 1 / e},
            )
    candidates = [np.asarray(bz.point) for bz in zeros]
    if boundary_zero is not None:
        candidates.insert(0, np.asarray(boundary_zero, dtype=complex))
    for zeta in candidates:
        if abs(complex(f(zeta))) > 1e-8:
            continue
        try:
            bound = capacity.pointeval_bound(spec, beta, zeta)
        except capacity.MeasureError:
            continue
        if math.isfinite(bound):
            return Verdict(
                "NONCYCLIC",
                "bounded point evaluation",
                {"zero": _jsonable_point(zeta), "pointeval_bound": bound},
            )

    if f.constant_term == 0:
        return Verdict("INCONCLUSIVE", "", {"note": "f(0) = 0 but no zero certificate was found"})
    sweep, fit = dilation_sweep(f, spec, beta, default_r_grid(budget), threads=threads)
    details = {"sweep": sweep.to_json(), "fit": fit.to_json(), "boundary_zeros": [_jsonable_point(b.point) for b in zeros]}
    if fit.bounded_evidence:
        return Verdict("CYCLIC-EVIDENCE", "bounded dilation sweep", details)
    return Verdict("INCONCLUSIVE", "", details)
