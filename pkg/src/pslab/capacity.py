"""Reproducing kernels, energies and capacity bounds of boundary sets.

Measures are convex combinations of uniform measures on product sets whose
factors are either a fixed point or a full circle.  Their moments are
explicit, so kernel energies reduce to positive series over multi-indices.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy import integrate
from scipy.special import gammaln, logsumexp, xlogy

from .domains import DomainSpec, Ellipsoid, Polydisk, on_measure_support
from .norms import log_monomial_norm_sq
from .series import shell_array
from .summation import SeriesSum, count_poly, fitted_tail_sum, poly_power_sum


class MeasureError(ValueError):
    """Malformed measure or a measure placed off the boundary support."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested accuracy."""


@dataclass(frozen=True)
class Fixed:
    point: complex

    def __str__(self):
        return f"fix({_fmt(self.point)})"


@dataclass(frozen=True)
class Circle:
    radius: float = 1.0

    def __str__(self):
        return f"circle({self.radius!r})"


Factor = Union[Fixed, Circle]


@dataclass(frozen=True)
class MeasureComponent:
    weight: float
    factors: tuple[Factor, ...]

    @property
    def radii(self) -> tuple[float, ...]:
        return tuple(abs(f.point) if isinstance(f, Fixed) else f.radius for f in self.factors)


@dataclass(frozen=True)
class MeasureSpec:
    components: tuple[MeasureComponent, ...]

    def __post_init__(self):
        if not self.components:
            raise MeasureError("a measure needs at least one component")
        dims = {len(c.factors) for c in self.components}
        if len(dims) != 1:
            raise MeasureError("all components must have the same number of factors")
        if any(c.weight < 0 for c in self.components):
            raise MeasureError("weights must be nonnegative")
        total = math.fsum(c.weight for c in self.components)
        if abs(total - 1) > 1e-12:
            raise MeasureError(f"weights must sum to 1, got {total}")

    @property
    def dimension(self) -> int:
        return len(self.components[0].factors)

    def __str__(self):
        parts = []
        for c in self.components:
            body = "x".join(str(f) for f in c.factors)
            parts.append(body if len(self.components) == 1 else f"{c.weight!r}*{body}")
        return "+".join(parts)


def _fmt(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    return f"{z.real!r}{z.imag:+}i"


def point_measure(zeta: Sequence[complex]) -> MeasureSpec:
    return MeasureSpec((MeasureComponent(1.0, tuple(Fixed(complex(z)) for z in zeta)),))


_FACTOR_RE = re.compile(r"^(fix|circle)\((.*)\)$")


def parse_measure(text: str) -> MeasureSpec:
    """Parse ``fix(z)`` / ``circle(R)`` factors joined by ``x``.

    Convex combinations are written ``w1*...+w2*...``.  Components without
    a weight share the remaining mass equally.
    """
    comps_text = _split_top(text.replace(" ", ""), "+")
    raw = []
    for ct in comps_text:
        weight = None
        m = re.match(r"^([0-9.eE+-]+)\*(.*)$", ct)
        if m and not m.group(1).startswith(("fix", "circle")):
            weight = float(m.group(1))
            ct = m.group(2)
        factors = []
        for ft in _split_top(ct, "x"):
            fm = _FACTOR_RE.match(ft)
            if not fm:
                raise MeasureError(f"cannot parse measure factor {ft!r}")
            arg = fm.group(2)
            if fm.group(1) == "fix":
                factors.append(Fixed(_parse_complex(arg)))
            else:
                factors.append(Circle(float(arg) if arg else 1.0))
        raw.append([weight, tuple(factors)])
    given = math.fsum(w for w, _ in raw if w is not None)
    missing = [r for r in raw if r[0] is None]
    for r in missing:
        r[0] = (1.0 - given) / len(missing)
    return MeasureSpec(tuple(MeasureComponent(w, f) for w, f in raw))


def _parse_complex(s: str) -> complex:
    try:
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise MeasureError(f"bad complex literal {s!r}") from exc


def _split_top(text: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        # factors are joined by "x" only right after a closing parenthesis
        if ch == sep and depth == 0 and (sep != "x" or (i > 0 and text[i - 1] == ")")):
            # an exponent sign (1e+3) is not a separator
            if sep == "+" and i > 0 and text[i - 1] in "eE" and cur[:-1].replace(".", "").isdigit():
                cur += ch
                continue
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    if any(not p for p in out):
        raise MeasureError(f"empty term in {text!r}")
    return out


def check_support(mu: MeasureSpec, spec: DomainSpec) -> None:
    if mu.dimension != spec.dimension:
        raise MeasureError(
            f"measure has {mu.dimension} factors but the domain has dimension {spec.dimension}"
        )
    for c in mu.components:
        if not on_measure_support(spec, c.radii):
            raise MeasureError(
                f"component {c.radii} is not on the support of the boundary measure"
            )


def log_moments(mu: MeasureSpec, L: np.ndarray):
    """``log|moment(mu, L)|^2`` for an array of multi-indices, plus the complex moments' phases folded in.

    Returns ``(log_abs_sq, moment_unit)`` where ``moment = exp(log_abs_sq/2) * moment_unit``.
    """
    L = np.asarray(L)
    logmags, phases = [], []
    for c in mu.components:
        lm = np.full(L.shape[:-1], math.log(c.weight) if c.weight > 0 else -np.inf)
        ph = np.zeros(L.shape[:-1])
        for i, fac in enumerate(c.factors):
            li = L[..., i]
            if isinstance(fac, Fixed):
                lm = lm + xlogy(li, abs(fac.point))
                ph = ph - li * cmath.phase(fac.point)
            else:
                lm = np.where(li == 0, lm, -np.inf)
        logmags.append(lm)
        phases.append(ph)
    logmags = np.stack(logmags)
    phases = np.stack(phases)
    M = np.max(logmags, axis=0)
    Msafe = np.where(np.isfinite(M), M, 0.0)
    s = np.sum(np.exp(logmags - Msafe) * np.exp(1j * phases), axis=0)
    with np.errstate(divide="ignore"):
        log_abs_sq = np.where(np.isfinite(M), 2 * Msafe + np.log(np.abs(s) ** 2), -np.inf)
    unit = np.where(np.abs(s) > 0, s / np.where(np.abs(s) > 0, np.abs(s), 1), 0)
    return log_abs_sq, unit


def moment(mu: MeasureSpec, L: Sequence[int]) -> complex:
    la, unit = log_moments(mu, np.array([L]))
    return complex(np.exp(la[0] / 2) * unit[0])


_SHELL_LIMITS = {1: 200_000, 2: 4_000, 3: 150}


def energy_series(mu: MeasureSpec, spec: DomainSpec, beta: float) -> SeriesSum:
    """Kernel energy ``sum_L |moment(mu, L)|^2 / ||z^L||^2_beta`` with tail handling."""
    check_support(mu, spec)
    n = spec.dimension
    fixed = sorted(
        {i for c in mu.components for i, f in enumerate(c.factors) if isinstance(f, Fixed)}
    )
    k = len(fixed)
    if k == 0:
        v = float(np.exp(-log_monomial_norm_sq(spec, beta, np.zeros(n, dtype=int))))
        return SeriesSum(v, v, 0.0, 0.0, math.inf, 1)
    if isinstance(spec, Polydisk) and len(mu.components) == 1:
        # unit-modulus fixed points: every moment has modulus one
        return poly_power_sum(count_poly(k, n), beta, n)
    J = _SHELL_LIMITS.get(k, 60)
    shells = _shell_terms(mu, spec, beta, fixed, J)
    return fitted_tail_sum(shells, index_offset=n)


def _shell_terms(mu, spec, beta, fixed, J) -> np.ndarray:
    n = spec.dimension
    k = len(fixed)
    out = np.empty(J + 1)
    if k == 1:
        L = np.zeros((J + 1, n), dtype=np.int64)
        L[:, fixed[0]] = np.arange(J + 1)
        la, _ = log_moments(mu, L)
        out[:] = np.exp(la - log_monomial_norm_sq(spec, beta, L))
        return out
    for j in range(J + 1):
        A = shell_array(k, j)
        L = np.zeros((A.shape[0], n), dtype=np.int64)
        L[:, fixed] = A
        la, _ = log_moments(mu, L)
        out[j] = float(np.exp(logsumexp(la - log_monomial_norm_sq(spec, beta, L))))
    return out


def energy(mu: MeasureSpec, spec: DomainSpec, beta: float) -> float:
    """Energy of ``mu``; ``math.inf`` when the series diverges."""
    return energy_series(mu, spec, beta).value


def capacity_lower_bound(E: MeasureSpec, spec: DomainSpec, beta: float) -> float:
    """``1 / energy`` of the uniform measure on ``E``; positive means ``Cap_beta(E) > 0``.

    This is a lower bound on the capacity, not the capacity itself (no
    minimization over probability measures on ``E`` is performed).
    """
    e = energy(E, spec, beta)
    return 0.0 if math.isinf(e) else 1.0 / e


@dataclass(frozen=True)
class KernelSum:
    value: complex
    tail: float
    converged: bool


def _graded_sum(spec, beta, log_abs_fn, cap) -> KernelSum:
    n = spec.dimension
    total_re, total_im, shells = [], [], []
    for d in range(cap + 1):
        L = shell_array(n, d)
        la, unit = log_abs_fn(L)
        mag = np.exp(la - log_monomial_norm_sq(spec, beta, L))
        vals = mag * unit
        total_re.extend(vals.real.tolist())
        total_im.extend(vals.imag.tolist())
        shells.append(float(mag.sum()))
    value = complex(math.fsum(total_re), math.fsum(total_im))
    tail = _geometric_tail(shells)
    return KernelSum(value, tail, bool(math.isfinite(tail) and tail < abs(value)))


def _geometric_tail(shells: list[float]) -> float:
    if not shells or shells[-1] == 0:
        return 0.0
    tailpts = shells[-4:]
    ratios = [b / a for a, b in zip(tailpts, tailpts[1:]) if a > 0]
    if not ratios:
        return math.inf
    q = max(ratios)
    if q >= 1:
        return math.inf
    return shells[-1] * q / (1 - q)


def kernel_eval(spec: DomainSpec, beta: float, z, w, cap: int) -> KernelSum:
    """``sum_{|L| <= cap} z^L conj(w)^L / ||z^L||^2_beta`` with a geometric tail estimate."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if z.shape != (spec.dimension,) or w.shape != (spec.dimension,):
        raise ValueError("points must have the domain dimension")

    def log_abs(L):
        la = xlogy(L, np.abs(z)).sum(axis=-1) + xlogy(L, np.abs(w)).sum(axis=-1)
        ph = L @ (np.angle(z) - np.angle(w))
        return la, np.exp(1j * ph)

    return _graded_sum(spec, beta, log_abs, cap)


def cauchy_transform(mu: MeasureSpec, spec: DomainSpec, z, cap: int) -> KernelSum:
    """``sum_{|L| <= cap} z^L moment(mu, L) / ||z^L||^2_0``."""
    check_support(mu, spec)
    z = np.asarray(z, dtype=complex)

    def log_abs(L):
        lm, unit = log_moments(mu, L)
        la = xlogy(L, np.abs(z)).sum(axis=-1) + lm / 2
        ph = L @ np.angle(z)
        return la, unit * np.exp(1j * ph)

    return _graded_sum(spec, 0.0, log_abs, cap)


# ---------------------------------------------------------------------------
# point evaluation on the boundary


def s_values(p: float, r: float, jmax: int) -> np.ndarray:
    """``S(j)`` for ``j = 0..jmax``.

    ``S(j) = sum_{j1+j2=j} Gamma(j/p+1) / (Gamma(j1/p+1) Gamma(j2/p+1)) r^{j1/p} (1-r)^{j2/p}``,
    i.e. the boundary weights ``|z_1|^{2 j1} |z_2|^{2 j2}`` with ``r = |z_1|^{2p}``.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    if not 0 <= r <= 1:
        raise ValueError("r must lie in [0, 1]")
    out = np.empty(jmax + 1)
    for j in range(jmax + 1):
        x = np.arange(j + 1) / p
        lam = j / p
        logs = (
            gammaln(lam + 1)
            - gammaln(x + 1)
            - gammaln(lam - x + 1)
            + xlogy(x, r)
            + xlogy(lam - x, 1 - r)
        )
        out[j] = math.fsum(np.exp(logs).tolist())
    return out


@dataclass(frozen=True)
class SBound:
    maximum: float
    argmax: int
    values: np.ndarray


def s_bound_check(p: float, r: float, jmax: int) -> SBound:
    """Running maximum of ``S(j)`` over ``j <= jmax``."""
    vals = s_values(p, r, jmax)
    i = int(np.argmax(vals))
    return SBound(float(vals[i]), i, vals)


_ELLIPSOID_POINTEVAL_TERMS = 4000


def pointeval_series(spec: DomainSpec, beta: float, zeta) -> SeriesSum:
    """Squared norm bound of the point evaluation at a boundary point ``zeta``."""
    zeta = np.asarray(zeta, dtype=complex)
    n = spec.dimension
    if zeta.shape != (n,):
        raise ValueError("zeta must have the domain dimension")
    if isinstance(spec, Polydisk):
        if np.any(np.abs(zeta) > 1 + 1e-9):
            raise MeasureError("zeta must lie in the closed polydisk")
        # |zeta^J| <= 1, with equality on the torus
        return poly_power_sum(count_poly(n, n), beta, n)
    if isinstance(spec, Ellipsoid) and n == 2 and spec.exponents[0] == spec.exponents[1]:
        p = spec.exponents[0]
        rho = float(np.sum(np.abs(zeta) ** (2 * p)))
        if abs(rho - 1) > 1e-9:
            raise MeasureError("zeta must lie on the boundary of the ellipsoid")
        r = min(1.0, float(abs(zeta[0]) ** (2 * p)))
        if p == 1 or r in (0.0, 1.0):
            # S(j) = 1 for all j
            return poly_power_sum(np.array([0.0, 1.0]), beta, 2)
        j = np.arange(_ELLIPSOID_POINTEVAL_TERMS + 1)
        terms = (j + 2.0) ** (1 - beta) * s_values(p, r, _ELLIPSOID_POINTEVAL_TERMS)
        return fitted_tail_sum(terms, index_offset=2)
    return energy_series(point_measure(zeta), spec, beta)


def pointeval_bound(spec: DomainSpec, beta: float, zeta) -> float:
    """Finite bound on ``|f(zeta)|^2 / ||f||^2_beta``, or ``math.inf``."""
    return pointeval_series(spec, beta, zeta).value


# ---------------------------------------------------------------------------
# Laplace's method


def laplace_h(y, r):
    return xlogy(y, y / r) + xlogy(1 - y, (1 - y) / (1 - r))


@dataclass(frozen=True)
class LaplaceRow:
    lam: float
    integral: float
    asymptote: float
    ratio: float
    abserr: float


def laplace_verify(r: float, lambdas: Sequence[float]) -> list[LaplaceRow]:
    """Quadrature of ``int_0^1 exp(-lam h(y)) g(y) dy`` against its Laplace asymptote.

    ``h(y) = y log(y/r) + (1-y) log((1-y)/(1-r))`` vanishes to second order at
    ``y = r`` and ``g(y) = 1/sqrt(y(1-y))``.  The substitution
    ``y = sin^2(t)`` turns ``g dy`` into ``2 dt``, removing both endpoint
    singularities.  The asymptote is ``sqrt(2 pi / (lam h''(r))) g(r)``.
    """
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    h2 = 1 / r + 1 / (1 - r)
    g_r = 1 / math.sqrt(r * (1 - r))
    t_peak = math.asin(math.sqrt(r))
    rows = []
    for lam in lambdas:
        lam = float(lam)
        if lam <= 0:
            raise ValueError("lambda must be positive")

        def integrand(t):
            return 2.0 * math.exp(-lam * float(laplace_h(math.sin(t) ** 2, r)))

        width = 1 / math.sqrt(lam * h2)
        pts = sorted({max(0.0, t_peak - 8 * width), t_peak, min(math.pi / 2, t_peak + 8 * width)})
        val, err = integrate.quad(integrand, 0.0, math.pi / 2, points=pts, epsabs=0, epsrel=1e-12, limit=200)
        if not math.isfinite(val) or err > 1e-8 * max(abs(val), 1e-300):
            raise QuadratureError(f"quadrature did not converge for lambda={lam} (err={err})")
        asym = math.sqrt(2 * math.pi / (lam * h2)) * g_r
        rows.append(LaplaceRow(lam, val, asym, val / asym, err))
    return rows
