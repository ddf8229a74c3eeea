"""Independent checks of the closed forms: Monte Carlo and quadrature.

Random numbers come from the counter-based Philox generator.  Batch ``b``
of a run with seed ``s`` uses ``Philox(key=s).jumped(b)``, so a result
depends only on ``(seed, samples)`` and batch means are reduced in a fixed
order whatever the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import gammaln

BATCH = 100_000


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    std_error: float
    exact: float
    samples: int

    @property
    def z_score(self) -> float:
        if self.std_error == 0:
            return 0.0 if self.estimate == self.exact else math.inf
        return (self.estimate - self.exact) / self.std_error


def sphere_moment_exact(gamma: Sequence[float]) -> float:
    g = np.asarray(gamma, dtype=float)
    n = g.size
    return float(np.exp(gammaln(n) + gammaln(g + 1).sum() - gammaln(g.sum() + n)))


def ball_moment_exact(gamma: Sequence[float]) -> float:
    g = np.asarray(gamma, dtype=float)
    n = g.size
    return float(np.exp(gammaln(n + 1) + gammaln(g + 1).sum() - gammaln(g.sum() + n + 1)))


def _rng(seed: int, batch: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed).jumped(batch))


def sphere_points(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points on the unit sphere of C^n (normalized complex Gaussians)."""
    g = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def ball_points(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points in the unit ball of C^n (real dimension 2n)."""
    s = sphere_points(n, count, rng)
    radius = rng.random(count) ** (1.0 / (2 * n))
    return s * radius[:, None]


def _batched_moments(
    sampler, gammas: np.ndarray, n: int, samples: int, seed: int, threads: int
) -> tuple[np.ndarray, np.ndarray]:
    sizes = [BATCH] * (samples // BATCH)
    if samples % BATCH:
        sizes.append(samples % BATCH)

    def run(b):
        z = sampler(n, sizes[b], _rng(seed, b))
        logabs = np.log(np.abs(z))
        vals = np.exp(2 * logabs @ gammas.T)  # (count, n_gamma)
        return vals.sum(axis=0), (vals**2).sum(axis=0)

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(run, range(len(sizes))))
    else:
        parts = [run(b) for b in range(len(sizes))]
    s1 = np.zeros(gammas.shape[0])
    s2 = np.zeros(gammas.shape[0])
    for a, b in parts:  # fixed reduction order
        s1 += a
        s2 += b
    mean = s1 / samples
    var = np.maximum(s2 / samples - mean**2, 0.0) * samples / (samples - 1)
    return mean, np.sqrt(var / samples)


def _check(gamma, n, samples):
    if samples < 1000:
        raise ValueError("at least 1000 samples are required")
    if len(gamma) != n:
        raise ValueError("gamma must have n entries")
    if any(g <= -1 for g in gamma):
        raise ValueError("gamma entries must exceed -1")


def mc_sphere_moment(gamma: Sequence[float], n: int, samples: int, seed: int = 0, threads: int = 1) -> MCEstimate:
    """Monte Carlo estimate of ``int |zeta^gamma|^2 dsigma`` over the unit sphere of C^n."""
    _check(gamma, n, samples)
    g = np.atleast_2d(np.asarray(gamma, dtype=float))
    mean, se = _batched_moments(sphere_points, g, n, samples, seed, threads)
    return MCEstimate(float(mean[0]), float(se[0]), sphere_moment_exact(gamma), samples)


def mc_ball_moment(gamma: Sequence[float], n: int, samples: int, seed: int = 0, threads: int = 1) -> MCEstimate:
    """Monte Carlo estimate of ``int |z^gamma|^2 dv`` over the unit ball of C^n."""
    _check(gamma, n, samples)
    g = np.atleast_2d(np.asarray(gamma, dtype=float))
    mean, se = _batched_moments(ball_points, g, n, samples, seed, threads)
    return MCEstimate(float(mean[0]), float(se[0]), ball_moment_exact(gamma), samples)


def mc_moment_table(
    kind: str, gammas: Sequence[Sequence[float]], n: int, samples: int, seed: int = 0, threads: int = 1
) -> list[MCEstimate]:
    """Several moments from one shared sample set."""
    g = np.asarray(gammas, dtype=float)
    for row in g:
        _check(row, n, samples)
    sampler, exact = {
        "sphere": (sphere_points, sphere_moment_exact),
        "ball": (ball_points, ball_moment_exact),
    }[kind]
    mean, se = _batched_moments(sampler, g, n, samples, seed, threads)
    return [MCEstimate(float(m), float(s), exact(row), samples) for m, s, row in zip(mean, se, g)]


def torus_moment(radii: Sequence[float], L: Sequence[int]) -> float:
    """``int |z^L|^2`` against the uniform measure on ``|z_i| = radii[i]``: ``prod R_i^{2 l_i}``."""
    return math.prod(float(R) ** (2 * int(l)) for R, l in zip(radii, L))


@dataclass(frozen=True)
class QuadratureCheck:
    value: float
    exact: float
    abserr: float


def radial_weight_quadrature(alpha: float, c: float) -> QuadratureCheck:
    """``int_0^inf r^alpha e^{-c r} dr`` by adaptive quadrature, against ``Gamma(alpha+1)/c^{alpha+1}``."""
    if alpha <= -1:
        raise ValueError("alpha must exceed -1")
    if c <= 0:
        raise ValueError("c must be positive")
    # algebraic endpoint weight on [0, 1/c], plain adaptive rule beyond
    b = 1.0 / c
    head, e1 = integrate.quad(lambda r: math.exp(-c * r), 0.0, b, weight="alg", wvar=(alpha, 0.0), epsabs=0, epsrel=1e-13)
    tail, e2 = integrate.quad(lambda r: r**alpha * math.exp(-c * r), b, math.inf, epsabs=0, epsrel=1e-13, limit=200)
    exact = math.exp(math.lgamma(alpha + 1) - (alpha + 1) * math.log(c))
    return QuadratureCheck(head + tail, exact, e1 + e2)
