"""Domains, their exhaustion functions and the support of the boundary measure.

Three kinds of domain are supported:

* ``Ellipsoid``: ``|z_1|^{2p_1} + ... + |z_n|^{2p_n} < 1`` with the
  exhaustion ``log(sum |z_i|^{2p_i}) / (2 (p_1...p_n)^{1/n})``;
* ``Polydisk``: the unit polydisk with ``log max |z_i|``;
* ``PolyhedralReinhardt``: ``lambda_j |z_1|^{b_1^j} ... |z_n|^{b_n^j} < 1``
  with ``log max_j p_j(z)``.

For the polyhedral case the boundary measure is a convex combination of
uniform measures on product tori sitting over the vertices of the
log-domain; :func:`vertex_tori` computes them.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence, Union

import numpy as np
from scipy.optimize import linprog

log = logging.getLogger(__name__)

VERTEX_TOL = 1e-10


class DomainError(ValueError):
    """Invalid domain description."""


class DegenerateDomainError(DomainError):
    """No admissible vertex torus exists."""


@dataclass(frozen=True)
class Ellipsoid:
    exponents: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(x) for x in self.exponents)
        if not p:
            raise DomainError("ellipsoid needs at least one exponent")
        if any(not math.isfinite(x) or x < 1 for x in p):
            raise DomainError(f"ellipsoid exponents must be reals >= 1, got {p}")
        object.__setattr__(self, "exponents", p)

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    @property
    def mean_exponent(self) -> float:
        """Geometric mean ``(p_1 ... p_n)^{1/n}``."""
        return math.exp(sum(math.log(x) for x in self.exponents) / self.dimension)

    def defining_function(self, z) -> np.ndarray:
        a = np.abs(np.asarray(z, dtype=complex))
        return np.sum(a ** (2 * np.asarray(self.exponents)), axis=-1)

    def to_json(self) -> dict:
        return {"kind": "ellipsoid", "exponents": list(self.exponents)}


@dataclass(frozen=True)
class Polydisk:
    dimension: int

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise DomainError(f"polydisk dimension must be a positive integer, got {self.dimension}")
        object.__setattr__(self, "dimension", int(self.dimension))

    def defining_function(self, z) -> np.ndarray:
        return np.max(np.abs(np.asarray(z, dtype=complex)), axis=-1)

    def to_json(self) -> dict:
        return {"kind": "polydisk", "dimension": self.dimension}


Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class Face:
    """One defining inequality ``lam * prod |z_i|^{row_i} < 1``."""

    lam: float
    row: tuple[Number, ...]

    def __post_init__(self):
        row = tuple(x if isinstance(x, Fraction) else _to_number(x) for x in self.row)
        object.__setattr__(self, "row", row)
        object.__setattr__(self, "lam", float(self.lam))
        if self.lam < 1:
            raise DomainError(f"face constant must be >= 1, got {self.lam}")
        if any(x < 0 for x in row):
            raise DomainError(f"face exponents must be nonnegative, got {row}")
        total = sum(row)
        exact = all(isinstance(x, (int, Fraction)) for x in row)
        if (exact and total != 1) or (not exact and abs(float(total) - 1) > 1e-12):
            raise DomainError(
                f"face exponents must sum to 1 (got {float(total)}); use normalize_face()"
            )

    @property
    def row_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.row])


def _to_number(x):
    if isinstance(x, (int, Fraction)):
        return x
    x = float(x)
    return int(x) if x.is_integer() else x


def normalize_face(lam: float, row: Sequence[Number]) -> Face:
    """Rescale ``lam |z|^row < 1`` so that the exponents sum to one.

    ``(lam, row)`` becomes ``(lam^{1/s}, row/s)`` with ``s = sum(row)``; the
    inequality describes the same set.
    """
    s = sum(row)
    if s <= 0:
        raise DomainError("face exponents must have a positive sum")
    if all(isinstance(x, (int, Fraction)) for x in row):
        new_row = tuple(Fraction(x) / Fraction(s) for x in row)
    else:
        new_row = tuple(float(x) / float(s) for x in row)
    return Face(float(lam) ** (1.0 / float(s)), new_row)


@dataclass(frozen=True)
class PolyhedralReinhardt:
    dimension: int
    faces: tuple[Face, ...]

    def __post_init__(self):
        faces = tuple(f if isinstance(f, Face) else Face(*f) for f in self.faces)
        object.__setattr__(self, "faces", faces)
        n = int(self.dimension)
        object.__setattr__(self, "dimension", n)
        if n < 1:
            raise DomainError("dimension must be positive")
        for f in faces:
            if len(f.row) != n:
                raise DomainError(f"face row {f.row} does not have length {n}")
        if len(faces) < n:
            raise DomainError(f"need at least {n} faces, got {len(faces)}")

    def defining_function(self, z) -> np.ndarray:
        a = np.abs(np.asarray(z, dtype=complex))
        with np.errstate(divide="ignore"):
            la = np.log(a)
        vals = [math.log(f.lam) + la @ f.row_float for f in self.faces]
        return np.exp(np.max(np.stack(vals, axis=-1), axis=-1))

    def to_json(self) -> dict:
        faces = []
        for f in self.faces:
            row = []
            for x in f.row:
                q = x if isinstance(x, Fraction) else Fraction(x).limit_denominator(10**12)
                row.append([q.numerator, q.denominator])
            faces.append({"lambda": f.lam, "exponents": row})
        return {"kind": "polyhedral", "dimension": self.dimension, "faces": faces}


DomainSpec = Union[Ellipsoid, Polydisk, PolyhedralReinhardt]


def omega_lambda(m: int, n: int, lam: float) -> PolyhedralReinhardt:
    """``{|z_1| < 1, |z_2| < 1, lam |z_1^m z_2^n| < 1}`` in normalized form."""
    return PolyhedralReinhardt(
        2,
        (
            Face(1.0, (1, 0)),
            Face(1.0, (0, 1)),
            normalize_face(lam, (m, n)),
        ),
    )


def polydisk_as_polyhedral(n: int) -> PolyhedralReinhardt:
    faces = []
    for i in range(n):
        row = [0] * n
        row[i] = 1
        faces.append(Face(1.0, tuple(row)))
    return PolyhedralReinhardt(n, tuple(faces))


@dataclass(frozen=True)
class VertexTorus:
    """A product torus ``|z_i| = radii[i]`` carrying mass ``weight``."""

    radii: tuple[float, ...]
    weight: float
    faces: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"radii": list(self.radii), "weight": self.weight, "faces": list(self.faces)}


def vertex_tori(spec: PolyhedralReinhardt, level: float = 0.0) -> list[VertexTorus]:
    """Support tori and weights of the boundary measure of a polyhedral domain.

    Every ``n``-subset of faces with a nonsingular exponent matrix ``B``
    gives a candidate vertex ``x = B^{-1}(level - log lam)`` of the
    log-domain; it is kept when no other face cuts it off.  Its weight is
    proportional to ``|det B|``.  At ``level = r`` the radii are
    ``exp(r)`` times the ``level = 0`` radii.
    """
    if not isinstance(spec, PolyhedralReinhardt):
        raise DomainError("vertex_tori needs a polyhedral Reinhardt domain")
    n = spec.dimension
    rows = np.array([f.row_float for f in spec.faces])
    loglam = np.array([math.log(f.lam) for f in spec.faces])
    found = []
    any_nonsingular = False
    for subset in combinations(range(len(spec.faces)), n):
        B = rows[list(subset)]
        det = _exact_det(spec, subset)
        if det == 0:
            continue
        any_nonsingular = True
        x = np.linalg.solve(B, level - loglam[list(subset)])
        values = rows @ x + loglam
        if np.any(values > level + VERTEX_TOL):
            continue
        if np.any(x > level + VERTEX_TOL):
            continue
        key = tuple(np.round(x, 9))
        found.append((key, x, abs(det), subset))
    if not any_nonsingular:
        raise DegenerateDomainError("every n-subset of faces has a singular exponent matrix")
    if not found:
        raise DegenerateDomainError("no admissible vertex")
    # several face subsets can meet at the same vertex (non-simple vertices);
    # the vertex torus is counted once, with the largest determinant
    merged: dict = {}
    for key, x, det, subset in found:
        if key not in merged or det > merged[key][1]:
            merged[key] = (x, det, subset)
    total = sum(v[1] for v in merged.values())
    tori = [
        VertexTorus(tuple(float(v) for v in np.exp(x)), det / total, subset)
        for x, det, subset in merged.values()
    ]
    tori.sort(key=lambda t: t.radii)
    return tori


def _exact_det(spec: PolyhedralReinhardt, subset) -> float:
    rows = [spec.faces[i].row for i in subset]
    if all(isinstance(x, (int, Fraction)) for r in rows for x in r):
        return float(_fraction_det([[Fraction(x) for x in r] for r in rows]))
    det = float(np.linalg.det(np.array([[float(x) for x in r] for r in rows])))
    return 0.0 if abs(det) < 1e-12 else det


def _fraction_det(M) -> Fraction:
    M = [row[:] for row in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            factor = M[r][c] / M[c][c]
            for k in range(c, n):
                M[r][k] -= factor * M[c][k]
    return det


# ---------------------------------------------------------------------------
# polyhedral approximation of a complete log-convex Reinhardt domain


@dataclass
class ApproximationStep:
    sample: tuple[float, ...]
    normal: tuple[float, ...]
    offset: float


def approximate_reinhardt(
    boundary_samples, k: int, *, tol: float = 1e-9
) -> tuple[PolyhedralReinhardt, list[ApproximationStep]]:
    """Polyhedral outer approximation from samples of the log-boundary.

    Starts from the polydisk faces ``max x_i`` and adds up to ``k``
    supporting faces ``f(x) = v.x + c`` with ``v`` in the unit simplex,
    ``f = 0`` at the chosen sample and ``f <= 0`` on every sample.  The
    sample lying deepest inside the current approximation is refined
    first.  The normal ``v`` is the centre of the admissible normal cone,
    which for smooth boundaries tends to the true tangent as the sampling
    gets denser.
    """
    X = np.atleast_2d(np.asarray(boundary_samples, dtype=float))
    m, n = X.shape
    if k > m:
        raise ValueError(f"k = {k} exceeds the number of samples ({m})")
    if np.any(X > tol):
        raise ValueError("log-coordinates of samples must be <= 0 (domain inside the unit polydisk)")

    normals: list[np.ndarray] = [np.eye(n)[i] for i in range(n)]
    offsets: list[float] = [0.0] * n
    steps: list[ApproximationStep] = []
    used = np.zeros(m, dtype=bool)

    def current(x):
        return max(float(v @ x + c) for v, c in zip(normals, offsets))

    for _ in range(k):
        depth = np.array([current(x) if not used[i] else 0.0 for i, x in enumerate(X)])
        i = int(np.argmin(depth))
        if depth[i] >= -tol:
            break
        used[i] = True
        v = _support_normal(X, i, tol)
        if v is None:
            warnings.warn(
                f"sample {X[i].tolist()} is not separable by a simplex-normal hyperplane; skipped",
                stacklevel=2,
            )
            continue
        c = -float(v @ X[i])
        normals.append(v)
        offsets.append(c)
        steps.append(ApproximationStep(tuple(X[i]), tuple(v), c))

    faces = [Face(math.exp(c), tuple(float(x) for x in v)) for v, c in zip(normals, offsets)]
    # exact unit rows for the polydisk faces
    faces[:n] = [Face(1.0, tuple(int(i == j) for j in range(n))) for i in range(n)]
    return PolyhedralReinhardt(n, tuple(faces)), steps


def _support_normal(X: np.ndarray, i: int, tol: float) -> np.ndarray | None:
    """Chebyshev centre of ``{v in simplex : v.(x - X[i]) <= 0 for all samples x}``."""
    m, n = X.shape
    if n == 1:
        return np.ones(1) if np.all(X[:, 0] <= X[i, 0] + tol) else None
    D = X - X[i]
    D = D[np.linalg.norm(D, axis=1) > tol]
    proj = np.eye(n) - np.full((n, n), 1.0 / n)  # onto the simplex tangent space
    A, b = [], []
    for d in D:
        A.append(np.append(d, np.linalg.norm(proj @ d)))
        b.append(0.0)
    for j in range(n):
        A.append(np.append(-np.eye(n)[j], np.linalg.norm(proj[:, j])))
        b.append(0.0)
    res = linprog(
        c=np.append(np.zeros(n), -1.0),
        A_ub=np.array(A),
        b_ub=np.array(b),
        A_eq=np.append(np.ones(n), 0.0)[None, :],
        b_eq=[1.0],
        bounds=[(0, 1)] * n + [(0, None)],
        method="highs",
    )
    if res.status != 0:
        return None
    v = np.clip(res.x[:n], 0.0, None)
    if np.any(D @ v > 1e-9):
        return None
    return v / v.sum()


def contains(spec: DomainSpec, z, margin: float = 0.0) -> np.ndarray:
    """Whether ``z`` lies in the domain shrunk by ``margin``."""
    return spec.defining_function(z) < 1.0 - margin


def on_measure_support(spec: DomainSpec, radii: Sequence[float], tol: float = 1e-9) -> bool:
    """Whether the torus ``|z_i| = radii[i]`` lies in the support of the boundary measure."""
    radii = np.asarray(radii, dtype=float)
    if isinstance(spec, Polydisk):
        return bool(np.all(np.abs(radii - 1.0) <= tol))
    if isinstance(spec, Ellipsoid):
        return abs(float(np.sum(radii ** (2 * np.asarray(spec.exponents)))) - 1.0) <= tol
    for t in vertex_tori(spec):
        if np.all(np.abs(radii - np.asarray(t.radii)) <= tol):
            return True
    return False


def domain_from_json(doc: dict) -> DomainSpec:
    kind = doc.get("kind")
    if kind == "ellipsoid":
        return Ellipsoid(tuple(doc["exponents"]))
    if kind == "polydisk":
        return Polydisk(int(doc["dimension"]))
    if kind == "polyhedral":
        faces = []
        for face in doc["faces"]:
            row = []
            for e in face["exponents"]:
                if isinstance(e, (list, tuple)):
                    row.append(Fraction(int(e[0]), int(e[1])))
                else:
                    row.append(e)
            if doc.get("normalize", False):
                faces.append(normalize_face(float(face["lambda"]), row))
            else:
                faces.append(Face(float(face["lambda"]), tuple(row)))
        return PolyhedralReinhardt(int(doc["dimension"]), tuple(faces))
    raise DomainError(f"unknown domain kind {kind!r}")


def parse_domain(text: str) -> DomainSpec:
    """Inline domain syntax.

    ``polydisk:N``, ``ellipsoid:p1,p2,...``, ``ball:N`` and
    ``omega:m,n,lambda`` (the two-face-plus-monomial domain in C^2).
    """
    kind, _, args = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "polydisk":
            return Polydisk(int(args))
        if kind == "ball":
            return Ellipsoid((1.0,) * int(args))
        if kind == "ellipsoid":
            return Ellipsoid(tuple(float(x) for x in args.split(",")))
        if kind == "omega":
            m, n, lam = args.split(",")
            return omega_lambda(int(m), int(n), float(lam))
    except (TypeError, ValueError) as exc:
        raise DomainError(f"cannot parse domain {text!r}: {exc}") from exc
    raise DomainError(f"unknown domain {text!r}")
