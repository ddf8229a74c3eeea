"""Norms, cyclicity diagnostics and capacities in graded Dirichlet-type spaces
on ellipsoids, polydisks and polyhedral Reinhardt domains."""

from .domains import Ellipsoid, Polydisk, PolyhedralReinhardt, omega_lambda, parse_domain, vertex_tori
from .expr import parse_poly
from .series import SparsePoly, TruncatedSeries, dilate, poly_mul, series_reciprocal

__version__ = "0.1.0"

__all__ = [
    "Ellipsoid",
    "Polydisk",
    "PolyhedralReinhardt",
    "SparsePoly",
    "TruncatedSeries",
    "dilate",
    "omega_lambda",
    "parse_domain",
    "parse_poly",
    "poly_mul",
    "series_reciprocal",
    "vertex_tori",
]
