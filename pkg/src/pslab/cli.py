"""Command-line front end.

Each subcommand prints one JSON report to stdout.  Exit codes: 0 on
success, 2 on input errors, 3 when a computation did not converge.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings

import numpy as np

from . import capacity, cyclicity, norms, oracle
from .domains import (
    DomainError,
    Ellipsoid,
    PolyhedralReinhardt,
    approximate_reinhardt,
    domain_from_json,
    parse_domain,
    vertex_tori,
)
from .expr import parse_poly
from .report import dumps, write_csv
from .series import multi_indices_upto

EXIT_INPUT = 2
EXIT_NONCONVERGED = 3


class NonConvergence(RuntimeError):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _complexes(text: str) -> list[complex]:
    try:
        return [complex(x.strip().replace("i", "j")) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated complex numbers, got {text!r}") from None


def _default_threads() -> int:
    env = os.environ.get("PSLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _domain(args):
    if getattr(args, "domain_file", None):
        try:
            with open(args.domain_file) as fh:
                return domain_from_json(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DomainError(f"cannot read domain file {args.domain_file!r}: {exc}") from exc
    if not getattr(args, "domain", None):
        raise DomainError("a domain is required (--domain or --domain-file)")
    return parse_domain(args.domain)


def _poly(args, spec):
    return parse_poly(args.poly, spec.dimension)


def _betas(args) -> list[float]:
    if not args.beta:
        raise ValueError("--beta is required")
    return args.beta


# ---------------------------------------------------------------------------
# commands; each returns (domain, params, result, csv_rows)


def cmd_norm(args):
    spec = _domain(args)
    f = _poly(args, spec)
    rows = [(b, norms.function_norm_sq(f, spec, b)) for b in _betas(args)]
    result = {"norms": [{"beta": b, "norm_sq": v} for b, v in rows]}
    return spec, {"poly": f.to_string(), "beta": args.beta}, result, rows


def cmd_monomial_norms(args):
    spec = _domain(args)
    beta = _betas(args)[0]
    entries, rows = [], []
    for L in multi_indices_upto(spec.dimension, args.max_degree):
        v = norms.monomial_norm_sq(spec, beta, L, classical_constant=args.classical_constant)
        entries.append({"multi_index": list(L), "norm_sq": v})
        rows.append(("(" + ",".join(map(str, L)) + ")", sum(L), v))
    params = {"beta": beta, "max_degree": args.max_degree, "classical_constant": args.classical_constant}
    return spec, params, {"entries": entries}, rows


def _r_grid(args):
    if args.r_grid is None:
        return cyclicity.default_r_grid()
    if len(args.r_grid) == 1 and args.r_grid[0] >= 1 and float(args.r_grid[0]).is_integer():
        return cyclicity.default_r_grid(int(args.r_grid[0]))
    return args.r_grid


def cmd_dilation_sweep(args):
    spec = _domain(args)
    f = _poly(args, spec)
    grid = _r_grid(args)
    caps = None if args.cap is None else [args.cap] * len(grid)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", cyclicity.UnconvergedWarning)
        res = cyclicity.dilation_sweep_multi(f, spec, _betas(args), grid, caps, threads=args.threads)
    sweeps, rows, flagged = [], [], False
    for sweep, fit in res:
        sweeps.append({"sweep": sweep.to_json(), "fit": fit.to_json()})
        for r, cap, q, e, t, ok in zip(sweep.r_grid, sweep.caps, sweep.values, sweep.excess, sweep.tail_fraction, sweep.converged):
            rows.append((sweep.beta, r, cap, q, e, t, ok))
        flagged |= any(t >= cyclicity.FLAG_TAIL for t in sweep.tail_fraction)
    params = {"poly": f.to_string(), "beta": args.beta, "r_grid": list(grid), "cap": args.cap}
    result = {"sweeps": sweeps, "unconverged": flagged}
    return spec, params, result, rows, flagged


def _measure(args, spec):
    mu = capacity.parse_measure(args.measure)
    capacity.check_support(mu, spec)
    return mu


def cmd_energy(args):
    spec = _domain(args)
    mu = _measure(args, spec)
    out, rows = [], []
    for b in _betas(args):
        s = capacity.energy_series(mu, spec, b)
        out.append({"beta": b, "energy": s.value, "divergent": s.divergent, "decay_exponent": s.exponent, "tail_bound": s.tail_bound})
        rows.append((b, s.value, s.divergent))
    return spec, {"measure": str(mu), "beta": args.beta}, {"energies": out}, rows


def cmd_capacity_bound(args):
    spec = _domain(args)
    mu = _measure(args, spec)
    out, rows = [], []
    for b in _betas(args):
        e = capacity.energy(mu, spec, b)
        lb = 0.0 if math.isinf(e) else 1.0 / e
        out.append({"beta": b, "energy": e, "divergent": math.isinf(e), "capacity_lower_bound": lb, "certified_positive": lb > 0})
        rows.append((b, e, lb))
    return spec, {"set": str(mu), "beta": args.beta}, {"bounds": out}, rows


def cmd_pointeval_bound(args):
    spec = _domain(args)
    zeta = args.zeta
    out, rows = [], []
    for b in _betas(args):
        s = capacity.pointeval_series(spec, b, zeta)
        out.append({"beta": b, "bound": s.value, "divergent": s.divergent, "decay_exponent": s.exponent})
        rows.append((b, s.value, s.divergent))
    return spec, {"zeta": [complex(z) for z in zeta], "beta": args.beta}, {"bounds": out}, rows


def cmd_s_bound(args):
    sb = capacity.s_bound_check(args.p, args.r, args.jmax)
    vals = sb.values
    k = max(1, vals.size // 10)
    result = {
        "maximum": sb.maximum,
        "argmax": sb.argmax,
        "first_decile_max": float(vals[:k].max()),
        "last_decile_max": float(vals[-k:].max()),
        "growth_ratio": float(vals[-k:].max() / vals[:k].max()),
    }
    rows = [(j, float(v)) for j, v in enumerate(vals)]
    return None, {"p": args.p, "r": args.r, "jmax": args.jmax}, result, rows


def cmd_laplace_verify(args):
    rows_out = capacity.laplace_verify(args.r, args.lambdas)
    result = {"rows": [r.__dict__ for r in rows_out]}
    rows = [(r.lam, r.integral, r.asymptote, r.ratio, r.abserr) for r in rows_out]
    return None, {"r": args.r, "lambdas": args.lambdas}, result, rows


def cmd_pse_check(args):
    spec = _domain(args)
    rep = norms.pse_check(spec, args.betas, args.max_degree)
    row = (rep.kind, rep.max_rel_error, rep.min_ratio, rep.max_ratio, rep.constant)
    return spec, {"betas": args.betas, "max_degree": args.max_degree}, rep.to_json(), [row]


def cmd_oracle(args):
    if args.kind == "radial":
        q = oracle.radial_weight_quadrature(args.alpha, args.c)
        result = {"value": q.value, "exact": q.exact, "abserr": q.abserr, "rel_error": abs(q.value - q.exact) / q.exact}
        return None, {"kind": "radial", "alpha": args.alpha, "c": args.c}, result, [("radial", q.value, q.abserr, q.exact, math.nan)]
    if args.gamma is None:
        raise ValueError("--gamma is required for moment oracles")
    gammas = [_floats(g) for g in args.gamma]
    n = args.n if args.n is not None else len(gammas[0])
    ests = oracle.mc_moment_table(args.kind, gammas, n, args.samples, args.seed, args.threads)
    out, rows = [], []
    for g, e in zip(gammas, ests):
        out.append({"gamma": g, "estimate": e.estimate, "std_error": e.std_error, "exact": e.exact, "z_score": e.z_score})
        rows.append(("(" + ",".join(f"{x:g}" for x in g) + ")", e.estimate, e.std_error, e.exact, e.z_score))
    params = {"kind": args.kind, "n": n, "samples": args.samples, "seed": args.seed, "rng": "philox", "batch": oracle.BATCH}
    return None, params, {"moments": out}, rows


def _ellipsoid_log_boundary(p: list[float], count: int) -> np.ndarray:
    if len(p) != 2:
        raise ValueError("built-in boundary samples are two-dimensional")
    t = (np.arange(count) + 0.5) / count
    return np.stack([np.log(t) / (2 * p[0]), np.log1p(-t) / (2 * p[1])], axis=1)


def cmd_approx_reinhardt(args):
    if args.points:
        with open(args.points) as fh:
            X = np.asarray(json.load(fh), dtype=float)
        source = {"points_file": args.points}
    elif args.from_ellipsoid:
        X = _ellipsoid_log_boundary(args.from_ellipsoid, args.count)
        source = {"from_ellipsoid": args.from_ellipsoid, "count": args.count}
    else:
        raise ValueError("give --points FILE or --from-ellipsoid p1,p2")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spec, steps = approximate_reinhardt(X, args.k)
    result = {
        "steps": [s.__dict__ for s in steps],
        "skipped": [str(w.message) for w in caught],
        "vertex_tori": [t.to_json() for t in vertex_tori(spec)],
    }
    rows = []
    for i, face in enumerate(spec.faces):
        rows.append((i, float(face.lam), " ".join(repr(float(x)) for x in face.row)))
    return spec, source | {"k": args.k}, result, rows


def cmd_verdict(args):
    spec = _domain(args)
    f = _poly(args, spec)
    out, rows = [], []
    for b in _betas(args):
        v = cyclicity.cyclicity_verdict(f, spec, b, budget=args.budget, boundary_zero=args.boundary_zero, threads=args.threads)
        out.append({"beta": b} | v.to_json())
        rows.append((v.label, v.kind, v.reason))
    result = out[0] if len(out) == 1 else {"verdicts": out}
    return spec, {"poly": f.to_string(), "beta": args.beta, "budget": args.budget}, result, rows


COMMANDS = {
    "norm": cmd_norm,
    "monomial-norms": cmd_monomial_norms,
    "dilation-sweep": cmd_dilation_sweep,
    "energy": cmd_energy,
    "capacity-bound": cmd_capacity_bound,
    "pointeval-bound": cmd_pointeval_bound,
    "s-bound": cmd_s_bound,
    "laplace-verify": cmd_laplace_verify,
    "pse-check": cmd_pse_check,
    "oracle": cmd_oracle,
    "approx-reinhardt": cmd_approx_reinhardt,
    "verdict": cmd_verdict,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pslab", description="Norms, cyclicity and capacity in graded Dirichlet-type spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help, *, domain=True, poly=False, beta=True):
        p = sub.add_parser(name, help=help)
        if domain:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--domain", help="polydisk:N, ball:N, ellipsoid:p1,..,pn or omega:m,n,lambda")
            g.add_argument("--domain-file", help="JSON domain document with a 'kind' tag")
        if poly:
            p.add_argument("--poly", required=True, help='polynomial, e.g. "1 - (z1+z2)/2"')
        if beta:
            p.add_argument("--beta", type=_floats, help="space index (comma-separated for several)")
        p.add_argument("--csv", metavar="PATH", help="also write a CSV table")
        p.add_argument("--threads", type=int, default=None, help="worker count (default: $PSLAB_THREADS or all cores)")
        return p

    add("norm", "squared norm of a polynomial", poly=True)
    p = add("monomial-norms", "table of squared monomial norms")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--classical-constant", action="store_true", help="multiply ellipsoid norms by n^{-beta}")
    p = add("dilation-sweep", "||f/f_r||^2 over an r-grid with a fitted growth exponent", poly=True)
    p.add_argument("--r-grid", type=_floats, help="comma-separated radii, or K for r = 1 - 2^-k, k <= K")
    p.add_argument("--cap", type=int, help="fixed truncation degree (default: schedule in 1/(1-r))")
    p = add("energy", "energy of a product-torus measure")
    p.add_argument("--measure", required=True, help='e.g. "fix(1)xcircle(1)" or "0.5*fix(1)xcircle(1)+0.5*circle(1)xfix(1)"')
    p = add("capacity-bound", "capacity lower bound of a union of product subtori")
    p.add_argument("--measure", required=True)
    p = add("pointeval-bound", "norm bound of point evaluation at a boundary point")
    p.add_argument("--zeta", type=_complexes, required=True, help="comma-separated coordinates, e.g. 1,1")
    p = add("s-bound", "running maximum of the gamma-ratio sums S(j)", domain=False, beta=False)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--jmax", type=int, default=2000)
    p = add("laplace-verify", "quadrature against the Laplace asymptote", domain=False, beta=False)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--lambdas", type=_floats, default=[50.0, 200.0, 500.0])
    p = add("pse-check", "parameter-shift equivalence of the monomial norms", beta=False)
    p.add_argument("--betas", type=_floats, default=[1.0, 0.0])
    p.add_argument("--max-degree", type=int, default=200)
    p = add("oracle", "Monte Carlo and quadrature checks of the closed forms", domain=False, beta=False)
    p.add_argument("--kind", choices=["sphere", "ball", "radial"], required=True)
    p.add_argument("--gamma", action="append", help="exponents gamma_1,..,gamma_n (repeatable)")
    p.add_argument("--n", type=int)
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--c", type=float, default=1.0)
    p = add("approx-reinhardt", "polyhedral approximation from log-boundary samples", domain=False, beta=False)
    p.add_argument("--points", help="JSON file with a list of log-boundary points")
    p.add_argument("--from-ellipsoid", type=_floats, help="sample the log-boundary of a 2-D ellipsoid")
    p.add_argument("--count", type=int, default=64)
    p.add_argument("-k", type=int, default=16)
    p = add("verdict", "graded cyclicity verdict", poly=True)
    p.add_argument("--budget", type=int, default=10, help="number of r-grid levels for the sweep")
    p.add_argument("--boundary-zero", type=_complexes, help="known boundary zero of f")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = _default_threads()
    try:
        out = COMMANDS[args.command](args)
    except (ValueError, ZeroDivisionError, OSError, json.JSONDecodeError) as exc:
        print(f"pslab {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (capacity.QuadratureError, NonConvergence) as exc:
        print(f"pslab {args.command}: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    spec, params, result, rows = out[:4]
    flagged = len(out) > 4 and out[4]
    sys.stdout.write(dumps(args.command, spec, params, result) + "\n")
    if args.csv:
        write_csv(args.csv, args.command, rows)
    return EXIT_NONCONVERGED if flagged else 0


if __name__ == "__main__":
    sys.exit(main())
