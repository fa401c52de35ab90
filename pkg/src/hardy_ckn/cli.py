"""Command-line interface: ``hardy-ckn <subcommand> [flags] [--json|--csv|--pretty]``.

Exit status is 0 on success, 1 on a domain error (the error is printed as
``{"error": {"code": ..., "message": ...}}``) or a failed verification, and 2
on a usage error.  When ``HARDY_CKN_OUT`` names a directory, each result is
also written there as ``<subcommand>-<hash>.<ext>``.
"""

from __future__ import annotations

import argparse
import csv
import enum
import hashlib
import io
import json
import math
import os
import sys
from typing import Any, Optional

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .errors import HardyCknError

OUT_ENV = "HARDY_CKN_OUT"


# serialization -------------------------------------------------------------

def _plain(obj: Any) -> Any:
    """Convert to JSON-native types; non-finite floats become None."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


def config_hash(payload: dict) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


def _flatten(obj: Any, prefix: str = "") -> dict:
    out = {}
    if isinstance(obj, dict):
        for k in obj:
            out.update(_flatten(obj[k], f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(obj, list) and not any(isinstance(v, (dict, list)) for v in obj) and len(obj) <= 16:
        for i, v in enumerate(obj):
            out[f"{prefix}[{i}]"] = v
    elif isinstance(obj, list):
        out[prefix] = json.dumps(obj, sort_keys=True)
    else:
        out[prefix] = obj
    return out


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(record: dict) -> str:
    """CSV (RFC 4180, CRLF) of a record's values.

    Records carrying ``rows`` are written one row per entry; others as a
    single row of flattened result fields.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    rows = record.get("rows")
    if rows:
        flat = [_flatten(r) for r in rows]
        header = list(flat[0])
        w.writerow(header)
        for f in flat:
            w.writerow([_cell(f.get(h)) for h in header])
    else:
        flat = _flatten(record["result"])
        w.writerow(list(flat))
        w.writerow([_cell(v) for v in flat.values()])
    return buf.getvalue()


def to_pretty(record: dict) -> str:
    lines = []
    for k, v in _flatten({"result": record.get("result", {}), "citations": record.get("citations", [])}).items():
        lines.append(f"{k}: {_cell(v)}")
    if record.get("rows"):
        for r in record["rows"]:
            lines.append("  " + " | ".join(_cell(v) for v in _flatten(r).values()))
    return "\n".join(lines) + "\n"


# records -------------------------------------------------------------------

def make_record(
    command: str,
    request: dict,
    result: dict,
    provenance: str,
    citations: list,
    metadata: Optional[dict] = None,
    rows: Optional[list] = None,
) -> dict:
    metadata = dict(metadata or {})
    if provenance == "Numeric":
        metadata.setdefault("backend", BACKEND)
        if not any(k in metadata for k in ("tolerance", "grid")):
            raise AssertionError("numeric results must carry tolerance or grid metadata")
    rec = {
        "command": command,
        "request": request,
        "result": result,
        "provenance": provenance,
        "metadata": metadata,
        "citations": sorted(set(citations)),
        "version": __version__,
    }
    if rows is not None:
        rec["rows"] = rows
    rec["config_hash"] = config_hash({"command": command, "request": request, "metadata": metadata})
    return _plain(rec)


# argument types ------------------------------------------------------------

def finite_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return x


def float_list(text: str) -> list:
    return [finite_float(t) for t in text.split(",") if t.strip()]


SIGNS = ("Negative", "Zero", "Positive", "Unknown")


# subcommands ---------------------------------------------------------------

CONSTANT_ANCHOR = {
    "sobolev": "constant.sobolev",
    "hardy_sobolev": "constant.hardy-sobolev",
    "hardy": "constant.hardy",
    "gamma_s": "constant.gamma-s",
}


def cmd_constant(a) -> dict:
    from .core import best_constant

    value, name = best_constant(a.n, a.gamma, a.s)
    req = {"n": a.n, "gamma": a.gamma, "s": a.s}
    return make_record("constant", req, {"value": value, "formula": name}, "ClosedForm", [CONSTANT_ANCHOR[name]])


def cmd_exponents(a) -> dict:
    from .core import (
        alpha_exponents,
        beta_exponents,
        critical_dimension_boundary,
        critical_dimension_interior,
    )

    if a.location == "Interior":
        ex = beta_exponents(a.n, a.gamma)
        anchor, crit = "exponents.beta", critical_dimension_interior(a.gamma)
    else:
        ex = alpha_exponents(a.n, a.gamma)
        anchor, crit = "exponents.alpha", critical_dimension_boundary(a.gamma)
    res = {
        "minus": ex.minus,
        "plus": ex.plus,
        "gap": ex.gap,
        "kind": ex.kind,
        "degenerate": ex.degenerate,
        "critical_dimension": crit,
    }
    req = {"n": a.n, "gamma": a.gamma, "location": a.location}
    return make_record("exponents", req, res, "ClosedForm", [anchor, "exponents.critical-dimension"])


def cmd_ckn_map(a) -> dict:
    from .core import ckn_to_hardy, hardy_to_ckn

    if a.a is not None and a.b is not None:
        h = ckn_to_hardy(a.a, a.b, a.n)
        req = {"n": a.n, "a": a.a, "b": a.b}
        res = {"gamma": h.gamma, "s": h.s, "q": h.q}
    elif a.gamma is not None and a.s is not None:
        c = hardy_to_ckn(a.gamma, a.s, a.n)
        req = {"n": a.n, "gamma": a.gamma, "s": a.s}
        res = {"a": c.a, "b": c.b, "q": c.q}
    else:
        raise UsageError("ckn-map needs either --a and --b, or --gamma and --s")
    return make_record("ckn-map", req, res, "ClosedForm", ["ckn.map"])


def _grid(a, default):
    from .radial import RadialGrid

    r_min = default.r_min if a.r_min is None else a.r_min
    r_max = default.r_max if a.r_max is None else a.r_max
    count = default.count if a.count is None else a.count
    return RadialGrid(r_min, r_max, count)


def cmd_extremal(a) -> dict:
    from .core import ProblemParams, best_constant, extremal_interior
    from .radial import WHOLE_SPACE_GRID, el_residual, rayleigh_quotient

    grid = _grid(a, WHOLE_SPACE_GRID)
    ex = extremal_interior(a.n, a.gamma, a.s, a.eps)
    u = ex.on_grid(grid)
    pp = ProblemParams(a.n, a.gamma, a.s)
    closed, name = best_constant(a.n, a.gamma, a.s)
    res = {
        "multiplier": ex.multiplier,
        "beta_minus": ex.exponents.minus,
        "beta_plus": ex.exponents.plus,
        "closed_form_constant": closed,
        "quadrature_quotient": rayleigh_quotient(u, pp),
        "el_residual": el_residual(u, pp, 0.0, ex.multiplier),
    }
    req = {"n": a.n, "gamma": a.gamma, "s": a.s, "eps": a.eps, "grid": grid.as_dict()}
    rows = [{"r": r, "u": v} for r, v in zip(grid.nodes.tolist(), np.asarray(u.values).tolist())]
    return make_record(
        "extremal", req, res, "Numeric", ["extremal.explicit", CONSTANT_ANCHOR[name]],
        {"grid": grid.as_dict(), "quadrature": "trapezoid in log r, analytic power-law tails"}, rows,
    )


def cmd_hi_check(a) -> dict:
    from .ode import DEFAULT_CONFIG, hi_potential_test, parse_potential

    P = parse_potential(a.potential)
    out = hi_potential_test(P, a.R)
    cites = ["hi.ode-criterion", "hi.catalog"]
    if a.potential.startswith("const:"):
        cites.append("hi.bessel-zero")
    req = {"potential": a.potential, "R": a.R}
    res = {"is_HI": out.is_hi, "first_zero": out.first_zero, "potential": P.name}
    return make_record("hi-check", req, res, "Numeric", cites, {"tolerance": DEFAULT_CONFIG.as_dict()})


def cmd_mass(a) -> dict:
    from .ode import DEFAULT_CONFIG, interior_mass_ball

    m = interior_mass_ball(a.n, a.gamma, a.lam, radius=a.radius)
    res = {
        "mass": m.mass,
        "c1": m.c1,
        "c2": m.c2,
        "mass_integral": m.mass_integral,
        "fit_residual": m.fit_residual,
        "fit_window": list(m.window),
    }
    req = {"n": a.n, "gamma": a.gamma, "lambda": a.lam, "radius": a.radius}
    return make_record("mass", req, res, "Numeric", ["mass.interior", "mass.monotone"],
                       {"tolerance": DEFAULT_CONFIG.as_dict()})


def cmd_eigen(a) -> dict:
    from .ode import DEFAULT_CONFIG, lambda_1_ball, lambda_star_ball, lambda_star_weight_exponent

    if a.which == "lambda1":
        sr = lambda_1_ball(a.n, a.gamma)
        anchor, extra = "eigen.lambda-1", {}
    else:
        sr = lambda_star_ball(a.n, a.gamma)
        anchor, extra = "eigen.lambda-star", {"weight_exponent": lambda_star_weight_exponent(a.n, a.gamma)}
    res = {
        "eigenvalue": sr.eigenvalue,
        "sturm_index": sr.sturm_index,
        "bracket": list(sr.bracket),
        "bracket_zero_counts": list(sr.bracket_zero_counts),
        **extra,
    }
    rows = None
    if a.profile:
        ef = sr.eigenfunction
        rows = [{"r": r, "u": v} for r, v in zip(ef.grid.nodes.tolist(), np.asarray(ef.values).tolist())]
    req = {"n": a.n, "gamma": a.gamma, "which": a.which, "profile": a.profile}
    return make_record("eigen", req, res, "Numeric", [anchor], {"tolerance": DEFAULT_CONFIG.as_dict()}, rows)


def cmd_minimize(a) -> dict:
    from .minimizer import DEFAULT_BALL_GRID, DEFAULT_EPS_SEQUENCE, gap_test

    eps = tuple(a.eps_sequence) if a.eps_sequence else DEFAULT_EPS_SEQUENCE
    grid = _grid(a, DEFAULT_BALL_GRID)
    g = gap_test(a.n, a.gamma, a.s, a.lam, eps, grid)
    p = g.perturbed
    res = {
        "mu_whole_space": g.mu_whole_space,
        "extrapolated": p.extrapolated,
        "extrapolation_error": p.extrapolation_error,
        "gap": g.gap,
        "compact": g.compact,
        "upper_bound_only": p.upper_bound_only,
    }
    rows = [
        {"eps": e, "mu": m, "converged": c, "peak_radius": r.peak_radius, "scale": r.scale, "core_fraction": r.mass_in_core}
        for e, m, c, r in zip(p.eps_sequence, p.mus, p.converged, p.reports)
    ]
    req = {"n": a.n, "gamma": a.gamma, "s": a.s, "lambda": a.lam, "eps_sequence": list(eps), "grid": grid.as_dict()}
    meta = {"grid": grid.as_dict(), "tolerance": {"gradient": 1e-8, "max_iter": 50000}}
    return make_record("minimize", req, res, "Numeric", ["minimize.subcritical", "minimize.compactness-gap"], meta, rows)


def cmd_verdict(a) -> dict:
    from .core import Location, ProblemParams
    from .verdicts import (
        GeometricData,
        boundary_verdict,
        cone_verdict,
        hardy_constant_verdict,
        interior_verdict,
    )

    req = {k: v for k, v in sorted(vars(a).items()) if k not in ("func", "output", "command") and v is not None}
    if a.case == "hardy-constant":
        loc = "Boundary" if a.domain in ("HalfSpace",) else a.location
        hv = hardy_constant_verdict(a.domain, loc, a.n, a.gamma_h, a.k)
        res = {"value": hv.value, "interval": hv.interval, "attained": hv.attained, "rule": hv.rule, "citation": hv.citation}
        return make_record("verdict", req, res, "ClosedForm", [hv.rule])
    if a.gamma is None or a.s is None:
        raise UsageError("verdict needs --gamma and --s")
    if a.case == "cone":
        v = cone_verdict(a.n, a.gamma, a.s, a.domain, a.contains_full_space, a.gamma_h)
    else:
        geo = GeometricData(
            mean_curvature_sign=a.mean_curvature_sign,
            boundary_mass_sign=a.boundary_mass_sign,
            interior_mass_sign=a.interior_mass_sign,
            robin_mass_sign=a.robin_mass_sign,
            domain_kind=a.domain,
            contains_full_space=a.contains_full_space,
            ball_radius=a.ball_radius,
            r_omega=a.r_omega,
            lambda_1=a.lambda_1,
            gamma_h=a.gamma_h,
        )
        if a.case == "interior":
            v = interior_verdict(ProblemParams(a.n, a.gamma, a.s, Location.INTERIOR), a.lam, geo)
        else:
            v = boundary_verdict(ProblemParams(a.n, a.gamma, a.s, Location.BOUNDARY), geo)
    prov = "Numeric" if v.computed else "ClosedForm"
    meta = {}
    if v.computed:
        from .ode import DEFAULT_CONFIG

        meta["tolerance"] = DEFAULT_CONFIG.as_dict()
    return make_record("verdict", req, v.as_dict(), prov, [v.rule], meta)


def cmd_table(a) -> dict:
    from .verdicts import render_table

    rows = render_table(a.which)
    flat_rows = [
        {"row": r["row"], "rule": r["rule"], **{c: r["cells"][c] for c in r["columns"]}} for r in rows
    ]
    res = {"table": a.which, "caption": rows[0]["caption"], "columns": rows[0]["columns"], "row_count": len(rows)}
    return make_record("table", {"which": a.which}, res, "ClosedForm", [r["rule"] for r in rows], rows=flat_rows)


def cmd_verify(a) -> dict:
    from .verification import run_suite

    results = run_suite(a.level)
    report = {
        "level": a.level,
        "passed": all(r.passed for r in results),
        "criteria": [r.as_dict(timing=a.timings) for r in results],
    }
    rows = [{"criterion": r.criterion, "name": r.name, "passed": r.passed} for r in results]
    rec = make_record("verify", {"level": a.level}, report, "Numeric", ["verify.acceptance"],
                      {"tolerance": "per criterion", "backend": BACKEND}, rows)
    return rec


# parser --------------------------------------------------------------------

class UsageError(Exception):
    pass


def _add_output(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="output", action="store_const", const="json", help="JSON record (default)")
    g.add_argument("--csv", dest="output", action="store_const", const="csv", help="CSV values")
    g.add_argument("--pretty", dest="output", action="store_const", const="pretty", help="readable text")
    p.set_defaults(output="json")


def _add_grid(p):
    p.add_argument("--r-min", type=finite_float, help="inner grid radius")
    p.add_argument("--r-max", type=finite_float, help="outer grid radius")
    p.add_argument("--count", type=int, help="number of grid nodes (>= 64)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hardy-ckn", description="Hardy-Sobolev constants, masses and attainability.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constant", help="closed-form best constant")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=finite_float, required=True)
    p.add_argument("--s", type=finite_float, required=True)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("exponents", help="beta (interior) or alpha (boundary) exponents")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=finite_float, required=True)
    p.add_argument("--location", choices=("Interior", "Boundary"), default="Interior")
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("ckn-map", help="convert between (a, b) and (gamma, s)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=finite_float)
    p.add_argument("--b", type=finite_float)
    p.add_argument("--gamma", type=finite_float)
    p.add_argument("--s", type=finite_float)
    p.set_defaults(func=cmd_ckn_map)

    p = sub.add_parser("extremal", help="explicit extremal on a log grid (CSV gives r,u)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=finite_float, required=True)
    p.add_argument("--s", type=finite_float, required=True)
    p.add_argument("--eps", type=finite_float, default=1.0, help="concentration scale")
    _add_grid(p)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("hi-check", help="test an HI-potential on (0, R)")
    p.add_argument("--potential", required=True, help="const:c | power:c,a | logsq:rho | iterlog:k,rho")
    p.add_argument("--R", type=finite_float, required=True)
    p.set_defaults(func=cmd_hi_check)

    p = sub.add_parser("mass", help="interior mass of a ball")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=finite_float, required=True)
    p.add_argument("--lambda", dest="lam", type=finite_float, default=0.0)
    p.add_argument("--radius", type=finite_float, default=1.0)
    p.set_defaults(func=cmd_mass)

    p = sub.add_parser("eigen", help="lambda_1 or lambda* of the unit ball")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=finite_float, required=True)
    p.add_argument("--which", choices=("lambda1", "lambda-star"), default="lambda1")
    p.add_argument("--profile", action="store_true", help="include the eigenfunction as rows")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("minimize", help="perturbed constant on the unit ball by subcritical minimization")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=finite_float, required=True)
    p.add_argument("--s", type=finite_float, required=True)
    p.add_argument("--lambda", dest="lam", type=finite_float, default=0.0)
    p.add_argument("--eps-sequence", type=float_list, help="comma-separated, e.g. 0.4,0.2,0.1,0.05")
    _add_grid(p)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("verdict", help="attainability decision")
    p.add_argument("--case", choices=("interior", "boundary", "cone", "hardy-constant"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=finite_float)
    p.add_argument("--s", type=finite_float)
    p.add_argument("--lambda", dest="lam", type=finite_float, default=0.0)
    p.add_argument("--domain", choices=("Ball", "BoundedSmooth", "HalfSpace", "Cone", "WholeSpace"),
                   default="BoundedSmooth")
    p.add_argument("--location", choices=("Interior", "Boundary"), default="Interior",
                   help="singularity location (hardy-constant case)")
    for name in ("mean-curvature-sign", "boundary-mass-sign", "interior-mass-sign", "robin-mass-sign"):
        p.add_argument(f"--{name}", choices=SIGNS, default="Unknown")
    p.add_argument("--contains-full-space", action="store_true")
    p.add_argument("--ball-radius", type=finite_float, default=1.0)
    p.add_argument("--r-omega", type=finite_float, help="sup |x|^2 over the domain")
    p.add_argument("--lambda-1", type=finite_float, help="first eigenvalue, if known")
    p.add_argument("--gamma-h", type=finite_float, help="Hardy constant of the domain, if known")
    p.add_argument("--k", type=int, help="cone R^k_+ x R^(n-k) (hardy-constant case)")
    p.set_defaults(func=cmd_verdict)

    p = sub.add_parser("table", help="render a decision table")
    p.add_argument("--which", type=int, choices=(1, 2, 3, 4), required=True)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--timings", action="store_true", help="include wall times (not deterministic)")
    p.set_defaults(func=cmd_verify)

    for sp in sub.choices.values():
        _add_output(sp)
    return ap


def render(record: dict, output: str) -> str:
    if output == "csv":
        return to_csv(record)
    if output == "pretty":
        return to_pretty(record)
    return json.dumps(record, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _write_artifact(record: dict, text: str, output: str) -> None:
    out_dir = os.environ.get(OUT_ENV)
    if not out_dir:
        return
    os.makedirs(out_dir, exist_ok=True)
    ext = {"json": "json", "csv": "csv", "pretty": "txt"}[output]
    path = os.path.join(out_dir, f"{record['command']}-{record['config_hash'][:16]}.{ext}")
    with open(path, "w", newline="") as fh:
        fh.write(text)


def run(argv: Optional[list] = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        record = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except HardyCknError as exc:
        err = {"error": {"code": exc.code, "message": str(exc)}}
        stdout.write(json.dumps(err, sort_keys=True) + "\n")
        return 1
    text = render(record, args.output)
    stdout.write(text)
    _write_artifact(record, text, args.output)
    if args.command == "verify" and not record["result"]["passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
