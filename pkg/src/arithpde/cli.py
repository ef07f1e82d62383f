"""Command line front end.

    arithpde expand j --terms 3
    arithpde solve --family kernel --p 5 --kappa 3 --z 0 --alpha 1
    arithpde verify --family kernel --p 5 --kappa 3
    arithpde census --p 5 --kappa 2 --z 0 --M 30
    arithpde instability --table

Exit status: 0 when every verdict passes, 1 on a mathematical failure,
2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import convection as cv
from . import modforms as mf
from . import serialize as ser
from .instability import instability_witness
from .padic import DomainError, PadicContext, PrecisionError, teichmuller
from .qseries import QSeries
from .solutions import u_additive, u_modular, u_mult


class UsageError(Exception):
    pass


# -- argument parsing helpers --


def parse_number(text: str):
    """'3' -> int, '1/2' -> Fraction, '(1,2)' -> tuple of Fractions."""
    text = text.strip()
    try:
        if text.startswith("(") and text.endswith(")"):
            return tuple(Fraction(t) for t in text[1:-1].split(","))
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a number: {text!r}") from exc
    return int(value) if value.denominator == 1 else value


def _add_context(ap, M_default=30):
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--N", type=int, default=8)
    ap.add_argument("--f", type=int, default=1)
    ap.add_argument("--M", type=int, default=M_default)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)


def _add_family(ap):
    ap.add_argument(
        "--family",
        choices=["additive", "multiplicative", "kernel", "inhomogeneous", "modular", "modular_deformed"],
        default="kernel",
    )
    ap.add_argument("--kappa", default="1")
    ap.add_argument("--z", default="0")
    ap.add_argument("--alpha", default="1")
    ap.add_argument("--zeta", default="1", help="residue whose Teichmuller lift multiplies the solution")
    ap.add_argument("--eta", default=None, help="unit for the modular families (default zeta * beta)")
    ap.add_argument("--v", nargs="+", default=None, help="coefficients of the unit series v")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arithpde", description="Arithmetic differential equations on q-series.")
    sub = ap.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", help="q-expansions of classical forms")
    e.add_argument("what", choices=["eisenstein", "j", "tate", "hurlburt", "delta", "sigma"])
    e.add_argument("--weight", type=int, default=4, help="Eisenstein weight (2, 4 or 6)")
    e.add_argument("--m", type=int, default=3, help="divisor power for sigma")
    e.add_argument("--terms", type=int, default=None, help="number of coefficients from the lowest one")
    _add_context(e, M_default=10)

    s = sub.add_parser("solve", help="build a solution family")
    _add_family(s)
    _add_context(s)

    v = sub.add_parser("verify", help="residual of a solution family")
    _add_family(v)
    v.add_argument("--input", default=None, help="JSON produced by solve")
    v.add_argument("--tolerance", type=int, default=None)
    _add_context(v)

    d = sub.add_parser("decompose", help="recover (u, v^2) from a bad-type point")
    _add_family(d)
    d.add_argument("--input", default=None, help="JSON point or solve output")
    _add_context(d)

    c = sub.add_parser("census", help="coefficient-by-coefficient solver census")
    c.add_argument("--kappa", default="1")
    c.add_argument("--z", default="0")
    c.add_argument("--rhs", type=int, choices=[0, -1], default=0)
    c.add_argument("--zeta", default="1")
    c.add_argument("--alpha", default="1")
    _add_context(c)

    i = sub.add_parser("instability", help="mod p witnesses and valuation tables")
    i.add_argument("--kappa", type=int, default=1)
    i.add_argument("--alpha", default=None)
    i.add_argument("--alpha0", default=None)
    i.add_argument("--z", default=None)
    i.add_argument("--z0", default=None)
    i.add_argument("--eta", default="1")
    i.add_argument("--eta0", default="1")
    i.add_argument("--rows", type=int, default=10, help="rows of the valuation table")
    out = i.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", default=True)
    out.add_argument("--table", action="store_true")
    _add_context(i)

    fx = sub.add_parser("fixtures", help="regenerate or check the integer expansion files")
    fx.add_argument("--out", default=None, help="directory (default: the active fixture directory)")
    fx.add_argument("--check", action="store_true", help="compare instead of writing")
    fx.add_argument("--order", type=int, default=mf.FIXTURE_ORDER)
    return ap


def _context(args) -> PadicContext:
    if args.M < 1:
        raise UsageError("M must be at least 1")
    try:
        return PadicContext(args.p, args.N, args.f)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _header(args, ctx, M=None):
    return ser.context_header(ctx, M=args.M if M is None else M, seed=args.seed)


# -- families --


def _kappa_int(kappa):
    if not isinstance(kappa, int):
        raise UsageError("this family needs an integer kappa")
    return kappa


def _zeta(ctx, args):
    r = parse_number(args.zeta)
    return teichmuller(r, ctx)


def build_solution(args, ctx):
    """(kind, params, payload, rhs) for the requested family."""
    fam = args.family
    kappa = parse_number(args.kappa)
    z = parse_number(args.z)
    alpha = parse_number(args.alpha)
    zeta = _zeta(ctx, args)
    M = args.M
    params = {"kappa": kappa, "z": z, "alpha": alpha, "zeta": args.zeta}
    if fam == "additive":
        return fam, params, u_additive(ctx, z, _kappa_int(kappa), alpha, M), None
    if fam in ("multiplicative", "kernel"):
        u = u_mult(ctx, z, _kappa_int(kappa), alpha, M)
        return fam, params, u.scale(zeta), 0
    eq = cv.EquationParams.make(ctx, kappa, z, -1)
    beta = cv.solve_beta(eq, zeta)
    if fam == "inhomogeneous":
        u = u_mult(ctx, z, _kappa_int(kappa), alpha, M)
        params["beta"] = beta
        return fam, params, u.scale(beta), -1
    eta = beta if args.eta is None else ctx.coerce(parse_number(args.eta))
    params["eta"] = eta
    v = None
    if args.v is not None:
        v = QSeries.from_values(ctx, [parse_number(t) for t in args.v], 0, M)
        params["v"] = [str(t) for t in args.v]
    if fam == "modular":
        pt = u_modular(ctx, M, eta, v)
    else:
        pt = u_modular(ctx, M, eta, v, z, _kappa_int(kappa), alpha)
    return fam, params, pt, -1


def _family_json(kind, params, payload):
    out = {"kind": kind, "params": {k: ser.param_text(v) for k, v in params.items()}}
    if isinstance(payload, mf.ModularPoint):
        out["payload"] = ser.point_to_json(payload)
        out["integral"] = payload.a.is_integral() and payload.b.is_integral()
    else:
        out["payload"] = ser.series_to_json(payload)
        out["integral"] = payload.is_integral()
    return out


# -- commands --


def cmd_expand(args):
    ctx = _context(args)
    what = args.what
    terms = args.terms
    head = _header(args, ctx)
    if what in ("eisenstein", "j", "delta", "sigma"):
        lowest = -1 if what == "j" else 0
        M = lowest + terms - 1 if terms is not None else args.M
        if what == "sigma":
            if args.m < 1 or args.m % 2 == 0:
                raise UsageError("--m must be odd and positive")
            name, cs = f"s{args.m}", mf.sigma_list(args.m, M)
        else:
            name = {"eisenstein": f"E{args.weight}", "j": "j", "delta": "Delta"}[what]
            if what == "eisenstein" and args.weight not in (2, 4, 6):
                raise UsageError("--weight must be 2, 4 or 6")
            lowest, cs = mf.integer_expansion(name, M)
        body = {"name": name, "lowest": lowest, "M": M, "coeffs": [str(c) for c in cs], "exact": True}
        return {"context": head, "series": body}, 0
    M = terms - 1 if terms is not None else args.M
    if what == "tate":
        pt = mf.tate_point(ctx, M)
        return {"context": head, "point": ser.point_to_json(pt)}, 0
    f = mf.hurlburt_f1q(mf.tate_point(ctx, M + 2))
    f = f.declare_order(0).truncate(M)
    return {"context": head, "series": ser.series_to_json(f)}, 0


def cmd_solve(args):
    ctx = _context(args)
    kind, params, payload, _ = build_solution(args, ctx)
    out = _family_json(kind, params, payload)
    out["context"] = _header(args, ctx)
    return out, 0 if out["integral"] else 1


def _load_family(args, ctx):
    data = json.loads(Path(args.input).read_text())
    kind = data["kind"]
    if "point" in data["payload"] or "a" in data["payload"]:
        payload = ser.point_from_json(data["payload"])
    else:
        payload = ser.series_from_json(data["payload"])
    params = {k: v for k, v in data["params"].items()}
    rhs = {"kernel": 0, "multiplicative": 0, "inhomogeneous": -1, "modular": -1, "modular_deformed": -1}.get(kind)
    return kind, params, payload, rhs


def cmd_verify(args):
    ctx = _context(args)
    if args.input:
        kind, params, payload, rhs = _load_family(args, ctx)
        ctx = payload.ctx if isinstance(payload, QSeries) else payload.a.ctx
        M = payload.M
        kappa = parse_number(params["kappa"])
        z = parse_number(params["z"])
    else:
        kind, params, payload, rhs = build_solution(args, ctx)
        kappa, z = params["kappa"], params["z"]
        M = args.M
    if rhs is None:
        raise UsageError(f"family {kind!r} is not a solution of the multiplicative equation")
    eq = cv.EquationParams.make(ctx, kappa, z, rhs)
    if isinstance(payload, mf.ModularPoint):
        payload = cv.decode_iota(payload).u
    rep = cv.residual(payload, eq, args.tolerance)
    out = {
        "context": _header(args, ctx, M),
        "kind": kind,
        "rhs": rhs,
        "residual_valuations": [c.val for c in rep.residual.coeffs],
        "min_coeff_valuation": rep.min_coeff_valuation,
        "tolerance": rep.tolerance,
        "verdict": "pass" if rep.passed else "fail",
    }
    return out, 0 if rep.passed else 1


def cmd_decompose(args):
    ctx = _context(args)
    if args.input:
        data = json.loads(Path(args.input).read_text())
        pt = ser.point_from_json(data["payload"] if "payload" in data else data)
    else:
        if args.family not in ("modular", "modular_deformed"):
            raise UsageError("decompose needs a modular family or --input")
        _, _, pt, _ = build_solution(args, ctx)
    dec = cv.decode_iota(pt)
    out = {
        "context": _header(args, pt.ctx, pt.M),
        "type": pt.classify(),
        "u": ser.series_to_json(dec.u),
        "v2": ser.series_to_json(dec.v2),
        "v_exists": dec.v_exists,
    }
    return out, 0


def cmd_census(args):
    ctx = _context(args)
    kappa = parse_number(args.kappa)
    z = parse_number(args.z)
    eq = cv.EquationParams.make(ctx, kappa, z, args.rhs)
    zeta = _zeta(ctx, args)
    c0 = zeta if args.rhs == 0 else cv.solve_beta(eq, zeta)
    census = cv.term_solver(eq, c0, args.M, parse_number(args.alpha), build_u=False)
    out = {
        "context": _header(args, ctx),
        "kappa": str(kappa),
        "z": str(z),
        "rhs": args.rhs,
        "free": census.free,
        "obstructed": census.obstructed,
        "parameter_count": census.parameter_count,
        "rows": [[r.n, r.pivot_valuation, r.status] for r in census.rows],
    }
    return out, 0 if not census.obstructed else 1


DEFAULT_GRID = [
    {"alpha": 1, "alpha0": 1, "z": 5, "z0": 10},
    {"alpha": 1, "alpha0": 1, "z": 5, "z0": 25},
    {"alpha": 1, "alpha0": 1, "z": 25, "z0": 50},
    {"alpha": 1, "alpha0": 2, "z": 0, "z0": 0},
    {"alpha": 1, "alpha0": 6, "z": 0, "z0": 0},
]


def _witness_cell(job):
    p, N, f, kappa, cell, eta, eta0, M, rows = job
    ctx = PadicContext(p, N, f)
    w = instability_witness(ctx, kappa, cell["alpha"], cell["alpha0"], cell["z"], cell["z0"], eta, eta0, M, rows)
    return {
        "alpha": str(cell["alpha"]),
        "alpha0": str(cell["alpha0"]),
        "z": str(cell["z"]),
        "z0": str(cell["z0"]),
        "scenario": w.scenario,
        "first_bad_exponent": w.first_bad_exponent,
        "status": w.status,
        "valuation_table": [list(r) for r in w.valuation_table],
        "formulas": w.formulas,
    }


def cmd_instability(args):
    ctx = _context(args)
    given = [args.alpha, args.alpha0, args.z, args.z0]
    if all(g is None for g in given):
        grid = DEFAULT_GRID
    else:
        grid = [
            {
                "alpha": parse_number(args.alpha or "1"),
                "alpha0": parse_number(args.alpha0 or args.alpha or "1"),
                "z": parse_number(args.z or "0"),
                "z0": parse_number(args.z0 or args.z or "0"),
            }
        ]
    eta, eta0 = parse_number(args.eta), parse_number(args.eta0)
    jobs = [(ctx.p, ctx.N, ctx.f, args.kappa, cell, eta, eta0, args.M, args.rows) for cell in grid]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            cells = list(pool.map(_witness_cell, jobs))
    else:
        cells = [_witness_cell(j) for j in jobs]
    ok = all(c["status"] == "witness" for c in cells if c["scenario"] != "identical")
    out = {"context": _header(args, ctx), "kappa": args.kappa, "cells": cells}
    if args.table:
        return render_table(cells), 0 if ok else 1
    return out, 0 if ok else 1


def render_table(cells) -> str:
    lines = [f"{'scenario':<16}{'alpha':>6}{'alpha0':>7}{'z':>6}{'z0':>6}{'first':>7}  status"]
    for c in cells:
        first = "-" if c["first_bad_exponent"] is None else str(c["first_bad_exponent"])
        lines.append(
            f"{c['scenario']:<16}{c['alpha']:>6}{c['alpha0']:>7}{c['z']:>6}{c['z0']:>6}{first:>7}  {c['status']}"
        )
    for c in cells:
        if c["valuation_table"]:
            vals = " ".join(str(v) for _, v in c["valuation_table"])
            f = c["formulas"]
            lines.append(
                f"v_p(b_n(pz,p) - b_n(pz0,p)) for z={c['z']}, z0={c['z0']}, n=1..: {vals}"
                f"   [v(z-z0)+1 = {f['v(z-z0)+1']}, v(z)+1 = {f['v(z)+1']}]"
            )
    return "\n".join(lines) + "\n"


def cmd_fixtures(args):
    directory = Path(args.out) if args.out else mf.fixture_dir()
    if args.check:
        mismatched = []
        for name in mf.FIXTURE_NAMES:
            path = directory / f"{name}.json"
            want = mf.fixture_text(mf.compute_fixture(name, args.order))
            if not path.exists() or path.read_text() != want:
                mismatched.append(name)
        return {"directory": str(directory), "mismatched": mismatched}, 1 if mismatched else 0
    paths = mf.write_fixtures(directory, args.order)
    return {"directory": str(directory), "written": [p.name for p in paths]}, 0


COMMANDS = {
    "expand": cmd_expand,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "decompose": cmd_decompose,
    "census": cmd_census,
    "instability": cmd_instability,
    "fixtures": cmd_fixtures,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        out, status = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"arithpde: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, TypeError) as exc:
        print(f"arithpde: error: {exc}", file=sys.stderr)
        return 2
    except PrecisionError as exc:
        print(f"arithpde: precision exhausted: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out if isinstance(out, str) else ser.dumps(out))
    return status


if __name__ == "__main__":
    sys.exit(main())
