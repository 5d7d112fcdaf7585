"""Command-line entry point: ``shrinker-lab {eval,solve,catalog,render,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 no root in the bracket, 4 catalog or network build failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import warnings

import numpy as np

from . import __version__
from .config import C_STAR, ENV_TOL, TOL

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NO_ROOT, EXIT_BUILD = 0, 1, 2, 3, 4
WHATS = ("h1", "h2", "h3", "T", "dtheta_MN", "dtheta_NA")
# segments making up each functional, as (from, to) special points
_SEGMENTS = {
    "h1": (("C", "D"),),
    "h2": (("D", "A"),),
    "h3": (("A", "B"),),
    "T": (("M", "N"), ("N", "M")),
    "dtheta_MN": (("M", "N"),),
    "dtheta_NA": (("N", "A"),),
}
_NEEDS_JUNCTIONS = {"h1", "h2", "h3", "dtheta_NA"}
CROSS_CHECK_TOL = 1e-8
DEFAULT_HI = 50.0


class UsageError(Exception):
    pass


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def _count(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points")
    return v


def _check_out(path: str | None):
    if path is None or path == "-":
        return
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
        raise UsageError(f"output directory not writable: {parent}")


def _emit(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _default_tol() -> float:
    raw = os.environ.get(ENV_TOL)
    if raw is None:
        return TOL.quad_abs
    try:
        v = float(raw)
    except ValueError:
        raise UsageError(f"{ENV_TOL}={raw!r} is not a number") from None
    if not v > 0:
        raise UsageError(f"{ENV_TOL} must be positive")
    return v


# -- eval ---------------------------------------------------------------------


def evaluate(c: float, what: str, tol: float | None = None, engine: str = "quadrature") -> float:
    """Value of one functional at energy ``c`` with the chosen engine."""
    from .angles import delta_theta
    from .integrators.flow import flow
    from .integrators.quadrature import QuadratureSpec
    from .phase_plane import DomainError, Energy, special_point

    e = Energy(c)
    if what in _NEEDS_JUNCTIONS and not e.has_junction_points:
        raise DomainError(f"{what} needs c >= c* = {C_STAR}")
    spec = QuadratureSpec(abs_tol=tol) if tol else QuadratureSpec()
    total = 0.0
    for a, b in _SEGMENTS[what]:
        p, q = special_point(e, a), special_point(e, b)
        if engine == "flow":
            total += flow(e, p, q).dtheta
        else:
            total += delta_theta(e, p, q, spec=spec)
    return total


def _sweep_csv(lo: float, hi: float, n: int, tol: float) -> str:
    buf = io.StringIO()
    buf.write("# c,h1,h2,h3,T (radians)\n")
    w = csv.writer(buf, lineterminator="\n")
    for c in np.geomspace(lo, hi, n):
        c = float(c)
        w.writerow([repr(c)] + [repr(evaluate(c, x, tol)) for x in ("h1", "h2", "h3", "T")])
    return buf.getvalue()


def cmd_eval(args) -> int:
    from .geometry import dumps

    tol = args.tol or _default_tol()
    if args.sweep:
        lo = args.c_min if args.c_min is not None else C_STAR
        hi = args.c_max
        if not lo < hi or lo < C_STAR:
            raise UsageError(f"sweep range must satisfy c* <= c_min < c_max, got [{lo}, {hi}]")
        _emit(_sweep_csv(lo, hi, args.grid, tol), args.out)
        return EXIT_OK
    if args.c is None or args.what is None:
        raise UsageError("eval needs --c and --what (or --sweep)")
    value = evaluate(args.c, args.what, tol)
    out = {"c": args.c, "what": args.what, "engine": "quadrature", "value": value,
           "value_over_pi": value / math.pi}
    if args.cross_check:
        fv = evaluate(args.c, args.what, engine="flow")
        out["flow_value"] = fv
        out["disagreement"] = abs(fv - value)
        out["agree"] = out["disagreement"] <= CROSS_CHECK_TOL * max(1.0, abs(value))
    if args.json:
        _emit(dumps(out), args.out)
    else:
        lines = [f"{args.what}({args.c!r}) = {value!r}  ({value / math.pi:.12f} pi)"]
        if args.cross_check:
            lines.append(f"flow engine  = {out['flow_value']!r}  disagreement {out['disagreement']:.3e}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# -- solve --------------------------------------------------------------------


def cmd_solve(args) -> int:
    from .catalog import AmbiguousRootWarning, ClosureEquation, solve_closure
    from .geometry import dumps

    lo = args.lo if args.lo is not None else C_STAR + 1e-9
    hi = args.hi if args.hi is not None else DEFAULT_HI
    if lo < C_STAR or not lo < hi:
        raise UsageError(f"bracket must satisfy c* <= lo < hi, got [{lo}, {hi}]")
    try:
        eq = ClosureEquation.parse(args.equation, bracket=(lo, hi))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    kw = {"xtol": args.tol} if args.tol else {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AmbiguousRootWarning)
        root = solve_closure(eq, scan=args.grid, **kw)
    # the scan grid values are cached, so counting sign changes is cheap
    vals = np.array([eq.residual(float(c)) for c in np.geomspace(lo, hi, args.grid)])
    changes = int(np.count_nonzero(np.sign(vals[:-1]) != np.sign(vals[1:])))
    out = {"equation": str(eq), "bracket": [lo, hi], "c": root.c, "eta": 1.0 + 2.0 * math.log(root.c),
           "residual": root.residual, "iterations": root.iterations, "monotone": root.monotone,
           "sign_changes_on_scan": changes}
    if args.json:
        _emit(dumps(out), args.out)
    else:
        note = "unique on scan" if changes == 1 else f"{changes} sign changes on scan"
        _emit(f"{eq}: c = {root.c!r}  residual {root.residual:.3e}  ({note})\n", args.out)
    return EXIT_OK


# -- catalog / render -----------------------------------------------------------


def cmd_catalog(args) -> int:
    from .catalog import build_catalog, catalog_json
    from .geometry import dumps

    sols = build_catalog(args.name or None)
    _emit(dumps(catalog_json(sols)), args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    from .catalog import CASES, solve_case
    from .geometry import assemble_network, export

    cs = next(x for x in CASES if x.name == args.name)
    net = assemble_network(solve_case(cs))
    opts = {"ray_extent": args.ray_extent, "unit_circle": args.unit_circle} if args.format == "svg" else {}
    doc = export(net, args.format, **opts)
    _emit(doc, args.out)
    return EXIT_OK


# -- verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    from .geometry import dumps
    from .verify import run_verification

    report = run_verification(n_mn=args.grid)
    doc = report.to_json()
    ok = report.ok(strict=args.strict)
    if args.exclusions:
        from .catalog import check_exclusions
        ex = check_exclusions()
        doc["exclusions"] = ex.to_json()
        ok = ok and ex.passed
    if args.format == "json":
        _emit(dumps(doc), args.out)
    else:
        text = report.to_text()
        if args.exclusions:
            text += "".join(f"{'PASS' if x.passed else 'FAIL'}  {x.check_id}  margin {x.margin:+.3e}\n"
                            for x in ex.checks)
        _emit(text, args.out)
    return EXIT_OK if ok else EXIT_VERIFY


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from .catalog import CASE_NAMES

    p = argparse.ArgumentParser(prog="shrinker-lab", description="Regular shrinkers with two closed regions.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--tol", type=_positive, metavar="X",
                        help=f"numerical tolerance (default from {ENV_TOL} or built-in)")

    ev = sub.add_parser("eval", parents=[common], help="evaluate an angle functional")
    ev.add_argument("--c", type=float, help="energy c > 1")
    ev.add_argument("--what", choices=WHATS)
    ev.add_argument("--cross-check", action="store_true", help="also evaluate with the ODE flow engine")
    ev.add_argument("--json", action="store_true")
    ev.add_argument("--sweep", action="store_true", help="CSV of h1, h2, h3, T on a log grid")
    ev.add_argument("--grid", type=_count, default=64, metavar="N")
    ev.add_argument("--c-min", type=float, help="sweep start (default c*)")
    ev.add_argument("--c-max", type=float, default=8.0, help="sweep end (default 8)")
    ev.set_defaults(func=cmd_eval)

    so = sub.add_parser("solve", parents=[common], help='solve "a*h1+b*h2+c*h3=K*pi" for c')
    so.add_argument("equation")
    so.add_argument("--lo", type=float, help="bracket start (default just above c*)")
    so.add_argument("--hi", type=float, help=f"bracket end (default {DEFAULT_HI:g})")
    so.add_argument("--grid", type=_count, default=64, metavar="N", help="pre-scan points")
    so.add_argument("--json", action="store_true")
    so.set_defaults(func=cmd_solve)

    ca = sub.add_parser("catalog", parents=[common], help="solve the catalog and write JSON")
    ca.add_argument("--name", action="append", choices=CASE_NAMES, help="restrict to this entry (repeatable)")
    ca.set_defaults(func=cmd_catalog)

    re_ = sub.add_parser("render", parents=[common], help="draw one catalog network")
    re_.add_argument("--name", required=True, choices=CASE_NAMES)
    re_.add_argument("--format", choices=("svg", "json"), default="svg")
    re_.add_argument("--ray-extent", type=_positive, default=3.0, metavar="R")
    re_.add_argument("--unit-circle", action="store_true")
    re_.set_defaults(func=cmd_render)

    ve = sub.add_parser("verify", parents=[common], help="re-verify the printed bound tables")
    ve.add_argument("--format", choices=("text", "json"), default="text")
    ve.add_argument("--strict", action="store_true", help="treat ERRATUM rows as failures")
    ve.add_argument("--exclusions", action="store_true", help="also run the exclusion grid checks")
    ve.add_argument("--grid", type=_count, default=128, metavar="N", help="points for the dtheta_MN scan")
    ve.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    from .catalog import CatalogBuildError, NoRootError
    from .geometry import ClosureError
    from .phase_plane import DomainError

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_out(args.out)
        return args.func(args)
    except UsageError as exc:
        print(f"shrinker-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"shrinker-lab: domain error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoRootError as exc:
        print(f"shrinker-lab: no root: {exc}", file=sys.stderr)
        return EXIT_NO_ROOT
    except (CatalogBuildError, ClosureError) as exc:
        print(f"shrinker-lab: build failed: {exc}", file=sys.stderr)
        return EXIT_BUILD


if __name__ == "__main__":
    sys.exit(main())
