"""Command-line front end: project, covering, fixpoint and verify.

Exit codes: 0 all checks pass, 1 a verification or solver failure, 2 bad input.
Reports carry no timings, so the same arguments and seed give byte-identical
output.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .coderivative import ScaledIdentity
from .covering import UnsupportedTarget, estimate_covering_constant, theoretical_covering_constant
from .fixpoint import (
    MAP_REGISTRY,
    BadLambda,
    FixpointError,
    LeftDomain,
    NoConvergence,
    builtin_example,
    picard_solve,
    residual_bound_check,
    segment_contains,
    segment_selection_solve,
    segment_substitution_record,
)
from .lp_function import MeasureGrid, StepFunction, normLp
from .lp_space import IndexMask, LpVector, norm
from .projections import Ball, Cylinder, PositiveCone, project
from .verify import SUITES, run_suite

SCHEMA = "banach-cover/1"
SEED_ENV = "BANACH_COVER_SEED"
DEFAULT_TOLERANCES = {"covering": 1e-9, "fixpoint": 1e-12}

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    """Malformed command-line input; the message names the offending field."""


@dataclass
class RunConfig:
    seed: int = 0
    output_format: str = "json"
    output_path: str | None = None
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))


# -- parsing helpers ----------------------------------------------------------

def _floats(text: str, name: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise InputError(f"--{name}: expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise InputError(f"--{name}: empty list")
    if not all(math.isfinite(v) for v in vals):
        raise InputError(f"--{name}: values must be finite")
    return vals


def _ints(text: str, name: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise InputError(f"--{name}: expected comma-separated integers, got {text!r}") from None


def _s_grid(text: str) -> list[float]:
    """'a:b:step' (inclusive of b up to rounding) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InputError(f"--s-grid: expected start:stop:step, got {text!r}")
        a, b, h = (_floats(t, "s-grid")[0] for t in parts)
        if h <= 0 or b < a:
            raise InputError("--s-grid: need start <= stop and step > 0")
        count = int(math.floor((b - a) / h + 1e-9)) + 1
        return [round(a + k * h, 12) for k in range(count)]
    return _floats(text, "s-grid")


def _require(args, name: str):
    val = getattr(args, name.replace("-", "_"))
    if val is None:
        raise InputError(f"--{name} is required for --set {args.set}")
    return val


def _build_target(args):
    kind = args.set
    try:
        if kind == "ball":
            return Ball(float(_require(args, "r")))
        if kind == "cylinder":
            return Cylinder(float(_require(args, "r")), IndexMask(_ints(_require(args, "mask"), "mask")))
        if kind == "cone":
            return PositiveCone(MeasureGrid(_floats(_require(args, "weights"), "weights")))
        if kind == "identity":
            return ScaledIdentity(float(args.lam))
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"--set {kind}: {exc}") from None
    raise InputError(f"--set: unknown set {kind!r}")


def _build_point(args, target):
    coords = _floats(args.x, "x")
    try:
        if isinstance(target, PositiveCone):
            if len(coords) != target.grid.n:
                raise InputError(f"--x: {len(coords)} values but --weights has {target.grid.n} cells")
            return StepFunction(coords, args.p)
        x = LpVector(args.p, coords)
        if isinstance(target, Cylinder) and max(target.mask.members) > x.n:
            raise InputError(f"--mask: index {max(target.mask.members)} exceeds length of --x ({x.n})")
        return x
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"--p/--x: {exc}") from None


# -- output -------------------------------------------------------------------

def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    return obj


def _json_text(payload: dict) -> str:
    body = {"schema": SCHEMA, **payload}
    return json.dumps(_clean(body), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_cell(v) for v in row) + "\n")
    return buf.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _emit(cfg: RunConfig, text: str):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------

def cmd_project(args, cfg: RunConfig) -> int:
    if args.set == "identity":
        raise InputError("--set: project supports ball, cylinder and cone")
    target = _build_target(args)
    x = _build_point(args, target)
    u = project(target, x)
    if isinstance(x, StepFunction):
        dist = normLp(x.with_values(x.values - u.values), target.grid)
        xin, xout = x.values, u.values
    else:
        dist = norm(x.with_coords(x.coords - u.coords))
        xin, xout = x.coords, u.coords
    if cfg.output_format == "csv":
        rows = [[i + 1, float(a), float(b), dist] for i, (a, b) in enumerate(zip(xin, xout))]
        _emit(cfg, _csv_text(["index", "x", "projection", "distance"], rows))
    else:
        _emit(cfg, _json_text({"command": "project", "set": target.to_json(), "p": x.p,
                               "input": xin.tolist(), "projection": xout.tolist(), "distance": dist}))
    return EXIT_OK


def cmd_covering(args, cfg: RunConfig) -> int:
    target = _build_target(args)
    x = _build_point(args, target)
    etas = _floats(args.eta_grid, "eta-grid") if args.eta_grid else None
    if args.samples < 1:
        raise InputError("--samples must be at least 1")
    try:
        theory = theoretical_covering_constant(target, x)
        rep = estimate_covering_constant(target, x, etas, args.samples, cfg.seed)
    except UnsupportedTarget as exc:
        raise InputError(f"--lambda: {exc}") from None
    except ValueError as exc:
        raise InputError(f"--eta-grid: {exc}") from None
    tol = cfg.tolerances["covering"]
    passed = abs(rep.alpha_hat - theory) <= tol
    if cfg.output_format == "csv":
        _emit(cfg, rep.to_csv())
    else:
        _emit(cfg, _json_text({"command": "covering", "report": rep.to_json(), "theoretical": theory,
                               "tolerance": tol, "status": "PASS" if passed else "FAIL"}))
    print(f"{'PASS' if passed else 'FAIL'} alpha_hat={rep.alpha_hat:.12g} expected={theory:.12g}",
          file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


def _fixpoint_records(args, cfg: RunConfig):
    tol = cfg.tolerances["fixpoint"]
    grid = _s_grid(args.s_grid) if args.s_grid else None
    records, failures = [], []
    if args.example == "6.9":
        ex = builtin_example("6.9")
        prob = ex.problem
        grid = grid or [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
        for s in grid:
            if args.lam == 1.0:
                rec = segment_selection_solve(prob, s, (0.0, 0.0), tol=tol, max_iter=args.max_iter)
            else:
                rec = segment_substitution_record(prob, s, ex.branches["sigma"](s, args.lam))
            rec = residual_bound_check(rec, prob, s, 1.0, args.alpha)
            rec.extra["member"] = segment_contains(prob, rec.sigma, s, 10 * max(tol, 1e-12))
            rec.extra["reference"] = ex.branches["sigma"](s, args.lam).tolist()
            records.append(rec)
            if not rec.extra["member"]:
                failures.append(s)
        return records, failures
    if args.example:
        ex = builtin_example(args.example)
        prob, ref = ex.problem, ex.branches["sigma"]
    else:
        if args.map not in MAP_REGISTRY:
            raise InputError(f"--map: unknown map {args.map!r}; choose from {', '.join(sorted(MAP_REGISTRY))}")
        prob, ref = MAP_REGISTRY[args.map](), None
    grid = grid or [round(0.1 * k, 12) for k in range(11)]
    x0 = _floats(args.x0, "x0") if args.x0 else None
    for s in grid:
        try:
            rec = picard_solve(prob, s, args.lam, x0=x0, tol=tol, max_iter=args.max_iter)
        except BadLambda as exc:
            raise InputError(f"--lambda: {exc}") from None
        except (NoConvergence, LeftDomain) as exc:
            failures.append(s)
            print(f"s={s!r}: {exc}", file=sys.stderr)
            continue
        try:
            rec = residual_bound_check(rec, prob, s, args.lam, args.alpha)
        except ValueError as exc:
            raise InputError(f"--alpha: {exc}") from None
        if ref is not None:
            rec.extra["reference"] = ref(s)
            rec.extra["abs_error"] = abs(rec.sigma[0] - ref(s))
        records.append(rec)
    return records, failures


def cmd_fixpoint(args, cfg: RunConfig) -> int:
    if bool(args.example) == bool(args.map):
        raise InputError("give exactly one of --example or --map")
    records, failures = _fixpoint_records(args, cfg)
    if cfg.output_format == "csv":
        dim = max((len(r.sigma) for r in records), default=1)
        header = ["s"] + [f"sigma{i + 1}" for i in range(dim)] + ["iterations", "residual", "bound_rhs", "bound_ok"]
        rows = [[r.s, *r.sigma, r.iterations, r.residual, r.bound_rhs, r.bound_ok] for r in records]
        _emit(cfg, _csv_text(header, rows))
    else:
        _emit(cfg, _json_text({"command": "fixpoint", "example": args.example, "map": args.map,
                               "lambda": args.lam, "alpha": args.alpha,
                               "records": [r.to_json() for r in records], "failed_s": failures}))
    if failures:
        print("failed at s = " + ", ".join(repr(s) for s in failures), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    results = run_suite(args.suite, cfg.seed)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.suite}/{r.case_id} {r.name} "
              f"{json.dumps(_clean(r.detail), sort_keys=True)}", file=sys.stderr)
    all_ok = all(r.passed for r in results)
    if cfg.output_format == "csv":
        rows = [[r.suite, r.case_id, r.name, r.passed] for r in results]
        _emit(cfg, _csv_text(["suite", "id", "name", "passed"], rows))
    else:
        _emit(cfg, _json_text({"command": "verify", "suite": args.suite, "seed": cfg.seed,
                               "passed": all_ok, "results": [r.to_json() for r in results]}))
    return EXIT_OK if all_ok else EXIT_FAIL


# -- entry point --------------------------------------------------------------

def _add_set_args(p: argparse.ArgumentParser, sets):
    p.add_argument("--set", required=True, choices=sets)
    p.add_argument("--r", type=float)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--mask", help="comma-separated 1-based indices")
    p.add_argument("--weights", help="comma-separated cell measures (cone)")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--x", required=True, help="comma-separated coordinates or cell values")


def _tolerance(text: str):
    name, sep, value = text.partition("=")
    if not sep or name not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(
            f"expected NAME=VALUE with NAME in {', '.join(sorted(DEFAULT_TOLERANCES))}")
    try:
        v = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {value!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return name, v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help=f"RNG seed (overridden by ${SEED_ENV})")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--tol", action="append", type=_tolerance, default=[], metavar="NAME=VALUE",
                        help="override a tolerance (covering, fixpoint)")

    parser = argparse.ArgumentParser(prog="banach-cover", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", parents=[common], help="project a point onto a ball, cylinder or cone")
    _add_set_args(p, ("ball", "cylinder", "cone"))
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("covering", parents=[common], help="estimate a covering constant")
    _add_set_args(p, ("ball", "cylinder", "cone", "identity"))
    p.add_argument("--eta-grid", help="comma-separated ascending eta values (default: geometric grid)")
    p.add_argument("--samples", type=int, default=200, help="samples per eta")
    p.set_defaults(func=cmd_covering)

    p = sub.add_parser("fixpoint", parents=[common], help="solve a stochastic fixed-point problem over an s grid")
    p.add_argument("--example", choices=("6.7", "6.8", "6.9"))
    p.add_argument("--map", help=f"registered map: {', '.join(sorted(MAP_REGISTRY))}")
    p.add_argument("--s-grid", help="start:stop:step or comma list")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.75, help="modulus used in the residual bound")
    p.add_argument("--x0", help="starting point (default: base point)")
    p.add_argument("--max-iter", type=int, default=100_000)
    p.set_defaults(func=cmd_fixpoint)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.set_defaults(func=cmd_verify)
    return parser


def _resolve_seed(cli_seed: int) -> int:
    env = os.environ.get(SEED_ENV)
    seed = cli_seed
    if env is not None and env.strip() != "":
        try:
            seed = int(env)
        except ValueError:
            raise InputError(f"${SEED_ENV}: expected an integer, got {env!r}") from None
    if not 0 <= seed < 2**64:
        raise InputError(f"--seed: {seed} is not a 64-bit unsigned integer")
    return seed


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(seed=_resolve_seed(args.seed), output_format=args.format, output_path=args.out)
        cfg.tolerances.update(dict(args.tol))
        return args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FixpointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: --out: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
