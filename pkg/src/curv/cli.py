"""Command-line front end.

Subcommands: point, slice, verify {identity, minor, inequality}, barrier,
example. Every report embeds the tool version, the effective configuration,
the seed, and the tolerances; identical configuration and seed give
byte-identical output. Exit codes: 0 all checks passed, 1 violation found,
2 usage or configuration error.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import __version__
from .barrier import (
    comparison_bounds,
    gradient_bound_margin,
    ring_mean_curvature,
    ring_mean_curvature_via_slices,
    slide,
)
from .conformal import conformal_point, mean_curvature_spherical
from .errors import CurvError, NoTouchError, NonRegularPointError, OutOfDomainError
from .fields import FiniteDifferenceField, NegatedField, random_trig_field
from .fieldspec import parse_field
from .graphgeom import extrinsic_point, flat_base, minor_relation_residual, slice_frame_of_point
from .inequality import WHICH, check_prod, pick_levels, run_suite, slice_points
from .metrics import constant_ambient, spherical_ambient
from .reporting import emit, jsonable, meta_block, render_csv, render_json
from .revolution import (
    RevolutionProfile,
    cap_curvature,
    cap_scalar_curvature,
    junction_c2_check,
    monotonicity_checks,
    profile_jet,
    sweep_f,
    sweep_u,
    sweep_v,
)
from .syminv import randomized_identity_suite

MIN_TOL = 1e-14


@dataclass(frozen=True)
class RunConfig:
    """Normalized run description echoed into every report."""

    command: str
    options: dict = dc_field(default_factory=dict)
    seed: int | None = None
    tolerances: dict = dc_field(default_factory=dict)
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        for name, value in self.tolerances.items():
            if value < MIN_TOL:
                raise ValueError(f"tolerance {name} = {value} is below the floor {MIN_TOL}")


def _parse_point(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",") if t.strip()], dtype=float)
    except ValueError as exc:
        raise ValueError(f"bad point {text!r}") from exc


def _parse_orders(text: str) -> tuple[int, ...]:
    text = text.strip()
    if "-" in text:
        lo, hi = text.split("-", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(t) for t in text.split(",") if t.strip())


def _parse_eps(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(",") if t.strip())


def _ambient(selector: str, dim: int):
    sel = selector.strip().lower()
    if sel == "flat":
        return None
    if sel == "spherical":
        return spherical_ambient(dim)
    if sel.startswith("constant"):
        _, _, v = sel.partition(":")
        return constant_ambient(dim, float(v) if v else 1.0)
    raise ValueError(f"unknown ambient {selector!r}; use flat, spherical, or constant:<value>")


def _flatten(d: dict) -> tuple[list[str], list]:
    cols: list[str] = []
    row: list = []
    for k in sorted(d):
        v = d[k]
        if isinstance(v, (list, tuple, np.ndarray)):
            for i, vi in enumerate(np.asarray(v).ravel(), start=1):
                cols.append(f"{k}_{i}")
                row.append(float(vi))
        elif isinstance(v, dict):
            continue
        else:
            cols.append(k)
            row.append(v)
    return cols, row


def _render(config: RunConfig, results: list, csv_table=None) -> str:
    meta = meta_block(config.command, config.options, config.seed, config.tolerances)
    if config.format == "csv":
        if csv_table is None:
            if len(results) == 1:
                cols, row = _flatten(jsonable(results[0]))
                return render_csv(cols, [row])
            rows = [_flatten(jsonable(r))[1] for r in results]
            cols = _flatten(jsonable(results[0]))[0] if results else []
            return render_csv(cols, rows)
        return render_csv(*csv_table)
    return render_json(meta, results)


def _resolve_out(args) -> tuple[str | None, str]:
    """--out csv / --out json select the format with stdout output."""
    out = getattr(args, "out", None)
    fmt = getattr(args, "format", None)
    if out in ("csv", "json"):
        return None, out if fmt is None else fmt
    return out, fmt or "json"


# ---------------------------------------------------------------------------
# handlers


def _handle_point(args) -> int:
    x = _parse_point(args.at)
    dim = args.dim or x.size
    f = parse_field(args.field, dim)
    if x.size != f.dim:
        raise ValueError(f"point has dimension {x.size} but field {f.name} has {f.dim}")
    ambient = _ambient(args.ambient, f.dim)
    out, fmt = _resolve_out(args)
    config = RunConfig(
        command="point",
        options={"field": args.field, "ambient": args.ambient, "at": args.at, "dim": f.dim},
        seed=None,
        tolerances={},
        out=out,
        format=fmt,
    )
    if ambient is None:
        pt = extrinsic_point(f, flat_base(f.dim), x)
        result = {
            "x": list(pt.x),
            "value": pt.u,
            "w": pt.w,
            "nu": list(pt.nu),
            "mean_curvature": pt.mean_curvature,
            "norm_a2": pt.norm_a2,
            "principal": list(pt.principal),
            "scalar_curvature": pt.scalar_curvature,
        }
    else:
        cp = conformal_point(f, ambient, x)
        pt = cp.point
        result = {
            "x": list(pt.x),
            "value": pt.u,
            "w": pt.w,
            "nu": list(pt.nu),
            "phi": cp.phi,
            "dphi_nu": cp.dphi_nu,
            "mean_curvature": cp.mean_curvature,
            "norm_a2": cp.norm_a2,
            "principal": list(cp.principal),
        }
        if cp.scalar_curvature is not None:
            result["scalar_curvature"] = cp.scalar_curvature
        if ambient.name == "spherical":
            direct = mean_curvature_spherical(f, x)
            result["mean_curvature_direct"] = direct
            result["route_residual"] = abs(direct - cp.mean_curvature)
    emit(_render(config, [result]), out)
    return 0


def _handle_slice(args) -> int:
    dim = args.dim
    f = parse_field(args.field, dim)
    base = flat_base(f.dim)
    tol = args.tol
    gap_tol = args.gap_tol
    out, fmt = _resolve_out(args)
    config = RunConfig(
        command="slice",
        options={
            "field": args.field, "eps": args.eps, "rays": args.rays,
            "dim": f.dim, "seed": args.seed,
        },
        seed=args.seed,
        tolerances={"minor": tol, "gap": gap_tol},
        out=out,
        format=fmt,
    )
    results = []
    worst_residual = 0.0
    min_gap = np.inf
    for eps in _parse_eps(args.eps):
        for x in slice_points(f, eps, rays=args.rays, seed=args.seed):
            pt = extrinsic_point(f, base, x)
            fr = slice_frame_of_point(pt, eps)
            residual = minor_relation_residual(fr, pt)
            rep = check_prod(f, base, eps, x)
            worst_residual = max(worst_residual, residual)
            min_gap = min(min_gap, rep.gap)
            results.append({
                "x": list(map(float, x)),
                "eps": eps,
                "cos_angle": fr.cos_angle,
                "grad_norm": fr.grad_norm,
                "h_sigma": fr.h_sigma,
                "minor_residual": residual,
                "gap": rep.gap,
            })
    ok = worst_residual <= tol and (not results or min_gap >= -gap_tol)
    results.append({
        "summary": True,
        "points": len(results),
        "worst_minor_residual": worst_residual,
        "min_gap": float(min_gap) if results else None,
        "passed": ok,
    })
    cols = ["eps", "cos_angle", "grad_norm", "h_sigma", "minor_residual", "gap"]
    rows = [[r[c] for c in cols] for r in results if "summary" not in r]
    emit(_render(config, results, csv_table=(cols, rows)), out)
    return 0 if ok else 1


def _handle_verify_identity(args) -> int:
    orders = _parse_orders(args.n)
    tol = args.tol
    out, fmt = _resolve_out(args)
    config = RunConfig(
        command="verify identity",
        options={"n": args.n, "trials": args.trials, "seed": args.seed},
        seed=args.seed,
        tolerances={"residual": tol},
        out=out,
        format=fmt,
    )
    suite = randomized_identity_suite(orders=orders, trials=args.trials, seed=args.seed)
    ok = suite.max_rel_residual <= tol
    results = [{
        "orders": list(suite.orders),
        "trials": suite.trials,
        "max_rel_residual": suite.max_rel_residual,
        "worst_order": suite.worst_order,
        "passed": ok,
    }]
    emit(_render(config, results), out)
    return 0 if ok else 1


def _handle_verify_minor(args) -> int:
    tol = args.tol
    fd_tol = args.fd_tol
    out, fmt = _resolve_out(args)
    config = RunConfig(
        command="verify minor",
        options={
            "fields": args.fields, "points": args.points, "seed": args.seed,
            "fd": args.fd, "fd_step": args.fd_step, "dim": args.dim,
        },
        seed=args.seed,
        tolerances={"analytic": tol, "fd": fd_tol},
        out=out,
        format=fmt,
    )
    base = flat_base(args.dim)
    worst = 0.0
    worst_fd = 0.0
    slopes_all: list[float] = []
    checked = 0
    results = []
    for i in range(args.fields):
        f = random_trig_field(args.dim, seed=args.seed + i)
        try:
            eps = pick_levels(f, 1, seed=args.seed + i)[0]
        except ValueError:
            continue
        pts = slice_points(f, eps, rays=max(2, args.points // 2), seed=args.seed + i)
        for x in pts[: args.points]:
            pt = extrinsic_point(f, base, x)
            try:
                fr = slice_frame_of_point(pt, eps)
            except NonRegularPointError:
                continue
            res = minor_relation_residual(fr, pt)
            worst = max(worst, res)
            checked += 1
            if args.fd:
                steps = [args.fd_step, args.fd_step / 2.0, args.fd_step / 4.0]
                errs = []
                try:
                    for h in steps:
                        fd = FiniteDifferenceField(f.value, f.dim, f.domain, step=h)
                        fd_pt = extrinsic_point(fd, base, x)
                        errs.append(minor_relation_residual(fr, fd_pt))
                except OutOfDomainError:
                    # the stencil margin shrinks the usable domain; points in
                    # that band stay in the analytic tally only
                    continue
                worst_fd = max(worst_fd, errs[-1])
                with np.errstate(divide="ignore"):
                    slopes = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
                slopes_all.extend(float(s) for s in slopes)
    ok = checked > 0 and worst <= tol
    if args.fd:
        ok = ok and worst_fd <= fd_tol
    results.append({
        "points_checked": checked,
        "worst_analytic_residual": worst,
        "worst_fd_residual": worst_fd if args.fd else None,
        "median_fd_slope": float(np.median(slopes_all)) if slopes_all else None,
        "passed": ok,
    })
    emit(_render(config, results), out)
    return 0 if ok else 1


def _handle_verify_inequality(args) -> int:
    gap_tol = args.gap_tol
    out, fmt = _resolve_out(args)
    config = RunConfig(
        command="verify inequality",
        options={
            "which": args.which, "fields": args.fields, "seed": args.seed,
            "dim": args.dim, "rays": args.rays, "levels": args.levels,
        },
        seed=args.seed,
        tolerances={"gap": gap_tol},
        out=out,
        format=fmt,
    )
    suite = run_suite(
        args.which, dim=args.dim, n_fields=args.fields, rays=args.rays,
        levels=args.levels, seed=args.seed, gap_tol=gap_tol,
    )
    ok = suite.violations == 0
    results = [{
        "which": suite.which,
        "fields": suite.fields,
        "points": suite.points,
        "min_gap": suite.min_gap,
        "violations": suite.violations,
        "passed": ok,
    }]
    if not ok:
        results += [
            {"violation": True, "x": list(r.x), "eps": r.eps, "gap": r.gap}
            for r in suite.reports
            if r.gap < -gap_tol
        ]
    emit(_render(config, results), out)
    return 0 if ok else 1


def _handle_barrier(args) -> int:
    f = parse_field(args.field, args.dim)
    if args.negate:
        f = NegatedField(f)
    touch_tol = args.touch_tol
    out, fmt = _resolve_out(args)
    config = RunConfig(
        command="barrier",
        options={
            "field": args.field, "negate": args.negate, "a": args.a,
            "aprime": args.aprime, "lambda_max": args.lambda_max,
            "radial": args.radial, "angular": args.angular,
            "dim": args.dim, "seed": args.seed,
        },
        seed=args.seed,
        tolerances={"touch": touch_tol, "gradient_bound": 1e-6, "ring": 1e-8},
        out=out,
        format=fmt,
    )
    aprime = args.aprime if args.aprime is not None else args.a + 0.05 * (1.0 - args.a)
    try:
        run = slide(
            f, (args.a, 1.0), aprime, args.lambda_max,
            radial=args.radial, angular=args.angular, seed=args.seed,
            touch_tol=touch_tol,
        )
    except NoTouchError as exc:
        emit(_render(config, [{"outcome": "no-touch", "detail": str(exc),
                               "hint": "rerun with --negate"}]), out)
        return 1
    result = {
        "outcome": "degenerate" if run.degenerate else "touch",
        "lam_star": run.lam_star,
        "x0": list(run.x0),
        "u0": run.u0,
        "grad_norm": run.grad_norm,
        "radial_derivative": run.radial_derivative,
        "touch_gap": run.touch_gap,
        "interior_touch": run.interior_touch,
        "boundary_touch": run.boundary_touch,
        "successful": run.successful,
    }
    ok = run.touch_gap <= touch_tol
    if run.successful:
        margin = gradient_bound_margin(run)
        result["gradient_bound_margin"] = margin
        ok = ok and margin >= -1e-6
    rho = float(np.linalg.norm(run.x0))
    if not run.degenerate and run.grad_norm > 1e-12:
        bounds = comparison_bounds(run)
        result["bounds"] = {
            "upper": bounds.upper, "cap": bounds.cap, "lower": bounds.lower,
            "ordering_skipped": bounds.ordering_skipped,
        }
        if 0.0 < rho < 1.0:
            ring = ring_mean_curvature(rho, run.u0, run.dim)
            ring_slice = ring_mean_curvature_via_slices(rho, run.u0, run.dim)
            result["ring_residual"] = abs(ring - ring_slice)
            ok = ok and result["ring_residual"] <= 1e-8
    result["passed"] = ok
    emit(_render(config, [result]), out)
    return 0 if ok else 1


def _handle_example(args) -> int:
    out, fmt = _resolve_out(args)
    config = RunConfig(
        command="example",
        options={"name": args.name, "a": args.a, "count": args.count},
        seed=None,
        tolerances={"scalar_floor": 1e-10, "junction": 1e-3, "locus": 1e-6},
        out=out,
        format=fmt,
    )
    if args.name == "euclid-cone":
        table = sweep_f(count=args.count)
        gauss = table[:, 2] * table[:, 3]
        prof = RevolutionProfile("E-f")
        f0 = profile_jet(prof, 0.0)
        f1 = profile_jet(prof, 1.0)
        checks = {
            "min_gauss": float(gauss.min()),
            "f_at_0": f0[0],
            "f_at_1": f1[0],
            "vertical_tangent_at_0": bool(np.isinf(f0[1]) and f0[1] > 0),
            "passed": bool(
                gauss.min() >= -1e-10 and f0[0] == 1.0 and f1[0] == 0.0 and np.isinf(f0[1])
            ),
        }
        cols = ["z", "value", "lam1", "lam2", "scalar"]
        rows = [[float(v) for v in row] for row in table]
        emit(_render(config, [checks], csv_table=(cols, rows)), out)
        return 0 if checks["passed"] else 1

    # spherical-glued
    a = args.a
    u_table = sweep_u(a, count=args.count)
    v_table = sweep_v(a, count=max(2, args.count // 2))
    scal = u_table[:, 4]
    i_min = int(scal.argmin())
    junction = junction_c2_check(a)
    mono = monotonicity_checks(a, samples=2000)
    checks = {
        "cap_curvature": cap_curvature(a),
        "cap_scalar": cap_scalar_curvature(a),
        "min_scalar_u": float(scal.min()),
        "argmin_r": float(u_table[i_min, 0]),
        "equality_locus_offset": abs(float(u_table[i_min, 0]) - a),
        "junction_value_limit": junction.value_limit,
        "junction_lam1_limit": junction.lam1_limit,
        "junction_lam2_limit": junction.lam2_limit,
        "junction_passed": junction.passed,
        "monotonicity_passed": mono.passed,
    }
    checks["passed"] = bool(
        scal.min() >= 2.0 - 1e-10
        and checks["equality_locus_offset"] <= 1e-6
        and junction.passed
        and mono.passed
    )
    cols = ["branch", "r", "value", "lam1", "lam2", "scalar"]
    rows = [[0.0] + [float(v) for v in row] for row in u_table]
    rows += [[1.0] + [float(v) for v in row] for row in v_table]
    emit(_render(config, [checks], csv_table=(cols, rows)), out)
    return 0 if checks["passed"] else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="curv",
        description="Extrinsic geometry of graph hypersurfaces in product and "
        "conformally product metrics: pointwise data, slice traces, "
        "verification suites, barrier slides, and example surfaces.",
    )
    p.add_argument("--version", action="version", version=f"curv {__version__}")
    p.add_argument("--config", default=None, help="key = value defaults file")
    sub = p.add_subparsers(dest="command", required=True)

    def add_io(sp):
        sp.add_argument("--out", default=None, help="output path; bare 'csv'/'json' select the format")
        sp.add_argument("--format", choices=("json", "csv"), default=None)

    sp = sub.add_parser("point", help="extrinsic/conformal data at one point")
    sp.add_argument("--field", required=True)
    sp.add_argument("--ambient", default="flat")
    sp.add_argument("--at", required=True, help="comma-separated coordinates")
    sp.add_argument("--dim", type=int, default=None)
    add_io(sp)
    sp.set_defaults(handler=_handle_point)

    sp = sub.add_parser("slice", help="level-slice sweep")
    sp.add_argument("--field", required=True)
    sp.add_argument("--eps", required=True, help="level value(s), comma-separated")
    sp.add_argument("--rays", type=int, default=16)
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--gap-tol", type=float, default=1e-8)
    add_io(sp)
    sp.set_defaults(handler=_handle_slice)

    spv = sub.add_parser("verify", help="verification suites")
    vsub = spv.add_subparsers(dest="suite", required=True)

    sp = vsub.add_parser("identity", help="randomized symmetric-function identity suite")
    sp.add_argument("--n", default="2-8", help="matrix order: 4, 2-8, or 2,3,5")
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-10)
    add_io(sp)
    sp.set_defaults(handler=_handle_verify_identity)

    sp = vsub.add_parser("minor", help="slice minor relation residuals")
    sp.add_argument("--fields", type=int, default=50)
    sp.add_argument("--points", type=int, default=20)
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--fd", action="store_true", help="also check finite-difference jets")
    sp.add_argument("--fd-step", type=float, default=1e-2)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--fd-tol", type=float, default=1e-4)
    add_io(sp)
    sp.set_defaults(handler=_handle_verify_minor)

    sp = vsub.add_parser("inequality", help="trace inequality suites")
    sp.add_argument("--which", choices=WHICH, required=True)
    sp.add_argument("--fields", type=int, default=25)
    sp.add_argument("--rays", type=int, default=10)
    sp.add_argument("--levels", type=int, default=2)
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--gap-tol", type=float, default=1e-8)
    add_io(sp)
    sp.set_defaults(handler=_handle_verify_inequality)

    sp = sub.add_parser("barrier", help="cone barrier slide and comparison bounds")
    sp.add_argument("--field", required=True)
    sp.add_argument("--negate", action="store_true", help="slide onto -u instead")
    sp.add_argument("--a", type=float, default=0.5, help="inner annulus radius")
    sp.add_argument("--aprime", type=float, default=None, help="shrunken inner radius")
    sp.add_argument("--lambda-max", type=float, default=1e4)
    sp.add_argument("--radial", type=int, default=512)
    sp.add_argument("--angular", type=int, default=128)
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--touch-tol", type=float, default=1e-8)
    add_io(sp)
    sp.set_defaults(handler=_handle_barrier)

    sp = sub.add_parser("example", help="explicit example surfaces and sweeps")
    sp.add_argument("--name", choices=("euclid-cone", "spherical-glued"), required=True)
    sp.add_argument("--a", type=float, default=0.5)
    sp.add_argument("--count", type=int, default=1000)
    add_io(sp)
    sp.set_defaults(handler=_handle_example)

    return p


def _apply_config(argv: list[str]) -> list[str]:
    """Inline `key = value` lines from --config as leading flags of the
    subcommand, so explicit flags override them."""
    argv = list(argv)
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config":
            if i + 1 >= len(argv):
                raise ValueError("--config needs a path")
            path = argv[i + 1]
            del argv[i : i + 2]
            break
        if tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            del argv[i]
            break
    if path is None:
        return argv
    tokens: list[str] = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line {line!r}; expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            flag = "--" + key.replace("_", "-")
            if value.lower() in ("true", "false"):
                if value.lower() == "true":
                    tokens.append(flag)
            else:
                tokens += [flag, value]
    head = 2 if argv and argv[0] == "verify" else 1
    if len(argv) < head:
        raise ValueError("--config requires a subcommand")
    return argv[:head] + tokens + argv[head:]


def main(argv=None) -> int:
    import sys

    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        argv = _apply_config(argv)
        args = parser.parse_args(argv)
        return args.handler(args)
    except BrokenPipeError:
        # downstream consumer (head, less) closed the stream mid-report
        return 0
    except (ValueError, OSError, CurvError) as exc:
        print(f"curv: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
