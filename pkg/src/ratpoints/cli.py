"""Command line interface: ``ratpoints <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .asymptotics import AsymptoticPrediction, StageError, compare, fit_asymptotic, predict
from .config import CompareConfig, EnumerateConfig, PredictConfig, parse_bounds
from .densities import tau_finite
from .enumeration import CountCurve, count_curve, torus_grid_enumerate
from .heights import toric_model
from .toric import (anticanonical_pl, build_picard, compute_alpha, count_points_mod_q,
                    pullback_pl, resolve_fan_2d, rigid_component_count)
from .varieties import load_variety

COUNTS_SCHEMA = "ratpoints.counts/1"
EULER_SCHEMA = "ratpoints.euler/1"


def _write(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _smooth_model(variety):
    fan, phi = variety.fan, variety.polarization
    if not fan.is_smooth:
        fine = resolve_fan_2d(fan)
        phi, fan = pullback_pl(phi, fine), fine
    return fan, phi


def cmd_describe(args) -> int:
    v = load_variety(args.variety)
    fan, phi = _smooth_model(v)
    pm = build_picard(fan)
    l_class = pm.class_of_pl(phi)
    rows = [("name", v.name), ("dimension", fan.dim),
            ("rays (input fan)", len(v.fan.rays)), ("input fan smooth", v.fan.is_smooth),
            ("rays (smooth model)", len(fan.rays)), ("Picard rank", pm.rank),
            ("alpha", compute_alpha(pm, l_class)),
            ("rigid face dimension", rigid_component_count(pm, l_class)),
            ("points mod 2,3,5", ", ".join(str(count_points_mod_q(fan, q)) for q in (2, 3, 5))),
            ("polarization convex", phi.is_convex()),
            ("anticanonical strictly convex", anticanonical_pl(fan).is_strictly_convex()),
            ("default engine", v.default_engine)]
    width = max(len(k) for k, _ in rows)
    for k, val in rows:
        print(f"{k:<{width}}  {val}")
    return 0


def cmd_predict(args) -> int:
    cfg = PredictConfig(args.euler_truncation, args.workers)
    pred = predict(load_variety(args.variety), cfg.euler_truncation, cfg.workers)
    _write(json.dumps(pred.to_dict(), indent=2) + "\n", args.output)
    return 0


def cmd_enumerate(args) -> int:
    cfg = EnumerateConfig(parse_bounds(args.bounds), args.engine, args.threads, args.box)
    v = load_variety(args.variety)
    engine = v.default_engine if cfg.engine == "auto" else cfg.engine
    if engine == "torus-grid":
        if cfg.box is None:
            raise SystemExit("the torus-grid engine needs --box (the caller owns completeness)")
        model = toric_model(v.polarization)
        curve = CountCurve(tuple((b, torus_grid_enumerate(model, b, cfg.box)) for b in cfg.bounds), v.name)
    elif engine == "weighted":
        curve = count_curve("weighted", cfg.bounds, m=v.weights[2])
    else:
        curve = count_curve(engine, cfg.bounds, n=v.n or 1, workers=cfg.threads)
    _write(f"# schema: {COUNTS_SCHEMA}\n" + curve.to_csv(), args.output)
    return 0


def cmd_euler(args) -> int:
    v = load_variety(args.variety)
    fan, _ = _smooth_model(v)
    res = tau_finite(fan, build_picard(fan), big_p=args.max_prime, workers=args.workers)
    lines = [f"# schema: {EULER_SCHEMA}", f"# partial_value: {res.partial_value!r}",
             f"# tail_bound: {res.tail_bound!r}", "p,numerator,denominator"]
    lines += [f"{p},{f.numerator},{f.denominator}" for p, f in res.factor_table]
    _write("\n".join(lines) + "\n", args.output)
    return 0


def _read_curve(path: str) -> CountCurve:
    return CountCurve.from_csv(Path(path).read_text(), Path(path).stem)


def cmd_fit(args) -> int:
    fit = fit_asymptotic(_read_curve(args.counts), args.fix_a, args.fix_b)
    _write(json.dumps(fit.to_dict(), indent=2) + "\n", args.output)
    return 0


def cmd_compare(args) -> int:
    cfg = CompareConfig(args.exponent_tol, args.slack)
    pred = AsymptoticPrediction.from_dict(json.loads(Path(args.prediction).read_text()))
    report = compare(pred, _read_curve(args.counts), cfg.exponent_tolerance, cfg.constant_slack)
    print(report.table())
    if args.output:
        Path(args.output).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ratpoints", description="Predict and count rational points of bounded height.")
    sub = p.add_subparsers(dest="command", required=True)
    var_help = "variety JSON file, or projective:N, weighted:W0,W1,..., cubic"

    s = sub.add_parser("describe", help="table of invariants")
    s.add_argument("--variety", required=True, help=var_help)
    s.set_defaults(func=cmd_describe)

    s = sub.add_parser("predict", help="prediction JSON")
    s.add_argument("--variety", required=True, help=var_help)
    s.add_argument("--euler-truncation", type=int, default=10_000)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--output")
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("enumerate", help="counts CSV")
    s.add_argument("--variety", required=True, help=var_help)
    s.add_argument("--bounds", required=True, help="comma list or geom:LO:HI:COUNT")
    s.add_argument("--engine", default="auto",
                   choices=["auto", "projective", "weighted", "cubic-surface", "torus-grid"])
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--box", type=int, help="numerator/denominator bound for torus-grid")
    s.add_argument("--output")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("euler-product", help="Euler factor CSV")
    s.add_argument("--variety", required=True, help=var_help)
    s.add_argument("--max-prime", type=int, default=100)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--output")
    s.set_defaults(func=cmd_euler)

    s = sub.add_parser("fit", help="fit counts CSV")
    s.add_argument("--counts", required=True)
    s.add_argument("--fix-a", type=float)
    s.add_argument("--fix-b", type=float)
    s.add_argument("--output")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("compare", help="prediction vs counts report")
    s.add_argument("--prediction", required=True)
    s.add_argument("--counts", required=True)
    s.add_argument("--exponent-tol", type=float, default=0.05)
    s.add_argument("--slack", type=float, default=3.0)
    s.add_argument("--output")
    s.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StageError as e:
        print(f"error in stage {e.stage}: {e.cause}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
