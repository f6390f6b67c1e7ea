"""Command-line front end.

    rankgame solve        --config fig2.toml --set f=0.5
    rankgame optimize-fee --config fig2.toml
    rankgame sweep        --config fig2.toml --axis f:0:1:101 --out fig2.csv --svg fig2.svg
    rankgame verify       --equilibrium eq.json
    rankgame simulate     --config fig2.toml --set f=0.5 --n 1000000 --seed 42

Exit codes: 0 success, 1 invalid input, 2 verification failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import asdict
from pathlib import Path

from rankgame.analysis import (
    Curve,
    RatingCurves,
    SweepRow,
    axis_values,
    optimize_fee,
    sweep,
)
from rankgame.equilibrium import Equilibrium, solve_equilibrium
from rankgame.game_core import PARAM_NAMES, GameParams, RankGameError, StrategyProfile, validate_params
from rankgame.oracle import monte_carlo_payoffs, verify_equilibrium
from rankgame.svg import line_chart

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger("rankgame")

CSV_HEADER = ["axis", "value", "P_c", "P_b", "posterior", "eu_app", "eu_platform", "regime"]
CURVE_NAMES = ("alpha", "beta", "l")
LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class UsageError(RankGameError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    return f"{x:.9g}"


def load_config(path: str | None, overrides: list[str]) -> tuple[dict[str, float], dict[str, str]]:
    """Scalar parameters and curve specs from a TOML file plus ``key=value`` overrides."""
    scalars: dict[str, float] = {}
    curves: dict[str, str] = {}
    if path:
        try:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        for key, value in doc.items():
            if key == "curves":
                if not isinstance(value, dict):
                    raise UsageError("[curves] must be a table")
                for name, spec in value.items():
                    _put_curve(curves, name, spec)
            elif key in PARAM_NAMES:
                scalars[key] = _number(key, value)
            else:
                raise UsageError(f"unknown config key {key!r}")
    for item in overrides:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep:
            raise UsageError(f"--set expects key=value, got {item!r}")
        if key.startswith("curves."):
            _put_curve(curves, key[len("curves."):], value.strip())
        elif key in PARAM_NAMES:
            scalars[key] = _number(key, value)
        else:
            raise UsageError(f"unknown parameter {key!r} in --set")
    return scalars, curves


def _number(key: str, value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise UsageError(f"{key} must be a number, got {value!r}") from None


def _put_curve(curves: dict[str, str], name: str, spec) -> None:
    if name not in CURVE_NAMES:
        raise UsageError(f"unknown curve {name!r}; expected one of {', '.join(CURVE_NAMES)}")
    if not isinstance(spec, str):
        raise UsageError(f"curve {name} must be a string like 'affine:0:1'")
    curves[name] = spec


def build_curves(specs: dict[str, str]) -> RatingCurves | None:
    if not specs:
        return None
    missing = [n for n in CURVE_NAMES if n not in specs]
    if missing:
        raise UsageError(f"[curves] must define alpha, beta and l; missing {', '.join(missing)}")
    return RatingCurves(*(Curve.parse(specs[n]) for n in CURVE_NAMES))


def build_params(scalars: dict[str, float], curves: RatingCurves | None) -> GameParams:
    values = dict(scalars)
    if curves is not None:
        if "r" not in values:
            raise UsageError("r is required to evaluate the curves")
        values.update(curves.at(values["r"]))
    return validate_params(values)


def _parse_profile(text: str) -> StrategyProfile:
    try:
        pc, pb = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--profile expects P_c,P_b, got {text!r}") from None
    return StrategyProfile(pc, pb)


def equilibrium_json(params: GameParams, eq: Equilibrium) -> dict:
    return {
        "params": params.as_dict(),
        "regime": str(eq.regime),
        "profile": asdict(eq.profile),
        "posterior": eq.posterior_cheat_given_s,
        "eu_app": eq.eu_app,
        "eu_platform": eq.eu_platform,
        "non_unique": eq.non_unique,
    }


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)
    log.info("wrote %s", path)


def write_csv(path: str, rows: list[SweepRow]) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(CSV_HEADER)
        for row in rows:
            regime = row.regime if row.ok else f"error: {row.error}"
            # axis value at round-trip precision so the row can be re-solved exactly
            out.writerow([row.axis, repr(row.value), fmt(row.p_cheat), fmt(row.p_ban), fmt(row.posterior),
                          fmt(row.eu_app), fmt(row.eu_platform), regime])
    log.info("wrote %s", path)


def parse_axis(text: str) -> tuple[str, list[float]]:
    """``name:start:stop:steps`` or ``name=v1,v2,...``."""
    try:
        if "=" in text:
            name, _, values = text.partition("=")
            return name.strip(), [float(x) for x in values.split(",")]
        name, start, stop, steps = text.split(":")
        return name.strip(), list(axis_values(float(start), float(stop), int(steps)))
    except ValueError:
        raise UsageError(f"bad --axis {text!r}; expected name:start:stop:steps or name=v1,v2,...") from None


def cmd_solve(args, scalars, curves) -> int:
    params = build_params(scalars, curves)
    eq = solve_equilibrium(params)
    print(f"regime      {eq.regime}{'  (non-unique)' if eq.non_unique else ''}")
    print(f"P_c         {fmt(eq.p_cheat)}")
    print(f"P_b         {fmt(eq.p_ban)}")
    print(f"posterior   {'undefined (no alert on path)' if eq.posterior_cheat_given_s is None else fmt(eq.posterior_cheat_given_s)}")
    print(f"eu_app      {fmt(eq.eu_app)}")
    print(f"eu_platform {fmt(eq.eu_platform)}")
    if args.out:
        _write(args.out, json.dumps(equilibrium_json(params, eq), indent=2) + "\n")
    return 0


def cmd_optimize(args, scalars, curves) -> int:
    scalars = {"f": 0.0, **scalars}
    params = build_params(scalars, curves)
    opt = optimize_fee(params, step=args.step)
    print(f"f*          {fmt(opt.f_star)}")
    print(f"eu*         {fmt(opt.eu_star)}")
    print(f"regime      {opt.regime_at_star}")
    print(f"grid step   {opt.grid_resolution:g}{'  (golden-section refined)' if opt.refined else ''}")
    if args.out:
        doc = {**asdict(opt), "regime_at_star": str(opt.regime_at_star), "params": params.as_dict()}
        _write(args.out, json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_sweep(args, scalars, curves) -> int:
    axis, values = parse_axis(args.axis)
    if axis not in PARAM_NAMES:
        raise UsageError(f"unknown sweep axis {axis!r}")
    rows = sweep(scalars, axis, values, curves=curves)
    bad = [r for r in rows if not r.ok]
    good = [r for r in rows if r.ok]
    print(f"{len(rows)} rows over {axis} ({len(bad)} invalid)")
    if good:
        best = max(good, key=lambda r: r.eu_platform)
        print(f"max eu_platform {fmt(best.eu_platform)} at {axis}={fmt(best.value)} ({best.regime})")
    if args.out:
        write_csv(args.out, rows)
    if args.svg:
        series = {}
        for name in args.series.split(","):
            name = name.strip()
            attr = {"P_c": "p_cheat", "P_b": "p_ban"}.get(name, name)
            if attr not in ("p_cheat", "p_ban", "posterior", "eu_app", "eu_platform"):
                raise UsageError(f"unknown series {name!r}")
            series[name] = [(r.value, getattr(r, attr)) for r in rows]
        _write(args.svg, line_chart(series, title=f"Equilibrium vs {axis}", x_label=axis,
                                    y_label=", ".join(series)))
    return 0


def cmd_verify(args, scalars, curves) -> int:
    if args.equilibrium:
        try:
            doc = json.loads(Path(args.equilibrium).read_text())
            raw = {**doc["params"], **scalars}
            profile = StrategyProfile(**doc["profile"])
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read equilibrium file {args.equilibrium}: {exc}") from None
        params = validate_params(raw)
    else:
        params = build_params(scalars, curves)
        profile = None
    eq = solve_equilibrium(params)
    if args.profile:
        profile = _parse_profile(args.profile)
    if profile is not None:
        eq = Equilibrium(eq.regime, profile, eq.posterior_cheat_given_s, math.nan, math.nan, eq.non_unique)
    report = verify_equilibrium(params, eq, tol=args.tol)
    print(f"regime                 {eq.regime}")
    print(f"profile                P_c={fmt(eq.p_cheat)} P_b={fmt(eq.p_ban)}")
    print(f"regret_app             {report.regret_app:.3e}")
    print(f"regret_platform_at_s   {report.regret_platform_at_s:.3e}{'  (alert off path)' if report.off_path else ''}")
    print(f"indiff_residual_app    {report.indiff_residual_app:.3e}")
    print(f"indiff_residual_plat   {report.indiff_residual_platform:.3e}")
    print(f"{'PASS' if report.passed else 'FAIL'} at tol {args.tol:g}")
    return 0 if report.passed else 2


def cmd_simulate(args, scalars, curves) -> int:
    params = build_params(scalars, curves)
    profile = _parse_profile(args.profile) if args.profile else solve_equilibrium(params).profile
    est = monte_carlo_payoffs(params, profile, n=args.n, seed=args.seed)
    print(f"profile     P_c={fmt(profile.p_cheat)} P_b={fmt(profile.p_ban_given_s)}")
    print(f"eu_app      {fmt(est.mean_app)} +/- {est.std_err_app:.3g}")
    print(f"eu_platform {fmt(est.mean_platform)} +/- {est.std_err_platform:.3g}")
    print(f"n={est.n} seed={est.seed}")
    if args.out:
        _write(args.out, json.dumps({**asdict(est), "profile": asdict(profile)}, indent=2) + "\n")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rankgame", description="Platform/application rating-manipulation game solver.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="TOML file with parameters and an optional [curves] table")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a parameter (or curves.NAME=SPEC); repeatable")
        return p

    p = common(sub.add_parser("solve", help="classify the regime and solve the equilibrium"))
    p.add_argument("--out", help="write the equilibrium as JSON")
    p.set_defaults(func=cmd_solve)

    p = common(sub.add_parser("optimize-fee", help="fee maximising the platform's equilibrium utility"))
    p.add_argument("--step", type=float, default=1e-3, help="grid step in (0, 0.1]")
    p.add_argument("--out", help="write the optimum as JSON")
    p.set_defaults(func=cmd_optimize)

    p = common(sub.add_parser("sweep", help="solve along one parameter axis"))
    p.add_argument("--axis", required=True, help="name:start:stop:steps or name=v1,v2,...")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--svg", help="SVG line chart output path")
    p.add_argument("--series", default="eu_platform",
                   help="comma list of P_c,P_b,posterior,eu_app,eu_platform for the chart")
    p.set_defaults(func=cmd_sweep)

    p = common(sub.add_parser("verify", help="check zero regret and indifference"))
    p.add_argument("--equilibrium", help="JSON written by 'solve --out'")
    p.add_argument("--profile", help="verify this P_c,P_b instead of the solver's profile")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("simulate", help="Monte Carlo estimate of both payoffs"))
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--profile", help="P_c,P_b (default: the equilibrium profile)")
    p.add_argument("--out", help="write the estimate as JSON")
    p.set_defaults(func=cmd_simulate)
    return parser


def _setup_logging() -> None:
    level = LOG_LEVELS.get(os.environ.get("RANKGAME_LOG", "quiet").lower(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def run_cli(argv: list[str] | None = None) -> int:
    _setup_logging()
    try:
        args = make_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        scalars, curve_specs = load_config(args.config, args.set)
        curves = build_curves(curve_specs)
        return args.func(args, scalars, curves)
    except RankGameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
