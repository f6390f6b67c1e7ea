"""Exit criteria. Each test records one PASS/FAIL line in the terminal summary."""

import json
import time

import numpy as np

from oracles import FIG2, brute_force_payoffs, grid_fee_optimum, random_mixed, random_params
from rankgame import (
    Curve,
    GameParams,
    RatingCurves,
    Regime,
    StrategyProfile,
    comparative_static,
    monte_carlo_payoffs,
    optimize_fee,
    platform_equilibrium_utility,
    solve_equilibrium,
    verify_equilibrium,
)
from rankgame.cli import run_cli
from rankgame.equilibrium import platform_indifference_residual
from rankgame.oracle import enumerated_payoffs, indifference_residuals


def _optimize_via_cli(tmp_path, **overrides):
    out = tmp_path / "opt.json"
    args = ["optimize-fee", *(f"--set={k}={v}" for k, v in {**FIG2, **overrides}.items()), "--out", str(out)]
    t0 = time.perf_counter()
    code = run_cli(args)
    elapsed = time.perf_counter() - t0
    assert code == 0
    return json.loads(out.read_text()), elapsed


def test_1_interior_fee_optimum(tmp_path, capsys, criterion):
    opt, elapsed = _optimize_via_cli(tmp_path)
    grid_f, grid_eu = grid_fee_optimum(step=1e-4)
    f, eu = opt["f_star"], opt["eu_star"]
    ok = (0 < f < 1 and abs(f - 0.30) <= 0.02 and abs(eu - 7.020) <= 0.002
          and abs(f - grid_f) <= 1e-3 and eu >= grid_eu - 1e-12 and elapsed < 1.0)
    assert criterion(1, "interior fee optimum", ok, f"f*={f:.6f} eu*={eu:.6f} in {elapsed:.3f}s")


def test_2_corner_fee_optimum(tmp_path, capsys, criterion):
    opt, elapsed = _optimize_via_cli(tmp_path, w=4)
    f, eu = opt["f_star"], opt["eu_star"]
    ok = f == 1.0 and abs(eu - 7.5055) <= 0.001 and grid_fee_optimum(step=1e-4, w=4.0)[0] == 1.0
    assert criterion(2, "corner fee optimum", ok, f"f*={f!r} eu*={eu:.6f}")


def test_3_precision_fee_monotonicity(criterion):
    base = GameParams(f=0.0, **FIG2)
    fs = [optimize_fee(base.replace(beta=b)).f_star for b in (0.1, 0.3, 0.5)]
    ok = fs[0] >= fs[1] >= fs[2]
    assert criterion(3, "f*(beta) non-increasing", ok, "f* = " + ", ".join(f"{x:.4f}" for x in fs))


def test_4_indifference_and_regret(criterion):
    rng = np.random.default_rng(4)
    draws = [GameParams(**random_mixed(rng, margin=1e-6)) for _ in range(1000)]
    t0 = time.perf_counter()
    worst = dict(res_app=0.0, res_plat=0.0, res_plat_formula=0.0, regret=0.0)
    all_mixed = True
    for p in draws:
        eq = solve_equilibrium(p)
        all_mixed &= eq.regime is Regime.MIXED
        res_app, res_plat = indifference_residuals(p, eq.profile)
        rep = verify_equilibrium(p, eq, tol=1e-9)
        worst["res_app"] = max(worst["res_app"], abs(res_app))
        worst["res_plat"] = max(worst["res_plat"], abs(res_plat))
        worst["res_plat_formula"] = max(worst["res_plat_formula"],
                                        abs(platform_indifference_residual(p, eq.posterior_cheat_given_s)))
        worst["regret"] = max(worst["regret"], rep.regret_app, rep.regret_platform_at_s)
    elapsed = time.perf_counter() - t0
    ok = (all_mixed and worst["res_app"] <= 1e-12 and worst["res_plat"] <= 1e-12
          and worst["res_plat_formula"] <= 1e-12 and worst["regret"] <= 1e-9 and elapsed < 5.0)
    detail = " ".join(f"{k}={v:.1e}" for k, v in worst.items()) + f" in {elapsed:.2f}s"
    assert criterion(4, "indifference residuals and regrets", ok, detail)


def test_5_corollary1_signs(criterion):
    rng = np.random.default_rng(5)
    expected = {("P_c", "f"): 1, ("P_c", "v"): 1, ("P_c", "alpha"): 1, ("P_c", "beta"): 1,
                ("P_c", "w"): -1, ("P_b", "alpha"): 1, ("P_b", "beta"): 1}
    bad = []
    flat = True
    for _ in range(1000):
        p = GameParams(**random_mixed(rng))
        for (target, wrt), sign in expected.items():
            if not sign * comparative_static(p, target, wrt, h=1e-6) > 0:
                bad.append((target, wrt))
        flat &= comparative_static(p, "P_b", "f", h=1e-6) == 0.0
    ok = not bad and flat
    assert criterion(5, "Corollary 1 signs", ok, f"1000 draws, {len(bad)} sign violations, dP_b/df==0: {flat}")


def test_6_corollary2(criterion):
    curves = RatingCurves(Curve.constant(0.1), Curve.constant(0.1), Curve.affine(0.0, 1.0))
    rs = [round(0.1 * k, 1) for k in range(1, 10)]
    eqs = [solve_equilibrium(curves.params(r, gamma=1.0, f=0.5, v=9.0, w=3.0)) for r in rs]
    pc = [e.p_cheat for e in eqs if e.regime is Regime.MIXED]
    ok = len(pc) >= 2 and all(b > a for a, b in zip(pc, pc[1:]))
    assert criterion(6, "Corollary 2: P_c increasing in r", ok, f"{len(pc)} Mixed points")


def test_7_monte_carlo_agreement(criterion):
    rng = np.random.default_rng(7)
    cases = []
    for i in range(50):
        p = GameParams(**random_params(rng))
        prof = solve_equilibrium(p).profile if i % 2 == 0 else StrategyProfile(rng.random(), rng.random())
        cases.append((p, prof, 1_000_000 + i))
    t0 = time.perf_counter()
    first = [monte_carlo_payoffs(p, prof, n=1_000_000, seed=s) for p, prof, s in cases]
    second = [monte_carlo_payoffs(p, prof, n=1_000_000, seed=s) for p, prof, s in cases]
    elapsed = time.perf_counter() - t0
    misses = 0
    for (p, prof, _), est in zip(cases, first):
        app, plat = brute_force_payoffs(p.as_dict(), prof.p_cheat, prof.p_ban_given_s)
        if (abs(est.mean_app - app) > 4 * est.std_err_app + 1e-12
                or abs(est.mean_platform - plat) > 4 * est.std_err_platform + 1e-12):
            misses += 1
    identical = first == second
    ok = misses == 0 and identical and elapsed < 30.0
    assert criterion(7, "Monte Carlo vs enumeration", ok,
                     f"{misses}/50 outside 4 SE, reruns identical: {identical}, {elapsed:.1f}s")


def test_8_prop2_consistency(criterion):
    rng = np.random.default_rng(8)
    worst = 0.0
    regimes = set()
    for i in range(3000):
        raw = random_params(rng)
        if i % 10 == 0:
            raw["alpha"] = 0.0
        p = GameParams(**raw)
        eq = solve_equilibrium(p)
        regimes.add(eq.regime)
        _, plat = enumerated_payoffs(p, eq.profile)
        worst = max(worst, abs(platform_equilibrium_utility(p) - plat))
    for kw in ({"w": 0.5}, {"l": 0.5, "alpha": 0.2, "r": 0.2, "beta": 0.5}):
        p = GameParams(**{**FIG2, "f": 0.5, **kw})
        eq = solve_equilibrium(p)
        regimes.add(eq.regime)
        worst = max(worst, abs(platform_equilibrium_utility(p) - enumerated_payoffs(p, eq.profile)[1]))
    p = GameParams(**{**FIG2, "f": 0.5, "r": 1.0}, allow_top_rating=True)
    regimes.add(solve_equilibrium(p).regime)
    worst = max(worst, abs(platform_equilibrium_utility(p) - enumerated_payoffs(p, solve_equilibrium(p).profile)[1]))
    ok = worst <= 1e-10 and len(regimes) == len(Regime)
    assert criterion(8, "equilibrium utility equals enumeration", ok,
                     f"max |diff|={worst:.1e} over {len(regimes)} regimes")
