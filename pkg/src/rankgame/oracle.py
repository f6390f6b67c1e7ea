"""Independent checks on solver output.

Everything here is computed from the game tree itself (leaf enumeration or
simulated plays), never from the closed-form mixing probabilities, so a
passing report is evidence rather than tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from rankgame.equilibrium import Equilibrium, Regime
from rankgame.game_core import (
    GameParams,
    Outcome,
    Signal,
    StrategyProfile,
    enumerate_leaves,
    leaf_payoffs,
)

SHARD_SIZE = 1 << 16


@dataclass(frozen=True)
class VerificationReport:
    regret_app: float
    regret_platform_at_s: float
    indiff_residual_app: float = 0.0
    indiff_residual_platform: float = 0.0
    passed: bool = True
    off_path: bool = False  # alert has probability 0; platform regret not measured
    tol: float = 1e-9


def _enumerated(params: GameParams, profile: StrategyProfile) -> tuple[float, float]:
    app = platform = 0.0
    for prob, outcome in enumerate_leaves(params, profile):
        pay = leaf_payoffs(params, outcome)
        app += prob * pay.eu_app
        platform += prob * pay.eu_platform
    return app, platform


def enumerated_payoffs(params: GameParams, profile: StrategyProfile) -> tuple[float, float]:
    """Expected (app, platform) payoffs by summing path probability times leaf payoff."""
    return _enumerated(params, profile)


def _platform_value_at_s(params: GameParams, p_cheat: float, p_ban: float) -> tuple[float, float] | None:
    """(Pr(s), E[platform payoff | s]) when the platform bans with ``p_ban`` after s."""
    profile = StrategyProfile(p_cheat, p_ban)
    mass = value = 0.0
    for prob, outcome in enumerate_leaves(params, profile):
        if outcome.signal is Signal.S:
            mass += prob
            value += prob * leaf_payoffs(params, outcome).eu_platform
    if mass <= 0:
        return None
    return mass, value / mass


def best_response_regret(params: GameParams, profile: StrategyProfile, tol: float = 1e-9) -> VerificationReport:
    """Largest gain from a unilateral pure deviation at each decision point.

    The platform is judged at the "alert observed" information set, under the
    Bayes posterior implied by the app's strategy.
    """
    pc, pb = profile.p_cheat, profile.p_ban_given_s

    app_cheat, _ = _enumerated(params, StrategyProfile(1.0, pb))
    app_honest, _ = _enumerated(params, StrategyProfile(0.0, pb))
    app_mix = pc * app_cheat + (1 - pc) * app_honest
    regret_app = max(0.0, max(app_cheat, app_honest) - app_mix)

    keep = _platform_value_at_s(params, pc, 0.0)
    if keep is None:
        return VerificationReport(regret_app, 0.0, passed=regret_app <= tol, off_path=True, tol=tol)
    _, value_keep = keep
    _, value_ban = _platform_value_at_s(params, pc, 1.0)
    value_mix = pb * value_ban + (1 - pb) * value_keep
    regret_platform = max(0.0, max(value_ban, value_keep) - value_mix)

    return VerificationReport(
        regret_app=regret_app,
        regret_platform_at_s=regret_platform,
        passed=regret_app <= tol and regret_platform <= tol,
        tol=tol,
    )


def indifference_residuals(params: GameParams, profile: StrategyProfile) -> tuple[float, float]:
    """(app cheat-minus-honest payoff, platform keep-minus-ban payoff at s)."""
    pc, pb = profile.p_cheat, profile.p_ban_given_s
    app_cheat, _ = _enumerated(params, StrategyProfile(1.0, pb))
    app_honest, _ = _enumerated(params, StrategyProfile(0.0, pb))
    keep = _platform_value_at_s(params, pc, 0.0)
    ban = _platform_value_at_s(params, pc, 1.0)
    platform = math.nan if keep is None else keep[1] - ban[1]
    return app_cheat - app_honest, platform


def verify_equilibrium(params: GameParams, eq: Equilibrium, tol: float = 1e-9) -> VerificationReport:
    report = best_response_regret(params, eq.profile, tol=tol)
    res_app = res_platform = 0.0
    passed = report.passed
    if eq.regime is Regime.MIXED:
        res_app, res_platform = indifference_residuals(params, eq.profile)
        passed = passed and abs(res_app) <= tol and abs(res_platform) <= tol
    return VerificationReport(
        regret_app=report.regret_app,
        regret_platform_at_s=report.regret_platform_at_s,
        indiff_residual_app=res_app,
        indiff_residual_platform=res_platform,
        passed=passed,
        off_path=report.off_path,
        tol=tol,
    )


@dataclass(frozen=True)
class McEstimate:
    mean_app: float
    mean_platform: float
    std_err_app: float
    std_err_platform: float
    n: int
    seed: int


def _leaf_table(params: GameParams) -> list[Outcome]:
    # order must match the leaf codes assigned in _simulate_shard
    return [outcome for _, outcome in enumerate_leaves(params, StrategyProfile(0.5, 0.5))]


def _shard_rng(seed: int, shard: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(shard,))))


def _simulate_shard(params: GameParams, profile: StrategyProfile, size: int, rng: np.random.Generator) -> np.ndarray:
    """Play ``size`` games; return how many ended in each of the 7 leaves."""
    u = rng.random((size, 4))
    cheat = u[:, 0] < profile.p_cheat
    top = cheat | (u[:, 1] < params.l)
    flag_prob = np.where(cheat, 1 - params.beta, params.alpha)
    signal = top & (u[:, 2] < flag_prob)
    banned = signal & (u[:, 3] < profile.p_ban_given_s)

    code = np.empty(size, dtype=np.int64)
    code[cheat & banned] = 0
    code[cheat & signal & ~banned] = 1
    code[cheat & ~signal] = 2
    honest = ~cheat
    code[honest & banned] = 3
    code[honest & signal & ~banned] = 4
    code[honest & top & ~signal] = 5
    code[honest & ~top] = 6
    return np.bincount(code, minlength=7)


def monte_carlo_payoffs(params: GameParams, profile: StrategyProfile, n: int, seed: int,
                        shard_size: int = SHARD_SIZE) -> McEstimate:
    """Simulate ``n`` independent plays and estimate both expected payoffs.

    Play ``i`` belongs to shard ``i // shard_size``. Each shard draws four
    uniforms per play from PCG64 seeded by ``SeedSequence(seed,
    spawn_key=(shard,))``, so the result depends only on (seed, n, shard_size,
    params, profile). Shards can run in any order because only leaf counts are
    combined, and integer counts add exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if seed < 0 or seed >= 1 << 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    counts = np.zeros(7, dtype=np.int64)
    for shard, start in enumerate(range(0, n, shard_size)):
        size = min(shard_size, n - start)
        counts += _simulate_shard(params, profile, size, _shard_rng(seed, shard))

    leaves = [leaf_payoffs(params, o) for o in _leaf_table(params)]
    stats = []
    for values in ([p.eu_app for p in leaves], [p.eu_platform for p in leaves]):
        # pool leaves with equal payoff so a degenerate lottery has weight exactly 1
        pooled: dict[float, int] = {}
        for x, c in zip(values, counts):
            if c:
                pooled[x] = pooled.get(x, 0) + int(c)
        mean = math.fsum(c / n * x for x, c in pooled.items())
        var = math.fsum(c / n * (x - mean) ** 2 for x, c in pooled.items()) * n / (n - 1) if n > 1 else 0.0
        stats.append((mean, math.sqrt(var / n)))
    (mean_app, se_app), (mean_plat, se_plat) = stats
    return McEstimate(mean_app, mean_plat, se_app, se_plat, n, seed)
