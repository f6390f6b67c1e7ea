"""Regime classification and closed-form equilibria.

Three generic regimes exist for ``0 < alpha`` and ``r < 1``:

* ``NoBanCheat`` when ``w < gamma*f``: letting a detected cheater through
  still pays, so the platform never bans and the app always cheats.
* ``BanCheat`` when ``l - alpha*l + r - r*l < beta``: the alert is so weak that
  cheating beats honesty even against a platform that always bans.
* ``Mixed`` otherwise, with both players mixing so that the other is
  indifferent.

Ties in either comparison are reported as ``Boundary`` (the equilibrium need
not be unique there). ``r == 1`` and ``alpha == 0`` are degenerate and solved
separately.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from rankgame.game_core import GameParams, RankGameError, StrategyProfile, expected_payoffs

EPS_CLASSIFY = 1e-12


class RegimeMismatch(RankGameError):
    """A closed form was requested outside the regime where it holds."""


class SignalImpossible(RankGameError):
    """The alert has probability zero, so no posterior is defined."""


class Regime(enum.Enum):
    NO_BAN_CHEAT = "NoBanCheat"
    BAN_CHEAT = "BanCheat"
    MIXED = "Mixed"
    BOUNDARY = "Boundary"
    TRIVIAL_TOP_RATING = "TrivialTopRating"
    ALPHA_ZERO_CHEAT = "AlphaZeroPure(cheats=True)"
    ALPHA_ZERO_HONEST = "AlphaZeroPure(cheats=False)"

    @property
    def is_alpha_zero(self) -> bool:
        return self in (Regime.ALPHA_ZERO_CHEAT, Regime.ALPHA_ZERO_HONEST)

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Equilibrium:
    regime: Regime
    profile: StrategyProfile
    posterior_cheat_given_s: float | None  # None when the alert has probability 0
    eu_app: float
    eu_platform: float
    non_unique: bool = False

    @property
    def p_cheat(self) -> float:
        return self.profile.p_cheat

    @property
    def p_ban(self) -> float:
        return self.profile.p_ban_given_s


def _fee_gap(params: GameParams) -> float:
    """w - gamma*f, zeroed when within relative tolerance."""
    revenue = params.gamma * params.f
    gap = params.w - revenue
    if abs(gap) <= EPS_CLASSIFY * max(1.0, abs(params.w), abs(revenue)):
        return 0.0
    return gap


def classify_regime(params: GameParams, eps: float = EPS_CLASSIFY) -> Regime:
    # NoBanCheat is checked before alpha == 0: not banning a known cheater
    # still pays when w < gamma*f, alert precision notwithstanding.
    if params.r == 1:
        return Regime.TRIVIAL_TOP_RATING
    revenue = params.gamma * params.f
    gap = params.w - revenue
    if abs(gap) <= eps * max(1.0, abs(params.w), abs(revenue)):
        return Regime.BOUNDARY
    if gap < 0:
        return Regime.NO_BAN_CHEAT
    threshold = params.honest_top_threshold
    if params.alpha == 0:
        return Regime.ALPHA_ZERO_CHEAT if params.beta > threshold else Regime.ALPHA_ZERO_HONEST
    if abs(threshold - params.beta) <= eps:
        return Regime.BOUNDARY
    if threshold < params.beta:
        return Regime.BAN_CHEAT
    return Regime.MIXED


def posterior_cheat_given_signal(params: GameParams, p_cheat: float) -> float:
    """Bayes belief that the app cheated, given an alert was observed."""
    cheat_and_s = p_cheat * (1 - params.beta)
    honest_and_s = (1 - p_cheat) * params.l * params.alpha
    denom = cheat_and_s + honest_and_s
    if denom <= 0:
        raise SignalImpossible(f"alert has probability 0 at p_cheat={p_cheat}")
    return cheat_and_s / denom


def _cheat_formula(params: GameParams) -> float:
    g, f, a, b, l, v, w = params.gamma, params.f, params.alpha, params.beta, params.l, params.v, params.w
    num = a * l * (g * f + v)
    return num / (num + (1 - b) * (w - g * f))


def _ban_formula(params: GameParams) -> float:
    return (1 - params.r) * (1 - params.l) / (1 - params.beta - params.alpha * params.l)


def mixed_cheat_probability(params: GameParams) -> float:
    """Cheat probability that leaves the platform indifferent after an alert."""
    regime = classify_regime(params)
    if regime is not Regime.MIXED:
        raise RegimeMismatch(f"cheat-mixing formula needs the Mixed regime, got {regime}")
    return _cheat_formula(params)


def mixed_ban_probability(params: GameParams) -> float:
    """Ban probability that leaves the app indifferent between cheating and not.

    Independent of gamma, f, v and w.
    """
    regime = classify_regime(params)
    if regime is not Regime.MIXED:
        raise RegimeMismatch(f"ban-mixing formula needs the Mixed regime, got {regime}")
    return _ban_formula(params)


def _boundary_profile(params: GameParams) -> StrategyProfile:
    # One admissible equilibrium on a tie. Prefer the mixing formulas, which
    # stay valid on the tie whenever they land in [0, 1].
    fee_tie = _fee_gap(params) == 0
    if params.alpha == 0:
        cheats = params.beta > params.honest_top_threshold
        return StrategyProfile(1.0 if cheats else 0.0, 1.0)
    if 1 - params.beta - params.alpha * params.l > 0:
        pb = _ban_formula(params)
        if 1 < pb <= 1 + 1e-9:  # threshold tie resolved within EPS_CLASSIFY
            pb = 1.0
        pc = 1.0 if fee_tie else _cheat_formula(params)
        if 0 <= pc <= 1 and 0 <= pb <= 1:
            return StrategyProfile(pc, pb)
    if fee_tie:
        # platform indifferent at posterior 1; app best-responds to a pure ban rule
        if params.beta > params.honest_top_threshold:
            return StrategyProfile(1.0, 1.0)
        return StrategyProfile(1.0, 0.0)
    return StrategyProfile(1.0, 1.0)


def _safe_posterior(params: GameParams, p_cheat: float) -> float | None:
    try:
        return posterior_cheat_given_signal(params, p_cheat)
    except SignalImpossible:
        return None


def solve_equilibrium(params: GameParams) -> Equilibrium:
    regime = classify_regime(params)
    if regime is Regime.TRIVIAL_TOP_RATING:
        profile = StrategyProfile(0.0, 0.0)
    elif regime is Regime.NO_BAN_CHEAT:
        profile = StrategyProfile(1.0, 0.0)
    elif regime in (Regime.BAN_CHEAT, Regime.ALPHA_ZERO_CHEAT):
        profile = StrategyProfile(1.0, 1.0)
    elif regime is Regime.ALPHA_ZERO_HONEST:
        profile = StrategyProfile(0.0, 1.0)
    elif regime is Regime.MIXED:
        profile = StrategyProfile(_cheat_formula(params), _ban_formula(params))
    else:
        profile = _boundary_profile(params)

    payoff = expected_payoffs(params, profile)
    return Equilibrium(
        regime=regime,
        profile=profile,
        posterior_cheat_given_s=_safe_posterior(params, profile.p_cheat),
        eu_app=payoff.eu_app,
        eu_platform=payoff.eu_platform,
        non_unique=regime is Regime.BOUNDARY,
    )


def platform_indifference_residual(params: GameParams, posterior: float) -> float:
    """Platform's gain from not banning over banning after an alert."""
    if not math.isfinite(posterior):
        raise ValueError("posterior must be finite")
    return params.gamma * params.f - params.w * posterior + params.v * (1 - posterior)
