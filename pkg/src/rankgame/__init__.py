"""Solver and verifier for the platform/application rating-manipulation game."""

from rankgame.analysis import (
    Curve,
    FeeOptimum,
    RatingCurves,
    SweepRow,
    comparative_static,
    optimize_fee,
    platform_equilibrium_utility,
    sweep,
)
from rankgame.equilibrium import (
    Equilibrium,
    Regime,
    RegimeMismatch,
    SignalImpossible,
    classify_regime,
    mixed_ban_probability,
    mixed_cheat_probability,
    posterior_cheat_given_signal,
    solve_equilibrium,
)
from rankgame.game_core import (
    GameParams,
    Outcome,
    OutOfRange,
    ParamError,
    PayoffPair,
    RankGameError,
    Signal,
    StrategyProfile,
    TopRatingError,
    enumerate_leaves,
    expected_payoffs,
    leaf_payoffs,
    validate_params,
)
from rankgame.oracle import (
    McEstimate,
    VerificationReport,
    best_response_regret,
    monte_carlo_payoffs,
    verify_equilibrium,
)

__version__ = "0.1.0"
