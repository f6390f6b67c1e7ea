"""Parameters, outcomes and payoffs of the platform/application game.

The application (A) either cheats or stays honest. A cheater reaches rating 1
for sure; an honest app reaches rating 1 with probability ``l`` and otherwise
keeps its current rating ``r``. Reaching rating 1 triggers a noisy alert: an
honest app is flagged with probability ``alpha``, a cheater escapes the flag
with probability ``beta``. Only after an alert does the platform (P) move,
choosing whether to ban (rating set to 0, both players get 0).

Leaf payoffs:

    app       gamma * r2 * (1 - f)
    platform  gamma * r2 * f - w   (cheated, not banned)
              gamma * r2 * f + v   (honest, not banned)
              0                    (banned)

The ``+v`` on the honest branch that never reaches rating 1 is not spelled out
in the game-tree figure text; it is the convention that makes the platform's
equilibrium utility come out as ``gamma*f*((1-l)*r + l) + v`` on the honest
side.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields
from typing import Iterator, Mapping

PARAM_NAMES = ("gamma", "r", "f", "alpha", "beta", "l", "v", "w")


class RankGameError(Exception):
    """Base class for all errors raised by this package."""


@dataclass(frozen=True)
class OutOfRange:
    field: str
    value: float
    bound: str

    def __str__(self) -> str:
        return f"{self.field}={self.value!r} violates {self.bound}"


class ParamError(RankGameError, ValueError):
    """One or more parameters are outside their admissible range."""

    def __init__(self, violations: list[OutOfRange]):
        self.violations = list(violations)
        super().__init__("invalid parameters: " + "; ".join(map(str, self.violations)))

    @property
    def fields(self) -> list[str]:
        return [v.field for v in self.violations]


class TopRatingError(ParamError):
    """r = 1 was passed to the standard constructor.

    The top-rating case has a trivial equilibrium and must be requested
    explicitly with ``allow_top_rating=True``.
    """

    def __init__(self, value: float = 1.0):
        super().__init__([OutOfRange("r", value, "r < 1 (r = 1 is the trivial top-rating case)")])


def _bounds(name: str, x: float, allow_top_rating: bool) -> str | None:
    if not isinstance(x, (int, float)) or isinstance(x, bool) or not math.isfinite(x):
        return "a finite real number"
    checks = {
        "gamma": (x > 0, "gamma > 0"),
        "v": (x > 0, "v > 0"),
        "w": (x > 0, "w > 0"),
        "f": (0 <= x <= 1, "0 <= f <= 1"),
        "r": (0 <= x <= 1 if allow_top_rating else 0 <= x < 1, "0 <= r < 1"),
        "l": (0 < x < 1, "0 < l < 1"),
        "alpha": (0 <= x <= 1, "0 <= alpha <= 1"),
        "beta": (0 <= x < 1, "0 <= beta < 1"),
    }
    ok, text = checks[name]
    return None if ok else text


@dataclass(frozen=True)
class GameParams:
    """Scalar model parameters at a fixed stage-one rating ``r``.

    Construction validates every bound and raises :class:`ParamError` naming
    all violations at once. ``r == 1`` raises :class:`TopRatingError` unless
    ``allow_top_rating=True``.
    """

    gamma: float
    r: float
    f: float
    alpha: float
    beta: float
    l: float
    v: float
    w: float
    allow_top_rating: bool = field(default=False, kw_only=True, repr=False, compare=False)

    def __post_init__(self):
        violations = []
        for name in PARAM_NAMES:
            value = getattr(self, name)
            bound = _bounds(name, value, self.allow_top_rating)
            if bound is not None:
                violations.append(OutOfRange(name, value, bound))
        if violations:
            if [v.field for v in violations] == ["r"] and self.r == 1:
                raise TopRatingError(self.r)
            raise ParamError(violations)
        for name in PARAM_NAMES:
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def honest_top_threshold(self) -> float:
        """Survival value of honesty against a ban-always platform: l - a*l + r - r*l."""
        return self.l - self.alpha * self.l + self.r - self.r * self.l

    def replace(self, **changes) -> "GameParams":
        values = self.as_dict()
        values.update(changes)
        return GameParams(**values, allow_top_rating=self.allow_top_rating)

    def scaled(self, kappa: float) -> "GameParams":
        """Multiply the money-valued parameters (gamma, v, w) by ``kappa``."""
        return self.replace(gamma=self.gamma * kappa, v=self.v * kappa, w=self.w * kappa)

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in PARAM_NAMES}


def validate_params(raw: Mapping[str, float], allow_top_rating: bool = False) -> GameParams:
    """Build :class:`GameParams` from a mapping, reporting every bad field.

    Missing and unknown keys are reported as violations alongside range errors.
    """
    violations = []
    unknown = sorted(set(raw) - set(PARAM_NAMES))
    for name in unknown:
        violations.append(OutOfRange(name, raw[name], "a known parameter name"))
    missing = [name for name in PARAM_NAMES if name not in raw]
    for name in missing:
        violations.append(OutOfRange(name, math.nan, "required"))
    for name in PARAM_NAMES:
        if name in raw:
            bound = _bounds(name, raw[name], allow_top_rating)
            if bound is not None:
                violations.append(OutOfRange(name, raw[name], bound))
    if violations:
        if [v.field for v in violations] == ["r"] and raw["r"] == 1:
            raise TopRatingError(raw["r"])
        raise ParamError(violations)
    return GameParams(**{name: raw[name] for name in PARAM_NAMES}, allow_top_rating=allow_top_rating)


@dataclass(frozen=True)
class StrategyProfile:
    """Behavioural strategies: A's cheat probability, P's ban probability after an alert."""

    p_cheat: float
    p_ban_given_s: float

    def __post_init__(self):
        bad = [
            OutOfRange(f.name, getattr(self, f.name), "0 <= p <= 1")
            for f in fields(self)
            if not (isinstance(getattr(self, f.name), (int, float)) and 0 <= getattr(self, f.name) <= 1)
        ]
        if bad:
            raise ParamError(bad)
        object.__setattr__(self, "p_cheat", float(self.p_cheat))
        object.__setattr__(self, "p_ban_given_s", float(self.p_ban_given_s))


class Signal(enum.Enum):
    S = "s"
    NOT_S = "not_s"


@dataclass(frozen=True)
class Outcome:
    """A terminal node of the game tree.

    ``rating_final`` is the post-ban rating, so it is 0 exactly when banned.
    """

    cheated: bool
    rating_final: float
    signal: Signal
    banned: bool

    def __post_init__(self):
        if self.banned and self.rating_final != 0:
            raise ValueError("a banned application has final rating 0")
        if self.banned and self.signal is not Signal.S:
            raise ValueError("the platform only bans after an alert")
        if self.signal is Signal.S and not self.banned and self.rating_final != 1:
            raise ValueError("an alert is only sent at rating 1")


@dataclass(frozen=True)
class PayoffPair:
    eu_app: float
    eu_platform: float


def leaf_payoffs(params: GameParams, outcome: Outcome) -> PayoffPair:
    if outcome.banned:
        return PayoffPair(0.0, 0.0)
    revenue = params.gamma * outcome.rating_final
    app = revenue * (1 - params.f)
    platform = revenue * params.f + (-params.w if outcome.cheated else params.v)
    return PayoffPair(app, platform)


def enumerate_leaves(params: GameParams, profile: StrategyProfile) -> Iterator[tuple[float, Outcome]]:
    """Yield ``(path probability, outcome)`` for the seven leaves of the tree.

    Zero-probability leaves are included so the leaf set does not depend on
    the profile.
    """
    pc, pb = profile.p_cheat, profile.p_ban_given_s
    a, b, l, r = params.alpha, params.beta, params.l, params.r

    # cheater: rating 1 before the platform moves
    yield pc * (1 - b) * pb, Outcome(True, 0.0, Signal.S, True)
    yield pc * (1 - b) * (1 - pb), Outcome(True, 1.0, Signal.S, False)
    yield pc * b, Outcome(True, 1.0, Signal.NOT_S, False)
    # honest
    yield (1 - pc) * l * a * pb, Outcome(False, 0.0, Signal.S, True)
    yield (1 - pc) * l * a * (1 - pb), Outcome(False, 1.0, Signal.S, False)
    yield (1 - pc) * l * (1 - a), Outcome(False, 1.0, Signal.NOT_S, False)
    yield (1 - pc) * (1 - l), Outcome(False, r, Signal.NOT_S, False)


def expected_payoffs(params: GameParams, profile: StrategyProfile) -> PayoffPair:
    """Exact expected payoffs of a behavioural profile (closed form)."""
    g, f, a, b, l, r, v, w = (params.gamma, params.f, params.alpha, params.beta,
                              params.l, params.r, params.v, params.w)
    pc, pb = profile.p_cheat, profile.p_ban_given_s
    share = g * (1 - f)

    app_cheat = share * (b + (1 - b) * (1 - pb))
    app_honest = share * ((1 - l) * r + l * (1 - a * pb))
    plat_cheat = ((1 - b) * (1 - pb) + b) * (g * f - w)
    plat_honest = l * (1 - a * pb) * (g * f + v) + (1 - l) * (g * r * f + v)

    return PayoffPair(
        pc * app_cheat + (1 - pc) * app_honest,
        pc * plat_cheat + (1 - pc) * plat_honest,
    )
