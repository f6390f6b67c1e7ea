"""Platform-side economics: equilibrium utility, fee choice, comparative statics, sweeps."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from rankgame.equilibrium import (
    Regime,
    RegimeMismatch,
    classify_regime,
    mixed_ban_probability,
    mixed_cheat_probability,
    solve_equilibrium,
)
from rankgame.game_core import PARAM_NAMES, GameParams, RankGameError, StrategyProfile, expected_payoffs, validate_params

log = logging.getLogger(__name__)

CURVE_EPS = 1e-9
GOLDEN_ITERATIONS = 64
INV_PHI = (math.sqrt(5) - 1) / 2


class CurveError(RankGameError, ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    """``constant(k)`` or ``affine(a, b) = a + b*r``, clamped to [eps, 1 - eps]."""

    kind: str
    a: float
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "affine"):
            raise CurveError(f"unknown curve kind {self.kind!r}")
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise CurveError("curve coefficients must be finite")

    @classmethod
    def constant(cls, k: float) -> "Curve":
        return cls("constant", float(k), 0.0)

    @classmethod
    def affine(cls, a: float, b: float) -> "Curve":
        return cls("affine", float(a), float(b))

    @classmethod
    def parse(cls, text: str) -> "Curve":
        """Parse ``constant:K`` or ``affine:A:B``."""
        parts = text.strip().split(":")
        try:
            if parts[0] == "constant" and len(parts) == 2:
                return cls.constant(float(parts[1]))
            if parts[0] == "affine" and len(parts) == 3:
                return cls.affine(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise CurveError(f"bad curve spec {text!r}: {exc}") from None
        raise CurveError(f"bad curve spec {text!r}; expected constant:K or affine:A:B")

    @property
    def slope(self) -> float:
        return self.b if self.kind == "affine" else 0.0

    def __call__(self, r: float) -> float:
        raw = self.a if self.kind == "constant" else self.a + self.b * r
        return min(max(raw, CURVE_EPS), 1 - CURVE_EPS)

    def __str__(self) -> str:
        if self.kind == "constant":
            return f"constant:{self.a:g}"
        return f"affine:{self.a:g}:{self.b:g}"


@dataclass(frozen=True)
class RatingCurves:
    """Detection errors and honest success probability as functions of the rating.

    ``l_fn`` must be strictly increasing and ``beta_fn`` weakly increasing;
    ``alpha_fn`` has no shape restriction. Clamping can flatten an affine curve
    near 0 or 1; that is tolerated.
    """

    alpha_fn: Curve
    beta_fn: Curve
    l_fn: Curve

    def __post_init__(self):
        if self.l_fn.slope <= 0:
            raise CurveError(f"l curve must be strictly increasing in r, got {self.l_fn}")
        if self.beta_fn.slope < 0:
            raise CurveError(f"beta curve must be weakly increasing in r, got {self.beta_fn}")

    def at(self, r: float) -> dict[str, float]:
        return {"alpha": self.alpha_fn(r), "beta": self.beta_fn(r), "l": self.l_fn(r)}

    def params(self, r: float, gamma: float, f: float, v: float, w: float) -> GameParams:
        return GameParams(gamma=gamma, r=r, f=f, v=v, w=w, **self.at(r))


def platform_equilibrium_utility(params: GameParams) -> float:
    """Platform's expected utility in the equilibrium selected by :func:`solve_equilibrium`."""
    regime = classify_regime(params)
    g, f, b, l, r, v, w = params.gamma, params.f, params.beta, params.l, params.r, params.v, params.w
    if regime is Regime.NO_BAN_CHEAT:
        return g * f - w
    if regime in (Regime.BAN_CHEAT, Regime.ALPHA_ZERO_CHEAT):
        return b * (g * f - w)
    if regime is Regime.MIXED:
        pc = mixed_cheat_probability(params)
        return (1 - pc) * (g * f * ((1 - l) * r + l) + v) + pc * (g * f - w)
    if regime is Regime.TRIVIAL_TOP_RATING:
        return g * f + v
    if regime is Regime.ALPHA_ZERO_HONEST:
        return expected_payoffs(params, StrategyProfile(0.0, 1.0)).eu_platform
    eq = solve_equilibrium(params)
    log.debug("boundary regime at %s; utility from profile %s", params, eq.profile)
    return eq.eu_platform


@dataclass(frozen=True)
class FeeOptimum:
    f_star: float
    eu_star: float
    regime_at_star: Regime
    grid_resolution: float
    refined: bool


def _golden_max(fn, lo: float, hi: float, iterations: int = GOLDEN_ITERATIONS) -> tuple[float, float]:
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = fn(c), fn(d)
    for _ in range(iterations):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = fn(d)
    return (c, fc) if fc >= fd else (d, fd)


def optimize_fee(params: GameParams, step: float = 1e-3) -> FeeOptimum:
    """Fee in [0, 1] maximising the platform's equilibrium utility.

    ``params.f`` is ignored. The objective is piecewise: it switches regime at
    ``f = w / gamma``, where it can jump when ``alpha == 0``. The scan always
    includes that switch point, and the golden-section polish never crosses it.
    Ties on the grid go to the smaller fee.
    """
    if not 0 < step <= 0.1:
        raise ValueError(f"grid step must lie in (0, 0.1], got {step}")

    def objective(f: float) -> float:
        return platform_equilibrium_utility(params.replace(f=f))

    n = int(math.ceil(1 / step - 1e-9))
    grid = list(np.linspace(0.0, 1.0, n + 1))
    switch = params.w / params.gamma
    if 0 <= switch <= 1 and switch not in grid:
        grid = sorted(grid + [switch])
    values = [objective(f) for f in grid]
    i = int(np.argmax(values))
    f_best, eu_best = grid[i], values[i]

    if 0 <= switch <= 1:
        left = _piece_limit(params, switch, side=-1)
        right = _piece_limit(params, switch, side=+1)
        at = objective(switch)
        if max(left, right) > at + 1e-12:
            log.warning("one-sided utility limit %.9g at f=%.9g is not attained (value %.9g)",
                        max(left, right), switch, at)

    refined = False
    if f_best != switch:
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, len(grid) - 1)]
        if lo < switch < hi:
            lo, hi = (switch, hi) if f_best > switch else (lo, switch)
        if hi > lo:
            f_ref, eu_ref = _golden_max(objective, lo, hi)
            if eu_ref > eu_best:
                f_best, eu_best, refined = f_ref, eu_ref, True

    return FeeOptimum(
        f_star=float(f_best),
        eu_star=float(eu_best),
        regime_at_star=classify_regime(params.replace(f=f_best)),
        grid_resolution=step,
        refined=refined,
    )


def _piece_limit(params: GameParams, f: float, side: int) -> float:
    # closed form of the regime piece on one side of the switch, evaluated at the switch
    g, w = params.gamma, params.w
    if side > 0:
        return g * f - w
    regime = classify_regime(params.replace(f=max(f - 1e-6, 0.0)))
    if regime is Regime.MIXED:
        return g * f - w  # cheat probability tends to 1
    if regime in (Regime.BAN_CHEAT, Regime.ALPHA_ZERO_CHEAT):
        return params.beta * (g * f - w)
    if regime is Regime.ALPHA_ZERO_HONEST:
        return g * f * ((1 - params.l) * params.r + params.l) + params.v
    return platform_equilibrium_utility(params.replace(f=f))


_TARGETS = {
    "P_c": mixed_cheat_probability,
    "P_b": mixed_ban_probability,
    "EU_P": platform_equilibrium_utility,
}


def comparative_static(params: GameParams, target: str, wrt: str, h: float = 1e-6) -> float:
    """Central difference of ``target`` in ``wrt``; every point must be Mixed."""
    if target not in _TARGETS:
        raise ValueError(f"target must be one of {sorted(_TARGETS)}, got {target!r}")
    if wrt not in PARAM_NAMES:
        raise ValueError(f"unknown parameter {wrt!r}")
    x = getattr(params, wrt)
    points = [params, params.replace(**{wrt: x + h}), params.replace(**{wrt: x - h})]
    for p in points:
        regime = classify_regime(p)
        if regime is not Regime.MIXED:
            raise RegimeMismatch(f"{wrt}={getattr(p, wrt)!r} is in regime {regime}, not Mixed")
    fn = _TARGETS[target]
    return (fn(points[1]) - fn(points[2])) / (2 * h)


@dataclass(frozen=True)
class SweepRow:
    axis: str
    value: float
    p_cheat: float
    p_ban: float
    posterior: float
    eu_app: float
    eu_platform: float
    regime: str
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def point_params(base: Mapping[str, float] | GameParams, axis: str, value: float,
                 curves: RatingCurves | None = None) -> GameParams:
    """Parameters at one sweep point; curves (if any) supply alpha, beta, l from r."""
    values = dict(base.as_dict() if isinstance(base, GameParams) else base)
    values[axis] = value
    if curves is not None:
        for name, x in curves.at(values["r"]).items():
            if name != axis:
                values[name] = x
    return validate_params(values)


def solve_row(params: GameParams, axis: str, value: float) -> SweepRow:
    eq = solve_equilibrium(params)
    return SweepRow(
        axis=axis,
        value=value,
        p_cheat=eq.p_cheat,
        p_ban=eq.p_ban,
        posterior=math.nan if eq.posterior_cheat_given_s is None else eq.posterior_cheat_given_s,
        eu_app=eq.eu_app,
        eu_platform=platform_equilibrium_utility(params),
        regime=str(eq.regime),
    )


def sweep(base: Mapping[str, float] | GameParams, axis: str, values: Iterable[float],
          curves: RatingCurves | None = None) -> list[SweepRow]:
    """Solve the game at each axis value. Invalid points keep a row with ``error`` set."""
    if axis not in PARAM_NAMES:
        raise ValueError(f"unknown sweep axis {axis!r}")
    rows = []
    for value in sorted(float(x) for x in values):
        try:
            params = point_params(base, axis, value, curves)
        except RankGameError as exc:
            nan = math.nan
            rows.append(SweepRow(axis, value, nan, nan, nan, nan, nan, "", error=str(exc)))
            continue
        rows.append(solve_row(params, axis, value))
    return rows


def axis_values(start: float, stop: float, steps: int) -> Sequence[float]:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return [float(start)]
    return [float(x) for x in np.linspace(start, stop, steps)]
