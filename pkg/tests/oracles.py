"""Reference computations that share no code with the package.

``brute_force_payoffs`` walks the full 2x2x2x2 tree of chance and choice
layers from first principles. ``prop2_utility`` and ``grid_fee_optimum``
restate the platform's equilibrium utility directly from the three regime
conditions.
"""

import itertools

import numpy as np

FIG2 = dict(gamma=1.0, r=0.6, alpha=0.1, beta=0.1, l=0.6, v=9.0, w=3.0)


def brute_force_payoffs(p, pc, pb):
    g, r, f, a, b, l, v, w = (p[k] for k in ("gamma", "r", "f", "alpha", "beta", "l", "v", "w"))
    app = plat = 0.0
    for cheat, top, alert, ban in itertools.product((True, False), repeat=4):
        prob = pc if cheat else 1 - pc
        if cheat:
            if not top:
                continue  # cheating always reaches the top rating
        else:
            prob *= l if top else 1 - l
        if not top and alert:
            continue  # no alert below the top rating
        if top:
            p_alert = (1 - b) if cheat else a
            prob *= p_alert if alert else 1 - p_alert
        if not alert and ban:
            continue  # platform moves only after an alert
        if alert:
            prob *= pb if ban else 1 - pb
        if ban:
            continue  # both payoffs 0
        rating = 1.0 if top else r
        app += prob * g * rating * (1 - f)
        plat += prob * (g * rating * f + (-w if cheat else v))
    return app, plat


def prop2_utility(g, r, f, a, b, l, v, w):
    thr = l - a * l + r - r * l
    if w < g * f:
        return g * f - w
    if thr < b:
        return b * (g * f - w)
    pc = a * l * (g * f + v) / (a * l * (g * f + v) + (1 - b) * (w - g * f))
    return (1 - pc) * (g * f * ((1 - l) * r + l) + v) + pc * (g * f - w)


def grid_fee_optimum(step=1e-4, **kw):
    p = {**FIG2, **kw}
    fs = np.linspace(0, 1, int(round(1 / step)) + 1)
    eu = np.array([prop2_utility(p["gamma"], p["r"], f, p["alpha"], p["beta"], p["l"], p["v"], p["w"]) for f in fs])
    i = int(np.argmax(eu))
    return fs[i], eu[i]


def random_mixed(rng, margin=1e-3):
    """A parameter dict strictly inside the Mixed regime, with a safety margin."""
    while True:
        p = dict(
            gamma=rng.uniform(0.2, 3.0),
            r=rng.uniform(0.0, 0.95),
            f=rng.uniform(0.01, 0.99),
            alpha=rng.uniform(0.02, 0.98),
            beta=rng.uniform(0.0, 0.95),
            l=rng.uniform(0.02, 0.98),
            v=rng.uniform(0.1, 10.0),
        )
        p["w"] = p["gamma"] * p["f"] + rng.uniform(0.05, 10.0)
        thr = p["l"] - p["alpha"] * p["l"] + p["r"] - p["r"] * p["l"]
        if thr - p["beta"] > margin and 0 < p["beta"] - margin and p["f"] + margin < 1:
            return p


def random_params(rng):
    """Uniform draws over the whole valid box; lands in every generic regime."""
    return dict(
        gamma=rng.uniform(0.1, 3.0),
        r=rng.uniform(0.0, 0.99),
        f=rng.uniform(0.0, 1.0),
        alpha=rng.uniform(0.0, 1.0),
        beta=rng.uniform(0.0, 0.99),
        l=rng.uniform(0.01, 0.99),
        v=rng.uniform(0.1, 10.0),
        w=rng.uniform(0.05, 4.0),
    )
