"""Harris hawks optimization.

Each hawk's escape energy ``E = E1 * E0`` (``E1 = 2*(1 - g/H)`` decaying,
``E0`` uniform on [-1, 1]) selects the phase:

* ``|E| >= 1`` exploration: perch on a random hawk or relative to the
  population mean;
* ``|E| < 1`` exploitation: soft (``r >= 0.5, |E| >= 0.5``) or hard
  (``r >= 0.5, |E| < 0.5``) besiege replace the hawk unconditionally, while
  the rapid-dive variants (``r < 0.5``) evaluate a dive point Y (and, if Y
  fails, a Levy-flight point Z) and accept it only on strict improvement.

Dive comparisons use the hawk's cached objective value and the population
mean is taken at the start of the generation (see the fidelity notes).
Extra dive evaluations are counted in the evaluations total.
"""

from __future__ import annotations

import math

import numpy as np

from . import AlgoState, advance, schedule_fraction, sentinel_values, track_batch

_LEVY_BETA_SIGMA_CACHE = {}


def _levy_sigma(beta: float) -> float:
    if beta not in _LEVY_BETA_SIGMA_CACHE:
        num = math.gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0)
        den = math.gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0)
        _LEVY_BETA_SIGMA_CACHE[beta] = (num / den) ** (1.0 / beta)
    return _LEVY_BETA_SIGMA_CACHE[beta]


def init_memory(state: AlgoState) -> dict:
    return {}


def step(state: AlgoState) -> AlgoState:
    X = state.population
    vals = state.values
    n, dim = X.shape
    gen = state.gen_rng
    domain = state.objective.domain
    lo, hi = domain.lo, domain.hi
    beta = state.params.get("levy_beta")
    scale = state.params.get("levy_scale")
    rabbit = state.tracker.best_point
    mean = X.mean(axis=0)
    e1 = 2.0 * (1.0 - schedule_fraction(state.generation, state.params.schedule_horizon))

    # One fixed block of draws per generation keeps the stream layout
    # independent of which branches fire.
    e0 = gen.uniform(-1.0, 1.0, size=n)
    q = gen.random(n)
    perch_idx = gen.integers(0, n, size=n)
    ra = gen.random(n)
    rb = gen.random(n)
    r = gen.random(n)
    jump = 2.0 * (1.0 - gen.random(n))
    dive_rand = gen.random((n, dim))
    levy_u = gen.standard_normal((n, dim))
    levy_v = gen.standard_normal((n, dim))

    E = e1 * e0
    absE = np.abs(E)
    explore = absE >= 1.0
    soft = ~explore & (r >= 0.5) & (absE >= 0.5)
    hard = ~explore & (r >= 0.5) & (absE < 0.5)
    soft_dive = ~explore & (r < 0.5) & (absE >= 0.5)
    hard_dive = ~explore & (r < 0.5) & (absE < 0.5)

    new_X = X.copy()
    new_vals = vals.copy()

    # --- unconditional-replacement branches, evaluated as one batch
    perch = q < 0.5
    cand = np.empty((n, dim))
    Xr = X[perch_idx]
    cand[explore & perch] = (
        Xr - ra[:, None] * np.abs(Xr - 2.0 * rb[:, None] * X)
    )[explore & perch]
    cand[explore & ~perch] = (
        (rabbit[None, :] - mean[None, :])
        - ra[:, None] * (lo[None, :] + rb[:, None] * (hi - lo)[None, :])
    )[explore & ~perch]
    cand[soft] = (
        (rabbit[None, :] - X)
        - E[:, None] * np.abs(jump[:, None] * rabbit[None, :] - X)
    )[soft]
    cand[hard] = (
        rabbit[None, :] - E[:, None] * np.abs(rabbit[None, :] - X)
    )[hard]

    uncond = explore | soft | hard
    evaluated = 0
    if uncond.any():
        moved = np.clip(cand[uncond], lo, hi)
        mvals = sentinel_values(state.objective.value_batch(moved))
        new_X[uncond] = moved
        new_vals[uncond] = mvals
        evaluated += int(uncond.sum())
        tracker = track_batch(state.tracker, moved, mvals, state.generation + 1)
    else:
        tracker = state.tracker

    # --- rapid-dive branches: Y always tried, Z only where Y fails
    diving = soft_dive | hard_dive
    if diving.any():
        Y = np.empty((n, dim))
        Y[soft_dive] = (
            rabbit[None, :]
            - E[:, None] * np.abs(jump[:, None] * rabbit[None, :] - X)
        )[soft_dive]
        Y[hard_dive] = (
            rabbit[None, :]
            - E[:, None] * np.abs(jump[:, None] * rabbit[None, :] - mean[None, :])
        )[hard_dive]
        sigma = _levy_sigma(beta)
        levy = scale * sigma * levy_u / np.abs(levy_v) ** (1.0 / beta)
        Z = Y + dive_rand * levy

        idx = np.flatnonzero(diving)
        Yc = np.clip(Y[idx], lo, hi)
        yvals = sentinel_values(state.objective.value_batch(Yc))
        evaluated += idx.size
        tracker = track_batch(tracker, Yc, yvals, state.generation + 1)
        accept_y = yvals < vals[idx]
        new_X[idx[accept_y]] = Yc[accept_y]
        new_vals[idx[accept_y]] = yvals[accept_y]

        zidx = idx[~accept_y]
        if zidx.size:
            Zc = np.clip(Z[zidx], lo, hi)
            zvals = sentinel_values(state.objective.value_batch(Zc))
            evaluated += zidx.size
            tracker = track_batch(tracker, Zc, zvals, state.generation + 1)
            accept_z = zvals < vals[zidx]
            new_X[zidx[accept_z]] = Zc[accept_z]
            new_vals[zidx[accept_z]] = zvals[accept_z]

    return advance(state, new_X, new_vals, tracker, evaluated=evaluated)
