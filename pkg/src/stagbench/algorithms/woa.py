"""Whale optimization algorithm.

Each whale draws per-whale scalars r1, r2, p and l every generation.  With
probability 1/2 it spirals around the best-so-far solution
(``|best - x| * exp(b*l) * cos(2*pi*l) + best``); otherwise it encircles
either the best solution (``|A| < 1``) or a randomly chosen whale
(``|A| >= 1``), with ``A = 2*a*r1 - a`` and ``C = 2*r2``.  ``a`` decays
linearly 2 -> 0 and the spiral parameter ``l`` is uniform on ``[a2 - 1, 1]``
with ``a2`` decaying -1 -> -2.  The random reference whale is drawn once per
whale rather than per dimension (see the fidelity notes).  Positions are
replaced unconditionally.
"""

from __future__ import annotations

import numpy as np

from . import AlgoState, advance, schedule_fraction, sentinel_values, track_batch


def init_memory(state: AlgoState) -> dict:
    return {}


def step(state: AlgoState) -> AlgoState:
    X = state.population
    n, dim = X.shape
    gen = state.gen_rng
    frac = schedule_fraction(state.generation, state.params.schedule_horizon)
    a = 2.0 * (1.0 - frac)
    a2 = -1.0 - frac
    b = state.params.get("spiral_b")
    leader = state.tracker.best_point

    r1 = gen.random(n)
    r2 = gen.random(n)
    p = gen.random(n)
    l = (a2 - 1.0) * gen.random(n) + 1.0
    ref_idx = gen.integers(0, n, size=n)

    A = (2.0 * a * r1 - a)[:, None]
    C = (2.0 * r2)[:, None]
    ref = X[ref_idx]

    explore = ref - A * np.abs(C * ref - X)
    encircle = leader[None, :] - A * np.abs(C * leader[None, :] - X)
    spiral = (
        np.abs(leader[None, :] - X) * np.exp(b * l)[:, None] * np.cos(2.0 * np.pi * l)[:, None]
        + leader[None, :]
    )

    hunt = np.where((np.abs(A) < 1.0), encircle, explore)
    moved = np.where((p < 0.5)[:, None], hunt, spiral)

    moved = np.clip(moved, state.objective.domain.lo, state.objective.domain.hi)
    vals = sentinel_values(state.objective.value_batch(moved))
    tracker = track_batch(state.tracker, moved, vals, state.generation + 1)
    return advance(state, moved, vals, tracker, evaluated=n)
