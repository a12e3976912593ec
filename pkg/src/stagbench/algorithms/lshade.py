"""Success-history adaptive differential evolution with linear population
size reduction (L-SHADE).

Per generation, each individual draws a success-history slot and samples
``CR ~ N(M_CR, 0.1)`` (clipped to [0, 1]; a slot holding the terminal value
forces CR = 0) and ``F ~ Cauchy(M_F, 0.1)`` (resampled while non-positive,
truncated at 1), builds a current-to-pbest/1 mutant

    v = x + F * (x_pbest - x) + F * (x_r1 - x_r2)

with ``x_pbest`` among the best ``max(2, round(0.11 * N))`` individuals,
``r1`` from the population and ``r2`` from population + archive, then
binomial crossover with a forced dimension.  Strict improvements replace
the parent, send the parent to the archive (random eviction above
``round(2.6 * N)`` entries) and record (F, CR) weighted by the fitness
drop; the slot means are updated with weighted Lehmer means and an all-zero
success CR batch makes the slot terminal.  The population shrinks linearly
in generations from ``18 * dim`` to 4 across the schedule horizon, dropping
the worst members.  See the fidelity notes for the deviations from the
original (clamping instead of midpoint repair, strict-improvement
replacement, generation-denominated reduction).
"""

from __future__ import annotations

import numpy as np

from . import AlgoState, advance, sentinel_values, track_batch


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def init_memory(state: AlgoState) -> dict:
    h = int(state.params.get("memory_size"))
    return {
        "m_f": np.full(h, 0.5),
        "m_cr": np.full(h, 0.5),
        "k": 0,
        "archive": np.empty((0, state.objective.dim)),
        "pop_init": state.params.pop_size,
    }


def step(state: AlgoState) -> AlgoState:
    X = state.population
    vals = state.values
    n, dim = X.shape
    gen = state.gen_rng
    mem = state.memory
    params = state.params
    h = mem["m_f"].size
    archive = mem["archive"]

    order = np.argsort(vals, kind="stable")
    p_num = max(2, _round_half_up(params.get("p_best_fraction") * n))

    r_mem = gen.integers(0, h, size=n)
    cr = mem["m_cr"][r_mem] + 0.1 * gen.standard_normal(n)
    cr = np.clip(cr, 0.0, 1.0)
    cr[np.isnan(mem["m_cr"][r_mem])] = 0.0

    loc = mem["m_f"][r_mem]
    f = loc + 0.1 * gen.standard_cauchy(n)
    need = f <= 0.0
    while need.any():
        f[need] = loc[need] + 0.1 * gen.standard_cauchy(int(need.sum()))
        need = f <= 0.0
    f = np.minimum(f, 1.0)

    pbest = order[gen.integers(0, p_num, size=n)]

    idx = np.arange(n)
    r1 = gen.integers(0, n, size=n)
    bad = r1 == idx
    while bad.any():
        r1[bad] = gen.integers(0, n, size=int(bad.sum()))
        bad = r1 == idx

    pool = n + archive.shape[0]
    r2 = gen.integers(0, pool, size=n)
    bad = (r2 == idx) | (r2 == r1)
    while bad.any():
        r2[bad] = gen.integers(0, pool, size=int(bad.sum()))
        bad = (r2 == idx) | (r2 == r1)

    jrand = gen.integers(0, dim, size=n)
    cross = gen.random((n, dim)) < cr[:, None]
    cross[idx, jrand] = True

    donors = np.concatenate([X, archive], axis=0) if archive.size else X
    mutant = X + f[:, None] * (X[pbest] - X) + f[:, None] * (X[r1] - donors[r2])
    trial = np.where(cross, mutant, X)
    trial = np.clip(trial, state.objective.domain.lo, state.objective.domain.hi)

    tvals = sentinel_values(state.objective.value_batch(trial))
    tracker = track_batch(state.tracker, trial, tvals, state.generation + 1)

    win = tvals < vals
    if win.any():
        s_f = f[win]
        s_cr = cr[win]
        weights = vals[win] - tvals[win]
        finite_w = np.isfinite(weights)
        if not finite_w.all():
            # a parent with +inf sentinel was beaten; give it the largest
            # finite weight so the Lehmer means stay defined
            cap = weights[finite_w].max() if finite_w.any() else 1.0
            weights = np.where(finite_w, weights, cap if cap > 0 else 1.0)
        wsum = weights.sum()
        if wsum > 0:
            wn = weights / wsum
            k = mem["k"]
            mem["m_f"][k] = np.sum(wn * s_f**2) / np.sum(wn * s_f)
            if np.isnan(mem["m_cr"][k]) or s_cr.max() == 0.0:
                mem["m_cr"][k] = np.nan
            else:
                mem["m_cr"][k] = np.sum(wn * s_cr**2) / np.sum(wn * s_cr)
            mem["k"] = (k + 1) % h

        archive = np.concatenate([archive, X[win]], axis=0)
        X = X.copy()
        vals = vals.copy()
        X[win] = trial[win]
        vals[win] = tvals[win]

    n_min = int(params.get("pop_min"))
    frac = min(1.0, (state.generation + 1) / params.schedule_horizon)
    n_next = _round_half_up(mem["pop_init"] + (n_min - mem["pop_init"]) * frac)
    n_next = max(n_min, min(n, n_next))
    if n_next < n:
        keep = np.sort(np.argsort(vals, kind="stable")[:n_next])
        X = X[keep]
        vals = vals[keep]

    limit = max(1, _round_half_up(params.get("archive_rate") * n_next))
    while archive.shape[0] > limit:
        evict = int(gen.integers(0, archive.shape[0]))
        archive = np.delete(archive, evict, axis=0)
    mem["archive"] = archive

    return advance(state, X, vals, tracker, evaluated=n)
