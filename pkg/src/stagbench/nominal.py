"""Nominal consensus dynamics: the idealized pairwise optimizer.

The update rule moves an individual a fraction ``alpha`` of the way toward a
partner: ``x_i' = x_i + alpha * (x_j - x_i)``.  When both partners move
(``pair_step``) the pair's separation scales by exactly ``1 - 2*alpha`` each
step, so the pair contracts iff ``0 < alpha < 1``.  When the partner is
frozen (``stagnant_step``) the separation scales by ``1 - alpha`` and the
stability region widens to ``0 < alpha < 2`` — a stagnant partner *helps*
convergence for ``alpha`` in ``(1, 2)``.

``simulate`` runs the N-individual generalization under one of two pairing
schemes and records the population diameter (max pairwise distance) per
step; ``measured_contraction`` estimates the per-step contraction factor
from such a diameter sequence, and ``predicted_factor`` gives the
two-individual theory value to compare against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .core import RngStream, as_point

__all__ = [
    "PAIRINGS",
    "NominalConfig",
    "NominalState",
    "InsufficientDataError",
    "pair_step",
    "stagnant_step",
    "simulate",
    "diameter",
    "measured_contraction",
    "predicted_factor",
]

PAIRINGS = ("mutual_random", "ring")

# Diameter entries below this are treated as exact zeros by
# measured_contraction; dividing by them would underflow to garbage.
_TINY = 1e-300


class InsufficientDataError(ValueError):
    """Raised when an error sequence has too few usable entries."""


@dataclass(frozen=True)
class NominalConfig:
    """Configuration of an N-individual nominal-dynamics run.

    `stagnant_set` lists individuals whose state is frozen for the whole
    run; it must leave at least one individual mobile.
    """

    alpha: float
    n_individuals: int
    dim: int
    pairing: str = "mutual_random"
    stagnant_set: frozenset = frozenset()

    def __post_init__(self):
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if self.n_individuals < 2:
            raise ValueError("need at least 2 individuals")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.pairing not in PAIRINGS:
            raise ValueError(
                f"unknown pairing {self.pairing!r}; expected one of {PAIRINGS}"
            )
        stagnant = frozenset(int(i) for i in self.stagnant_set)
        if not all(0 <= i < self.n_individuals for i in stagnant):
            raise ValueError("stagnant_set indices must lie in [0, n_individuals)")
        if len(stagnant) >= self.n_individuals:
            raise ValueError("at least one individual must be mobile")
        object.__setattr__(self, "stagnant_set", stagnant)


@dataclass(frozen=True)
class NominalState:
    """Positions of all N individuals after step `k` (k=0 is the init)."""

    positions: np.ndarray
    k: int

    def __post_init__(self):
        pos = np.array(self.positions, dtype=np.float64)
        if pos.ndim != 2:
            raise ValueError("positions must be an (N, dim) array")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        if self.k < 0:
            raise ValueError("step counter must be non-negative")


def pair_step(xi, xj, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    """One mutual update: both individuals move toward each other.

    Both use the same displacement ``alpha * (xj - xi)``, so the pair sum is
    preserved (to roundoff) and the separation scales by ``1 - 2*alpha``.
    """
    xi = as_point(xi)
    xj = as_point(xj, xi.size)
    delta = alpha * (xj - xi)
    return xi + delta, xj - delta


def stagnant_step(xi, xj_frozen, alpha: float) -> np.ndarray:
    """One update against a frozen partner: only `xi` moves.

    The separation ``xi - xj_frozen`` scales by ``1 - alpha``.
    """
    xi = as_point(xi)
    xj_frozen = as_point(xj_frozen, xi.size)
    return xi + alpha * (xj_frozen - xi)


def diameter(positions: np.ndarray) -> float:
    """Max pairwise Euclidean distance within a population (N, dim)."""
    X = np.asarray(positions, dtype=np.float64)
    diff = X[:, None, :] - X[None, :, :]
    return float(np.sqrt((diff * diff).sum(axis=2)).max())


def simulate(
    cfg: NominalConfig,
    init: Sequence,
    steps: int,
    rng: RngStream,
) -> Tuple[List[NominalState], np.ndarray]:
    """Run `steps` updates of the nominal dynamics from `init`.

    Returns the trajectory (``steps + 1`` states, index = step counter) and
    the diameter sequence aligned with it.  Under ``mutual_random`` a
    uniformly random perfect matching over the *whole* population is drawn
    each step: mobile-mobile pairs do `pair_step`, a mobile individual
    matched to a stagnant one does `stagnant_step` against it, stagnant
    individuals never move, and with an odd population the unmatched
    individual stays put.  Under ``ring`` every mobile individual moves
    toward its successor's previous position simultaneously.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    X = np.array([as_point(p, cfg.dim) for p in init], dtype=np.float64)
    if X.shape[0] != cfg.n_individuals:
        raise ValueError(
            f"init has {X.shape[0]} points, expected {cfg.n_individuals}"
        )
    gen = rng.generator()
    stagnant = cfg.stagnant_set
    trajectory = [NominalState(X, 0)]
    errors = np.empty(steps + 1, dtype=np.float64)
    errors[0] = diameter(X)
    for k in range(1, steps + 1):
        if cfg.pairing == "mutual_random":
            order = gen.permutation(cfg.n_individuals)
            new = X.copy()
            for a, b in zip(order[0::2], order[1::2]):
                a, b = int(a), int(b)
                if a in stagnant and b in stagnant:
                    continue
                if a in stagnant:
                    new[b] = stagnant_step(X[b], X[a], cfg.alpha)
                elif b in stagnant:
                    new[a] = stagnant_step(X[a], X[b], cfg.alpha)
                else:
                    new[a], new[b] = pair_step(X[a], X[b], cfg.alpha)
            X = new
        else:
            succ = np.roll(X, -1, axis=0)
            new = X + cfg.alpha * (succ - X)
            for i in stagnant:
                new[i] = X[i]
            X = new
        trajectory.append(NominalState(X, k))
        errors[k] = diameter(X)
    return trajectory, errors


def measured_contraction(errors) -> float:
    """Geometric-mean per-step ratio of a diameter sequence.

    Ratios are taken over consecutive pairs of entries that both exceed
    1e-300 (smaller values would underflow the division).  Fewer than two
    such ratios — i.e. fewer than 3 usable consecutive entries — raise
    InsufficientDataError.
    """
    e = np.asarray(errors, dtype=np.float64)
    if e.ndim != 1:
        raise ValueError("errors must be a 1-D sequence")
    if np.any(~np.isfinite(e)) or np.any(e < 0):
        raise ValueError("errors must be finite and non-negative")
    usable = e > _TINY
    both = usable[:-1] & usable[1:]
    if int(both.sum()) < 2:
        raise InsufficientDataError(
            "need at least 3 usable consecutive entries to measure contraction"
        )
    ratios = e[1:][both] / e[:-1][both]
    return float(np.exp(np.mean(np.log(ratios))))


def predicted_factor(alpha: float, stagnant: bool = False) -> float:
    """Two-individual theory: |1-alpha| against a frozen partner, else |1-2*alpha|."""
    return abs(1.0 - alpha) if stagnant else abs(1.0 - 2.0 * alpha)
