"""Finite-size statistical fluctuation of the observed gains.

Each observed ``Q`` and ``E*Q`` is widened to ``n_alpha`` standard deviations
of a Poisson count, ``Q (1 +/- n_alpha / sqrt(N Q))``, and the decoy bounds
are then evaluated at the pessimistic interval ends.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .bounds import _e11_from_ends, _y11_from_ends, estimate_bounds, BoundResult
from .channel import BASES, GainPoint, GainTable

__all__ = [
    "FluctuationConfig",
    "BoundedGainPoint",
    "failure_probability",
    "fluctuate",
    "bounded_table",
    "y11_lower_fluct",
    "e11_upper_fluct",
    "estimate_bounds_fluct",
]


@dataclass(frozen=True)
class FluctuationConfig:
    """Number of standard deviations and per-cell sample size.

    ``N`` is the number of pulse pairs sent in every (intensity pair, basis)
    cell; ``math.inf`` means asymptotic (no fluctuation).
    """

    n_alpha: float = 5.0
    N: float = math.inf

    def __post_init__(self):
        if not self.n_alpha > 0:
            raise ValueError(f"n_alpha must be positive, got {self.n_alpha}")
        if not self.N > 0:
            raise ValueError(f"N must be positive, got {self.N}")

    @property
    def asymptotic(self) -> bool:
        return math.isinf(self.N)


ASYMPTOTIC = FluctuationConfig()


@dataclass(frozen=True)
class BoundedGainPoint:
    Q_lo: float
    Q_hi: float
    EQ_lo: float
    EQ_hi: float


def failure_probability(n_alpha: float) -> float:
    """Two-sided Gaussian tail mass beyond ``n_alpha`` standard deviations."""
    return math.erfc(n_alpha / math.sqrt(2.0))


def _widen(x: float, cfg: FluctuationConfig) -> Tuple[float, float]:
    if cfg.asymptotic:
        return x, x
    if x <= 0.0:
        # relative width is undefined; cap at an absolute n_alpha^2 / N
        return 0.0, cfg.n_alpha**2 / cfg.N
    beta = cfg.n_alpha / math.sqrt(cfg.N * x)
    return max(0.0, x * (1.0 - beta)), x * (1.0 + beta)


def fluctuate(gp: GainPoint, cfg: FluctuationConfig) -> BoundedGainPoint:
    """Interval of ``n_alpha`` standard deviations around ``Q`` and ``EQ``.

    >>> b = fluctuate(GainPoint(1e-4, 0.0), FluctuationConfig(5, 1e10))
    >>> round(b.Q_lo / 1e-4, 6), round(b.Q_hi / 1e-4, 6)
    (0.995, 1.005)
    """
    Q_lo, Q_hi = _widen(gp.Q, cfg)
    EQ_lo, EQ_hi = _widen(gp.EQ, cfg)
    return BoundedGainPoint(Q_lo, Q_hi, EQ_lo, EQ_hi)


def bounded_table(t: GainTable, cfg: FluctuationConfig) -> Dict[str, Tuple[np.ndarray, ...]]:
    """Per basis, the ``(Q_lo, Q_hi, EQ_lo, EQ_hi)`` 3x3 arrays."""
    out = {}
    for basis in BASES:
        arrays = tuple(np.zeros((3, 3)) for _ in range(4))
        for i in range(3):
            for j in range(3):
                b = fluctuate(t.point(i, j, basis), cfg)
                for arr, v in zip(arrays, (b.Q_lo, b.Q_hi, b.EQ_lo, b.EQ_hi)):
                    arr[i, j] = v
        out[basis] = arrays
    return out


def y11_lower_fluct(t: GainTable, basis: str, cfg: FluctuationConfig) -> float:
    Q_lo, Q_hi, _, _ = bounded_table(t, cfg)[basis]
    return _y11_from_ends(t.alice, t.bob, Q_lo, Q_hi)[0]


def e11_upper_fluct(t: GainTable, basis: str, cfg: FluctuationConfig, y11_lo: float) -> float:
    _, _, EQ_lo, EQ_hi = bounded_table(t, cfg)[basis]
    return _e11_from_ends(t.alice, t.bob, EQ_lo, EQ_hi, y11_lo)[0]


def estimate_bounds_fluct(t: GainTable, cfg: FluctuationConfig) -> BoundResult:
    if cfg.asymptotic:
        return estimate_bounds(t)
    return estimate_bounds(t, bounded_table(t, cfg))
