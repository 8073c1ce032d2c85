"""Brute-force photon-number channel model.

Gains are Poisson mixtures of an explicit, truncated yield matrix.  Nothing
here knows about the decoy bounds, which makes it the ground truth the bounds
are checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .channel import ChannelParams, GainPoint, gains

__all__ = [
    "YieldMatrix",
    "TruncationError",
    "poisson_weight",
    "poisson_tail",
    "gain_from_yields",
    "exact_y11_e11",
    "random_yield_matrix",
    "mixed_derivative_y11_e11",
    "infinite_decoy_baseline",
]

DEFAULT_N_MAX = 25
TAIL_TOL = 1e-12
FD_STEP = 1e-3


class TruncationError(ValueError):
    """Poisson mass beyond the yield-matrix truncation is not negligible."""


@dataclass(frozen=True)
class YieldMatrix:
    """Yields ``Y[n, m]`` and error rates ``e[n, m]`` for ``0 <= n, m <= n_max``."""

    Y: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        Y = np.asarray(self.Y, dtype=float)
        e = np.asarray(self.e, dtype=float)
        if Y.ndim != 2 or Y.shape[0] != Y.shape[1] or Y.shape != e.shape:
            raise ValueError("Y and e must be equal square matrices")
        if Y.shape[0] < 3:
            raise ValueError("n_max must be at least 2")
        if np.any((Y < 0) | (Y > 1)) or np.any((e < 0) | (e > 1)):
            raise ValueError("yields and error rates must lie in [0, 1]")
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "e", e)

    @property
    def n_max(self) -> int:
        return self.Y.shape[0] - 1


def poisson_weight(mu: float, n: int) -> float:
    """Probability that a coherent pulse of mean ``mu`` holds ``n`` photons."""
    if not mu >= 0.0:
        raise ValueError(f"mean photon number must be non-negative, got {mu}")
    if n < 0:
        raise ValueError(f"photon number must be non-negative, got {n}")
    if mu == 0.0:
        return 1.0 if n == 0 else 0.0
    if n > 20:
        return math.exp(-mu + n * math.log(mu) - math.lgamma(n + 1))
    return math.exp(-mu) * mu**n / math.factorial(n)


def poisson_tail(mu: float, n_max: int) -> float:
    """Mass of ``n > n_max``, summed directly (no ``1 - cdf`` cancellation)."""
    total = 0.0
    n = n_max + 1
    while True:
        w = poisson_weight(mu, n)
        total += w
        if w <= 1e-30 or w <= 1e-17 * total:
            return total
        n += 1


def _weights(mu: float, n_max: int) -> np.ndarray:
    return np.array([poisson_weight(mu, n) for n in range(n_max + 1)])


def gain_from_yields(ym: YieldMatrix, mu: float, nu: float) -> GainPoint:
    """Double Poisson sum of the yield (and yield * error) matrix."""
    for x in (mu, nu):
        if poisson_tail(x, ym.n_max) >= TAIL_TOL:
            raise TruncationError(
                f"intensity {x} leaves Poisson tail >= {TAIL_TOL} beyond n_max={ym.n_max}"
            )
    pa = _weights(mu, ym.n_max)
    pb = _weights(nu, ym.n_max)
    Q = float(pa @ ym.Y @ pb)
    EQ = float(pa @ (ym.Y * ym.e) @ pb)
    return GainPoint(Q, min(EQ, Q))


def exact_y11_e11(ym: YieldMatrix) -> Tuple[float, float]:
    return float(ym.Y[1, 1]), float(ym.e[1, 1])


def random_yield_matrix(rng: np.random.Generator, n_max: int = DEFAULT_N_MAX,
                        y_scale: float = 1e-2) -> YieldMatrix:
    """Physically typical random yields: uniform draws in ``[0, y_scale]``
    made nondecreasing along both photon numbers; error rates uniform in
    ``[0, 0.5]``."""
    size = n_max + 1
    Y = rng.uniform(0.0, y_scale, size=(size, size))
    Y = np.maximum.accumulate(np.maximum.accumulate(Y, axis=0), axis=1)
    e = rng.uniform(0.0, 0.5, size=(size, size))
    return YieldMatrix(Y, e)


def _mixed_second_difference(F: Callable[[float, float], float], h: float) -> float:
    return (F(h, h) - F(h, 0.0) - F(0.0, h) + F(0.0, 0.0)) / (h * h)


def mixed_derivative_y11_e11(gain_fn: Callable[[float, float], GainPoint],
                             step: float = FD_STEP) -> Tuple[float, float]:
    """Recover ``(Y11, e11)`` from any gain function of ``(mu, nu)``.

    ``exp(mu + nu) * Q`` is the generating function of ``Y[n, m] / (n! m!)``,
    so its mixed second derivative at the origin is ``Y11``; the same holds
    for ``exp(mu + nu) * EQ`` and ``Y11 * e11``.  The derivative is taken by a
    forward difference at ``step`` and ``step / 2`` combined with one
    Richardson step, plus a second one on ``step / 4`` to cancel the
    ``O(step**2)`` residual.
    """
    cache = {}

    def point(mu, nu):
        if (mu, nu) not in cache:
            cache[mu, nu] = gain_fn(mu, nu)
        return cache[mu, nu]

    def F(mu, nu):
        return math.exp(mu + nu) * point(mu, nu).Q

    def G(mu, nu):
        return math.exp(mu + nu) * point(mu, nu).EQ

    def extrapolate(fn):
        d1, d2, d4 = (_mixed_second_difference(fn, step / k) for k in (1.0, 2.0, 4.0))
        r1, r2 = 2.0 * d2 - d1, 2.0 * d4 - d2
        return (4.0 * r2 - r1) / 3.0

    y11 = extrapolate(F)
    if not y11 > 0.0:
        raise ZeroDivisionError(f"extracted Y11 = {y11!r} is not positive")
    return y11, extrapolate(G) / y11


def infinite_decoy_baseline(p: ChannelParams, basis: str) -> Tuple[float, float]:
    """Exact single-photon pair ``(Y11, e11)`` of the analytic channel model,
    i.e. what infinitely many decoy intensities would reveal."""
    return mixed_derivative_y11_e11(lambda mu, nu: gains(p, mu, nu, basis))
