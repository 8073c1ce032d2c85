"""Closed-form vacuum+weak decoy bounds on the single-photon pair yield and
error rate.

Every quantity is a fixed linear combination of table cells.  The
combinations are kept as explicit term lists ``(coefficient, i, j)`` so that
the same arithmetic serves both the asymptotic bounds (every cell at its
observed value) and the finite-size bounds (every cell at its pessimistic
interval end, see :mod:`mdiqkd.finite_key`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .channel import BASES, GainTable, IntensityTriple

__all__ = [
    "InconsistentBoundError",
    "NoSinglePhotonSignal",
    "BoundResult",
    "abc_alpha",
    "generalized_ratios",
    "denominator",
    "g123",
    "g4",
    "y11_lower",
    "e11_upper",
    "estimate_bounds",
]

Term = Tuple[float, int, int]


class InconsistentBoundError(RuntimeError):
    """The Y11 denominator came out non-positive, which the derivation rules out."""


class NoSinglePhotonSignal(ValueError):
    """The Y11 lower bound is zero, so no e11 bound (and no key) exists."""


def abc_alpha(alice: IntensityTriple, bob: IntensityTriple) -> Tuple[float, float, float, float]:
    """The three ``n = m = 2`` ratios and ``alpha = min(a, b, c)``."""
    m1, m2 = alice.mu1, alice.mu2
    n1, n2 = bob.mu1, bob.mu2
    a = (m2 * n2**2 - m1 * n1**2) / (m2 * n1**2 + m1 * n2**2)
    b = (m2**2 * n2 - m1**2 * n1) / (m2**2 * n1 + m1**2 * n2)
    c = (m2**2 * n2**2 - m1**2 * n1**2) / (m2**2 * n1**2 + m1**2 * n2**2)
    return a, b, c, min(a, b, c)


def generalized_ratios(alice: IntensityTriple, bob: IntensityTriple, n: int, m: int):
    """The ``(n, m)`` generalizations of the a, b and c ratios.

    Returns ``(ratio_1m, ratio_n1, ratio_nm)``: the ``Y_1m`` coefficient ratio
    for photon number ``m``, the ``Y_n1`` ratio for ``n`` and the ``Y_nm``
    ratio.  Each is bounded below by its ``n = m = 2`` value.
    """
    m1, m2 = alice.mu1, alice.mu2
    n1, n2 = bob.mu1, bob.mu2
    r_1m = (m2 * n2**m - m1 * n1**m) / (m2 * n1**m + m1 * n2**m)
    r_n1 = (m2**n * n2 - m1**n * n1) / (m2**n * n1 + m1**n * n2)
    r_nm = (m2**n * n2**m - m1**n * n1**m) / (m2**n * n1**m + m1**n * n2**m)
    return r_1m, r_n1, r_nm


def denominator(alice: IntensityTriple, bob: IntensityTriple, alpha: float) -> float:
    m1, m2 = alice.mu1, alice.mu2
    n1, n2 = bob.mu1, bob.mu2
    return m1 * n1 - m2 * n2 + alpha * m2 * n1 + alpha * m1 * n2


def _g_terms(alice: IntensityTriple, bob: IntensityTriple, alpha: float) -> Dict[str, List[Term]]:
    exp = math.exp
    m1, m2 = alice.mu1, alice.mu2
    n1, n2 = bob.mu1, bob.mu2
    return {
        "g1": [(exp(n2), 0, 2), (exp(m2), 2, 0), (-exp(n1), 0, 1), (-exp(m1), 1, 0)],
        "g2": [(alpha * exp(m2 + n1), 2, 1), (-alpha * exp(n1), 0, 1),
               (-alpha * exp(m2), 2, 0), (alpha, 0, 0)],
        "g3": [(alpha * exp(m1 + n2), 1, 2), (-alpha * exp(n2), 0, 2),
               (-alpha * exp(m1), 1, 0), (alpha, 0, 0)],
        "signal": [(-exp(m2 + n2), 2, 2)],
        "decoy": [(exp(m1 + n1), 1, 1)],
    }


def _g4_terms(alice: IntensityTriple, bob: IntensityTriple) -> List[Term]:
    m1, n1 = alice.mu1, bob.mu1
    return [(math.exp(n1), 0, 1), (math.exp(m1), 1, 0), (-1.0, 0, 0)]


def _worst_sum(terms: List[Term], lo: np.ndarray, hi: np.ndarray) -> float:
    """Smallest value of the linear combination over the cell intervals."""
    total = 0.0
    for coef, i, j in terms:
        total += coef * float(lo[i, j] if coef > 0 else hi[i, j])
    return total


def _y11_from_ends(alice, bob, Q_lo, Q_hi) -> Tuple[float, Dict[str, float]]:
    a, b, c, alpha = abc_alpha(alice, bob)
    den = denominator(alice, bob, alpha)
    if not den > 0.0:
        raise InconsistentBoundError(f"Y11 denominator {den!r} is not positive")
    parts = {name: _worst_sum(terms, Q_lo, Q_hi)
             for name, terms in _g_terms(alice, bob, alpha).items()}
    num = parts["g1"] + parts["g2"] + parts["g3"] + parts["signal"] + parts["decoy"]
    return max(0.0, num / den), parts


def _e11_from_ends(alice, bob, EQ_lo, EQ_hi, y11_lo: float) -> Tuple[float, float]:
    if not y11_lo > 0.0:
        raise NoSinglePhotonSignal("Y11 lower bound is zero; e11 is unbounded")
    g4_lo = _worst_sum(_g4_terms(alice, bob), EQ_lo, EQ_hi)
    m1, n1 = alice.mu1, bob.mu1
    num = math.exp(m1 + n1) * float(EQ_hi[1, 1]) - g4_lo
    return min(1.0, max(0.0, num / (m1 * n1 * y11_lo))), g4_lo


def g123(t: GainTable, basis: str, alpha: float) -> Tuple[float, float, float]:
    Q = np.asarray(t.Q[basis])
    terms = _g_terms(t.alice, t.bob, alpha)
    return tuple(_worst_sum(terms[k], Q, Q) for k in ("g1", "g2", "g3"))


def g4(t: GainTable, basis: str) -> float:
    EQ = np.asarray(t.EQ[basis])
    return _worst_sum(_g4_terms(t.alice, t.bob), EQ, EQ)


def y11_lower(t: GainTable, basis: str) -> float:
    """Lower bound on the yield when both parties send one photon.

    Negative estimates are floored at zero: they certify no single-photon
    contribution at all.
    """
    Q = np.asarray(t.Q[basis])
    return _y11_from_ends(t.alice, t.bob, Q, Q)[0]


def e11_upper(t: GainTable, basis: str, y11_lo: float) -> float:
    """Upper bound on the single-photon pair error rate, capped into [0, 1].

    Raises
    ------
    NoSinglePhotonSignal
        If ``y11_lo <= 0``; such a point yields no key.
    """
    EQ = np.asarray(t.EQ[basis])
    return _e11_from_ends(t.alice, t.bob, EQ, EQ, y11_lo)[0]


@dataclass
class BoundResult:
    """All intermediate quantities of one bound evaluation.

    Per-basis values are dicts keyed by ``"x"``/``"z"``.  ``e11_upper`` holds
    ``nan`` for a basis whose ``y11_lower`` is zero.
    """

    a: float
    b: float
    c: float
    alpha: float
    g1: Dict[str, float] = field(default_factory=dict)
    g2: Dict[str, float] = field(default_factory=dict)
    g3: Dict[str, float] = field(default_factory=dict)
    g4: Dict[str, float] = field(default_factory=dict)
    y11_lower: Dict[str, float] = field(default_factory=dict)
    e11_upper: Dict[str, float] = field(default_factory=dict)


def estimate_bounds(t: GainTable, bounded=None) -> BoundResult:
    """Evaluate every bound quantity in both bases.

    ``bounded`` optionally maps basis to ``(Q_lo, Q_hi, EQ_lo, EQ_hi)`` 3x3
    arrays; when given, each quantity is taken at its pessimistic end.
    """
    a, b, c, alpha = abc_alpha(t.alice, t.bob)
    res = BoundResult(a, b, c, alpha)
    for basis in BASES:
        if bounded is None:
            Q_lo = Q_hi = np.asarray(t.Q[basis])
            EQ_lo = EQ_hi = np.asarray(t.EQ[basis])
        else:
            Q_lo, Q_hi, EQ_lo, EQ_hi = bounded[basis]
        y, parts = _y11_from_ends(t.alice, t.bob, Q_lo, Q_hi)
        res.g1[basis], res.g2[basis], res.g3[basis] = parts["g1"], parts["g2"], parts["g3"]
        res.y11_lower[basis] = y
        res.g4[basis] = _worst_sum(_g4_terms(t.alice, t.bob), EQ_lo, EQ_hi)
        if y > 0.0:
            res.e11_upper[basis] = _e11_from_ends(t.alice, t.bob, EQ_lo, EQ_hi, y)[0]
        else:
            res.e11_upper[basis] = math.nan
    return res
