"""Eve-absent channel model for symmetric MDI-QKD with phase-randomized
weak coherent sources.

The gains and error-weighted gains below are the standard analytic
expressions for a polarization-encoded MDI-QKD link with threshold
detectors, background error ``e_0 = 1/2`` and misalignment ``e_d``.

Notes
-----
The attenuation factor is ``y = (1 - P_d) * exp(-mu'/4)``.  With a positive
exponent the x-basis gain grows without bound in the intensities, so the
decaying form is the one implemented here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

__all__ = [
    "BASES",
    "ChannelParams",
    "IntensityTriple",
    "GainPoint",
    "GainTable",
    "bessel_i0",
    "gains_x",
    "gains_z",
    "gains",
    "build_gain_table",
]

BASES = ("x", "z")

_I0_MAX_ARG = 30.0
_I0_REL_CUTOFF = 1e-16


@dataclass(frozen=True)
class ChannelParams:
    """Detector and channel constants.

    Attributes
    ----------
    e_d : float
        Misalignment-error probability, in [0, 0.5].
    P_d : float
        Dark-count probability per detector per gate, in [0, 1).
    eta_a, eta_b : float
        Per-arm transmissions of Alice and Bob (detector efficiency included).
    f : float
        Error-correction inefficiency, >= 1.
    e_0 : float
        Background error rate; fixed at 1/2.
    """

    e_d: float = 0.015
    P_d: float = 3e-6
    eta_a: float = 0.1
    eta_b: float = 0.1
    f: float = 1.16
    e_0: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.e_d <= 0.5:
            raise ValueError(f"e_d must lie in [0, 0.5], got {self.e_d}")
        if not 0.0 <= self.P_d < 1.0:
            raise ValueError(f"P_d must lie in [0, 1), got {self.P_d}")
        for name in ("eta_a", "eta_b"):
            eta = getattr(self, name)
            if not 0.0 < eta <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {eta}")
        if self.e_0 != 0.5:
            raise ValueError(f"e_0 is fixed at 0.5, got {self.e_0}")
        if not self.f >= 1.0:
            raise ValueError(f"f must be >= 1, got {self.f}")

    def with_eta(self, eta: float) -> "ChannelParams":
        """Copy with both arms set to the same transmission."""
        return ChannelParams(self.e_d, self.P_d, eta, eta, self.f, self.e_0)

    def swapped(self) -> "ChannelParams":
        return ChannelParams(self.e_d, self.P_d, self.eta_b, self.eta_a, self.f, self.e_0)


@dataclass(frozen=True)
class IntensityTriple:
    """One party's (vacuum, decoy, signal) mean photon numbers."""

    mu1: float
    mu2: float
    mu0: float = 0.0

    def __post_init__(self):
        if self.mu0 != 0.0:
            raise ValueError(f"vacuum intensity must be exactly 0, got {self.mu0}")
        if not (math.isfinite(self.mu2) and self.mu2 > self.mu1 > 0.0):
            raise ValueError(
                f"intensities must satisfy mu2 > mu1 > 0, got mu1={self.mu1}, mu2={self.mu2}"
            )

    def __getitem__(self, index: int) -> float:
        return (self.mu0, self.mu1, self.mu2)[index]

    def __iter__(self) -> Iterator[float]:
        return iter((self.mu0, self.mu1, self.mu2))


@dataclass(frozen=True)
class GainPoint:
    """Gain ``Q`` and error-weighted gain ``EQ = E * Q`` for one cell."""

    Q: float
    EQ: float

    def __post_init__(self):
        # a few ulps of slack: EQ and Q come from separate float expressions
        tol = 1e-15 * max(1.0, abs(self.Q))
        if not (-tol <= self.EQ <= self.Q + tol and self.Q <= 1.0 + tol):
            raise ValueError(f"invalid gain point Q={self.Q!r}, EQ={self.EQ!r}")

    @property
    def E(self) -> float:
        """Error rate ``EQ / Q``; only defined for ``Q > 0``."""
        if self.Q <= 0.0:
            raise ZeroDivisionError("error rate undefined at zero gain")
        return self.EQ / self.Q


def bessel_i0(x):
    """Modified Bessel function of the first kind, order zero.

    Sums the ascending series ``sum_k (x/2)**(2k) / (k!)**2`` until the next
    term drops below ``1e-16`` of the running sum.  Accepts scalars or arrays.

    >>> bessel_i0(0.0)
    1.0
    """
    total = 1.0 + _i0m1(x)
    if np.ndim(total) == 0:
        return float(total)
    return total


def _i0m1(x):
    # I0(x) - 1 without the cancellation of forming I0 first
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("bessel_i0 argument must be finite")
    if np.any(arr < 0.0) or np.any(arr > _I0_MAX_ARG):
        raise ValueError(f"bessel_i0 argument must lie in [0, {_I0_MAX_ARG}]")
    q = 0.25 * arr * arr
    term = np.ones_like(arr)
    tail = np.zeros_like(arr)
    k = 0
    while True:
        k += 1
        term = term * q / (k * k)
        tail = tail + term
        if np.all(term <= _I0_REL_CUTOFF * (1.0 + tail)):
            return tail


def _check_intensity(mu, nu):
    if np.any(np.asarray(mu) < 0.0) or np.any(np.asarray(nu) < 0.0):
        raise ValueError("intensities must be non-negative")


def gains_x(p: ChannelParams, mu: float, nu: float) -> GainPoint:
    """x-basis gain and error-weighted gain for Alice intensity ``mu`` and
    Bob intensity ``nu``."""
    Q, EQ = _gains_x(p, mu, nu)
    return GainPoint(float(Q), float(EQ))


def _gains_x(p, mu, nu):
    _check_intensity(mu, nu)
    mu_a, nu_b = p.eta_a * mu, p.eta_b * nu
    keep = 1.0 - p.P_d
    s = np.sqrt(mu_a * nu_b) / 2.0
    y = keep * np.exp(-(mu_a + nu_b) / 4.0)
    one_minus_y = p.P_d - keep * np.expm1(-(mu_a + nu_b) / 4.0)
    i0m1_s, i0m1_2s = _i0m1(s), _i0m1(2.0 * s)
    # 1 + 2y^2 - 4y I0(s) + I0(2s), regrouped around y = 1, I0 = 1
    bracket = 2.0 * one_minus_y**2 + i0m1_2s - 4.0 * y * i0m1_s
    Q = 2.0 * y * y * bracket
    EQ = p.e_0 * Q - 2.0 * (p.e_0 - p.e_d) * y * y * i0m1_2s
    return Q, EQ


def gains_z(p: ChannelParams, mu: float, nu: float) -> GainPoint:
    """z-basis gain ``Q_C + Q_E`` and error-weighted gain
    ``e_d Q_C + (1 - e_d) Q_E``."""
    Q, EQ = _gains_z(p, mu, nu)
    return GainPoint(float(Q), float(EQ))


def _gains_z(p, mu, nu):
    _check_intensity(mu, nu)
    mu_a, nu_b = p.eta_a * mu, p.eta_b * nu
    keep = 1.0 - p.P_d
    s = np.sqrt(mu_a * nu_b) / 2.0
    half = np.exp(-(mu_a + nu_b) / 2.0)
    # 1 - keep*exp(-t) written with expm1 so the vacuum arm is exactly P_d
    click_a = p.P_d - keep * np.expm1(-mu_a / 2.0)
    click_b = p.P_d - keep * np.expm1(-nu_b / 2.0)
    Q_C = 2.0 * keep * keep * half * click_a * click_b
    # I0(2s) - keep*half == (I0(2s) - 1) + (1 - keep*half)
    Q_E = 2.0 * p.P_d * keep * keep * half * (_i0m1(2.0 * s) + p.P_d * half - np.expm1(-(mu_a + nu_b) / 2.0))
    return Q_C + Q_E, p.e_d * Q_C + (1.0 - p.e_d) * Q_E


def gains(p: ChannelParams, mu: float, nu: float, basis: str) -> GainPoint:
    if basis == "x":
        return gains_x(p, mu, nu)
    if basis == "z":
        return gains_z(p, mu, nu)
    raise ValueError(f"unknown basis {basis!r}")


@dataclass(frozen=True)
class GainTable:
    """Observed gains for all 3 x 3 intensity pairs in both bases.

    ``Q[basis][i, j]`` and ``EQ[basis][i, j]`` hold the cell where Alice sent
    intensity index ``i`` and Bob sent index ``j`` (0 vacuum, 1 decoy,
    2 signal).
    """

    alice: IntensityTriple
    bob: IntensityTriple
    Q: dict
    EQ: dict

    def __post_init__(self):
        for basis in BASES:
            q = np.asarray(self.Q[basis], dtype=float)
            eq = np.asarray(self.EQ[basis], dtype=float)
            if q.shape != (3, 3) or eq.shape != (3, 3):
                raise ValueError("gain table needs 3x3 entries per basis")
            for i in range(3):
                for j in range(3):
                    GainPoint(float(q[i, j]), float(eq[i, j]))

    @classmethod
    def from_points(cls, alice, bob, points) -> "GainTable":
        """Build from a mapping ``(i, j, basis) -> GainPoint``."""
        Q = {b: np.zeros((3, 3)) for b in BASES}
        EQ = {b: np.zeros((3, 3)) for b in BASES}
        for (i, j, basis), gp in points.items():
            Q[basis][i, j] = gp.Q
            EQ[basis][i, j] = gp.EQ
        return cls(alice, bob, Q, EQ)

    def point(self, i: int, j: int, basis: str) -> GainPoint:
        return GainPoint(float(self.Q[basis][i, j]), float(self.EQ[basis][i, j]))

    def items(self) -> Iterator[Tuple[Tuple[int, int, str], GainPoint]]:
        for basis in BASES:
            for i in range(3):
                for j in range(3):
                    yield (i, j, basis), self.point(i, j, basis)

    def relabel(self, basis_from: str, basis_to: str) -> "GainTable":
        """Copy in which ``basis_to`` holds the entries of ``basis_from``."""
        Q = dict(self.Q)
        EQ = dict(self.EQ)
        Q[basis_to] = np.array(self.Q[basis_from], dtype=float)
        EQ[basis_to] = np.array(self.EQ[basis_from], dtype=float)
        return GainTable(self.alice, self.bob, Q, EQ)


def build_gain_table(p: ChannelParams, alice: IntensityTriple, bob: IntensityTriple) -> GainTable:
    mu = np.array(list(alice))[:, None] * np.ones((1, 3))
    nu = np.ones((3, 1)) * np.array(list(bob))[None, :]
    Qx, EQx = _gains_x(p, mu, nu)
    Qz, EQz = _gains_z(p, mu, nu)
    return GainTable(alice, bob, {"x": Qx, "z": Qz}, {"x": EQx, "z": EQz})
