"""Secret key rate and exhaustive intensity search."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .bounds import InconsistentBoundError, NoSinglePhotonSignal
from .channel import ChannelParams, GainTable, IntensityTriple, build_gain_table
from .finite_key import ASYMPTOTIC, FluctuationConfig, estimate_bounds_fluct
from .oracle import infinite_decoy_baseline

__all__ = [
    "VACUUM_WEAK",
    "INFINITE",
    "METHODS",
    "binary_entropy",
    "KeyRatePoint",
    "ScanGrid",
    "ScanRecord",
    "key_rate",
    "evaluate_point",
    "optimize_intensities",
    "scan_transmission",
]

VACUUM_WEAK = "vacuum+weak"
INFINITE = "infinite"
METHODS = (VACUUM_WEAK, INFINITE)


def binary_entropy(x: float) -> float:
    """Binary Shannon entropy in bits, with ``H(0) = H(1) = 0``."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


@dataclass(frozen=True)
class KeyRatePoint:
    """Key rate per pulse pair together with the inputs that produced it.

    ``R`` is clamped at zero; ``R_raw`` keeps the unclamped value for
    diagnostics (``nan`` when the point failed).
    """

    R: float
    R_raw: float
    alice: Optional[IntensityTriple]
    bob: Optional[IntensityTriple]
    y11_z: float
    e11_x: float
    Q_z: float
    E_z: float
    method: str = VACUUM_WEAK


def key_rate(t: GainTable, p: ChannelParams, y11_z: float, e11_x: float,
             method: str = VACUUM_WEAK) -> KeyRatePoint:
    """Asymptotic key rate from signal-signal observables and single-photon
    bounds; only the signal intensities distill key."""
    mu2, nu2 = t.alice.mu2, t.bob.mu2
    sig = t.point(2, 2, "z")
    E_z = sig.EQ / sig.Q if sig.Q > 0 else 0.0
    leak = sig.Q * p.f * binary_entropy(min(1.0, max(0.0, E_z)))
    if y11_z <= 0.0:
        R_raw = -leak
    else:
        single = mu2 * nu2 * math.exp(-mu2 - nu2) * y11_z
        # e11_x is an upper bound; H peaks at 1/2, so beyond that the cost is 1 bit
        R_raw = single * (1.0 - binary_entropy(min(e11_x, 0.5))) - leak
    return KeyRatePoint(max(0.0, R_raw), R_raw, t.alice, t.bob, y11_z, e11_x, sig.Q, E_z, method)


@lru_cache(maxsize=256)
def _baseline(p: ChannelParams) -> Tuple[float, float]:
    y11_z, _ = infinite_decoy_baseline(p, "z")
    _, e11_x = infinite_decoy_baseline(p, "x")
    return y11_z, e11_x


def evaluate_point(p: ChannelParams, alice: IntensityTriple, bob: IntensityTriple,
                   cfg: FluctuationConfig = ASYMPTOTIC, method: str = VACUUM_WEAK) -> KeyRatePoint:
    """Full pipeline for one intensity choice: channel model, bounds, key rate."""
    t = build_gain_table(p, alice, bob)
    if method == INFINITE:
        y11_z, e11_x = _baseline(p)
        return key_rate(t, p, y11_z, e11_x, method)
    if method != VACUUM_WEAK:
        raise ValueError(f"unknown method {method!r}")
    res = estimate_bounds_fluct(t, cfg)
    y11_z = res.y11_lower["z"]
    e11_x = res.e11_upper["x"]
    if math.isnan(e11_x):
        # no x-basis single-photon bound: privacy cost is the full rate
        e11_x = 0.5
    return key_rate(t, p, y11_z, e11_x, method)


@dataclass(frozen=True)
class ScanGrid:
    """Intensity grid ``lo, lo + step, ..., hi``; ``symmetric`` forces
    Bob's intensities to equal Alice's."""

    lo: float = 0.01
    hi: float = 0.6
    step: float = 0.01
    symmetric: bool = True

    def __post_init__(self):
        if not (0.0 < self.lo < self.hi and self.step > 0.0):
            raise ValueError(f"invalid grid lo={self.lo}, hi={self.hi}, step={self.step}")

    def values(self) -> np.ndarray:
        n = int(math.floor((self.hi - self.lo) / self.step + 1e-9))
        return np.round(self.lo + self.step * np.arange(n + 1), 12)

    @classmethod
    def parse(cls, text: str, symmetric: bool = True) -> "ScanGrid":
        """From ``"LO:HI:STEP"``."""
        try:
            lo, hi, step = (float(v) for v in text.split(":"))
        except ValueError:
            raise ValueError(f"grid must look like LO:HI:STEP, got {text!r}") from None
        return cls(lo, hi, step, symmetric)


def _candidates(grid: ScanGrid, signal: Optional[float], method: str):
    vals = [float(v) for v in grid.values()]
    signals = vals if signal is None else [float(signal)]
    if method == INFINITE:
        # exact yields do not depend on the decoy; ties go to the smallest one
        decoys_for = lambda s: [v for v in vals if v < s][:1]
    else:
        decoys_for = lambda s: [v for v in vals if v < s]
    for s2 in signals:
        for s1 in decoys_for(s2):
            if grid.symmetric:
                yield (s2, s1, s2, s1)
            else:
                for b2 in signals:
                    for b1 in decoys_for(b2):
                        yield (s2, s1, b2, b1)


def _safe_evaluate(args) -> Tuple[Tuple[float, ...], KeyRatePoint]:
    p, key, cfg, method = args
    s2, s1, b2, b1 = key
    alice, bob = IntensityTriple(s1, s2), IntensityTriple(b1, b2)
    try:
        return key, evaluate_point(p, alice, bob, cfg, method)
    except (InconsistentBoundError, NoSinglePhotonSignal, ZeroDivisionError):
        nan = math.nan
        return key, KeyRatePoint(0.0, nan, alice, bob, nan, nan, nan, nan, method)


def _select(results: Iterable[Tuple[Tuple[float, ...], KeyRatePoint]]) -> KeyRatePoint:
    # max R, then smallest (mu2, mu1, nu2, nu1); independent of input order
    best = min(results, key=lambda kr: (-kr[1].R, kr[0]), default=None)
    if best is None:
        raise ValueError("grid holds no point with signal > decoy")
    return best[1]


def optimize_intensities(p: ChannelParams, grid: ScanGrid = ScanGrid(),
                         cfg: FluctuationConfig = ASYMPTOTIC, method: str = VACUUM_WEAK,
                         signal: Optional[float] = None, workers: int = 1) -> KeyRatePoint:
    """Exhaustive grid search for the rate-maximizing signal/decoy intensities.

    Parameters
    ----------
    signal : float, optional
        Pin the signal intensity (both parties) and search the decoy only.
    workers : int
        Processes for the grid evaluation.  The result does not depend on it.
    """
    jobs = [(p, key, cfg, method) for key in _candidates(grid, signal, method)]
    if not jobs:
        raise ValueError("grid holds no point with signal > decoy")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_safe_evaluate, jobs, chunksize=64))
    else:
        results = map(_safe_evaluate, jobs)
    return _select(results)


@dataclass(frozen=True)
class ScanRecord:
    eta: float
    method: str
    N: float
    point: KeyRatePoint


def scan_transmission(p_template: ChannelParams, etas: Sequence[float], grid: ScanGrid = ScanGrid(),
                      cfg: FluctuationConfig = ASYMPTOTIC,
                      methods: Sequence[str] = METHODS, workers: int = 1) -> List[ScanRecord]:
    """Optimized key rate per symmetric per-arm transmission and method.

    The infinite-decoy method ignores ``cfg``; it is always asymptotic.
    A point whose pipeline fails is kept with ``R = 0``.
    """
    if len(etas) == 0:
        raise ValueError("no transmissions to scan")
    records = []
    for eta in etas:
        p = p_template.with_eta(float(eta))
        for method in methods:
            mcfg = ASYMPTOTIC if method == INFINITE else cfg
            try:
                point = optimize_intensities(p, grid, mcfg, method, workers=workers)
            except (ValueError, ZeroDivisionError):
                nan = math.nan
                point = KeyRatePoint(0.0, nan, None, None, nan, nan, nan, nan, method)
            records.append(ScanRecord(float(eta), method, mcfg.N, point))
    return records
