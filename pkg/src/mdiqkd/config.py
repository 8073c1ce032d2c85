"""Run configuration: a flat ``key = value`` text file plus overrides.

Keys follow the physical symbols::

    e_d = 0.015          # misalignment error
    P_d = 3e-6           # dark count per gate
    f = 1.16             # error-correction inefficiency
    n_alpha = 5          # standard deviations for fluctuation
    eta = 0.1            # comma list of per-arm transmissions
    N = inf              # comma list of per-cell pulse counts, inf = asymptotic
    grid = 0.01:0.6:0.01
    method = vacuum+weak,infinite
    mu2 = 0.36           # signal intensity used by table1
    mu1 =                # decoy for table1; empty = grid-optimized
    format = csv
    out =                # empty = stdout
    distance = false     # add a distance column (0.2 dB/km per arm)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .channel import ChannelParams, IntensityTriple
from .keyrate import METHODS, ScanGrid

__all__ = ["ConfigError", "RunConfig", "parse_config_text", "load_config", "DEFAULT_CONFIG_TEXT"]

DB_PER_KM = 0.2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    channel: ChannelParams = field(default_factory=ChannelParams)
    grid: ScanGrid = field(default_factory=ScanGrid)
    n_alpha: float = 5.0
    N: Tuple[float, ...] = (math.inf,)
    etas: Tuple[float, ...] = (0.1,)
    methods: Tuple[str, ...] = METHODS
    mu2: float = 0.36
    mu1: Optional[float] = None
    format: str = "csv"
    out: Optional[str] = None
    distance: bool = False

    def validate(self) -> "RunConfig":
        if not self.etas:
            raise ConfigError("eta list is empty")
        for eta in self.etas:
            if not 0.0 < eta <= 1.0:
                raise ConfigError(f"eta must lie in (0, 1], got {eta}")
        if not self.N:
            raise ConfigError("N list is empty")
        for n in self.N:
            if not n > 0:
                raise ConfigError(f"N must be positive, got {n}")
        if not self.n_alpha > 0:
            raise ConfigError(f"n_alpha must be positive, got {self.n_alpha}")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
        if not self.methods:
            raise ConfigError("method list is empty")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.mu1 is not None:
            try:
                IntensityTriple(self.mu1, self.mu2)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        elif not self.mu2 > 0:
            raise ConfigError(f"mu2 must be positive, got {self.mu2}")
        return self


def _floats(text: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_CHANNEL_KEYS = {"e_d", "P_d", "f"}


def apply_overrides(cfg: RunConfig, values: Dict[str, str]) -> RunConfig:
    """Return ``cfg`` with the given raw string values applied and validated."""
    channel_kw = {}
    kw = {}
    try:
        for key, raw in values.items():
            raw = raw.strip()
            if key in _CHANNEL_KEYS:
                channel_kw[key] = float(raw)
            elif key == "eta":
                kw["etas"] = _floats(raw)
            elif key == "N":
                kw["N"] = _floats(raw)
            elif key == "n_alpha":
                kw["n_alpha"] = float(raw)
            elif key == "grid":
                kw["grid"] = ScanGrid.parse(raw, cfg.grid.symmetric)
            elif key == "method":
                kw["methods"] = tuple(m.strip() for m in raw.split(",") if m.strip())
            elif key == "mu2":
                kw["mu2"] = float(raw)
            elif key == "mu1":
                kw["mu1"] = float(raw) if raw else None
            elif key == "format":
                kw["format"] = raw
            elif key == "out":
                kw["out"] = raw or None
            elif key == "distance":
                kw["distance"] = _bool(raw)
            else:
                raise ConfigError(f"unknown config key {key!r}")
        if channel_kw:
            kw["channel"] = replace(cfg.channel, **channel_kw)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return replace(cfg, **kw).validate()


def parse_config_text(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        values[key.strip()] = value
    return apply_overrides(base or RunConfig(), values)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text)


def eta_to_distance_km(eta: float) -> float:
    """Fiber length per arm for transmission ``eta`` at 0.2 dB/km.

    An assumed loss coefficient, used only for presentation.
    """
    return -10.0 * math.log10(eta) / DB_PER_KM


DEFAULT_CONFIG_TEXT = """\
e_d = 0.015
P_d = 3e-6
f = 1.16
n_alpha = 5
eta = 0.1
N = inf
grid = 0.01:0.6:0.01
method = vacuum+weak,infinite
mu2 = 0.36
mu1 =
format = csv
out =
distance = false
"""
