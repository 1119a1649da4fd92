"""Scenario configuration, bit/symbol conventions and BER result carriers."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

FORMULA_MODES = ("printed", "corrected", "derived")
SOURCES = ("analytic-exact", "analytic-approx", "analytic-bound", "mc", "mc-local")
NODES = ("relay", "s1d1", "s2d2", "rd1", "rd2", "e2e_d1", "e2e_d2", "e2e_avg")


class ConfigError(ValueError):
    """Raised for scenario parameters outside their valid domain."""


@dataclass(frozen=True)
class SystemConfig:
    """All parameters of one two-source / two-destination RIS scenario.

    Powers and the noise variance are linear. ``n1``, ``n2`` and ``n3`` are the
    total element counts of the three surfaces; each surface is split in half
    between its two links. ``pr`` defaults to ``max(ps1, ps2)``.
    """

    ps1: float = 2.0
    ps2: float = 1.0
    pr: float | None = None
    n0: float = 1.0
    n1: int = 8
    n2: int = 8
    n3: int = 8
    eta1: float = 1.0
    eta2: float = 1.0
    eta3: float = 1.0
    formula_mode: str = "corrected"
    ris_enabled: bool = True

    def __post_init__(self):
        if self.pr is None:
            object.__setattr__(self, "pr", max(self.ps1, self.ps2))
        _check(self)

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(1.0 / self.n0)

    def with_snr_db(self, snr_db: float) -> "SystemConfig":
        """Copy with ``n0`` set so that ``10 log10(1/n0) == snr_db``."""
        return dataclasses.replace(self, n0=10.0 ** (-snr_db / 10.0))

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)


def _check(cfg: SystemConfig) -> None:
    for name in ("ps1", "ps2", "pr"):
        value = getattr(cfg, name)
        if not (math.isfinite(value) and value > 0):
            raise ConfigError(f"transmit power {name} must be positive, got {value!r}")
    if not (math.isfinite(cfg.n0) and cfg.n0 > 0):
        raise ConfigError(f"noise variance must be positive, got {cfg.n0!r}")
    for name in ("n1", "n2", "n3"):
        value = getattr(cfg, name)
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise ConfigError(f"element count {name} must be an integer, got {value!r}")
        if value < 2 or value % 2:
            raise ConfigError(f"element count must be even and >= 2: {name}={value}")
    for name in ("eta1", "eta2", "eta3"):
        value = getattr(cfg, name)
        if not (0.0 < value <= 1.0):
            raise ConfigError(f"reflection loss {name} must lie in (0, 1], got {value!r}")
    if cfg.formula_mode not in FORMULA_MODES:
        raise ConfigError(f"formula_mode must be one of {FORMULA_MODES}, got {cfg.formula_mode!r}")
    if not isinstance(cfg.ris_enabled, (bool, np.bool_)):
        raise ConfigError(f"ris_enabled must be a boolean, got {cfg.ris_enabled!r}")


def validate(cfg: SystemConfig) -> SystemConfig:
    """Return ``cfg`` unchanged if every invariant holds, else raise ConfigError."""
    _check(cfg)
    return cfg


@dataclass(frozen=True)
class LinkBudget:
    """Elements and transmit power serving one single-input link."""

    allocated_elements: int
    tx_power: float

    def __post_init__(self):
        if self.allocated_elements < 0:
            raise ConfigError("allocated_elements must be >= 0")
        if not self.tx_power > 0:
            raise ConfigError("tx_power must be positive")


# Bit 0 <-> +1, bit 1 <-> -1, so XOR of bits is the product of symbols.
def bit_to_symbol(bit):
    return 1 - 2 * np.asarray(bit) if np.ndim(bit) else 1 - 2 * int(bit)


def symbol_to_bit(symbol):
    if np.ndim(symbol):
        return ((1 - np.asarray(symbol)) // 2).astype(np.int64)
    if symbol not in (1, -1):
        raise ValueError(f"BPSK symbol must be +1 or -1, got {symbol!r}")
    return (1 - int(symbol)) // 2


@dataclass(frozen=True)
class BerPoint:
    """One (SNR, BER) result.

    Analytic points carry ``trials == errors == 0`` and a zero-width interval.
    """

    snr_db: float
    ber: float
    source: str
    node: str = "relay"
    trials: int = 0
    errors: int = 0
    ci_low: float | None = None
    ci_high: float | None = None

    def __post_init__(self):
        if self.ci_low is None:
            object.__setattr__(self, "ci_low", self.ber)
        if self.ci_high is None:
            object.__setattr__(self, "ci_high", self.ber)
        if self.source not in SOURCES:
            raise ValueError(f"unknown source tag {self.source!r}")
        if self.node not in NODES:
            raise ValueError(f"unknown node {self.node!r}")
        if not (0.0 <= self.ci_low <= self.ber <= self.ci_high <= 1.0):
            raise ValueError(
                f"need 0 <= ci_low <= ber <= ci_high <= 1, got "
                f"{self.ci_low}, {self.ber}, {self.ci_high}"
            )
        if not (0 <= self.errors <= self.trials or self.trials == self.errors == 0):
            raise ValueError("errors must not exceed trials")

    @property
    def half_width(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)


@dataclass(frozen=True)
class BerCurve:
    points: tuple[BerPoint, ...]
    config: SystemConfig
    kind: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        snrs = [p.snr_db for p in self.points]
        if any(b <= a for a, b in zip(snrs, snrs[1:])):
            raise ValueError("snr_db must be strictly increasing along a curve")
        if len({p.source for p in self.points}) > 1:
            raise ValueError("a curve must have a single source tag")
        if len({p.node for p in self.points}) > 1:
            raise ValueError("a curve must describe a single node")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def snr_db(self) -> np.ndarray:
        return np.array([p.snr_db for p in self.points])

    @property
    def ber(self) -> np.ndarray:
        return np.array([p.ber for p in self.points])


# ---------------------------------------------------------------------------
# config files: ``key = value`` lines with ``#`` comments
# ---------------------------------------------------------------------------

_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(SystemConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    try:
        if key in ("n1", "n2", "n3"):
            return int(raw)
        if key == "ris_enabled":
            lowered = raw.lower()
            if lowered in ("true", "yes", "1", "on"):
                return True
            if lowered in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        if key == "formula_mode":
            return raw
        return float(raw)
    except ValueError:
        raise ConfigError(f"cannot parse {key} = {raw!r} as {kind}") from None


def parse_config_text(text: str) -> dict:
    """Parse config-file text into a dict of SystemConfig field overrides."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def load_config(path: str | Path, overrides: Mapping | None = None) -> SystemConfig:
    values = parse_config_text(Path(path).read_text(encoding="utf-8"))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return make_config(values)


def make_config(values: Mapping) -> SystemConfig:
    try:
        return SystemConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def config_to_text(cfg: SystemConfig, keys: Iterable[str] | None = None) -> str:
    lines = []
    for key in keys or _FIELD_TYPES:
        value = getattr(cfg, key)
        lines.append(f"{key} = {str(value).lower() if isinstance(value, bool) else value}")
    return "\n".join(lines) + "\n"
