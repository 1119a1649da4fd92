"""Random channel synthesis: per-element Rayleigh fades behind ideally phased surfaces.

Every link sees ``n/2`` elements of its surface with magnitudes ``alpha`` drawn
Rayleigh with unit second moment (``E[alpha] = sqrt(pi)/2``,
``Var[alpha] = (4 - pi)/4``) and uniform phases. The surface applies the
conjugate phase, so the effective gain of a link is ``eta * sum(alpha)``.
Without a surface each link is a single unit-power Rayleigh magnitude.

Cross links S1->D2 and S2->D1 do not exist and are never drawn.
"""

from __future__ import annotations

import struct
import zlib
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from .model import SystemConfig

LINKS = ("s1d1", "s2d2", "s1r", "s2r", "rd1", "rd2")
RAYLEIGH_SCALE = np.sqrt(0.5)  # E[alpha^2] = 2 * scale^2 = 1


def stream(master_seed: int, *key) -> np.random.Generator:
    """Independent generator for ``key`` derived from ``master_seed``.

    Key parts may be ints, floats or strings; floats are keyed by their exact
    bit pattern so that the same SNR value always maps to the same stream.
    """
    words = []
    for part in key:
        if isinstance(part, str):
            words.append(zlib.crc32(part.encode("utf-8")))
        elif isinstance(part, float):
            words.append(struct.unpack("<Q", struct.pack("<d", part))[0])
        else:
            words.append(int(part))
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=tuple(words)))


@dataclass(frozen=True)
class LinkDraw:
    """Element draws for one link; arrays have shape ``(size, elements)``.

    ``magnitude * exp(-1j * phase)`` is the channel, ``eta * exp(1j * ris_phase)``
    the surface response.
    """

    magnitude: np.ndarray
    phase: np.ndarray
    ris_phase: np.ndarray
    eta: float = 1.0

    @property
    def gain(self) -> np.ndarray:
        residual = self.ris_phase - self.phase
        combined = np.sum(self.magnitude * np.exp(1j * residual), axis=-1)
        return self.eta * np.abs(combined)

    @property
    def elements(self) -> int:
        return self.magnitude.shape[-1]


@dataclass(frozen=True)
class ChannelRealization:
    """One draw (or a batch of ``size`` draws) of every link in the network."""

    s1d1: LinkDraw
    s2d2: LinkDraw
    s1r: LinkDraw
    s2r: LinkDraw
    rd1: LinkDraw
    rd2: LinkDraw
    compensation: str = "ideal"

    def link(self, name: str) -> LinkDraw:
        return getattr(self, name)

    def gains(self) -> dict[str, np.ndarray]:
        if self.compensation == "ideal":
            # residual phase is exactly zero: skip the complex sum
            return {name: self.link(name).eta * self.link(name).magnitude.sum(axis=-1) for name in LINKS}
        return {name: self.link(name).gain for name in LINKS}

    # instantaneous SNRs for a given noise variance
    def relay_snr(self, cfg: SystemConfig) -> np.ndarray:
        g = self.gains()
        return (cfg.ps1 * g["s1r"] ** 2 + cfg.ps2 * g["s2r"] ** 2) / (2.0 * cfg.n0)

    def direct_snr(self, cfg: SystemConfig, i: int) -> np.ndarray:
        g = self.gains()["s1d1" if i == 1 else "s2d2"]
        return (cfg.ps1 if i == 1 else cfg.ps2) * g**2 / cfg.n0

    def relay_dest_snr(self, cfg: SystemConfig, i: int) -> np.ndarray:
        g = self.gains()["rd1" if i == 1 else "rd2"]
        return cfg.pr * g**2 / cfg.n0


def _link_layout(cfg: SystemConfig) -> dict[str, tuple[int, float]]:
    if not cfg.ris_enabled:
        return {name: (1, 1.0) for name in LINKS}
    return {
        "s1d1": (cfg.n1 // 2, cfg.eta1),
        "s1r": (cfg.n1 // 2, cfg.eta1),
        "s2d2": (cfg.n2 // 2, cfg.eta2),
        "s2r": (cfg.n2 // 2, cfg.eta2),
        "rd1": (cfg.n3 // 2, cfg.eta3),
        "rd2": (cfg.n3 // 2, cfg.eta3),
    }


def sample_realization(
    cfg: SystemConfig,
    rng: np.random.Generator,
    size: int = 1,
    compensation: str = "ideal",
) -> ChannelRealization:
    """Draw ``size`` independent realizations of all six links.

    ``compensation="random"`` replaces the matched surface phases by
    independent uniform phases (a test seam for the value of phase control).
    """
    if compensation not in ("ideal", "random"):
        raise ValueError(f"compensation must be 'ideal' or 'random', got {compensation!r}")
    draws = {}
    for name in LINKS:
        elements, eta = _link_layout(cfg)[name]
        magnitude = rng.rayleigh(RAYLEIGH_SCALE, size=(size, elements))
        phase = rng.uniform(0.0, 2.0 * np.pi, size=(size, elements))
        if compensation == "ideal" or not cfg.ris_enabled:
            ris_phase = phase
        else:
            ris_phase = rng.uniform(0.0, 2.0 * np.pi, size=(size, elements))
        draws[name] = LinkDraw(magnitude, phase, ris_phase, eta)
    mode = compensation if cfg.ris_enabled else "ideal"
    return ChannelRealization(compensation=mode, **draws)


def sample_gains(cfg: SystemConfig, rng: np.random.Generator, size: int, links=LINKS) -> dict[str, np.ndarray]:
    """Compensated effective gains only, for the Monte-Carlo inner loop.

    Skips the phase draws, which cancel exactly under ideal compensation, so
    the stream differs from :func:`sample_realization`'s for the same seed.
    """
    layout = _link_layout(cfg)
    out = {}
    for name in links:
        elements, eta = layout[name]
        out[name] = eta * rng.rayleigh(RAYLEIGH_SCALE, size=(size, elements)).sum(axis=1)
    return out


def relay_observation(real, cfg: SystemConfig, x1, x2, rng: np.random.Generator, awgn: bool = False):
    """Relay sample ``sqrt(ps1) g1 x1 + sqrt(ps2) g2 x2 + n`` with ``n ~ N(0, n0)``.

    ``real`` is a ChannelRealization, a mapping of link gains as returned by
    :func:`sample_gains`, or ``None`` when ``awgn`` is set (both gains 1).
    Returns ``(y, g1, g2)``.
    """
    if awgn:
        g1 = g2 = np.ones(np.shape(np.asarray(x1)), dtype=float)
    else:
        gains = real if isinstance(real, Mapping) else real.gains()
        g1, g2 = gains["s1r"], gains["s2r"]
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    shape = np.broadcast_shapes(np.shape(g1), x1.shape, x2.shape)
    noise = rng.normal(0.0, np.sqrt(cfg.n0), size=shape)
    y = np.sqrt(cfg.ps1) * g1 * x1 + np.sqrt(cfg.ps2) * g2 * x2 + noise
    return y, g1, g2


def link_observation(gain, tx_power: float, symbol, n0: float, rng: np.random.Generator):
    """Single-input receive sample ``sqrt(P) gain x + n`` with ``n ~ N(0, n0)``."""
    gain = np.asarray(gain, dtype=float)
    if np.any(gain < 0):
        raise ValueError("link gain must be non-negative")
    symbol = np.asarray(symbol, dtype=float)
    shape = np.broadcast_shapes(gain.shape, symbol.shape)
    y = np.sqrt(tx_power) * gain * symbol + rng.normal(0.0, np.sqrt(n0), size=shape)
    return float(y) if y.ndim == 0 else y
