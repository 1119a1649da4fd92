"""Receiver decisions: joint ML and threshold PLNC at the relay, BPSK slicing at destinations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .awgn import HYPOTHESES

_HYP = np.array(HYPOTHESES, dtype=float)  # (4, 2), enumeration order fixes tie-breaks
_HYP_XOR = np.array([int(a * b == -1) for a, b in HYPOTHESES])


@dataclass(frozen=True)
class RelayDecision:
    """Joint relay decision; fields are ints for scalar input, arrays otherwise."""

    x1_hat: int | np.ndarray
    x2_hat: int | np.ndarray
    plnc_bit: int | np.ndarray


def joint_ml_detect(y, g1, g2, ps1: float, ps2: float) -> RelayDecision:
    """Nearest of the four superimposed points; the first minimum in enumeration order wins."""
    y = np.asarray(y, dtype=float)
    a1 = np.sqrt(ps1) * np.asarray(g1, dtype=float)
    a2 = np.sqrt(ps2) * np.asarray(g2, dtype=float)
    if np.any(a1 < 0) or np.any(a2 < 0):
        raise ValueError("relay gains must be non-negative")
    # (4, ...) squared distances
    expand = (slice(None),) + (None,) * np.broadcast(y, a1, a2).ndim
    dist = (y - a1 * _HYP[:, 0][expand] - a2 * _HYP[:, 1][expand]) ** 2
    idx = np.argmin(dist, axis=0)
    x1, x2, bit = _HYP[idx, 0].astype(np.int64), _HYP[idx, 1].astype(np.int64), _HYP_XOR[idx]
    if idx.ndim == 0:
        return RelayDecision(int(x1), int(x2), int(bit))
    return RelayDecision(x1, x2, bit)


def threshold_detect_plnc(y, ps1: float, ps2: float):
    """XOR bit from the unit-gain constellation: 0 outside ``+-max(sqrt(ps))``, else 1."""
    t = np.sqrt(max(ps1, ps2))
    bit = (np.abs(np.asarray(y, dtype=float)) <= t).astype(np.int64)
    return int(bit) if bit.ndim == 0 else bit


def bpsk_slice(y, gain=1.0):
    """+1 for ``y >= 0`` else -1. Gains are non-negative, so they never flip the sign."""
    if np.any(np.asarray(gain) < 0):
        raise ValueError("gain must be non-negative")
    sym = np.where(np.asarray(y, dtype=float) >= 0.0, 1, -1)
    return int(sym) if sym.ndim == 0 else sym


def recover_remote(local_bit, relayed_bit):
    """Remote bit at a destination: its own bit XOR the relayed network-coded bit."""
    if np.ndim(local_bit) or np.ndim(relayed_bit):
        return np.bitwise_xor(np.asarray(local_bit), np.asarray(relayed_bit))
    return int(local_bit) ^ int(relayed_bit)
