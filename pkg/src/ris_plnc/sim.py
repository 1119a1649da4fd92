"""Monte-Carlo BER estimation for the relay, the single links and the two-slot protocol.

Trials run in fixed-size batches. Batch ``k`` of an estimate draws from
``stream(master_seed, kind, snr_db, k)``, and the stopping rule is applied to
the batches in index order, so a result depends only on the seed and never on
how many workers computed it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .channel import sample_gains, stream, link_observation, relay_observation
from .detect import bpsk_slice, joint_ml_detect, recover_remote
from .model import BerCurve, BerPoint, SystemConfig, bit_to_symbol, symbol_to_bit, validate

Z95 = 1.959963984540054

KIND_NODES = {
    "relay-awgn": "relay",
    "relay-fading": "relay",
    "e2e-d1": "e2e_d1",
    "e2e-d2": "e2e_d2",
    "e2e-avg": "e2e_avg",
    "local-d1": "e2e_d1",
    "local-d2": "e2e_d2",
    "link-s1d1": "s1d1",
    "link-s2d2": "s2d2",
    "link-rd1": "rd1",
    "link-rd2": "rd2",
}
LINK_KINDS = ("link-s1d1", "link-s2d2", "link-rd1", "link-rd2")


@dataclass(frozen=True)
class StoppingRule:
    """Stop once ``target_errors`` are seen (after ``min_trials``) or at ``max_trials``."""

    max_trials: int = 10_000_000
    target_errors: int = 200
    min_trials: int = 10_000
    batch_size: int = 20_000

    def __post_init__(self):
        if not (1 <= self.min_trials <= self.max_trials):
            raise ValueError("need 1 <= min_trials <= max_trials")
        if self.target_errors < 1:
            raise ValueError("target_errors must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")

    def batch_trials(self, index: int) -> int:
        return max(0, min(self.batch_size, self.max_trials - index * self.batch_size))

    def done(self, errors: int, trials: int) -> bool:
        return trials >= self.max_trials or (errors >= self.target_errors and trials >= self.min_trials)


def wilson_interval(errors: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    p = errors / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo, hi = max(0.0, centre - half), min(1.0, centre + half)
    # guard the ordering against rounding at p = 0 or 1
    return min(lo, p), max(hi, p)


# batch functions: (cfg, rng, size) -> (errors, counted trials)
BatchFn = Callable[[SystemConfig, np.random.Generator, int], tuple[int, int]]


def _random_bits(rng, size):
    return rng.integers(0, 2, size=size), rng.integers(0, 2, size=size)


def _relay_batch(awgn: bool) -> BatchFn:
    def run(cfg, rng, size):
        b1, b2 = _random_bits(rng, size)
        gains = None if awgn else sample_gains(cfg, rng, size, ("s1r", "s2r"))
        y, g1, g2 = relay_observation(gains, cfg, bit_to_symbol(b1), bit_to_symbol(b2), rng, awgn=awgn)
        decision = joint_ml_detect(y, g1, g2, cfg.ps1, cfg.ps2)
        return int(np.count_nonzero(decision.plnc_bit != (b1 ^ b2))), size

    return run


def _two_slot(cfg: SystemConfig, rng: np.random.Generator, size: int):
    """Run the full protocol; returns (remote at D1, remote at D2, local at D1, local at D2, b1, b2)."""
    b1, b2 = _random_bits(rng, size)
    x1, x2 = bit_to_symbol(b1), bit_to_symbol(b2)
    gains = sample_gains(cfg, rng, size)
    # slot 1: direct links and the superimposed relay observation
    local1 = symbol_to_bit(bpsk_slice(link_observation(gains["s1d1"], cfg.ps1, x1, cfg.n0, rng)))
    local2 = symbol_to_bit(bpsk_slice(link_observation(gains["s2d2"], cfg.ps2, x2, cfg.n0, rng)))
    y, g1, g2 = relay_observation(gains, cfg, x1, x2, rng)
    relay_bit = joint_ml_detect(y, g1, g2, cfg.ps1, cfg.ps2).plnc_bit
    # slot 2: relay forwards BPSK(x1_hat xor x2_hat) unconditionally
    xs = bit_to_symbol(relay_bit)
    heard1 = symbol_to_bit(bpsk_slice(link_observation(gains["rd1"], cfg.pr, xs, cfg.n0, rng)))
    heard2 = symbol_to_bit(bpsk_slice(link_observation(gains["rd2"], cfg.pr, xs, cfg.n0, rng)))
    return recover_remote(local1, heard1), recover_remote(local2, heard2), local1, local2, b1, b2


def _e2e_batch(destination: str, local: bool = False) -> BatchFn:
    def run(cfg, rng, size):
        remote1, remote2, local1, local2, b1, b2 = _two_slot(cfg, rng, size)
        if local:
            e1 = int(np.count_nonzero(local1 != b1))
            e2 = int(np.count_nonzero(local2 != b2))
        else:
            e1 = int(np.count_nonzero(remote1 != b2))
            e2 = int(np.count_nonzero(remote2 != b1))
        if destination == "D1":
            return e1, size
        if destination == "D2":
            return e2, size
        return e1 + e2, 2 * size

    return run


_LINK_POWER = {"s1d1": "ps1", "s2d2": "ps2", "rd1": "pr", "rd2": "pr"}


def _link_batch(link: str) -> BatchFn:
    def run(cfg, rng, size):
        sent = bit_to_symbol(rng.integers(0, 2, size=size))
        gain = sample_gains(cfg, rng, size, (link,))[link]
        y = link_observation(gain, getattr(cfg, _LINK_POWER[link]), sent, cfg.n0, rng)
        return int(np.count_nonzero(bpsk_slice(y, gain) != sent)), size

    return run


def _accumulate(batch: BatchFn, cfg, stop: StoppingRule, master_seed: int, key: tuple, workers: int):
    errors = trials = counted = 0

    def one(index_size):
        index, size = index_size
        return batch(cfg, stream(master_seed, *key, index), size)

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        index = 0
        while True:
            wave = [(i, stop.batch_trials(i)) for i in range(index, index + max(1, workers))]
            wave = [w for w in wave if w[1] > 0]
            results = pool.map(one, wave) if pool else map(one, wave)
            for (_, size), (e, c) in zip(wave, results):
                trials += size
                errors += e
                counted += c
                if stop.done(errors, trials):
                    return errors, counted
            index += len(wave)
    finally:
        if pool:
            pool.shutdown(wait=True, cancel_futures=True)


def _estimate(kind: str, batch: BatchFn, cfg, snr_db, stop, master_seed, workers, key=None) -> BerPoint:
    snr_db = float(snr_db)
    at = validate(cfg).with_snr_db(snr_db)
    errors, trials = _accumulate(batch, at, stop, master_seed, key or (kind, snr_db), workers)
    lo, hi = wilson_interval(errors, trials)
    source = "mc-local" if kind.startswith("local-") else "mc"
    return BerPoint(snr_db, errors / trials, source, KIND_NODES[kind], trials, errors, lo, hi)


def estimate_relay_ber(
    cfg: SystemConfig,
    snr_db: float,
    stop: StoppingRule = StoppingRule(),
    master_seed: int = 0,
    channel: str = "fading",
    workers: int = 1,
) -> BerPoint:
    """Relay XOR-bit error rate with joint ML detection, in fading or pure AWGN."""
    if channel not in ("fading", "awgn"):
        raise ValueError("channel must be 'fading' or 'awgn'")
    kind = f"relay-{channel}"
    return _estimate(kind, _relay_batch(channel == "awgn"), cfg, snr_db, stop, master_seed, workers)


def estimate_e2e_ber(
    cfg: SystemConfig,
    snr_db: float,
    destination: str = "D1",
    stop: StoppingRule = StoppingRule(),
    master_seed: int = 0,
    workers: int = 1,
) -> BerPoint:
    """Remote-bit error rate at D1, D2 or both pooled (``"avg"``) over the two-slot protocol.

    All destinations share the protocol streams, so D1 and D2 estimates at the
    same seed see identical channel and noise draws.
    """
    if destination not in ("D1", "D2", "avg"):
        raise ValueError("destination must be 'D1', 'D2' or 'avg'")
    kind = f"e2e-{destination.lower()}"
    return _estimate(
        kind, _e2e_batch(destination), cfg, snr_db, stop, master_seed, workers, key=("e2e", float(snr_db))
    )


def estimate_local_ber(
    cfg: SystemConfig,
    snr_db: float,
    destination: str = "D1",
    stop: StoppingRule = StoppingRule(),
    master_seed: int = 0,
    workers: int = 1,
) -> BerPoint:
    """Slot-1 error rate of a destination's own-source bit, drawn from the e2e protocol streams.

    Reported with source ``mc-local`` next to the remote-bit estimate so both
    error paths of the union-style analytic sum can be inspected.
    """
    if destination not in ("D1", "D2"):
        raise ValueError("destination must be 'D1' or 'D2'")
    kind = f"local-{destination.lower()}"
    return _estimate(
        kind, _e2e_batch(destination, local=True), cfg, snr_db, stop, master_seed, workers,
        key=("e2e", float(snr_db)),
    )


def estimate_link_ber(
    cfg: SystemConfig,
    snr_db: float,
    link: str,
    stop: StoppingRule = StoppingRule(),
    master_seed: int = 0,
    workers: int = 1,
) -> BerPoint:
    """BPSK error rate of one single-input link (s1d1, s2d2, rd1 or rd2)."""
    if link not in _LINK_POWER:
        raise ValueError(f"unknown link {link!r}")
    kind = f"link-{link}"
    return _estimate(kind, _link_batch(link), cfg, snr_db, stop, master_seed, workers)


def estimate(kind: str, cfg, snr_db, stop=StoppingRule(), master_seed=0, workers=1) -> BerPoint:
    if kind == "relay-awgn":
        return estimate_relay_ber(cfg, snr_db, stop, master_seed, "awgn", workers)
    if kind == "relay-fading":
        return estimate_relay_ber(cfg, snr_db, stop, master_seed, "fading", workers)
    if kind.startswith("e2e-"):
        dest = {"e2e-d1": "D1", "e2e-d2": "D2", "e2e-avg": "avg"}[kind]
        return estimate_e2e_ber(cfg, snr_db, dest, stop, master_seed, workers)
    if kind in ("local-d1", "local-d2"):
        return estimate_local_ber(cfg, snr_db, kind[6:].upper(), stop, master_seed, workers)
    if kind in LINK_KINDS:
        return estimate_link_ber(cfg, snr_db, kind[5:], stop, master_seed, workers)
    raise ValueError(f"unknown sweep kind {kind!r}; expected one of {sorted(KIND_NODES)}")


def sweep(
    cfg: SystemConfig,
    snr_grid: Iterable[float],
    kind: str,
    stop: StoppingRule = StoppingRule(),
    master_seed: int = 0,
    workers: int = 1,
) -> BerCurve:
    """One Monte-Carlo BerPoint per grid value; each point has its own derived streams."""
    grid = [float(s) for s in snr_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("snr grid must be strictly increasing")
    if kind not in KIND_NODES:
        raise ValueError(f"unknown sweep kind {kind!r}; expected one of {sorted(KIND_NODES)}")
    points = [estimate(kind, cfg, s, stop, master_seed, workers) for s in grid]
    return BerCurve(points, cfg, kind)


def sweep_to_crossing(
    cfg: SystemConfig,
    snr_grid: Iterable[float],
    kind: str,
    target: float = 1e-3,
    stop: StoppingRule = StoppingRule(),
    master_seed: int = 0,
    workers: int = 1,
    beyond: int = 1,
) -> BerCurve:
    """Like :func:`sweep`, but ends ``beyond`` points after the curve first drops below ``target``.

    Points that are computed are identical to the corresponding :func:`sweep` points.
    """
    grid = [float(s) for s in snr_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("snr grid must be strictly increasing")
    if beyond < 1:
        raise ValueError("beyond must be >= 1")
    points, below = [], 0
    for s in grid:
        points.append(estimate(kind, cfg, s, stop, master_seed, workers))
        below += points[-1].ber < target
        if below >= beyond:
            break
    return BerCurve(points, cfg, kind)


def crossing_db(snr_db: Sequence[float], ber: Sequence[float], target: float = 1e-3) -> float | None:
    """First SNR where the curve falls through ``target``.

    Linear interpolation of log10(BER) against dB between the bracketing points;
    zero-BER points are skipped. ``None`` when the curve never crosses.
    """
    pts = [(float(s), float(b)) for s, b in zip(snr_db, ber) if b > 0]
    for (s0, b0), (s1, b1) in zip(pts, pts[1:]):
        if b0 >= target > b1:
            l0, l1, lt = math.log10(b0), math.log10(b1), math.log10(target)
            return s0 + (lt - l0) * (s1 - s0) / (l1 - l0)
    return None
