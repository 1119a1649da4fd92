"""Relay-node BER in AWGN for the duobinary-like PLNC decision rule.

With both sources sending BPSK the relay sees one of four amplitudes
``+-sqrt(ps1) +- sqrt(ps2)``. Outer (same-sign) points decode to XOR bit 0,
inner (alternate-sign) points to bit 1, with thresholds at
``+-max(sqrt(ps1), sqrt(ps2))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SystemConfig, validate
from .special import DEFAULT_QUAD, QuadratureSpec, integrate_half_pi, q_func

FORMS = ("qform", "craig")

HYPOTHESES = ((-1, -1), (-1, 1), (1, -1), (1, 1))


@dataclass(frozen=True)
class SuperimposedConstellation:
    points: tuple[float, float, float, float]
    xor_labels: tuple[int, int, int, int]
    thresholds: tuple[float, float]
    hypothesis_set: tuple[tuple[int, int], ...] = HYPOTHESES

    @classmethod
    def from_powers(cls, ps1: float, ps2: float) -> "SuperimposedConstellation":
        a, b = math.sqrt(ps1), math.sqrt(ps2)
        t = max(a, b)
        return cls(
            points=(a + b, a - b, -a + b, -a - b),
            xor_labels=(0, 1, 1, 0),
            thresholds=(-t, t),
        )

    def label_of(self, x1: int, x2: int) -> int:
        """XOR bit carried by the noiseless point of the pair (x1, x2)."""
        return int(x1 * x2 == -1)


def _amplitudes(cfg: SystemConfig) -> tuple[float, float, float]:
    validate(cfg)
    hi = math.sqrt(max(cfg.ps1, cfg.ps2))
    lo = math.sqrt(min(cfg.ps1, cfg.ps2))
    return hi, lo, math.sqrt(cfg.n0)


def awgn_symbol_error_outer(cfg: SystemConfig) -> float:
    """Error probability of the outer point ``sqrt(ps1) + sqrt(ps2)`` (and its mirror)."""
    hi, lo, sigma = _amplitudes(cfg)
    centre = hi + lo
    # Gaussian mass of the outer point falling inside (-hi, hi)
    return q_func((centre - hi) / sigma) - q_func((centre + hi) / sigma)


def awgn_symbol_error_inner(cfg: SystemConfig) -> float:
    """Error probability of the inner point ``sqrt(ps1) - sqrt(ps2)`` (and its mirror)."""
    hi, lo, sigma = _amplitudes(cfg)
    centre = hi - lo
    return q_func((hi - centre) / sigma) + q_func((hi + centre) / sigma)


def _exact_terms(cfg: SystemConfig) -> tuple[tuple[float, float], ...]:
    """(weight, argument^2) pairs such that Pe = sum w * Q(sqrt(arg^2))."""
    hi, lo, _ = _amplitudes(cfg)
    n0 = cfg.n0
    return (
        (1.0, lo * lo / n0),
        (-0.5, (2 * hi + lo) ** 2 / n0),
        (0.5, (2 * hi - lo) ** 2 / n0),
    )


def _craig_sum(terms, quad: QuadratureSpec) -> float:
    def integrand(omega):
        inv = 1.0 / (2.0 * np.sin(omega) ** 2)
        return sum(w * np.exp(-x_sq * inv) for w, x_sq in terms)

    return integrate_half_pi(integrand, quad) / math.pi


def awgn_relay_ber_exact(cfg: SystemConfig, form: str = "qform", quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Average relay XOR-bit error probability over the four equiprobable points."""
    terms = _exact_terms(cfg)
    if form == "qform":
        return sum(w * q_func(math.sqrt(x_sq)) for w, x_sq in terms)
    if form == "craig":
        return _craig_sum(terms, quad)
    raise ValueError(f"form must be one of {FORMS}, got {form!r}")


def awgn_relay_ber_approx(cfg: SystemConfig, form: str = "qform", quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """High-SNR approximation: only the minimum-distance term ``Q(sqrt(min(ps)/n0))``."""
    terms = _exact_terms(cfg)[:1]
    if form == "qform":
        return q_func(math.sqrt(terms[0][1]))
    if form == "craig":
        return _craig_sum(terms, quad)
    raise ValueError(f"form must be one of {FORMS}, got {form!r}")
