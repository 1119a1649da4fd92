"""Fading-channel BER analytics built on the joint MGF of the relay SNR.

Each source-to-relay branch is modelled as ``snr * A**2`` with ``A`` the
co-phased sum of ``n/2`` Rayleigh magnitudes treated as Gaussian. The MGF of
that scaled non-central chi-square variate, evaluated at
``s = -g / (2 sin^2 omega)`` and averaged over omega, gives the BER.

Three formula modes are supported:

``printed``
    The relay MGF with the exponent sign exactly as typeset. It exceeds 1 on
    ``s < 0`` and is rejected with :class:`InvalidAsPrintedError`.
``corrected``
    Sign repaired, printed coefficients kept (mean term ``n^2 pi snr / 8``).
``derived``
    Sign repaired and the mean term recomputed from the per-element Rayleigh
    moments (``n^2 pi snr / 16``); this is exactly the MGF of the Gaussian
    approximation and is the mode that matches channel sampling.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import FORMULA_MODES, LinkBudget, SystemConfig, validate
from .special import DEFAULT_QUAD, QuadratureSpec, integrate_half_pi

FOUR_MINUS_PI = 4.0 - math.pi
DESTINATIONS = ("D1", "D2")
LINK_MODES = ("bound", "integral")

# divisor of n^2 pi snr in the branch exponent
_MEAN_DIVISOR = {"printed": 8.0, "corrected": 8.0, "derived": 16.0}


class InvalidAsPrintedError(ArithmeticError):
    """The literally typeset MGF returned a value above 1 on the negative axis."""

    def __init__(self, value):
        self.value = value
        super().__init__(f"relay MGF as printed evaluates to {np.max(value):.6g} > 1 (invalid-as-printed)")


class ClampWarning(UserWarning):
    """The union-style end-to-end sum exceeded 1 and was clamped."""


@dataclass(frozen=True)
class Branch:
    n: int
    snr: float


@dataclass(frozen=True)
class MgfParams:
    """Coefficients of the two-branch relay MGF.

    ``v_sq`` is the squared commonality constant used by :func:`mgf_ber`;
    ``power_factors`` are the three generalised powers of the exact expression.
    """

    branches: tuple[Branch, Branch]
    v_sq: float
    power_factors: tuple[float, float, float]
    mode: str = "corrected"

    def __post_init__(self):
        if self.mode not in FORMULA_MODES:
            raise ValueError(f"mode must be one of {FORMULA_MODES}, got {self.mode!r}")
        for b in self.branches:
            if b.snr < 0 or b.n < 0:
                raise ValueError("branch snr and n must be non-negative")
        pg1, pg2, pg3 = self.power_factors
        if not (pg1 > 0 and pg2 > pg3 > 0):
            raise ValueError("power factors must satisfy pg1 > 0 and pg2 > pg3 > 0")

    @classmethod
    def from_config(cls, cfg: SystemConfig) -> "MgfParams":
        validate(cfg)
        return cls(
            branches=(
                Branch(cfg.n1, cfg.eta1**2 * cfg.ps1 / cfg.n0),
                Branch(cfg.n2, cfg.eta2**2 * cfg.ps2 / cfg.n0),
            ),
            v_sq=min(cfg.ps1, cfg.ps2),
            power_factors=power_factors(cfg.ps1, cfg.ps2),
            mode=cfg.formula_mode,
        )

    def with_v_sq(self, v_sq: float) -> "MgfParams":
        return MgfParams(self.branches, v_sq, self.power_factors, self.mode)


def power_factors(ps1: float, ps2: float) -> tuple[float, float, float]:
    hi, lo = math.sqrt(max(ps1, ps2)), math.sqrt(min(ps1, ps2))
    return lo * lo, (2 * hi + lo) ** 2, (2 * hi - lo) ** 2


def branch_mgf(s, n: float, snr: float, mode: str = "corrected"):
    """MGF factor of one branch; ``s`` may be an array. No validity check."""
    s = np.asarray(s, dtype=float)
    base = 1.0 - s * n * FOUR_MINUS_PI * snr / 4.0
    lam = n * n * math.pi * snr / _MEAN_DIVISOR[mode]
    exponent = (-s * lam if mode == "printed" else s * lam) / base
    return base**-0.5 * np.exp(exponent)


def relay_mgf(s, params: MgfParams):
    """Joint MGF of the relay SNR at ``s <= 0`` (scalar or array)."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr > 0):
        raise ValueError("relay_mgf is only defined here for s <= 0")
    value = np.ones_like(s_arr)
    for b in params.branches:
        value = value * branch_mgf(s_arr, b.n, b.snr, params.mode)
    if params.mode == "printed" and np.any(value > 1.0):
        raise InvalidAsPrintedError(float(np.max(value)))
    return float(value) if value.ndim == 0 else value


def mgf_ber(
    params: MgfParams,
    quad: QuadratureSpec = DEFAULT_QUAD,
    mgf: Callable[[np.ndarray], np.ndarray] | None = None,
) -> float:
    """``(1/pi) int_0^{pi/2} M(-v^2 / (2 sin^2 w)) dw``.

    ``mgf`` replaces the relay MGF, which lets known MGFs be pushed through the
    same quadrature path.
    """
    if mgf is None:
        mgf = lambda s: relay_mgf(s, params)  # noqa: E731
    v_sq = params.v_sq
    result = integrate_half_pi(lambda w: mgf(-v_sq / (2.0 * np.sin(w) ** 2)), quad) / math.pi
    if not (-1e-12 <= result <= 0.5 + 1e-12):
        raise ArithmeticError(f"MGF-based BER {result!r} outside [0, 1/2]; MGF is not valid")
    return min(max(result, 0.0), 0.5)


def relay_ber_approx_fading(cfg: SystemConfig, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Relay BER in fading using only the minimum-distance term (``g = min(ps)``)."""
    return mgf_ber(MgfParams.from_config(cfg), quad)


def relay_ber_upper_bound(cfg: SystemConfig) -> float:
    """Approximate relay BER with the integrand frozen at ``omega = pi/2``."""
    params = MgfParams.from_config(cfg)
    return 0.5 * relay_mgf(-params.v_sq / 2.0, params)


def relay_ber_exact_fading(cfg: SystemConfig, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Alternating three-term sum over the generalised power factors."""
    params = MgfParams.from_config(cfg)
    signs = (1.0, -1.0, 1.0)

    def integrand(w):
        inv = 1.0 / (2.0 * np.sin(w) ** 2)
        return sum(sign * relay_mgf(-pg * inv, params) for sign, pg in zip(signs, params.power_factors))

    return integrate_half_pi(integrand, quad) / math.pi


def _link_factor(omega, link: LinkBudget, n0: float):
    na, p = link.allocated_elements, link.tx_power
    inv = 1.0 / np.sin(omega) ** 2
    base = 1.0 + na * FOUR_MINUS_PI * p * inv / (2.0 * n0)
    return base**-0.5 * np.exp(-(na * na * math.pi * p * inv / (4.0 * n0)) / base)


def link_ber(link: LinkBudget, n0: float, mode: str = "bound", quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """BPSK BER of one RIS-assisted single-input link.

    ``bound`` freezes the integrand at ``omega = pi/2`` (half its value);
    ``integral`` averages it over omega.
    """
    if n0 <= 0:
        raise ValueError("noise variance must be positive")
    if mode == "bound":
        return 0.5 * float(_link_factor(math.pi / 2, link, n0))
    if mode == "integral":
        return integrate_half_pi(lambda w: _link_factor(w, link, n0), quad) / math.pi
    raise ValueError(f"mode must be one of {LINK_MODES}, got {mode!r}")


def destination_links(cfg: SystemConfig, destination: str) -> tuple[LinkBudget, LinkBudget]:
    """(direct link, relay-to-destination link) budgets for D1 or D2."""
    validate(cfg)
    relay_link = LinkBudget(cfg.n3 // 2, cfg.eta3**2 * cfg.pr)
    if destination == "D1":
        return LinkBudget(cfg.n1 // 2, cfg.eta1**2 * cfg.ps1), relay_link
    if destination == "D2":
        return LinkBudget(cfg.n2 // 2, cfg.eta2**2 * cfg.ps2), relay_link
    raise ValueError(f"destination must be one of {DESTINATIONS}, got {destination!r}")


def overall_ber(
    cfg: SystemConfig,
    destination: str,
    quad: QuadratureSpec = DEFAULT_QUAD,
    link_mode: str = "integral",
    relay_ber: float | None = None,
) -> float:
    """``Pe(Si->Di) + Pe(relay) * Pe(R->Di)``, clamped to [0, 1].

    ``relay_ber`` overrides the exact fading relay BER. A :class:`ClampWarning`
    is emitted when clamping changed the value.
    """
    direct, relay_link = destination_links(cfg, destination)
    pe_direct = link_ber(direct, cfg.n0, link_mode, quad)
    pe_rd = link_ber(relay_link, cfg.n0, link_mode, quad)
    pe_r = relay_ber_exact_fading(cfg, quad) if relay_ber is None else relay_ber
    total = pe_direct + pe_r * pe_rd
    clamped = min(max(total, 0.0), 1.0)
    if clamped != total:
        warnings.warn(f"overall BER {total!r} clamped to {clamped!r}", ClampWarning, stacklevel=2)
    return clamped
