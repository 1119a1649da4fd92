"""Gaussian tail function and the [0, pi/2] quadrature used by every Craig-form integral."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special as sps

HALF_PI = 0.5 * math.pi


class QuadratureError(ArithmeticError):
    """Quadrature failed to converge or the integrand produced non-finite values.

    ``estimates`` holds the last two integral estimates (may be empty or NaN when
    the integrand itself misbehaved).
    """

    def __init__(self, message: str, estimates: tuple[float, ...] = ()):
        super().__init__(message)
        self.estimates = estimates


@dataclass(frozen=True)
class QuadratureSpec:
    """Fixed-order Gauss-Legendre rule with order doubling until two estimates agree."""

    order: int = 64
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_refinements: int = 10
    rule: str = "gauss-legendre"

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("quadrature order must be >= 2")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_refinements < 0:
            raise ValueError("max_refinements must be >= 0")
        if self.rule != "gauss-legendre":
            raise ValueError(f"unsupported rule {self.rule!r}")


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=32)
def _half_pi_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    # Open rule: nodes never touch omega = 0 where 1/sin^2 blows up.
    x, w = sps.roots_legendre(order)
    nodes = HALF_PI * 0.5 * (x + 1.0)
    weights = HALF_PI * 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _apply_rule(f: Callable[[np.ndarray], np.ndarray], order: int) -> float:
    nodes, weights = _half_pi_rule(order)
    with np.errstate(over="ignore", under="ignore"):
        values = np.asarray(f(nodes), dtype=float)
    if values.shape != nodes.shape:
        values = np.broadcast_to(values, nodes.shape)
    if not np.all(np.isfinite(values)):
        raise QuadratureError(f"integrand returned non-finite values at order {order}")
    return float(weights @ values)


def integrate_half_pi(f: Callable[[np.ndarray], np.ndarray], quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Integrate ``f`` over [0, pi/2].

    ``f`` is called with a 1-D array of nodes. The order is doubled until two
    consecutive estimates agree to ``max(abs_tol, rel_tol * |I|)``.
    """
    order = quad.order
    estimates = [_apply_rule(f, order)]
    for _ in range(quad.max_refinements):
        order *= 2
        estimates.append(_apply_rule(f, order))
        previous, current = estimates[-2:]
        if abs(current - previous) <= max(quad.abs_tol, quad.rel_tol * abs(current)):
            return current
    raise QuadratureError(
        f"no convergence after {quad.max_refinements} refinements (order {order})",
        estimates=tuple(estimates[-2:]),
    )


def q_func(x):
    """Standard Gaussian upper tail ``Q(x) = P(Z > x)``, via erfc."""
    result = 0.5 * sps.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(result) if np.ndim(result) == 0 else result


def craig_kernel(x_sq: float) -> Callable[[np.ndarray], np.ndarray]:
    """``omega -> exp(-x_sq / (2 sin^2 omega))``."""

    def kernel(omega):
        return np.exp(-x_sq / (2.0 * np.sin(omega) ** 2))

    return kernel


def q_func_craig(x: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Q(x) for x >= 0 through Craig's finite-range integral."""
    if x < 0:
        raise ValueError("Craig's form requires x >= 0")
    return integrate_half_pi(craig_kernel(x * x), quad) / math.pi
