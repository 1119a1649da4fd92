"""Reference values come from scripts/compute_oracles.py (mpmath, 30 digits)."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ris_plnc.special import (
    QuadratureError,
    QuadratureSpec,
    craig_kernel,
    integrate_half_pi,
    q_func,
    q_func_craig,
)

Q1 = 0.158655253931457051
Q8 = 6.22096057427178412e-16
PI_Q1 = 0.498430180204488634


class TestQFunc:
    def test_centre(self):
        assert q_func(0.0) == 0.5

    def test_oracle_values(self):
        assert q_func(1.0) == pytest.approx(Q1, rel=1e-12)
        assert q_func(8.0) == pytest.approx(Q8, rel=1e-12)

    def test_deep_tail_does_not_underflow(self):
        assert q_func(37.0) > 0.0

    def test_strictly_decreasing(self):
        x = np.linspace(-6, 8, 2001)  # below -6, 1 - Q(x) is lost to rounding
        assert np.all(np.diff(q_func(x)) < 0)

    @given(st.floats(-30, 30))
    def test_symmetry(self, x):
        assert abs(q_func(x) + q_func(-x) - 1.0) <= 1e-12


class TestCraig:
    def test_zero(self):
        assert q_func_craig(0.0) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("x", [1.0, 3.0])
    def test_matches_erfc(self, x):
        assert abs(q_func_craig(x) - q_func(x)) <= 1e-10

    def test_identity_on_grid(self):
        xs = np.linspace(0, 8, 200)
        assert max(abs(q_func(x) - q_func_craig(x)) for x in xs) <= 1e-10

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            q_func_craig(-1.0)


class TestIntegrateHalfPi:
    def test_constant(self):
        assert integrate_half_pi(lambda w: np.ones_like(w)) == pytest.approx(math.pi / 2, rel=1e-14)

    def test_scalar_integrand_broadcasts(self):
        assert integrate_half_pi(lambda w: 1.0) == pytest.approx(math.pi / 2, rel=1e-14)

    def test_sin_squared(self):
        assert integrate_half_pi(lambda w: np.sin(w) ** 2) == pytest.approx(math.pi / 4, rel=1e-14)

    def test_craig_kernel(self):
        assert integrate_half_pi(craig_kernel(1.0)) == pytest.approx(PI_Q1, rel=1e-12)

    @pytest.mark.parametrize("x", [0.5, 2.0, 5.0])
    def test_doubling_is_stable_once_converged(self, x):
        spec = QuadratureSpec()
        a = integrate_half_pi(craig_kernel(x * x), spec)
        b = integrate_half_pi(craig_kernel(x * x), QuadratureSpec(order=2 * spec.order))
        assert abs(a - b) <= max(spec.abs_tol, spec.rel_tol * abs(a))

    def test_non_convergence_carries_estimates(self):
        spec = QuadratureSpec(order=8, max_refinements=1)
        with pytest.raises(QuadratureError) as info:
            integrate_half_pi(lambda w: np.cos(400 * w), spec)
        assert len(info.value.estimates) == 2

    def test_non_finite_integrand(self):
        with pytest.raises(QuadratureError):
            integrate_half_pi(lambda w: np.full_like(w, np.nan))

    @pytest.mark.parametrize("kwargs", [dict(order=1), dict(abs_tol=0.0), dict(rel_tol=-1.0), dict(rule="simpson")])
    def test_spec_validation(self, kwargs):
        with pytest.raises(ValueError):
            QuadratureSpec(**kwargs)
