import math

import numpy as np
import pytest

from ris_plnc.channel import (
    LINKS,
    link_observation,
    relay_observation,
    sample_gains,
    sample_realization,
    stream,
)
from ris_plnc.model import SystemConfig

MEAN_ALPHA = math.sqrt(math.pi) / 2
VAR_ALPHA = (4 - math.pi) / 4


class TestRealization:
    def test_shapes_and_signs(self, ref_cfg):
        r = sample_realization(ref_cfg.replace(n3=12), np.random.default_rng(0), size=50)
        for name in LINKS:
            link = r.link(name)
            assert link.magnitude.shape == (50, 6 if name.startswith("rd") else 4)
            assert np.all(link.magnitude >= 0)
        assert all(np.all(g >= 0) for g in r.gains().values())

    def test_ideal_gain_is_magnitude_sum(self, ref_cfg):
        r = sample_realization(ref_cfg.replace(eta1=0.5), np.random.default_rng(1), size=20)
        np.testing.assert_allclose(r.gains()["s1r"], 0.5 * r.s1r.magnitude.sum(axis=1))
        # the complex co-phased sum agrees with the shortcut
        np.testing.assert_allclose(r.s1r.gain, r.gains()["s1r"], rtol=1e-12)

    def test_same_seed_identical(self, ref_cfg):
        a = sample_realization(ref_cfg, stream(9, "x"), size=10)
        b = sample_realization(ref_cfg, stream(9, "x"), size=10)
        for name in LINKS:
            assert np.array_equal(a.link(name).magnitude, b.link(name).magnitude)
            assert np.array_equal(a.link(name).phase, b.link(name).phase)

    def test_element_moments(self, ref_cfg):
        gain = sample_gains(ref_cfg, np.random.default_rng(3), 1_000_000, ("s1r",))["s1r"]
        n = gain.size
        se_mean = gain.std(ddof=1) / math.sqrt(n)
        assert abs(gain.mean() - 4 * MEAN_ALPHA) <= 3 * se_mean
        centred = gain - gain.mean()
        se_var = math.sqrt((np.mean(centred**4) - np.var(centred) ** 2) / n)
        assert abs(gain.var(ddof=1) - 4 * VAR_ALPHA) <= 3 * se_var

    def test_no_ris_single_unit_power_element(self, ref_cfg):
        cfg = ref_cfg.replace(ris_enabled=False)
        r = sample_realization(cfg, np.random.default_rng(4), size=200_000)
        assert r.s2r.magnitude.shape == (200_000, 1)
        assert np.mean(r.s2r.magnitude**2) == pytest.approx(1.0, abs=0.01)

    def test_random_phases_lose_gain(self, ref_cfg):
        rng = np.random.default_rng(5)
        ideal = sample_realization(ref_cfg, rng, size=50_000).gains()["rd1"].mean()
        random = sample_realization(ref_cfg, rng, size=50_000, compensation="random").gains()["rd1"].mean()
        assert random < ideal

    def test_larger_surface_dominates(self):
        rng = np.random.default_rng(6)
        small = np.sort(sample_gains(SystemConfig(n3=8), rng, 100_000, ("rd1",))["rd1"])
        big = np.sort(sample_gains(SystemConfig(n3=16), rng, 100_000, ("rd1",))["rd1"])
        grid = np.linspace(0, 12, 200)
        cdf_small = np.searchsorted(small, grid) / small.size
        cdf_big = np.searchsorted(big, grid) / big.size
        dkw = math.sqrt(math.log(2 / 1e-6) / (2 * 100_000))
        assert np.all(cdf_big <= cdf_small + 2 * dkw)
        assert np.median(big) > np.median(small)

    def test_instantaneous_snrs(self, ref_cfg):
        r = sample_realization(ref_cfg, np.random.default_rng(7), size=5)
        g = r.gains()
        np.testing.assert_allclose(r.relay_snr(ref_cfg), (2 * g["s1r"] ** 2 + g["s2r"] ** 2) / 2)
        np.testing.assert_allclose(r.direct_snr(ref_cfg, 2), g["s2d2"] ** 2)
        np.testing.assert_allclose(r.relay_dest_snr(ref_cfg, 1), 2 * g["rd1"] ** 2)

    def test_bad_compensation(self, ref_cfg):
        with pytest.raises(ValueError):
            sample_realization(ref_cfg, np.random.default_rng(0), compensation="partial")


class TestObservations:
    def test_awgn_constellation(self, ref_cfg):
        quiet = ref_cfg.replace(n0=1e-24)
        rng = np.random.default_rng(0)
        y, g1, g2 = relay_observation(None, quiet, 1, 1, rng, awgn=True)
        assert float(y) == pytest.approx(math.sqrt(2) + 1, abs=1e-9) and g1 == g2 == 1.0
        y, *_ = relay_observation(None, quiet, 1, -1, rng, awgn=True)
        assert float(y) == pytest.approx(math.sqrt(2) - 1, abs=1e-9)

    def test_fading_noise_free(self, ref_cfg):
        quiet = ref_cfg.replace(n0=1e-24)
        rng = np.random.default_rng(1)
        r = sample_realization(quiet, rng, size=100)
        x1, x2 = rng.choice([-1, 1], 100), rng.choice([-1, 1], 100)
        y, g1, g2 = relay_observation(r, quiet, x1, x2, rng)
        np.testing.assert_allclose(y, math.sqrt(2) * g1 * x1 + g2 * x2, atol=1e-9)

    def test_link_noise_free(self):
        rng = np.random.default_rng(2)
        assert link_observation(1.0, 4.0, 1, 1e-24, rng) == pytest.approx(2.0, abs=1e-9)
        assert link_observation(1.5, 4.0, -1, 1e-24, rng) == pytest.approx(-3.0, abs=1e-9)

    def test_link_mean(self):
        y = link_observation(np.full(1_000_000, 0.8), 3.0, 1, 2.0, np.random.default_rng(3))
        assert abs(y.mean() - math.sqrt(3.0) * 0.8) <= 3 * math.sqrt(2.0 / y.size)

    def test_negative_gain_rejected(self):
        with pytest.raises(ValueError):
            link_observation(-0.1, 1.0, 1, 1.0, np.random.default_rng(0))


class TestStreams:
    def test_deterministic(self):
        assert stream(3, "relay", 1.5, 0).random() == stream(3, "relay", 1.5, 0).random()

    def test_key_parts_separate_streams(self):
        draws = {stream(3, *k).random() for k in [("a", 0.0, 0), ("a", 0.0, 1), ("b", 0.0, 0), ("a", -0.0, 0)]}
        assert len(draws) == 4
