import dataclasses

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ris_plnc.model import (
    BerCurve,
    BerPoint,
    ConfigError,
    LinkBudget,
    SystemConfig,
    bit_to_symbol,
    config_to_text,
    load_config,
    parse_config_text,
    symbol_to_bit,
    validate,
)

valid_configs = st.builds(
    SystemConfig,
    ps1=st.floats(1e-3, 1e3),
    ps2=st.floats(1e-3, 1e3),
    n0=st.floats(1e-6, 1e6),
    n1=st.integers(1, 64).map(lambda k: 2 * k),
    n2=st.integers(1, 64).map(lambda k: 2 * k),
    n3=st.integers(1, 64).map(lambda k: 2 * k),
    eta1=st.floats(1e-3, 1.0),
    formula_mode=st.sampled_from(["printed", "corrected", "derived"]),
    ris_enabled=st.booleans(),
)


class TestValidate:
    def test_reference_setting_accepted(self, ref_cfg):
        assert validate(ref_cfg) is ref_cfg

    def test_odd_element_count(self):
        with pytest.raises(ConfigError, match="element count must be even"):
            validate(SystemConfig(n1=7))

    def test_zero_noise(self):
        with pytest.raises(ConfigError, match="noise variance must be positive"):
            validate(SystemConfig(n0=0.0))

    @pytest.mark.parametrize(
        "changes",
        [{"ps1": 0.0}, {"ps2": -1.0}, {"pr": 0.0}, {"eta2": 0.0}, {"eta3": 1.5},
         {"n3": 0}, {"formula_mode": "typo"}, {"n2": 4.0}],
    )
    def test_rejects(self, changes):
        with pytest.raises(ConfigError):
            SystemConfig(**changes)

    def test_replace_revalidates(self, ref_cfg):
        with pytest.raises(ConfigError):
            ref_cfg.replace(n1=3)

    @given(valid_configs)
    def test_idempotent(self, cfg):
        assert validate(validate(cfg)) == validate(cfg)

    def test_pr_defaults_to_stronger_source(self):
        assert SystemConfig(ps1=1.0, ps2=5.0).pr == 5.0
        assert SystemConfig(ps1=2.0, ps2=1.0, pr=0.5).pr == 0.5

    def test_with_snr_db(self, ref_cfg):
        assert ref_cfg.with_snr_db(10.0).n0 == pytest.approx(0.1)
        assert ref_cfg.with_snr_db(-3.0).snr_db == pytest.approx(-3.0)


class TestBits:
    def test_mapping(self):
        assert bit_to_symbol(0) == 1 and bit_to_symbol(1) == -1

    def test_round_trip(self):
        for x in (1, -1):
            assert bit_to_symbol(symbol_to_bit(x)) == x
        arr = np.array([1, -1, -1, 1])
        np.testing.assert_array_equal(bit_to_symbol(symbol_to_bit(arr)), arr)

    @pytest.mark.parametrize("a", [0, 1])
    @pytest.mark.parametrize("b", [0, 1])
    def test_xor_is_product(self, a, b):
        assert bit_to_symbol(a) * bit_to_symbol(b) == bit_to_symbol(a ^ b)

    def test_bad_symbol(self):
        with pytest.raises(ValueError):
            symbol_to_bit(0)


class TestResults:
    def test_analytic_point_zero_width(self):
        p = BerPoint(0.0, 0.1, "analytic-exact")
        assert p.ci_low == p.ci_high == 0.1 and p.half_width == 0.0

    @pytest.mark.parametrize(
        "kwargs",
        [dict(ber=1.2), dict(ber=0.1, ci_low=0.2, ci_high=0.3), dict(ber=0.1, source="guess"),
         dict(ber=0.1, trials=10, errors=11, ci_low=0.0, ci_high=0.5), dict(ber=0.1, node="d3")],
    )
    def test_point_invariants(self, kwargs):
        kwargs.setdefault("source", "mc")
        with pytest.raises(ValueError):
            BerPoint(snr_db=0.0, **kwargs)

    def test_curve_checks(self, ref_cfg):
        a, b = BerPoint(0.0, 0.1, "mc", trials=10, errors=1, ci_low=0.0, ci_high=0.4), BerPoint(1.0, 0.05, "mc")
        assert len(BerCurve([a, b], ref_cfg)) == 2
        with pytest.raises(ValueError, match="strictly increasing"):
            BerCurve([b, a], ref_cfg)
        with pytest.raises(ValueError, match="single source"):
            BerCurve([a, BerPoint(2.0, 0.01, "analytic-exact")], ref_cfg)

    def test_link_budget(self):
        assert LinkBudget(0, 1.0).allocated_elements == 0
        with pytest.raises(ConfigError):
            LinkBudget(-1, 1.0)
        with pytest.raises(ConfigError):
            LinkBudget(2, 0.0)


class TestConfigFile:
    def test_parse(self):
        text = "# scenario\nps1 = 4   # stronger\nn1=16\nris_enabled = false\nformula_mode = derived\n\n"
        assert parse_config_text(text) == {"ps1": 4.0, "n1": 16, "ris_enabled": False, "formula_mode": "derived"}

    @pytest.mark.parametrize("text", ["n1 = seven", "bogus = 1", "ps1 2", "ris_enabled = maybe"])
    def test_malformed(self, text):
        with pytest.raises(ConfigError):
            parse_config_text(text)

    def test_load_with_overrides(self, tmp_path):
        path = tmp_path / "cfg.txt"
        path.write_text("ps1 = 3\nn3 = 4\n", encoding="utf-8")
        cfg = load_config(path, {"n3": 12, "ps2": None})
        assert (cfg.ps1, cfg.ps2, cfg.n3) == (3.0, 1.0, 12)

    @given(valid_configs)
    def test_text_round_trip(self, cfg):
        assert SystemConfig(**parse_config_text(config_to_text(cfg))) == cfg
