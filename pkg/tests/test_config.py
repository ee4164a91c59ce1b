import json
from fractions import Fraction

import pytest

from qkernel.config import (
    ConfigError,
    RunConfig,
    Tolerances,
    config_from_env,
    load_run_config,
    parse_q,
    truncation_from_env,
)
from qkernel.qcore import Mode


def test_defaults(clean_env):
    config = load_run_config()
    assert config.q == Fraction(1, 2)
    assert config.seed == 1729
    assert config.jobs == 1
    assert config.mode is None
    assert config.expected_failures == ["gf.bailey"]
    assert config.trunc.max_terms == 10000


def test_threshold_by_class():
    config = RunConfig()
    assert config.threshold("exact") == 0.0
    assert config.threshold("float_series") == 1e-10
    assert config.threshold("bailey") == 1e-8
    assert RunConfig(tol_override=1e-3).threshold("exact") == 1e-3


def test_context_mode():
    config = RunConfig(q=Fraction(1, 3))
    assert config.context(Mode.EXACT).q == Fraction(1, 3)
    assert not config.context(Mode.FLOAT).is_exact
    forced = RunConfig(mode=Mode.FLOAT)
    assert not forced.context(Mode.EXACT).is_exact


@pytest.mark.parametrize("kwargs", [
    {"q": Fraction(1)},
    {"samples": 0},
    {"jobs": 0},
    {"tol_override": -1.0},
])
def test_invalid_values(kwargs):
    with pytest.raises(ConfigError):
        RunConfig(**kwargs)


def test_with_overrides_skips_none():
    config = RunConfig().with_overrides(seed=7, samples=None, only=["gf.*"])
    assert config.seed == 7
    assert config.samples is None
    assert config.only == ["gf.*"]


class TestParseQ:
    @pytest.mark.parametrize("raw,expected", [
        ("1/2", Fraction(1, 2)),
        ("0.4", Fraction(2, 5)),
        (0.25, Fraction(1, 4)),
        (Fraction(3, 4), Fraction(3, 4)),
    ])
    def test_valid(self, raw, expected):
        assert parse_q(raw) == expected

    @pytest.mark.parametrize("raw", ["abc", "2", "0", "1/0"])
    def test_invalid(self, raw):
        with pytest.raises(ConfigError):
            parse_q(raw)


class TestFromDict:
    def test_keys(self):
        config = RunConfig.from_dict({
            "q": "1/3",
            "mode": "exact",
            "seed": 11,
            "samples": 2,
            "only": ["pde.*"],
            "max_terms": 500,
            "tolerances": {"float_series": 1e-9},
        })
        assert config.q == Fraction(1, 3)
        assert config.mode is Mode.EXACT
        assert config.seed == 11
        assert config.samples == 2
        assert config.only == ["pde.*"]
        assert config.trunc.max_terms == 500
        assert config.tolerances.float_series == 1e-9
        assert config.tolerances.bailey == Tolerances().bailey

    @pytest.mark.parametrize("data", [
        {"colour": 1},
        {"q": "2"},
        {"mode": "symbolic"},
        {"tolerances": {"exact": -1}},
        {"tolerances": {"nonsense": 1}},
        {"only": "pde.*"},
        {"max_terms": 0},
        [],
    ])
    def test_rejects(self, data):
        with pytest.raises(ConfigError):
            RunConfig.from_dict(data)


class TestEnvironment:
    def test_max_terms(self, clean_env):
        clean_env.setenv("QKERNEL_MAX_TERMS", "250")
        assert truncation_from_env().max_terms == 250

    def test_bad_max_terms(self, clean_env):
        clean_env.setenv("QKERNEL_MAX_TERMS", "many")
        with pytest.raises(ConfigError):
            truncation_from_env()

    def test_seed(self, clean_env):
        clean_env.setenv("QKERNEL_SEED", "42")
        assert config_from_env().seed == 42

    def test_bad_seed(self, clean_env):
        clean_env.setenv("QKERNEL_SEED", "x")
        with pytest.raises(ConfigError):
            config_from_env()


class TestConfigFile:
    def test_file_overrides_environment(self, clean_env, tmp_path):
        clean_env.setenv("QKERNEL_SEED", "42")
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"samples": 3}))
        config = load_run_config(path)
        assert config.seed == 42
        assert config.samples == 3

    def test_missing_file(self, clean_env, tmp_path):
        with pytest.raises(ConfigError):
            load_run_config(tmp_path / "absent.json")

    def test_invalid_json(self, clean_env, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_run_config(path)
