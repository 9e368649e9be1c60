import pytest

from errors import ConfigError
from experiment import ExperimentConfig, load_config, load_config_text, parse_config_text


def test_defaults():
    config = ExperimentConfig()
    assert (config.N, config.M, config.T, config.K) == (20, 4, 300, 10)
    assert config.lam == 0.6
    assert config.schedule == "sqrt"
    assert config.L == "auto" and config.Q == "auto"
    assert config.batch_size is None


def test_parse_comments_blanks_and_nulls():
    values, lines = parse_config_text("# experiment\n\nT = 40   # rounds\nbatch_size = none\nmodel=quadratic\n")
    assert values == {"T": "40", "batch_size": None, "model": "quadratic"}
    assert lines == {"T": 3, "batch_size": 4, "model": 5}


def test_text_values_are_validated_into_types():
    config = load_config_text("T = 40\nlambda = 0.25\nL = 3.5\nmodel = quadratic\nquantize_levels = 4\n")
    assert config.T == 40
    assert config.lam == 0.25
    assert config.L == 3.5
    assert config.quantize_levels == 4


def test_unknown_key_reports_its_line():
    with pytest.raises(ConfigError) as info:
        load_config_text("T = 10\nlearnign_rate = 0.1\n")
    assert info.value.diagnostics == ["line 2: unknown key 'learnign_rate'"]


def test_duplicate_key():
    with pytest.raises(ConfigError) as info:
        load_config_text("T = 10\nK = 2\nT = 20\n")
    assert info.value.diagnostics == ["line 3: duplicate key 'T' (first set on line 1)"]


def test_malformed_line():
    with pytest.raises(ConfigError, match="line 1: expected 'key = value'"):
        load_config_text("rounds 10\n")


def test_bad_value_names_key_and_line():
    with pytest.raises(ConfigError) as info:
        load_config_text("model = quadratic\nN = -3\n")
    assert len(info.value.diagnostics) == 1
    assert info.value.diagnostics[0].startswith("line 2: N:")


def test_every_problem_is_reported():
    with pytest.raises(ConfigError) as info:
        load_config_text("T = zero\nfoo = 1\n")
    assert len(info.value.diagnostics) == 2


def test_clusters_cannot_outnumber_clients():
    with pytest.raises(ConfigError):
        load_config_text("N = 3\nM = 4\n")


def test_constant_schedule_fixes_steps():
    assert load_config_text("schedule = constant\nT = 100\nK = 10\nq1 = 0.5\n").K == 10
    with pytest.raises(ConfigError):
        load_config_text("schedule = constant\nT = 100\nK = 9\nq1 = 0.5\n")


def test_overrides_skip_missing_values():
    config = ExperimentConfig(T=40)
    assert config.with_overrides(seed=None) == config
    assert config.with_overrides(seed=9).seed == 9
    assert config.with_overrides(seed=9).lam == config.lam


def test_load_config_file(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("T = 12\n", encoding="utf-8")
    assert load_config(path).T == 12
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.cfg")
