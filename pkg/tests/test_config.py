"""Unit tests for run configuration"""

import pytest

from levybounds.config import (
    RunConfig,
    environment_overrides,
    load_config_file,
    parse_config,
    resolve_config,
)
from levybounds.exceptions import ConfigError
from levybounds.levy_processes.common_families.compound_poisson import CompoundPoissonFamily
from levybounds.levy_processes.common_families.truncated_stable import TruncatedStableFamily


def bounds_config(**kwargs) -> RunConfig:
    return RunConfig(family="stable", alpha=1.0, t=1.0, **kwargs)


def test_defaults() -> None:
    cfg = RunConfig(command="verify").validate()
    assert cfg.n == 100_000
    assert cfg.seed == 0
    assert cfg.workers == 1
    assert cfg.level == 0.99
    assert cfg.theorems == ["thm1", "thm2", "thm3", "MR"]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"command": "plot"},
        {"format": "xml"},
        {"n": 0},
        {"workers": 0},
        {"seed": -1},
        {"level": 1.0},
        {"c": 0.25, "q": 0.1},
        {"c": -1.0},
        {"q": 1.5},
        {"t_grid": [0.1, 1.0, 5]},
        {"measure": "cauchy.yaml"},
        {"theorems": ["thm9"]},
        {"c_grid": [0.1, -0.2]},
        {"eta": 0.0},
        {"log_level": "LOUD"},
    ],
)
def test_invalid_configurations(kwargs) -> None:
    with pytest.raises(ConfigError):
        bounds_config(**kwargs).validate()


def test_commands_need_a_family_and_times() -> None:
    with pytest.raises(ConfigError):
        RunConfig(command="bounds", t=1.0).validate()
    with pytest.raises(ConfigError):
        RunConfig(command="bounds", family="stable", alpha=1.0).validate()
    with pytest.raises(ConfigError):
        RunConfig(command="simulate", family="stable", alpha=1.0, t=1.0).validate()


def test_times() -> None:
    assert bounds_config().times() == [1.0]
    grid = RunConfig(family="stable", alpha=1.0, t_grid=[0.01, 1.0, 3]).validate()
    assert grid.times() == pytest.approx([0.01, 0.1, 1.0])
    linear = RunConfig(family="stable", alpha=1.0, t_grid=[1.0, 2.0, 3], t_log=False)
    assert linear.times() == pytest.approx([1.0, 1.5, 2.0])
    with pytest.raises(ConfigError):
        RunConfig(family="stable", alpha=1.0, t_grid=[1.0, 0.5, 3]).validate()


def test_build_family() -> None:
    fam = RunConfig(family="truncated_stable", alpha=1.0, trunc=2.0, t=1.0).build_family()
    assert isinstance(fam, TruncatedStableFamily)
    assert fam.truncation_M == 2.0
    poisson = RunConfig(family="compound_poisson", rate=2.0, t=1.0).build_family()
    assert isinstance(poisson, CompoundPoissonFamily)
    assert poisson.measure.nu_bar(0.5) == pytest.approx(2.0)


def test_build_family_from_measure_file(tmp_path) -> None:
    path = tmp_path / "cauchy.yaml"
    path.write_text("family: stable\nalpha: 1.0\n")
    fam = RunConfig(measure=str(path), t=1.0).validate().build_family()
    assert fam.alpha == 1.0


def test_epsilon_policy() -> None:
    policy = bounds_config(epsilon=1e-3, max_jumps=50.0).epsilon_policy()
    assert policy.epsilon == 1e-3
    assert policy.max_jumps_per_sample == 50.0


def test_from_dict_coerces_and_rejects_unknown_keys() -> None:
    cfg = RunConfig.from_dict({"n": "500", "t_grid": "0.1,1,4", "self_test": "yes", "atoms": "1:0.5,2:0.5"})
    assert cfg.n == 500
    assert cfg.t_grid == [0.1, 1.0, 4.0]
    assert cfg.self_test is True
    assert cfg.atoms == [[1.0, 0.5], [2.0, 0.5]]
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"samples": 10})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"n": 2.5})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"self_test": "maybe"})


def test_dump_round_trip() -> None:
    cfg = bounds_config(c_grid=[0.1, 0.2], atoms=[[1.0, 1.0]], drift=[0.5]).validate()
    assert parse_config(cfg.dump()) == cfg


def test_parse_config_errors() -> None:
    with pytest.raises(ConfigError):
        parse_config("n: [1\n")
    with pytest.raises(ConfigError):
        parse_config("- 1\n- 2\n")


def test_environment_overrides() -> None:
    environ = {"LEVYBOUNDS_SEED": "7", "LEVYBOUNDS_WORKERS": "4", "LEVYBOUNDS_LOG_LEVEL": "info", "HOME": "/"}
    assert environment_overrides(environ) == {"seed": 7, "workers": 4, "log_level": "info"}


def test_resolve_config_precedence(tmp_path) -> None:
    path = tmp_path / "run.yaml"
    path.write_text("command: bounds\nfamily: stable\nalpha: 1.0\nt: 1.0\nseed: 1\nworkers: 2\nn: 10\n")
    environ = {"LEVYBOUNDS_SEED": "2", "LEVYBOUNDS_N": "20"}
    cfg = resolve_config({"seed": 3, "workers": None}, path, environ)
    assert cfg.seed == 3
    assert cfg.n == 20
    assert cfg.workers == 2


def test_load_config_file_errors(tmp_path) -> None:
    with pytest.raises(ConfigError):
        load_config_file(tmp_path / "missing.yaml")
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n")
    with pytest.raises(ConfigError):
        load_config_file(path)
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    assert load_config_file(empty) == {}
