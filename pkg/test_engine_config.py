#!/usr/bin/env python3
"""Test suite configuration: validation, caps, TOML files and environment precedence"""

import pytest

from conftest import ALGEBRA_DIR
from engine_config import (
    SUITES,
    SuiteConfig,
    configure_logging,
    env_settings,
    load_toml,
    n_cap,
    resolve_algebra_path,
    resolve_config,
)
from frobenius import ConfigError


@pytest.mark.parametrize("values", [
    {"algebra": "P2", "suite": "nope"},
    {"algebra": "P2", "suite": "jucys", "max_n": -1},
    {"algebra": "P2", "suite": "deform", "s": "0"},
    {"algebra": "P2", "suite": "deform", "s": "1/0"},
    {"algebra": "P2", "suite": "jucys", "workers": 0},
    {"algebra": "P2", "suite": "jucys", "colour": "blue"},
])
def test_bad_configs_raise_config_error(values):
    with pytest.raises(ConfigError, match="invalid suite config"):
        SuiteConfig.build(**values)


def test_s_values_are_normalized():
    cfg = SuiteConfig.build(algebra="P2", suite="deform", s="2,1/2")
    assert cfg.s == ["2/1", "1/2"]
    assert SuiteConfig.build(algebra="P2", suite="deform", s=["-4/2"]).s == ["-2/1"]


def test_every_suite_name_is_accepted():
    for suite in SUITES:
        assert SuiteConfig.build(algebra="point", suite=suite).suite == suite


def test_caps_per_algebra_size(point, P2, odd, K3):
    assert [n_cap(a) for a in (point, P2, odd, K3)] == [8, 6, 6, 4]
    with pytest.raises(ConfigError, match="unsafe-caps"):
        SuiteConfig.build(algebra="point", suite="jucys", max_n=9).check_caps(point)
    SuiteConfig.build(algebra="point", suite="jucys", max_n=9, unsafe_caps=True).check_caps(point)
    SuiteConfig.build(algebra="K3", suite="jucys", max_n=4).check_caps(K3)


def test_toml_file_keys_accept_dashes(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('algebra = "P2"\nsuite = "jucys"\nmax-n = 2\nworkers = 3\n')
    assert load_toml(str(path)) == {"algebra": "P2", "suite": "jucys", "max_n": 2, "workers": 3}
    assert load_toml(None) == {}
    with pytest.raises(ConfigError):
        load_toml(str(tmp_path / "missing.toml"))
    broken = tmp_path / "broken.toml"
    broken.write_text("max-n = = 2\n")
    with pytest.raises(ConfigError):
        load_toml(str(broken))


def test_cli_overrides_toml_overrides_env(tmp_path, monkeypatch):
    monkeypatch.setenv("SYMPROD_WORKERS", "7")
    monkeypatch.setenv("SYMPROD_UNSAFE_CAPS", "false")
    path = tmp_path / "run.toml"
    path.write_text('algebra = "P2"\nsuite = "jucys"\nmax-n = 2\nworkers = 3\n')
    cfg = resolve_config({"max_n": 1, "suite": None, "special_minus_one": False}, str(path))
    assert (cfg.algebra, cfg.suite, cfg.max_n, cfg.workers) == ("P2", "jucys", 1, 3)
    assert resolve_config({"algebra": "point", "suite": "eta"}).workers == 7
    assert resolve_config({"algebra": "point", "suite": "deform", "special_minus_one": True}).special_minus_one


def test_environment_settings(monkeypatch):
    monkeypatch.setenv("SYMPROD_WORKERS", "2")
    monkeypatch.setenv("SYMPROD_UNSAFE_CAPS", "yes")
    monkeypatch.setenv("SYMPROD_LOG_LEVEL", "debug")
    settings = env_settings()
    assert settings["workers"] == 2
    assert settings["unsafe_caps"] is True
    assert settings["log_level"] == "DEBUG"
    monkeypatch.setenv("SYMPROD_WORKERS", "x")
    with pytest.raises(ConfigError):
        env_settings()


def test_algebra_paths():
    assert resolve_algebra_path("P2", str(ALGEBRA_DIR)) == ALGEBRA_DIR / "P2.json"
    assert resolve_algebra_path(str(ALGEBRA_DIR / "odd.json")) == ALGEBRA_DIR / "odd.json"
    with pytest.raises(ConfigError):
        resolve_algebra_path("enriques", str(ALGEBRA_DIR))
    with pytest.raises(ConfigError):
        resolve_algebra_path("")


def test_unknown_log_level():
    with pytest.raises(ConfigError):
        configure_logging("LOUD")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
