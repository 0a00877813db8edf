import json

import pytest

from mumford_diffusion.config import ConfigError, RunConfig, Tolerances, load_config


def test_defaults():
    cfg = load_config(env={})
    assert cfg == RunConfig()
    assert cfg.field().p == 5 and cfg.tol.kernel == 1e-8


def test_precedence_file_env_flags(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"prime": 3, "lambda": 2.0, "seed": 4, "tol": {"kernel": 1e-6}}))
    cfg = load_config(str(path), env={"MUMFORD_PRIME": "7", "MUMFORD_SEED": "9"}, overrides={"seed": 11})
    assert (cfg.prime, cfg.lam, cfg.seed) == (7, 2.0, 11)
    assert cfg.tol.kernel == 1e-6 and cfg.tol.mass == Tolerances().mass
    cfg = load_config(env={}, overrides={"tol": 1e-3})
    assert set(vars(cfg.tol).values()) == {1e-3}


@pytest.mark.parametrize("bad", [{"prime": 1}, {"precision": 4}, {"lam": 100.0}, {"alpha": -1.0},
                                 {"kernel_mode": "other"}, {"normalization": "x"}, {"prime": "seven"},
                                 {"colour": 1}, {"tol": {"nope": 1.0}}, {"norm_base": "R"}])
def test_invalid_configurations(bad):
    with pytest.raises(ConfigError):
        load_config(env={}, overrides=bad)


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"), env={})
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "bad.json"), env={})


def test_extension_defaults_to_q_norm():
    cfg = load_config(env={}, overrides={"prime": 3, "degree": 2, "lam": 9.0})
    assert cfg.field().base == 9
