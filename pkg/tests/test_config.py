"""Config loading: defaults, fail-closed key validation, error paths."""

import json

import numpy as np
import pytest

from fracgreen import Config, load_config
from fracgreen.errors import ConfigError
from fracgreen.verify import SUITE_NAMES


def write_cfg(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def test_minimal_config_fills_defaults(tmp_path):
    cfg = load_config(write_cfg(tmp_path, {"n": 3, "alpha": 1.0}))
    assert isinstance(cfg, Config)
    assert cfg.model.n == 3 and cfg.model.alpha == 1.0
    assert cfg.model.p is None
    assert cfg.ball_radial == 16 and cfg.ball_angular == 72
    assert cfg.jacobi_nodes == 48
    assert cfg.adaptive_tol == 1e-12
    assert cfg.solver.max_iter == 300 and cfg.solver.init == "flat"
    assert cfg.sweep_lambda_min == -0.9 and cfg.sweep_lambda_max == 0.0
    assert cfg.sweep_count == 32 and cfg.sweep_side == "low"
    assert cfg.sweep_axes == (0, 1, 2)
    assert cfg.seed == 0
    assert cfg.output_dir == "out"
    assert cfg.slab_counts == (8, 8, 16)


def test_default_suites_skip_symmetry_without_p(tmp_path):
    cfg = load_config(write_cfg(tmp_path, {"n": 3, "alpha": 1.0}))
    names = [name for name, _ in cfg.suites]
    assert "symmetry" not in names
    assert set(names) == set(SUITE_NAMES) - {"symmetry"}

    cfg_p = load_config(write_cfg(tmp_path, {"n": 3, "alpha": 1.0, "p": 1.8},
                                  name="p.json"))
    assert [name for name, _ in cfg_p.suites] == list(SUITE_NAMES)
    assert all(samples is None for _, samples in cfg_p.suites)


def test_explicit_suites_parsed(tmp_path):
    payload = {"n": 3, "alpha": 1.0,
               "suites": [{"name": "limits", "samples": 16},
                          {"name": "kelvin"}]}
    cfg = load_config(write_cfg(tmp_path, payload))
    assert cfg.suites == (("limits", 16), ("kelvin", None))


def test_empty_suite_list_is_valid(tmp_path):
    cfg = load_config(write_cfg(tmp_path, {"n": 3, "alpha": 1.0,
                                           "suites": []}))
    assert cfg.suites == ()


def test_unknown_top_level_key_rejected(tmp_path):
    path = write_cfg(tmp_path, {"n": 3, "alpha": 1.0, "grids": {}})
    with pytest.raises(ConfigError, match="grids"):
        load_config(path)


def test_unknown_nested_key_names_full_path(tmp_path):
    path = write_cfg(tmp_path, {"n": 3, "alpha": 1.0,
                                "grid": {"ball_radil": 8}})
    with pytest.raises(ConfigError, match=r"grid\.ball_radil"):
        load_config(path)


def test_alpha_out_of_range_names_alpha(tmp_path):
    path = write_cfg(tmp_path, {"n": 3, "alpha": 2.5})
    with pytest.raises(ConfigError, match="alpha"):
        load_config(path)


def test_missing_required_key(tmp_path):
    path = write_cfg(tmp_path, {"alpha": 1.0})
    with pytest.raises(ConfigError, match="n"):
        load_config(path)


def test_wrong_type_rejected(tmp_path):
    path = write_cfg(tmp_path, {"n": 3, "alpha": "one"})
    with pytest.raises(ConfigError, match="alpha"):
        load_config(path)
    # booleans must not pass for integers
    path2 = write_cfg(tmp_path, {"n": True, "alpha": 1.0}, name="b.json")
    with pytest.raises(ConfigError, match="n"):
        load_config(path2)


def test_resolution_floor(tmp_path):
    path = write_cfg(tmp_path, {"n": 3, "alpha": 1.0,
                                "grid": {"ball_radial": 1}})
    with pytest.raises(ConfigError, match=r"grid\.ball_radial"):
        load_config(path)


def test_slab_counts_length_must_match_dimension(tmp_path):
    path = write_cfg(tmp_path, {"n": 3, "alpha": 1.0,
                                "grid": {"slab_counts": [8, 8]}})
    with pytest.raises(ConfigError, match="slab_counts"):
        load_config(path)


def test_unknown_suite_name_lists_valid_ones(tmp_path):
    path = write_cfg(tmp_path, {"n": 3, "alpha": 1.0,
                                "suites": [{"name": "nope"}]})
    with pytest.raises(ConfigError, match="ball-lemma21"):
        load_config(path)


def test_symmetry_suite_requires_p(tmp_path):
    path = write_cfg(tmp_path, {"n": 3, "alpha": 1.0,
                                "suites": [{"name": "symmetry"}]})
    with pytest.raises(ConfigError, match="symmetry"):
        load_config(path)


def test_zero_samples_rejected(tmp_path):
    path = write_cfg(tmp_path, {"n": 3, "alpha": 1.0,
                                "suites": [{"name": "limits", "samples": 0}]})
    with pytest.raises(ConfigError, match=r"suites\[0\]\.samples"):
        load_config(path)


def test_sweep_validation(tmp_path):
    bad_order = {"n": 3, "alpha": 1.0,
                 "sweep": {"lambda_min": 0.0, "lambda_max": -0.5}}
    with pytest.raises(ConfigError, match="lambda_min"):
        load_config(write_cfg(tmp_path, bad_order))
    bad_side = {"n": 3, "alpha": 1.0, "sweep": {"side": "middle"}}
    with pytest.raises(ConfigError, match=r"sweep\.side"):
        load_config(write_cfg(tmp_path, bad_side, name="s.json"))
    bad_axes = {"n": 3, "alpha": 1.0, "sweep": {"axes": [0, 0]}}
    with pytest.raises(ConfigError, match="axes"):
        load_config(write_cfg(tmp_path, bad_axes, name="a.json"))
    out_of_range = {"n": 3, "alpha": 1.0, "sweep": {"axes": [3]}}
    with pytest.raises(ConfigError, match="axes"):
        load_config(write_cfg(tmp_path, out_of_range, name="r.json"))


def test_solver_block_validated(tmp_path):
    path = write_cfg(tmp_path, {"n": 3, "alpha": 1.0,
                                "solver": {"init": "random"}})
    with pytest.raises(ConfigError, match=r"solver\.init"):
        load_config(path)
    path2 = write_cfg(tmp_path, {"n": 3, "alpha": 1.0,
                                 "solver": {"damping": 0.0}}, name="d.json")
    with pytest.raises(ConfigError, match="damping"):
        load_config(path2)


def test_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(broken)
    scalar = tmp_path / "scalar.json"
    scalar.write_text("42")
    with pytest.raises(ConfigError, match="JSON object"):
        load_config(scalar)


def test_lambda_grid_and_overrides(tmp_path):
    payload = {"n": 3, "alpha": 1.0,
               "sweep": {"lambda_min": -0.8, "lambda_max": -0.2, "count": 7}}
    cfg = load_config(write_cfg(tmp_path, payload))
    grid = cfg.lambda_grid()
    assert grid.shape == (7,)
    assert np.isclose(grid[0], -0.8) and np.isclose(grid[-1], -0.2)

    cfg2 = cfg.with_overrides(seed=99, output_dir="elsewhere")
    assert cfg2.seed == 99 and cfg2.output_dir == "elsewhere"
    # original untouched
    assert cfg.seed == 0 and cfg.output_dir == "out"
