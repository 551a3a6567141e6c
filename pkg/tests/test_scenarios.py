import json

import numpy as np
import pytest
from scipy import ndimage

from gpnav.errors import InvalidInputError
from gpnav.scenarios import PROBLEMS, build_map, generate_scenarios, scenario_config


def test_problem1_is_all_free_with_schedule():
    grid = build_map("problem1", 500)
    assert not grid.cells.any()
    cfg = scenario_config("problem1", 500)
    assert cfg["gp"]["segments"] == 5
    assert cfg["gp"]["total_time"] == pytest.approx(2.0)
    assert cfg["gp"]["safety_margin"] == pytest.approx(20.0)
    assert cfg["grid_step"] == pytest.approx(10.0)


def test_schedule_scales_with_resolution():
    assert scenario_config("problem1", 1000)["gp"]["segments"] == 10
    assert scenario_config("problem1", 2000)["gp"]["total_time"] == pytest.approx(8.0)


def test_problem4_has_single_narrow_corridor():
    grid = build_map("problem4", 500)
    cells = grid.cells
    wall_cols = slice(230, 271)
    band = cells[:, wall_cols]
    free_rows = np.flatnonzero(~band.any(axis=1))
    # one contiguous free corridor, narrower than 4x the 20 px safety distance
    assert free_rows.size > 0
    assert np.all(np.diff(free_rows) == 1)
    assert free_rows.size < 4 * 20
    labels, count = ndimage.label(cells == 0)
    assert count == 1  # the corridor connects the two half-planes


def test_currents_variant_differs_only_in_vortices():
    base = scenario_config("problem3", 500, currents=False)
    cur = scenario_config("problem3", 500, currents=True)
    assert base["vortices"] == []
    assert cur["vortices"]
    for key in base:
        if key in ("name", "vortices"):
            continue
        assert base[key] == cur[key], key


def test_endpoints_clear_of_obstacles():
    for problem in PROBLEMS:
        grid = build_map(problem, 500)
        cfg = scenario_config(problem, 500)
        for p in (cfg["start"], cfg["goal"]):
            assert not grid.occupied_at(np.asarray(p)[None, :])[0], (problem, p)


def test_unknown_names_rejected_with_options(tmp_path):
    with pytest.raises(InvalidInputError) as err:
        generate_scenarios("problem9", out_dir=tmp_path)
    assert "problem1" in str(err.value)
    with pytest.raises(InvalidInputError):
        build_map("problem1", 123)


def test_generate_writes_maps_and_configs(tmp_path):
    written = generate_scenarios(["problem1", "problem2"], 500, "both", tmp_path)
    names = sorted(p.name for p in written)
    assert "problem1_500.pgm" in names
    assert "problem1_500.json" in names
    assert "problem1_500_currents.json" in names
    cfg = json.loads((tmp_path / "problem2_500.json").read_text())
    assert (tmp_path / cfg["map"]).exists()


def test_generation_is_deterministic(tmp_path):
    a_dir = tmp_path / "a"
    b_dir = tmp_path / "b"
    generate_scenarios("all", 500, False, a_dir)
    generate_scenarios("all", 500, False, b_dir)
    for p in sorted(a_dir.iterdir()):
        assert p.read_bytes() == (b_dir / p.name).read_bytes()


def test_replanning_scenario_profile():
    cfg = scenario_config("coastal_replan", 500)
    assert cfg["replan"] == 5
    assert cfg["gp"]["mc_samples"] < 100  # coarse estimates drive diversity
    assert cfg["planners"] == ["gp-mc"]
