import json

import numpy as np
import pytest

from gpnav.cli import main
from gpnav.fields import OccupancyGrid


@pytest.fixture
def scenario_dir(tmp_path):
    code = main(["gen-scenarios", "problem1", "--size", "500",
                 "--out", str(tmp_path / "scen")])
    assert code == 0
    return tmp_path / "scen"


def test_gen_scenarios_writes_files(scenario_dir):
    assert (scenario_dir / "problem1_500.json").exists()
    assert (scenario_dir / "problem1_500.pgm").exists()
    # maps load back
    grid = OccupancyGrid.from_pgm(scenario_dir / "problem1_500.pgm")
    assert grid.width == 500


def test_gen_scenarios_unknown_name_exits_1(tmp_path, capsys):
    code = main(["gen-scenarios", "problemX", "--out", str(tmp_path)])
    assert code == 1
    assert "problem1" in capsys.readouterr().err


def test_plan_and_mission_and_plot(tmp_path, scenario_dir, capsys):
    out = tmp_path / "out"
    code = main(["plan", str(scenario_dir / "problem1_500.json"),
                 "--planner", "gp-mc", "--out", str(out)])
    assert code == 0
    plan_file = out / "problem1_500_gp-mc.json"
    assert plan_file.exists()
    doc = json.loads(plan_file.read_text())
    assert doc["success"] and doc["collision_free"]
    assert (out / "problem1_500_gp-mc_path.csv").read_text().startswith("t,x,y")

    code = main(["mission", str(plan_file), "--scenario",
                 str(scenario_dir / "problem1_500.json"), "--out", str(out)])
    assert code == 0
    assert (out / "problem1_500_gp-mc_mission.csv").exists()

    plots = tmp_path / "plots"
    code = main(["plot", "--plan", str(plan_file),
                 "--scenario", str(scenario_dir / "problem1_500.json"),
                 "--mission", str(out / "problem1_500_gp-mc_mission.csv"),
                 "--out", str(plots)])
    assert code == 0
    svgs = list(plots.glob("*.svg"))
    assert svgs


def test_bench_writes_report(tmp_path, capsys):
    scen = tmp_path / "scen"
    scen.mkdir()
    # small custom scenario keeps the run quick
    cells = np.zeros((64, 64), dtype=np.uint8)
    cells[28:36, 28:36] = 1
    OccupancyGrid(cells).to_pgm(scen / "tiny.pgm")
    (scen / "tiny.json").write_text(json.dumps({
        "name": "tiny", "map": "tiny.pgm", "start": [5.0, 32.0],
        "goal": [58.0, 32.0], "planners": ["gp-mc", "gp-fixed"],
        "gp": {"segments": 4, "safety_margin": 4.0, "mc_samples": 64},
        "grid_step": 4.0, "body_radius": 1.0, "seed": 5, "repetitions": 2}))
    out = tmp_path / "out"
    code = main(["bench", str(scen / "tiny.json"), "--out", str(out)])
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert len(report["rows"]) == 2
    assert (out / "report.csv").exists()


def test_plan_missing_scenario_exits_1(tmp_path, capsys):
    code = main(["plan", str(tmp_path / "absent.json")])
    assert code == 1


def test_planning_failure_exits_2(tmp_path, capsys):
    scen = tmp_path / "scen"
    scen.mkdir()
    cells = np.zeros((64, 64), dtype=np.uint8)
    cells[:, 30:34] = 1  # unbroken wall
    OccupancyGrid(cells).to_pgm(scen / "wall.pgm")
    (scen / "wall.json").write_text(json.dumps({
        "name": "wall", "map": "wall.pgm", "start": [5.0, 32.0],
        "goal": [58.0, 32.0], "planners": ["astar"],
        "gp": {"segments": 4, "safety_margin": 4.0},
        "grid_step": 4.0, "body_radius": 1.0, "seed": 5, "repetitions": 1}))
    code = main(["plan", str(scen / "wall.json"), "--planner", "astar",
                 "--out", str(tmp_path / "out")])
    assert code == 2
    assert "planning failed" in capsys.readouterr().err


def test_plot_without_inputs_exits_1(capsys):
    assert main(["plot"]) == 1


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    assert "gen-scenarios" in capsys.readouterr().out
