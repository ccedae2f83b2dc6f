import json
import xml.etree.ElementTree as ET

import pytest

from sprint_planner.cli import main


class TestPlanCommand:
    def test_fixture_run(self, capsys):
        rc = main(["plan", "--scene", "empty_2d", "--seed", "1"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "status=Solved" in out
        assert "delta_useful_ratio=" in out

    def test_explicit_endpoints(self, capsys):
        rc = main(["plan", "--scene", "empty_2d", "--start", "0.2,0.2",
                   "--goal", "0.8,0.8"])
        assert rc == 0
        assert "status=Solved" in capsys.readouterr().out

    def test_baseline_planner(self, capsys):
        rc = main(["plan", "--scene", "empty_2d", "--planner", "rrt-connect"])
        assert rc == 0
        assert "planner=rrt-connect" in capsys.readouterr().out

    def test_ablation_run(self, capsys):
        rc = main(["plan", "--scene", "empty_2d", "--ablation", "random-params"])
        assert rc == 0
        assert "planner=sprint:random-params" in capsys.readouterr().out

    def test_params_override_file(self, tmp_path, capsys):
        params = tmp_path / "params.json"
        params.write_text(json.dumps({"lam": 0.1}), encoding="utf-8")
        rc = main(["plan", "--scene", "empty_2d", "--params", str(params)])
        assert rc == 0

    def test_svg_output(self, tmp_path, capsys):
        svg = tmp_path / "run.svg"
        rc = main(["plan", "--scene", "single_box_2d", "--svg", str(svg)])
        assert rc == 0
        root = ET.fromstring(svg.read_text(encoding="utf-8"))
        assert root.tag.endswith("svg")

    def test_unknown_scene_is_an_error(self, capsys):
        rc = main(["plan", "--scene", "atlantis"])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_non_fixture_scene_requires_endpoints(self, tmp_path, capsys):
        scene = tmp_path / "scene.json"
        scene.write_text(json.dumps({"name": "x", "lower": [0, 0], "upper": [1, 1],
                                     "obstacles": []}), encoding="utf-8")
        rc = main(["plan", "--scene", str(scene)])
        assert rc == 2
        assert "--start" in capsys.readouterr().err

    def test_bad_planner_rejected(self):
        with pytest.raises(SystemExit):
            main(["plan", "--scene", "empty_2d", "--planner", "astar"])


class TestBenchCommand:
    def test_grid_run(self, tmp_path, capsys):
        cfg = tmp_path / "grid.json"
        cfg.write_text(json.dumps({
            "scenes": ["empty_2d"], "planners": ["sprint"],
            "seeds": {"start": 0, "count": 2}, "max_samples": 10_000,
            "params": {"lam": 0.05},
        }), encoding="utf-8")
        out = tmp_path / "out"
        rc = main(["bench", "--config", str(cfg), "--out", str(out)])
        assert rc == 0
        assert (out / "results.csv").exists()
        assert "2 trials" in capsys.readouterr().out

    def test_bad_config_is_an_error(self, tmp_path, capsys):
        cfg = tmp_path / "grid.json"
        cfg.write_text(json.dumps({"planners": ["sprint"]}), encoding="utf-8")
        rc = main(["bench", "--config", str(cfg), "--out", str(tmp_path / "o")])
        assert rc == 2
        assert "scenes" in capsys.readouterr().err
