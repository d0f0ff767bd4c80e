"""
Unit tests for the command-line front end and the ball cache
Tests exit codes, report documents, determinism and cache behaviour
"""

import json
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

import config
import hatcher
from core.cache import BallCache
from core.complexes import HT, build_ball, load_ball, validate_cut_system
from core.curves import preset, torus_curve

TORUS = preset(1, 0)


def run_cli(args, tmp_path, name="out.json"):
    out = tmp_path / name
    status = hatcher.main(list(args) + ["--out", str(out)])
    return status, out


class TestParsing:
    """Test curve and word parsing."""

    def test_torus_pair(self):
        assert hatcher.parse_curve(TORUS, "(2,1)") == torus_curve(TORUS, 2, 1)

    def test_named_curve(self):
        s = preset(2, 0)
        assert hatcher.parse_curve(s, "a2") == hatcher.parse_curve(s, "[5]")

    def test_word_order(self):
        """Letters act left to right."""
        w = hatcher.parse_word(TORUS, "(1,0) (0,1)^-1")
        assert [e for _, e in w.letters] == [1, -1]
        assert w.letters[0][0] == torus_curve(TORUS, 1, 0)

    def test_unreadable_curve(self):
        with pytest.raises(hatcher.ConfigurationError):
            hatcher.parse_curve(TORUS, "nothing")


class TestBuild:
    """Test the build command."""

    def test_single_vertex_ball(self, tmp_path):
        status, out = run_cli(["build", "--kind", "ht", "--genus", "1", "--depth", "0",
                               "--cache-dir", str(tmp_path / "cache")], tmp_path)
        assert status == 0
        document = json.loads(out.read_text())
        assert len(document["vertices"]) == 1
        assert document["seed"] == config.DEFAULT_SEED
        assert document["engine_version"] == config.ENGINE_VERSION

    def test_cache_hit_matches_cold_run(self, tmp_path):
        args = ["build", "--kind", "g", "--genus", "1", "--depth", "1", "--bound", "3",
                "--cache-dir", str(tmp_path / "cache")]
        status, cold = run_cli(args, tmp_path, "cold.json")
        assert status == 0
        assert list((tmp_path / "cache").glob("*.json"))
        status, warm = run_cli(args, tmp_path, "warm.json")
        assert status == 0
        status, plain = run_cli(args + ["--no-cache"], tmp_path, "plain.json")
        assert cold.read_bytes() == warm.read_bytes() == plain.read_bytes()

    def test_seed_curves(self, tmp_path):
        status, out = run_cli(["build", "--kind", "g", "--curves", "(2,1)", "--depth", "0",
                               "--no-cache"], tmp_path)
        assert status == 0
        assert json.loads(out.read_text())["vertices"][0]["pq"] == [2, 1]

    def test_document_loads(self, tmp_path):
        status, out = run_cli(["build", "--depth", "1", "--bound", "2", "--no-cache"], tmp_path)
        assert status == 0
        ball = load_ball(out.read_text())
        assert ball.kind == HT
        assert len(ball.frontier) == len(ball.vertices) - 1


class TestExitCodes:
    """Test configuration errors and failures."""

    def test_unknown_flag(self):
        assert hatcher.main(["build", "--frobnicate"]) == 2

    def test_unknown_command(self):
        assert hatcher.main(["launch"]) == 2

    def test_nonpositive_trials(self, tmp_path):
        status, _ = run_cli(["verify", "--suite", "independence", "--trials", "0"], tmp_path)
        assert status == 2

    def test_unsupported_suite_surface(self, tmp_path):
        status, _ = run_cli(["verify", "--suite", "disjointness", "--genus", "1"], tmp_path)
        assert status == 2

    def test_non_dual_path_inputs(self, tmp_path):
        status, out = run_cli(["path", "--kind", "xc", "--base", "(1,0)", "--from", "(1,2)",
                               "--to", "(0,1)"], tmp_path)
        assert status == 1
        assert json.loads(out.read_text())["ok"] is False

    def test_run_config_validation(self):
        cfg = hatcher.RunConfig(command="build", depth=-1)
        assert hatcher.run(cfg) == 2


class TestVerify:
    """Test verification reports."""

    def test_torus_independence(self, tmp_path):
        status, out = run_cli(["verify", "--suite", "independence", "--genus", "1",
                               "--trials", "10", "--seed", "7"], tmp_path)
        assert status == 0
        report = json.loads(out.read_text())
        assert report["ok"] and report["failures"] == 0
        assert report["seed"] == 7 and report["trials"] == 10

    def test_reports_are_byte_identical(self, tmp_path):
        args = ["verify", "--suite", "realization", "--genus", "1", "--seed", "5"]
        _, first = run_cli(args, tmp_path, "first.json")
        _, second = run_cli(args, tmp_path, "second.json")
        assert first.read_bytes() == second.read_bytes()

    def test_explicit_word(self, tmp_path):
        status, out = run_cli(["verify", "--suite", "composition", "--word", "(1,0)",
                               "--word2", "(0,1)^-1", "--trials", "3"], tmp_path)
        assert status == 0
        report = json.loads(out.read_text())
        assert report["word"] == "t(1,0)"
        assert report["second_word"] == "t(0,1)^-1"

    def test_all_vacuous_merge_is_not_ok(self):
        empty = {"samples": [], "failures": 0, "ok": True, "vacuous": True}
        merged = hatcher._merge("independence", [empty, dict(empty)])
        assert merged["vacuous"] and not merged["ok"]
        assert merged["failures"] == 0

    def test_partly_vacuous_merge_keeps_ok(self):
        empty = {"samples": [], "failures": 0, "ok": True, "vacuous": True}
        real = {"samples": [{"pass": True}], "failures": 0, "ok": True, "vacuous": False}
        merged = hatcher._merge("independence", [empty, real])
        assert merged["ok"] and not merged["vacuous"]
        assert len(merged["samples"]) == 1


class TestPathsAndExport:
    """Test path, export and cells commands."""

    def test_xc_path(self, tmp_path):
        status, out = run_cli(["path", "--kind", "xc", "--base", "(1,0)", "--from", "(0,1)",
                               "--to", "(2,1)"], tmp_path)
        assert status == 0
        document = json.loads(out.read_text())
        assert [v["pq"] for v in document["path"]] == [[0, 1], [1, 1], [2, 1]]

    def test_ht_path(self, tmp_path):
        status, out = run_cli(["path", "--kind", "ht", "--from", "(1,0)", "--to", "(5,2)"], tmp_path)
        assert status == 0
        document = json.loads(out.read_text())
        assert len(document["path"]) == 3
        assert all(step["elementary"] for step in document["steps"])

    def test_export_and_cells(self, tmp_path):
        status, ball_file = run_cli(["build", "--depth", "1", "--bound", "1", "--no-cache"],
                                    tmp_path, "ball.json")
        assert status == 0
        status, dot = run_cli(["export", "--ball", str(ball_file), "--format", "dot"], tmp_path, "ball.dot")
        assert status == 0
        assert dot.read_text().startswith("graph ht_ball {")
        status, cells = run_cli(["cells", "--ball", str(ball_file)], tmp_path, "cells.json")
        assert status == 0
        labels = [c["label"] for c in json.loads(cells.read_text())["cells"]]
        assert labels == ["triangle", "triangle"]

    def test_ball_path(self, tmp_path):
        status, ball_file = run_cli(["build", "--depth", "1", "--bound", "1", "--no-cache"],
                                    tmp_path, "ball.json")
        status, out = run_cli(["path", "--kind", "ball", "--ball", str(ball_file),
                               "--from", "(0,1)", "--to", "(1,1)"], tmp_path)
        assert status == 0
        assert len(json.loads(out.read_text())["path"]) == 2

    def test_missing_ball_file(self, tmp_path):
        status, _ = run_cli(["cells", "--ball", str(tmp_path / "absent.json")], tmp_path)
        assert status == 2


class TestBallCache:
    """Test the on-disk cache."""

    def test_round_trip(self, tmp_path):
        cache = BallCache(tmp_path)
        seed = validate_cut_system(TORUS, [torus_curve(TORUS, 1, 0)])
        ball = build_ball(HT, TORUS, seed, depth=1, complexity_bound=2)
        key = BallCache.key(HT, TORUS.surface_hash, seed, {"depth": 1})
        assert cache.get(key) is None
        cache.put(key, ball)
        assert cache.get(key) == ball
        assert not list(tmp_path.glob("*.tmp"))

    def test_key_depends_on_bounds(self):
        seed = validate_cut_system(TORUS, [torus_curve(TORUS, 1, 0)])
        first = BallCache.key(HT, TORUS.surface_hash, seed, {"depth": 1})
        assert first == BallCache.key(HT, TORUS.surface_hash, seed, {"depth": 1})
        assert first != BallCache.key(HT, TORUS.surface_hash, seed, {"depth": 2})

    def test_stale_version_ignored(self, tmp_path):
        cache = BallCache(tmp_path)
        seed = validate_cut_system(TORUS, [torus_curve(TORUS, 1, 0)])
        ball = build_ball(HT, TORUS, seed, depth=0)
        key = BallCache.key(HT, TORUS.surface_hash, seed, {"depth": 0})
        path = cache.put(key, ball)
        data = json.loads(path.read_text())
        data["engine_version"] = "0.0.1"
        path.write_text(json.dumps(data))
        assert cache.get(key) is None
        assert path.exists()


if __name__ == '__main__':
    import pytest
    pytest.main([__file__, '-v'])
