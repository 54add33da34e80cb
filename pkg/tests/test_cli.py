import json

import pytest
from click.testing import CliRunner

from reasongym.cli import main, parse_seeds


@pytest.fixture
def runner():
    return CliRunner()


def test_parse_seeds():
    assert parse_seeds("1..5") == [1, 2, 3, 4, 5]
    assert parse_seeds("3,7..8") == [3, 7, 8]


def test_games_command(runner):
    out = runner.invoke(main, ["games"])
    assert out.exit_code == 0 and len(out.output.strip().splitlines()) == 14


def test_oracle_solve(runner):
    out = runner.invoke(main, ["oracle", "solve", "--game", "tower-of-hanoi", "--seed", "1", "--param", "disks=2"])
    assert out.exit_code == 0 and out.output.strip() == "Answer: A->B, A->C, B->C"
    out = runner.invoke(main, ["oracle", "solve", "--game", "maze", "--seed", "7", "--json"])
    assert json.loads(out.output)["optimal"] is True
    out = runner.invoke(main, ["oracle", "solve", "--game", "2048", "--seed", "1"])
    assert out.exit_code != 0 and "no oracle" in out.output


def test_show(runner):
    out = runner.invoke(main, ["show", "--game", "n-point", "--seed", "3"])
    assert out.exit_code == 0 and "Threshold N: 26" in out.output


def test_eval_then_analyze(runner, tmp_path):
    for agent in ("oracle", "random"):
        out = runner.invoke(main, ["eval", "--agent", agent, "--games", "maze,tower-of-hanoi,sudoku", "--seeds", "1..6",
                                   "--out", str(tmp_path / "run")])
        assert out.exit_code == 0, out.output
    scores = (tmp_path / "run" / "scores.csv").read_text().splitlines()
    assert scores == ["model,maze,tower-of-hanoi,sudoku", "oracle,1.0,1.0,1.0", "random,0.0,0.0,0.0"]
    lb = runner.invoke(main, ["analyze", "leaderboard", "--in", str(tmp_path / "run" / "scores.csv"),
                              "--dims", str(tmp_path / "run" / "dims.csv"), "--out", str(tmp_path / "an")])
    assert lb.exit_code == 0, lb.output
    rows = (tmp_path / "an" / "leaderboard.csv").read_text().splitlines()
    assert rows == ["model,MLR,SGR,Avg", "oracle,1.000000,1.000000,1.000000", "random,0.000000,0.000000,0.000000"]
    st = runner.invoke(main, ["analyze", "stability", "--in", str(tmp_path / "run" / "scores.csv"), "--out", str(tmp_path / "an")])
    assert st.exit_code == 0 and "oracle: mean 1.0000 std 0.0000" in st.output
    pca = runner.invoke(main, ["analyze", "pca", "--in", str(tmp_path / "run" / "scores.csv"), "--out", str(tmp_path / "an")])
    assert pca.exit_code == 0 and "PC1 1.0000" in pca.output
    fit = runner.invoke(main, ["analyze", "lengthfit", "--in", str(tmp_path / "run" / "lengths.csv"), "--out", str(tmp_path / "an")])
    assert fit.exit_code == 0, fit.output
    assert fit.output.startswith("score = ")


def test_eval_requires_endpoint_for_chat(runner, tmp_path):
    out = runner.invoke(main, ["eval", "--games", "maze", "--out", str(tmp_path)])
    assert out.exit_code != 0 and "--base-url" in out.output


def test_analyze_reports_bad_input(runner, tmp_path):
    (tmp_path / "s.csv").write_text("model,maze\na,\n")
    out = runner.invoke(main, ["analyze", "leaderboard", "--in", str(tmp_path / "s.csv"), "--out", str(tmp_path)])
    assert out.exit_code != 0 and "missing score" in out.output
