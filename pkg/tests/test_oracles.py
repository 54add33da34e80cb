import itertools

import pytest

from reasongym import oracles
from reasongym.core import advance, new_state
from reasongym.games import hanoi, lights, sudoku


@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_hanoi_optimal_length_and_legality(n):
    moves = oracles.hanoi_optimal(n)
    assert len(moves) == 2**n - 1
    board = {"pegs": {"A": list(range(n, 0, -1)), "B": [], "C": []}, "target": "C", "move_count": 0}
    assert hanoi.apply_hanoi(board, moves)[0] == 1.0


def test_hanoi_other_target():
    moves = oracles.hanoi_optimal(3, source="A", target="B")
    board = {"pegs": {"A": [3, 2, 1], "B": [], "C": []}, "target": "B", "move_count": 0}
    assert hanoi.apply_hanoi(board, moves)[0] == 1.0


def test_gf2_matches_brute_force_minimum():
    cells = [(r, c) for r in range(3) for c in range(3)]
    for bits in range(1, 512, 37):
        grid = [[(bits >> (3 * r + c)) & 1 for c in range(3)] for r in range(3)]
        presses = oracles.lights_gf2_solve(grid)
        g = [row[:] for row in grid]
        assert lights.apply_lights(g, presses) == 1.0
        # the toggle matrix is invertible, so the solution set is unique
        brute = [
            combo for k in range(10) for combo in itertools.combinations(cells, k)
            if lights.apply_lights([row[:] for row in grid], list(combo)) == 1.0
        ]
        assert brute == [tuple(presses)]


def test_sudoku_counter_detects_multiple_solutions():
    empty = [[0] * 4 for _ in range(4)]
    assert oracles.sudoku_solution_count(empty) == 2
    bad = [[1, 1, 0, 0]] + [[0] * 4 for _ in range(3)]
    assert oracles.sudoku_solution_count(bad) == 0
    with pytest.raises(oracles.UnsolvableError):
        oracles.sudoku_solve(bad)


def test_sudoku_counters_agree():
    # generator's bitmask counter and the oracle's set-based counter are separate code
    for seed in range(1, 6):
        givens = new_state("sudoku", seed).board["givens"]
        assert sudoku.count_completions(givens) == oracles.sudoku_solution_count(givens) == 1


def test_eulerian_path_rejects_four_odd_vertices():
    star = [["A", "B"], ["A", "C"], ["A", "D"], ["B", "C"], ["C", "D"], ["B", "D"]]
    with pytest.raises(oracles.UnsolvableError):
        oracles.eulerian_path(star)
    assert not oracles.degree_parity_ok(star)


def test_eulerian_path_disconnected():
    with pytest.raises(oracles.UnsolvableError):
        oracles.eulerian_path([["A", "B"], ["B", "A"], ["C", "D"], ["D", "C"]])


def test_wordle_candidate_filter_keeps_secret():
    from reasongym.games.wordle import word_list, wordle_feedback

    secret = "crane"
    history = [(g, wordle_feedback(secret, g)) for g in ("slate", "pound")]
    cands = oracles.wordle_candidate_filter(history)
    assert secret in cands and len(cands) < len(word_list())


def test_maze_bfs_unreachable():
    board = {"rows": ["#####", "#.#.#", "#####"], "start": [1, 1], "exit": [1, 3], "position": [1, 1]}
    with pytest.raises(oracles.UnsolvableError):
        oracles.maze_bfs(board)


def test_sokoban_bfs_optimal_small():
    board = {"rows": ["######", "#...G#", "######"], "player": [1, 1], "boxes": [[1, 2]]}
    assert oracles.sokoban_bfs(board) == "RR"


def test_sokoban_bfs_dead_position():
    board = {"rows": ["#####", "#..G#", "#.###", "#####"], "player": [1, 2], "boxes": [[2, 1]]}
    with pytest.raises(oracles.UnsolvableError):
        oracles.sokoban_bfs(board)


def test_puzzle8_astar_is_shortest():
    start = (1, 2, 3, 4, 5, 6, 0, 7, 8)
    assert oracles.puzzle8_astar(start) == "RR"


def test_bwcopy_bfs_unreachable_target():
    # both operations act on whole rows, so a row can never be mixed
    with pytest.raises(oracles.UnsolvableError):
        oracles.bwcopy_bfs([[0, 0], [0, 0]], [[1, 0], [0, 0]])


@pytest.mark.parametrize("game", oracles.SOLVABLE_GAMES)
def test_solve_scores_maximum(game):
    for seed in (1, 2, 3):
        st = new_state(game, seed)
        assert advance(st, oracles.solve(st).as_answer()).total_score == 1.0


def test_solve_rejects_unsupported_game():
    with pytest.raises(ValueError):
        oracles.solve(new_state("2048", 1))
