"""2048 on a 4x4 board, one direction per round."""

from __future__ import annotations

from ..core import Game, Move, register
from ._common import parse_direction

SIZE = 4


def merge_line(line: list[int]) -> tuple[list[int], int]:
    """Slide ``line`` towards index 0, merging each equal pair at most once.

    Returns the new line and the sum of the merged tile values.
    """
    tiles = [v for v in line if v]
    out: list[int] = []
    gained = 0
    i = 0
    while i < len(tiles):
        if i + 1 < len(tiles) and tiles[i] == tiles[i + 1]:
            out.append(tiles[i] * 2)
            gained += tiles[i] * 2
            i += 2
        else:
            out.append(tiles[i])
            i += 1
    return out + [0] * (len(line) - len(out)), gained


def slide(grid: list[list[int]], d: str) -> tuple[list[list[int]], int]:
    """Board after sliding towards ``d`` (no spawn) and the merge score."""
    n = len(grid)
    out = [[0] * n for _ in range(n)]
    gained = 0
    for k in range(n):
        if d == "L":
            idx = [(k, j) for j in range(n)]
        elif d == "R":
            idx = [(k, j) for j in reversed(range(n))]
        elif d == "U":
            idx = [(j, k) for j in range(n)]
        else:
            idx = [(j, k) for j in reversed(range(n))]
        merged, g = merge_line([grid[r][c] for r, c in idx])
        gained += g
        for (r, c), v in zip(idx, merged):
            out[r][c] = v
    return out, gained


def has_move(grid: list[list[int]]) -> bool:
    return any(slide(grid, d)[0] != grid for d in "UDLR")


def spawn(grid: list[list[int]], rng) -> None:
    empty = [(r, c) for r in range(len(grid)) for c in range(len(grid)) if grid[r][c] == 0]
    if not empty:
        return
    r, c = empty[rng.randbelow(len(empty))]
    grid[r][c] = 2 if rng.random() < 0.9 else 4


@register
class Game2048(Game):
    name = "2048"
    dimension = "SR"
    epoch_mode = "multi"
    score_rule = "cumulative"
    rules = (
        "2048. Each round choose a direction U, D, L or R. All tiles slide that way; "
        "two equal tiles that collide merge into their sum (each tile merges at most "
        "once per move) and the merged value is added to your score. After every move "
        "that changes the board a new tile (2, or sometimes 4) appears in a random "
        "empty cell. A move that changes nothing is rejected. The game ends when no "
        "move can change the board. 0 marks an empty cell."
    )
    answer_format = "Answer format: one of `U`, `D`, `L`, `R`."

    def generate(self, rng, params):
        grid = [[0] * SIZE for _ in range(SIZE)]
        spawn(grid, rng)
        spawn(grid, rng)
        return {"grid": grid, "score": 0}

    def render(self, board):
        width = max(len(str(v)) for row in board["grid"] for v in row)
        lines = [" ".join(str(v).rjust(width) for v in row) for row in board["grid"]]
        lines.append(f"Merge score: {board['score']}")
        return "\n".join(lines)

    def apply(self, board, payload, rng):
        d = parse_direction(payload)
        if d is None:
            return Move(False, feedback="Direction must be U, D, L or R.")
        grid, gained = slide(board["grid"], d)
        if grid == board["grid"]:
            return Move(False, feedback=f"Moving {d} does not change the board; choose another direction.")
        spawn(grid, rng)
        board["grid"] = grid
        board["score"] += gained
        done = not has_move(grid)
        fb = f"Moved {d}, merges scored {gained}."
        if done:
            fb += " No moves remain; game over."
        return Move(True, float(gained), fb, done=done)
