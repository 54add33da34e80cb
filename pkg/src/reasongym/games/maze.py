"""Maze: submit one U/D/L/R path from the start to the exit."""

from __future__ import annotations

from ..core import Game, InvalidParameterError, Move, Param, register
from ._common import DELTAS, parse_move_string

WALL, FLOOR = "#", "."


def carve(side: int, rng) -> list[str]:
    """Recursive-backtracker maze on the odd-coordinate cells of a side x side grid."""
    grid = [[WALL] * side for _ in range(side)]
    start = (1, 1)
    grid[1][1] = FLOOR
    stack = [start]
    while stack:
        r, c = stack[-1]
        nbrs = [
            (r + dr, c + dc)
            for dr, dc in ((-2, 0), (2, 0), (0, -2), (0, 2))
            if 0 < r + dr < side - 1 and 0 < c + dc < side - 1 and grid[r + dr][c + dc] == WALL
        ]
        if not nbrs:
            stack.pop()
            continue
        nr, nc = rng.choice(nbrs)
        grid[(r + nr) // 2][(c + nc) // 2] = FLOOR
        grid[nr][nc] = FLOOR
        stack.append((nr, nc))
    return ["".join(row) for row in grid]


def is_open(rows: list[str], r: int, c: int) -> bool:
    return 0 <= r < len(rows) and 0 <= c < len(rows[0]) and rows[r][c] != WALL


def apply_maze(board: dict, moves: str) -> tuple[float, str]:
    """Walk ``moves`` from the start; a wall or the edge ends the attempt with 0."""
    rows = board["rows"]
    r, c = board["start"]
    goal = tuple(board["exit"])
    if (r, c) == goal:
        return 1.0, "Already at the exit."
    for i, m in enumerate(moves, 1):
        dr, dc = DELTAS[m]
        if not is_open(rows, r + dr, c + dc):
            board["position"] = [r, c]
            return 0.0, f"Move {i} ({m}) hits a wall at ({r + dr},{c + dc})."
        r, c = r + dr, c + dc
        if (r, c) == goal:
            board["position"] = [r, c]
            return 1.0, f"Reached the exit after {i} moves."
    board["position"] = [r, c]
    return 0.0, f"The path ends at ({r},{c}), not at the exit."


@register
class Maze(Game):
    name = "maze"
    dimension = "SGR"
    epoch_mode = "single"
    score_rule = "binary"
    params = (Param("side", 9, 5, 31, "grid side, odd"),)
    rules = (
        "Maze. `#` is a wall, `.` is open floor, `S` is your start and `E` is the exit. "
        "Rows are numbered from 0 at the top. Give the full sequence of moves "
        "U (up), D (down), L (left), R (right) that leads from S to E. Walking into a "
        "wall fails the attempt."
    )
    answer_format = "Answer format: a string of moves such as `RRDDLD`."

    def check_params(self, params):
        if params["side"] % 2 == 0:
            raise InvalidParameterError("maze: side must be odd")

    def generate(self, rng, params):
        side = params["side"]
        return {"rows": carve(side, rng), "start": [1, 1], "exit": [side - 2, side - 2], "position": [1, 1]}

    def render(self, board):
        grid = [list(row) for row in board["rows"]]
        sr, sc = board["start"]
        er, ec = board["exit"]
        grid[sr][sc] = "S"
        grid[er][ec] = "E"
        return "\n".join("".join(row) for row in grid)

    def apply(self, board, payload, rng):
        moves = parse_move_string(payload)
        if moves is None:
            return Move(False, feedback="Moves must use only U, D, L and R. " + self.answer_format)
        score, feedback = apply_maze(board, moves)
        return Move(True, score, feedback, done=True)
