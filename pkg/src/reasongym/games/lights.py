"""Lights Out on a fixed 3x3 grid."""

from __future__ import annotations

import re

from ..core import Game, Move, Param, register

SIZE = 3
_CELL = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def press(grid: list[list[int]], r: int, c: int) -> None:
    for dr, dc in ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)):
        rr, cc = r + dr, c + dc
        if 0 <= rr < SIZE and 0 <= cc < SIZE:
            grid[rr][cc] ^= 1


def parse_presses(payload: str) -> list[tuple[int, int]] | None:
    cells = [(int(a), int(b)) for a, b in _CELL.findall(payload)]
    leftover = _CELL.sub("", payload)
    if re.sub(r"[\s,;\[\]]+", "", leftover):
        return None
    return cells


def apply_lights(grid: list[list[int]], presses: list[tuple[int, int]]) -> float:
    """Press each cell in order (in place); 1.0 iff every light ends off."""
    for r, c in presses:
        press(grid, r, c)
    return 1.0 if not any(any(row) for row in grid) else 0.0


@register
class LightsOut(Game):
    name = "lights-out"
    dimension = "MLR"
    epoch_mode = "single"
    score_rule = "binary"
    params = (Param("scramble", 4, 1, 9, "distinct random presses used to build the puzzle"),)
    rules = (
        "Lights Out on a 3x3 grid. 1 means the light is on, 0 means off. Pressing a "
        "cell toggles it and its orthogonal neighbours (up, down, left, right). Cells "
        "are addressed as (row,col) counting from 0 at the top-left. Turn every light off."
    )
    answer_format = "Answer format: the cells to press in order, e.g. `(0,1), (2,2)`."

    def generate(self, rng, params):
        cells = [(r, c) for r in range(SIZE) for c in range(SIZE)]
        while True:
            rng.shuffle(cells)
            grid = [[0] * SIZE for _ in range(SIZE)]
            for r, c in cells[: params["scramble"]]:
                press(grid, r, c)
            if any(any(row) for row in grid):
                return {"grid": grid}

    def render(self, board):
        return "\n".join(" ".join(str(v) for v in row) for row in board["grid"])

    def apply(self, board, payload, rng):
        presses = parse_presses(payload)
        if presses is None:
            return Move(False, feedback="Could not parse the press list. " + self.answer_format)
        bad = [p for p in presses if not (0 <= p[0] < SIZE and 0 <= p[1] < SIZE)]
        if bad:
            return Move(False, feedback=f"Cell {bad[0]} is outside the 3x3 grid.")
        score = apply_lights(board["grid"], presses)
        return Move(True, score, "All lights are off." if score else "Some lights are still on.", done=True)
