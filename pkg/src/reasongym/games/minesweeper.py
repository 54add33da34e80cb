"""Minesweeper with mines placed after (and away from) the first reveal."""

from __future__ import annotations

import re
from collections import deque

from ..core import Game, InvalidParameterError, Move, Param, register

_ACTION = re.compile(r"^(reveal|flag)\s*\(?\s*(-?\d+)\s*[,\s]\s*(-?\d+)\s*\)?$", re.IGNORECASE)


def neighbours(size: int, r: int, c: int):
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if (dr or dc) and 0 <= r + dr < size and 0 <= c + dc < size:
                yield r + dr, c + dc


def adjacent_mines(board: dict, r: int, c: int) -> int:
    mines = {tuple(m) for m in board["mines"]}
    return sum(1 for n in neighbours(board["size"], r, c) if n in mines)


def place_mines(board: dict, first: tuple[int, int], rng) -> None:
    size = board["size"]
    cells = [(r, c) for r in range(size) for c in range(size) if (r, c) != first]
    rng.shuffle(cells)
    board["mines"] = sorted([list(p) for p in cells[: board["mine_count"]]])


def reveal(board: dict, r: int, c: int, rng) -> tuple[int, bool]:
    """Reveal (r, c) in place; returns (newly revealed safe cells, hit a mine)."""
    if board["mines"] is None:
        place_mines(board, (r, c), rng)
    mines = {tuple(m) for m in board["mines"]}
    if (r, c) in mines:
        board["exploded"] = [r, c]
        return 0, True
    size = board["size"]
    shown = board["revealed"]
    flags = board["flags"]
    added = 0
    queue = deque([(r, c)])
    shown[r][c] = 1
    while queue:
        cr, cc = queue.popleft()
        added += 1
        if any(n in mines for n in neighbours(size, cr, cc)):
            continue
        for nr, nc in neighbours(size, cr, cc):
            if not shown[nr][nc] and not flags[nr][nc]:
                shown[nr][nc] = 1
                queue.append((nr, nc))
    return added, False


def safe_total(board: dict) -> int:
    return board["size"] ** 2 - board["mine_count"]


def revealed_count(board: dict) -> int:
    return sum(map(sum, board["revealed"]))


def parse_action(payload: str) -> tuple[str, int, int] | None:
    m = _ACTION.match(payload.strip().rstrip("."))
    if m is None:
        return None
    return m.group(1).lower(), int(m.group(2)), int(m.group(3))


@register
class Minesweeper(Game):
    name = "minesweeper"
    dimension = "CIR"
    epoch_mode = "multi"
    score_rule = "proportional"
    params = (
        Param("size", 9, 5, 16, "board side"),
        Param("mines", 10, 1, 60, "number of mines"),
    )
    rules = (
        "Minesweeper. `?` is a hidden cell, `F` a flag, and a digit is a revealed safe "
        "cell showing how many of its eight neighbours hold mines. Cells are (row,col) "
        "from 0 at the top-left. Reveal a cell or toggle a flag each round. Revealing a "
        "cell with no neighbouring mines also reveals its neighbours. Your first reveal "
        "is always safe. Revealing a mine ends the game. The score is the fraction of "
        "safe cells revealed."
    )
    answer_format = "Answer format: `reveal(row,col)` or `flag(row,col)`, e.g. `reveal(4,4)`."

    def check_params(self, params):
        if params["mines"] > params["size"] ** 2 - 1:
            raise InvalidParameterError("minesweeper: too many mines for this board")

    def generate(self, rng, params):
        size = params["size"]
        return {
            "size": size,
            "mine_count": params["mines"],
            "mines": None,
            "revealed": [[0] * size for _ in range(size)],
            "flags": [[0] * size for _ in range(size)],
            "exploded": None,
        }

    def render(self, board):
        size = board["size"]
        lines = [f"Mines: {board['mine_count']}, flags placed: {sum(map(sum, board['flags']))}"]
        lines.append("    " + " ".join(str(c % 10) for c in range(size)))
        for r in range(size):
            cells = []
            for c in range(size):
                if board["revealed"][r][c]:
                    cells.append(str(adjacent_mines(board, r, c)))
                elif board["flags"][r][c]:
                    cells.append("F")
                else:
                    cells.append("?")
            lines.append(f"{r:>2}  " + " ".join(cells))
        return "\n".join(lines)

    def apply(self, board, payload, rng):
        parsed = parse_action(payload)
        if parsed is None:
            return Move(False, feedback="Could not parse the action. " + self.answer_format)
        kind, r, c = parsed
        size = board["size"]
        if not (0 <= r < size and 0 <= c < size):
            return Move(False, feedback=f"Cell ({r},{c}) is off the board.")
        if board["revealed"][r][c]:
            return Move(False, feedback=f"Cell ({r},{c}) is already revealed.")
        if kind == "flag":
            board["flags"][r][c] ^= 1
            state = "placed" if board["flags"][r][c] else "removed"
            return Move(True, 0.0, f"Flag {state} at ({r},{c}).")
        if board["flags"][r][c]:
            return Move(False, feedback=f"Cell ({r},{c}) is flagged; remove the flag before revealing it.")
        added, boom = reveal(board, r, c, rng)
        if boom:
            return Move(True, 0.0, f"({r},{c}) was a mine. Game over.", done=True)
        delta = added / safe_total(board)
        if revealed_count(board) == safe_total(board):
            return Move(True, delta, "Every safe cell is revealed. You win.", done=True)
        return Move(True, delta, f"Revealed {added} cell{'s' if added != 1 else ''}.")
