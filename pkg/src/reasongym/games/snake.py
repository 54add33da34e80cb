"""Snake on a bounded square grid."""

from __future__ import annotations

from ..core import Game, Move, Param, register
from ._common import DELTAS, parse_direction


def spawn_food(board: dict, rng) -> bool:
    size = board["size"]
    body = {tuple(p) for p in board["body"]}
    empty = [[r, c] for r in range(size) for c in range(size) if (r, c) not in body]
    if not empty:
        board["food"] = None
        return False
    board["food"] = empty[rng.randbelow(len(empty))]
    return True


def step_snake(board: dict, d: str, rng) -> tuple[float, str, bool]:
    """Advance one cell in place; returns (score_delta, feedback, done)."""
    size = board["size"]
    body = board["body"]
    dr, dc = DELTAS[d]
    head = [body[0][0] + dr, body[0][1] + dc]
    if not (0 <= head[0] < size and 0 <= head[1] < size):
        board["alive"] = False
        return 0.0, f"Moved {d} into the wall. Game over.", True
    if len(body) > 1 and head == body[1]:
        board["alive"] = False
        return 0.0, f"Moved {d} back into your own neck. Game over.", True
    eating = head == board["food"]
    blocking = body if eating else body[:-1]
    if head in blocking:
        board["alive"] = False
        return 0.0, f"Moved {d} into your own body. Game over.", True
    body.insert(0, head)
    if not eating:
        body.pop()
        return 0.0, f"Moved {d}.", False
    if not spawn_food(board, rng):
        return 1.0, "Ate the food and filled the board.", True
    return 1.0, f"Moved {d} and ate the food (+1).", False


@register
class Snake(Game):
    name = "snake"
    dimension = "CIR"
    epoch_mode = "multi"
    score_rule = "cumulative"
    params = (Param("size", 10, 5, 20, "board side"),)
    rules = (
        "Snake. You steer a snake on a walled square grid: `H` is its head, `S` its "
        "body, `*` the food and `.` empty. Rows are numbered from 0 at the top. Each "
        "round the snake moves one cell U, D, L or R. Eating food scores 1 point and "
        "makes the snake one cell longer; new food then appears on a random empty "
        "cell. Hitting a wall or the snake's own body (including turning straight "
        "back) ends the game."
    )
    answer_format = "Answer format: one of `U`, `D`, `L`, `R`."

    def generate(self, rng, params):
        size = params["size"]
        mid = size // 2
        board = {"size": size, "body": [[mid, mid], [mid, mid - 1]], "food": None, "alive": True}
        spawn_food(board, rng)
        return board

    def render(self, board):
        size = board["size"]
        grid = [["."] * size for _ in range(size)]
        if board["food"] is not None:
            grid[board["food"][0]][board["food"][1]] = "*"
        for r, c in board["body"][1:]:
            grid[r][c] = "S"
        hr, hc = board["body"][0]
        grid[hr][hc] = "H"
        lines = ["".join(row) for row in grid]
        lines.append(f"Length: {len(board['body'])}, head at ({hr},{hc})")
        return "\n".join(lines)

    def apply(self, board, payload, rng):
        d = parse_direction(payload)
        if d is None:
            return Move(False, feedback="Direction must be U, D, L or R.")
        delta, fb, done = step_snake(board, d, rng)
        return Move(True, delta, fb, done)
