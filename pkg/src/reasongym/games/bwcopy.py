"""Black White Copy: reach a target colouring with row toggles and row copies.

Rows are numbered from 1.  ``toggle(i)`` flips every cell of row i and
``copy(i)`` overwrites row i+1 with row i.
"""

from __future__ import annotations

import re

from ..core import Game, Move, Param, register

_OP = re.compile(r"(toggle|copy)\s*\(\s*(-?\d+)\s*\)", re.IGNORECASE)


def parse_ops(payload: str) -> list[tuple[str, int]] | None:
    ops = [(kind.lower(), int(i)) for kind, i in _OP.findall(payload)]
    if re.sub(r"[\s,;\[\]]+", "", _OP.sub("", payload)):
        return None
    return ops


def op_in_range(n: int, op: tuple[str, int]) -> bool:
    kind, i = op
    return 1 <= i <= n if kind == "toggle" else 1 <= i < n


def apply_op(grid: list[list[int]], op: tuple[str, int]) -> None:
    kind, i = op
    if kind == "toggle":
        grid[i - 1] = [1 - v for v in grid[i - 1]]
    else:
        grid[i] = grid[i - 1][:]


def apply_bwcopy(board: dict, ops: list[tuple[str, int]]) -> float:
    for op in ops:
        apply_op(board["grid"], op)
        board["ops_used"] += 1
    return 1.0 if board["grid"] == board["target"] else 0.0


def render_grid(grid: list[list[int]]) -> str:
    return "\n".join("".join("B" if v else "W" for v in row) for row in grid)


@register
class BlackWhiteCopy(Game):
    name = "black-white-copy"
    dimension = "CIR"
    epoch_mode = "single"
    score_rule = "binary"
    params = (
        Param("size", 4, 2, 8, "board side"),
        Param("ops", 4, 1, 16, "operations used to build the target"),
    )
    rules = (
        "Black White Copy. The board starts all white (W); B is black. Rows are "
        "numbered from 1 at the top. Two operations exist: `toggle(i)` flips every "
        "cell in row i, and `copy(i)` overwrites row i+1 with a copy of row i. Give a "
        "sequence of operations that turns the current board into the target."
    )
    answer_format = "Answer format: operations separated by commas, e.g. `toggle(1), copy(1)`."

    def generate(self, rng, params):
        n = params["size"]
        blank = [[0] * n for _ in range(n)]
        while True:
            target = [row[:] for row in blank]
            for _ in range(params["ops"]):
                op = ("toggle", rng.randint(1, n)) if n == 1 or rng.randbelow(2) == 0 else ("copy", rng.randint(1, n - 1))
                apply_op(target, op)
            if target != blank:
                return {"grid": blank, "target": target, "ops_used": 0}

    def render(self, board):
        return f"Current board:\n{render_grid(board['grid'])}\n\nTarget:\n{render_grid(board['target'])}"

    def apply(self, board, payload, rng):
        ops = parse_ops(payload)
        if ops is None:
            return Move(False, feedback="Could not parse the operations. " + self.answer_format)
        n = len(board["grid"])
        bad = [op for op in ops if not op_in_range(n, op)]
        if bad:
            kind, i = bad[0]
            return Move(False, feedback=f"{kind}({i}) refers to a row outside the board.")
        score = apply_bwcopy(board, ops)
        return Move(True, score, "The board matches the target." if score else "The board does not match the target.", done=True)
