"""8-puzzle: slide the blank until the grid reads 1..8 with the blank last."""

from __future__ import annotations

from ..core import Game, Move, Param, register
from ._common import DELTAS, parse_move_string

GOAL = (1, 2, 3, 4, 5, 6, 7, 8, 0)


def blank_move(tiles: tuple[int, ...], d: str) -> tuple[int, ...] | None:
    """Move the blank one cell in direction ``d``; None if it would leave the grid."""
    i = tiles.index(0)
    r, c = divmod(i, 3)
    dr, dc = DELTAS[d]
    nr, nc = r + dr, c + dc
    if not (0 <= nr < 3 and 0 <= nc < 3):
        return None
    j = nr * 3 + nc
    t = list(tiles)
    t[i], t[j] = t[j], t[i]
    return tuple(t)


def is_solvable(tiles) -> bool:
    """Even number of inversions among the eight tiles (odd-width board)."""
    seq = [t for t in tiles if t]
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return inversions % 2 == 0


def apply_8puzzle(board: dict, moves: str) -> float:
    tiles = tuple(board["tiles"])
    for m in moves:
        nxt = blank_move(tiles, m)
        if nxt is not None:
            tiles = nxt
    board["tiles"] = list(tiles)
    return 1.0 if tiles == GOAL else 0.0


_OPPOSITE = {"U": "D", "D": "U", "L": "R", "R": "L"}


@register
class EightPuzzle(Game):
    name = "8-puzzle"
    dimension = "SGR"
    epoch_mode = "single"
    score_rule = "binary"
    params = (Param("walk", 30, 2, 200, "random blank moves applied to the goal"),)
    rules = (
        "8-puzzle. The 3x3 grid holds tiles 1-8 and one blank `_`. Each move slides the "
        "blank one cell: U moves the blank up (swapping it with the tile above), and "
        "likewise D, L, R. Moves that would push the blank off the grid do nothing. "
        "Reach the goal layout\n1 2 3\n4 5 6\n7 8 _"
    )
    answer_format = "Answer format: a string of blank moves such as `ULDR`."

    def generate(self, rng, params):
        tiles = GOAL
        last = None
        steps = 0
        while steps < params["walk"] or tiles == GOAL:
            options = [d for d in "UDLR" if d != _OPPOSITE.get(last) and blank_move(tiles, d) is not None]
            d = rng.choice(options)
            tiles = blank_move(tiles, d)
            last = d
            steps += 1
        return {"tiles": list(tiles)}

    def render(self, board):
        t = board["tiles"]
        return "\n".join(" ".join("_" if v == 0 else str(v) for v in t[r * 3:r * 3 + 3]) for r in range(3))

    def apply(self, board, payload, rng):
        moves = parse_move_string(payload)
        if moves is None:
            return Move(False, feedback="Moves must use only U, D, L and R. " + self.answer_format)
        score = apply_8puzzle(board, moves)
        return Move(True, score, "Solved." if score else "The grid does not match the goal.", done=True)
