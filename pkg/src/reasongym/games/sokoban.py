"""Sokoban generated by reverse pulls from a solved position."""

from __future__ import annotations

from collections import deque

from ..core import Game, InvalidParameterError, Move, Param, register
from ._common import DELTAS, parse_move_string

Pos = tuple[int, int]


def goals_of(rows: list[str]) -> set[Pos]:
    return {(r, c) for r, row in enumerate(rows) for c, ch in enumerate(row) if ch == "G"}


def is_floor(rows: list[str], p: Pos) -> bool:
    r, c = p
    return 0 <= r < len(rows) and 0 <= c < len(rows[r]) and rows[r][c] != "#"


def sokoban_move(rows: list[str], player: Pos, boxes: frozenset, d: str) -> tuple[Pos, frozenset, bool]:
    """One player step with the standard push rule; blocked moves return moved=False."""
    dr, dc = DELTAS[d]
    nxt = (player[0] + dr, player[1] + dc)
    if not is_floor(rows, nxt):
        return player, boxes, False
    if nxt in boxes:
        beyond = (nxt[0] + dr, nxt[1] + dc)
        if not is_floor(rows, beyond) or beyond in boxes:
            return player, boxes, False
        boxes = (boxes - {nxt}) | {beyond}
    return nxt, boxes, True


def boxes_on_goals(rows: list[str], boxes) -> int:
    goals = goals_of(rows)
    return sum(1 for b in boxes if tuple(b) in goals)


def apply_sokoban(board: dict, moves: str) -> float:
    """Play ``moves`` in place; blocked moves are skipped. Returns boxes-on-goals fraction."""
    rows = board["rows"]
    player = tuple(board["player"])
    boxes = frozenset(tuple(b) for b in board["boxes"])
    for m in moves:
        player, boxes, _ = sokoban_move(rows, player, boxes, m)
    board["player"] = list(player)
    board["boxes"] = sorted(list(b) for b in boxes)
    return boxes_on_goals(rows, boxes) / len(boxes)


def _connected(cells: set[Pos]) -> bool:
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    queue = deque([start])
    while queue:
        r, c = queue.popleft()
        for dr, dc in DELTAS.values():
            n = (r + dr, c + dc)
            if n in cells and n not in seen:
                seen.add(n)
                queue.append(n)
    return len(seen) == len(cells)


@register
class Sokoban(Game):
    name = "sokoban"
    dimension = "SGR"
    epoch_mode = "single"
    score_rule = "proportional"
    params = (
        Param("side", 7, 6, 9, "room side including the outer wall"),
        Param("boxes", 2, 1, 3, "number of boxes"),
        Param("pulls", 150, 10, 400, "length of the reverse walk that scatters the boxes"),
    )
    rules = (
        "Sokoban. `#` wall, `.` floor, `G` goal, `B` box, `*` box on a goal, `P` you, "
        "`+` you standing on a goal. Rows are numbered from 0 at the top. Move with "
        "U, D, L, R; walking into a box pushes it one cell if the cell behind it is "
        "free floor. Boxes cannot be pulled. A blocked move does nothing. The score is "
        "the fraction of boxes standing on goals after your whole move sequence."
    )
    answer_format = "Answer format: a string of moves such as `RRUL`."

    def check_params(self, params):
        if params["boxes"] > 1 + (params["side"] - 5):
            raise InvalidParameterError("sokoban: too many boxes for this room size")

    def generate(self, rng, params):
        side, n_boxes = params["side"], params["boxes"]
        interior = [(r, c) for r in range(1, side - 1) for c in range(1, side - 1)]
        while True:
            cells = interior[:]
            rng.shuffle(cells)
            n_walls = len(interior) // 8
            floor = set(cells[n_walls:])
            if not _connected(floor):
                continue
            spots = sorted(floor)
            rng.shuffle(spots)
            goals = spots[:n_boxes]
            player = spots[n_boxes]
            boxes = list(goals)
            for _ in range(params["pulls"]):
                dr, dc = DELTAS[rng.choice("UDLR")]
                nxt = (player[0] + dr, player[1] + dc)
                if nxt not in floor or nxt in boxes:
                    continue
                behind = (player[0] - dr, player[1] - dc)
                if behind in boxes and rng.random() < 0.7:
                    boxes[boxes.index(behind)] = player
                player = nxt
            # reject walks that leave the boxes close to the goals
            spread = sum(min(abs(b[0] - g[0]) + abs(b[1] - g[1]) for g in goals) for b in boxes)
            if spread >= 2 * n_boxes:
                break
        rows = []
        for r in range(side):
            row = []
            for c in range(side):
                p = (r, c)
                row.append("G" if p in goals else "." if p in floor else "#")
            rows.append("".join(row))
        return {"rows": rows, "player": list(player), "boxes": sorted(list(b) for b in boxes)}

    def render(self, board):
        grid = [list(row) for row in board["rows"]]
        for r, c in board["boxes"]:
            grid[r][c] = "*" if grid[r][c] == "G" else "B"
        pr, pc = board["player"]
        grid[pr][pc] = "+" if grid[pr][pc] == "G" else "P"
        return "\n".join("".join(row) for row in grid)

    def apply(self, board, payload, rng):
        moves = parse_move_string(payload)
        if moves is None:
            return Move(False, feedback="Moves must use only U, D, L and R. " + self.answer_format)
        score = apply_sokoban(board, moves)
        on = boxes_on_goals(board["rows"], board["boxes"])
        return Move(True, score, f"{on} of {len(board['boxes'])} boxes on goals.", done=True)
