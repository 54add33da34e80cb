"""Tower of Hanoi, graded as a complete plan in one answer."""

from __future__ import annotations

import re

from ..core import Game, Move, Param, register

PEGS = ("A", "B", "C")
_MOVE = re.compile(r"^([ABC])(?:->|→|>|-|TO)?([ABC])$")


def parse_moves(payload: str) -> list[tuple[str, str]] | None:
    text = re.sub(r"\s+", "", payload.upper())
    if not text:
        return []
    moves = []
    for token in re.split(r"[,;]+", text):
        if not token:
            continue
        m = _MOVE.match(token)
        if m is None:
            return None
        moves.append((m.group(1), m.group(2)))
    return moves


def apply_hanoi(board: dict, moves: list[tuple[str, str]]) -> tuple[float, str]:
    """Simulate ``moves`` on ``board`` in place; returns (score, feedback).

    The first illegal move ends the attempt with score 0.
    """
    pegs = board["pegs"]
    for i, (src, dst) in enumerate(moves, 1):
        if src == dst:
            return 0.0, f"Move {i} ({src}->{dst}) does not change pegs; plan rejected."
        if not pegs[src]:
            return 0.0, f"Move {i} ({src}->{dst}) takes from an empty peg; plan rejected."
        disk = pegs[src][-1]
        if pegs[dst] and pegs[dst][-1] < disk:
            return 0.0, f"Move {i} ({src}->{dst}) puts disk {disk} on smaller disk {pegs[dst][-1]}; plan rejected."
        pegs[dst].append(pegs[src].pop())
        board["move_count"] += 1
    total = sum(len(p) for p in pegs.values())
    if len(pegs[board["target"]]) == total:
        return 1.0, f"Solved in {len(moves)} moves."
    return 0.0, f"After {len(moves)} moves the disks are not all on peg {board['target']}."


@register
class TowerOfHanoi(Game):
    name = "tower-of-hanoi"
    dimension = "MLR"
    epoch_mode = "single"
    score_rule = "binary"
    params = (Param("disks", 3, 1, 12, "number of disks"),)
    rules = (
        "Tower of Hanoi. There are three pegs A, B and C. Disks are numbered by size "
        "(1 is the smallest). Move one top disk at a time; a disk may never be placed "
        "on a smaller disk. Move every disk onto the target peg. Submit the whole plan "
        "in one answer; an illegal move fails the attempt."
    )
    answer_format = "Answer format: a comma-separated list of moves such as `A->C, A->B, C->B`."

    def generate(self, rng, params):
        n = params["disks"]
        return {"pegs": {"A": list(range(n, 0, -1)), "B": [], "C": []}, "target": "C", "move_count": 0}

    def render(self, board):
        lines = [f"{p}: {board['pegs'][p]} (bottom -> top)" for p in PEGS]
        lines.append(f"Target peg: {board['target']}")
        return "\n".join(lines)

    def apply(self, board, payload, rng):
        moves = parse_moves(payload)
        if moves is None:
            return Move(False, feedback="Could not parse the move list. " + self.answer_format)
        score, feedback = apply_hanoi(board, moves)
        return Move(True, score, feedback, done=True)
