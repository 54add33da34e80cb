"""Sudoku (4x4 at level 1, 9x9 otherwise) with a unique completion."""

from __future__ import annotations

import hashlib
import re

from ..core import Game, Move, Param, register

# minimum number of givens kept, by level
GIVEN_FLOOR = {1: 6, 2: 32, 3: 26}


def box_shape(side: int) -> tuple[int, int]:
    return {4: (2, 2), 9: (3, 3)}[side]


def count_completions(grid: list[list[int]], limit: int = 2) -> int:
    """Number of completions of ``grid`` (0 = blank), stopping at ``limit``."""
    side = len(grid)
    bh, bw = box_shape(side)
    full = (1 << (side + 1)) - 2
    rows = [0] * side
    cols = [0] * side
    boxes = [0] * side
    empties = []
    for r in range(side):
        for c in range(side):
            v = grid[r][c]
            b = (r // bh) * (side // bw) + c // bw
            if v:
                bit = 1 << v
                if rows[r] & bit or cols[c] & bit or boxes[b] & bit:
                    return 0
                rows[r] |= bit
                cols[c] |= bit
                boxes[b] |= bit
            else:
                empties.append((r, c, b))

    found = 0

    def search() -> None:
        nonlocal found
        best = None
        best_mask = 0
        best_n = side + 1
        for i, (r, c, b) in enumerate(empties):
            if r < 0:
                continue
            mask = full & ~(rows[r] | cols[c] | boxes[b])
            n = bin(mask).count("1")
            if n < best_n:
                best, best_mask, best_n = i, mask, n
                if n <= 1:
                    break
        if best is None:
            found += 1
            return
        if best_n == 0:
            return
        r, c, b = empties[best]
        empties[best] = (-1, c, b)
        mask = best_mask
        while mask and found < limit:
            bit = mask & -mask
            mask ^= bit
            rows[r] |= bit
            cols[c] |= bit
            boxes[b] |= bit
            search()
            rows[r] ^= bit
            cols[c] ^= bit
            boxes[b] ^= bit
        empties[best] = (r, c, b)

    search()
    return min(found, limit)


def solved_grid(side: int, rng) -> list[list[int]]:
    """A random valid full grid: shuffled base pattern."""
    bh, bw = box_shape(side)

    def pattern(r: int, c: int) -> int:
        return (bw * (r % bh) + r // bh + c) % side

    def shuffled(n: int) -> list[int]:
        xs = list(range(n))
        rng.shuffle(xs)
        return xs

    # bands of bh rows, stacks of bw columns
    row_order = [g * bh + r for g in shuffled(side // bh) for r in shuffled(bh)]
    col_order = [g * bw + c for g in shuffled(side // bw) for c in shuffled(bw)]
    digits = [d + 1 for d in shuffled(side)]
    grid = [[digits[pattern(r, c)] for c in col_order] for r in row_order]
    if bh == bw and rng.randbelow(2):
        grid = [list(col) for col in zip(*grid)]
    return grid


def grid_digest(grid: list[list[int]]) -> str:
    return hashlib.sha256("".join(str(v) for row in grid for v in row).encode()).hexdigest()


def parse_grid(payload: str, side: int) -> list[list[int]] | None:
    text = re.sub(r"[\s,;|\[\]]+", "", payload)
    if len(text) != side * side or not text.isdigit():
        return None
    values = [int(ch) for ch in text]
    if any(not 1 <= v <= side for v in values):
        return None
    return [values[r * side:(r + 1) * side] for r in range(side)]


def is_valid_completion(givens: list[list[int]], grid: list[list[int]]) -> bool:
    side = len(givens)
    bh, bw = box_shape(side)
    want = set(range(1, side + 1))
    for r in range(side):
        for c in range(side):
            if givens[r][c] and givens[r][c] != grid[r][c]:
                return False
    if any(set(row) != want for row in grid):
        return False
    if any({grid[r][c] for r in range(side)} != want for c in range(side)):
        return False
    for br in range(0, side, bh):
        for bc in range(0, side, bw):
            if {grid[r][c] for r in range(br, br + bh) for c in range(bc, bc + bw)} != want:
                return False
    return True


def apply_sudoku(board: dict, grid: list[list[int]]) -> float:
    return 1.0 if is_valid_completion(board["givens"], grid) else 0.0


@register
class Sudoku(Game):
    name = "sudoku"
    dimension = "MLR"
    epoch_mode = "single"
    score_rule = "binary"
    params = (Param("level", 2, 1, 3, "1: 4x4; 2-3: 9x9 with fewer givens at 3"),)
    rules = (
        "Sudoku. Fill every blank (shown as 0) with a digit so that each row, each "
        "column and each box contains every digit from 1 to the grid side exactly "
        "once. Given digits must not be changed."
    )
    answer_format = "Answer format: the completed grid, one row per line, digits separated by spaces, no blank lines."

    def generate(self, rng, params):
        level = params["level"]
        side = 4 if level == 1 else 9
        solution = solved_grid(side, rng)
        givens = [row[:] for row in solution]
        cells = [(r, c) for r in range(side) for c in range(side)]
        rng.shuffle(cells)
        remaining = side * side
        for r, c in cells:
            if remaining <= GIVEN_FLOOR[level]:
                break
            keep = givens[r][c]
            givens[r][c] = 0
            if count_completions(givens, 2) != 1:
                givens[r][c] = keep
            else:
                remaining -= 1
        return {"side": side, "givens": givens, "solution_digest": grid_digest(solution)}

    def render(self, board):
        side = board["side"]
        bh, bw = box_shape(side)
        lines = []
        for r, row in enumerate(board["givens"]):
            if r and r % bh == 0:
                lines.append("")
            chunks = [" ".join(str(v) for v in row[c:c + bw]) for c in range(0, side, bw)]
            lines.append(" | ".join(chunks))
        return f"{side}x{side} grid, boxes {bh}x{bw}:\n" + "\n".join(lines)

    def apply(self, board, payload, rng):
        grid = parse_grid(payload, board["side"])
        if grid is None:
            side = board["side"]
            return Move(False, feedback=f"Expected {side * side} digits in 1..{side}. " + self.answer_format)
        score = apply_sudoku(board, grid)
        return Move(True, score, "Correct." if score else "The grid breaks a rule or changes a given digit.", done=True)
