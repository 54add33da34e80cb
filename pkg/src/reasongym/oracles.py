"""Classical solvers used to check solvability and grade perfect play.

Search oracles drive the engines' public transition functions, so a
returned transcript is also an integration test of the engine.  Solvers that
check generation (Sudoku counting, GF(2) elimination) are written
independently of the generator code.
"""

from __future__ import annotations

import heapq
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable

from .core import GameState, get_game
from .games import maze as maze_game
from .games import puzzle8, sokoban
from .games.bwcopy import apply_op, op_in_range
from .games.lights import SIZE as LIGHTS_SIZE
from .games.wordle import word_list, wordle_feedback

SOKOBAN_STATE_BUDGET = 2_000_000


class UnsolvableError(Exception):
    """The instance has no solution (a generation bug when it fires)."""


@dataclass
class Solution:
    actions: str
    optimal: bool = False

    def as_answer(self) -> str:
        return f"Answer: {self.actions}"


def hanoi_optimal(n: int, source: str = "A", target: str = "C") -> list[tuple[str, str]]:
    """The classical 2**n - 1 move solution."""
    if not 1 <= n <= 12:
        raise ValueError("disk count must be within 1..12")
    spare = ({"A", "B", "C"} - {source, target}).pop()
    moves: list[tuple[str, str]] = []

    def rec(k: int, a: str, b: str, c: str) -> None:
        if k == 0:
            return
        rec(k - 1, a, c, b)
        moves.append((a, c))
        rec(k - 1, b, a, c)

    rec(n, source, spare, target)
    return moves


def format_hanoi(moves: Iterable[tuple[str, str]]) -> str:
    return ", ".join(f"{a}->{b}" for a, b in moves)


def lights_gf2_solve(grid: list[list[int]]) -> list[tuple[int, int]]:
    """Press set that clears ``grid``, by Gaussian elimination over GF(2).

    Row i of the system is cell i; bit j says pressing cell j toggles cell i.
    """
    n = LIGHTS_SIZE
    cells = n * n
    rows = []
    for i in range(cells):
        r, c = divmod(i, n)
        mask = 0
        for j in range(cells):
            pr, pc = divmod(j, n)
            if abs(pr - r) + abs(pc - c) <= 1:
                mask |= 1 << j
        rows.append([mask, grid[r][c] & 1])
    pivot_row = 0
    pivots = []
    for col in range(cells):
        sel = next((k for k in range(pivot_row, cells) if rows[k][0] >> col & 1), None)
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        for k in range(cells):
            if k != pivot_row and rows[k][0] >> col & 1:
                rows[k][0] ^= rows[pivot_row][0]
                rows[k][1] ^= rows[pivot_row][1]
        pivots.append(col)
        pivot_row += 1
    if any(mask == 0 and rhs for mask, rhs in rows):
        raise UnsolvableError("lights state has no solution")
    presses = []
    for k, col in enumerate(pivots):
        if rows[k][1]:
            presses.append(divmod(col, n))
    return sorted(presses)


def format_presses(presses: Iterable[tuple[int, int]]) -> str:
    return ", ".join(f"({r},{c})" for r, c in presses)


def sudoku_solution_count(givens: list[list[int]], limit: int = 2) -> int:
    """Backtracking count of completions, clipped at ``limit``; 0 if contradictory."""
    return _sudoku_search(givens, limit)[0]


def sudoku_solve(givens: list[list[int]]) -> list[list[int]]:
    count, solution = _sudoku_search(givens, 1)
    if not count:
        raise UnsolvableError("sudoku has no completion")
    return solution


def _sudoku_search(givens, limit):
    side = len(givens)
    box = {4: 2, 9: 3}[side]
    grid = [row[:] for row in givens]

    def candidates(r, c):
        used = set(grid[r]) | {grid[k][c] for k in range(side)}
        br, bc = r - r % box, c - c % box
        used |= {grid[i][j] for i in range(br, br + box) for j in range(bc, bc + box)}
        return [d for d in range(1, side + 1) if d not in used]

    for r in range(side):
        for c in range(side):
            v = grid[r][c]
            if v:
                grid[r][c] = 0
                ok = v in candidates(r, c)
                grid[r][c] = v
                if not ok:
                    return 0, None

    count = 0
    first = None

    def search():
        nonlocal count, first
        best = None
        for r in range(side):
            for c in range(side):
                if grid[r][c] == 0:
                    opts = candidates(r, c)
                    if best is None or len(opts) < len(best[2]):
                        best = (r, c, opts)
        if best is None:
            count += 1
            if first is None:
                first = [row[:] for row in grid]
            return
        r, c, opts = best
        for d in opts:
            grid[r][c] = d
            search()
            grid[r][c] = 0
            if count >= limit:
                return

    search()
    return min(count, limit), first


def eulerian_path(edges: list[list[str]]) -> list[str]:
    """Hierholzer's algorithm on an undirected multigraph."""
    adj: dict[str, list[tuple[str, int]]] = {}
    for k, (u, v) in enumerate(edges):
        adj.setdefault(u, []).append((v, k))
        adj.setdefault(v, []).append((u, k))
    for v in adj:
        adj[v].sort()
    odd = sorted(v for v in adj if len(adj[v]) % 2)
    if len(odd) not in (0, 2):
        raise UnsolvableError("graph has no Eulerian path")
    start = odd[0] if odd else min(adj)
    used = [False] * len(edges)
    ptr = {v: 0 for v in adj}
    stack = [start]
    path = []
    while stack:
        v = stack[-1]
        while ptr[v] < len(adj[v]) and used[adj[v][ptr[v]][1]]:
            ptr[v] += 1
        if ptr[v] == len(adj[v]):
            path.append(stack.pop())
        else:
            w, k = adj[v][ptr[v]]
            used[k] = True
            stack.append(w)
    if len(path) != len(edges) + 1:
        raise UnsolvableError("graph is not connected")
    return path[::-1]


def wordle_candidate_filter(history: Iterable[tuple[str, str]], words: Iterable[str] | None = None) -> list[str]:
    words = word_list() if words is None else words
    history = list(history)
    return [w for w in words if all(wordle_feedback(w, g) == fb for g, fb in history)]


def maze_bfs(board: dict) -> str:
    rows = board["rows"]
    start = tuple(board["start"])
    goal = tuple(board["exit"])
    prev: dict = {start: None}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        if p == goal:
            break
        for d, (dr, dc) in maze_game.DELTAS.items():
            n = (p[0] + dr, p[1] + dc)
            if n not in prev and maze_game.is_open(rows, *n):
                prev[n] = (p, d)
                queue.append(n)
    if goal not in prev:
        raise UnsolvableError("maze exit unreachable")
    return _unwind(prev, goal)


def _unwind(prev: dict, node) -> str:
    out = []
    while prev[node] is not None:
        node, d = prev[node]
        out.append(d)
    return "".join(reversed(out))


def sokoban_bfs(board: dict, budget: int = SOKOBAN_STATE_BUDGET) -> str:
    rows = board["rows"]
    goals = sokoban.goals_of(rows)
    start = (tuple(board["player"]), frozenset(tuple(b) for b in board["boxes"]))
    prev: dict = {start: None}
    queue = deque([start])
    expanded = 0
    while queue:
        state = queue.popleft()
        player, boxes = state
        if boxes <= goals:
            return _unwind(prev, state)
        expanded += 1
        if expanded > budget:
            raise UnsolvableError(f"sokoban search exceeded {budget} states")
        for d in "UDLR":
            p2, b2, moved = sokoban.sokoban_move(rows, player, boxes, d)
            nxt = (p2, b2)
            if moved and nxt not in prev:
                prev[nxt] = (state, d)
                queue.append(nxt)
    raise UnsolvableError("sokoban instance unsolvable")


def puzzle8_astar(tiles) -> str:
    """A* with the Manhattan heuristic (consistent, so the result is shortest)."""
    start = tuple(tiles)
    if not puzzle8.is_solvable(start):
        raise UnsolvableError("odd permutation")

    def h(t):
        total = 0
        for i, v in enumerate(t):
            if v:
                g = v - 1
                total += abs(i // 3 - g // 3) + abs(i % 3 - g % 3)
        return total

    prev: dict = {start: None}
    cost = {start: 0}
    heap = [(h(start), 0, start)]
    while heap:
        _, g, t = heapq.heappop(heap)
        if t == puzzle8.GOAL:
            return _unwind(prev, t)
        if g > cost[t]:
            continue
        for d in "UDLR":
            n = puzzle8.blank_move(t, d)
            if n is not None and g + 1 < cost.get(n, 1 << 30):
                cost[n] = g + 1
                prev[n] = (t, d)
                heapq.heappush(heap, (g + 1 + h(n), g + 1, n))
    raise UnsolvableError("8-puzzle unsolvable")


def bwcopy_bfs(grid: list[list[int]], target: list[list[int]]) -> list[tuple[str, int]]:
    n = len(grid)
    ops = [("toggle", i) for i in range(1, n + 1)] + [("copy", i) for i in range(1, n)]
    ops = [op for op in ops if op_in_range(n, op)]
    start = tuple(map(tuple, grid))
    goal = tuple(map(tuple, target))
    prev: dict = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if s == goal:
            out = []
            while prev[s] is not None:
                s, op = prev[s]
                out.append(op)
            return out[::-1]
        for op in ops:
            g = [list(r) for r in s]
            apply_op(g, op)
            t = tuple(map(tuple, g))
            if t not in prev:
                prev[t] = (s, op)
                queue.append(t)
    raise UnsolvableError("target unreachable")


def format_ops(ops: Iterable[tuple[str, int]]) -> str:
    return ", ".join(f"{k}({i})" for k, i in ops)


def graph_search_solve(game: str, board: dict) -> Solution:
    if game == "maze":
        return Solution(maze_bfs(board), optimal=True)
    if game == "sokoban":
        return Solution(sokoban_bfs(board), optimal=True)
    if game == "8-puzzle":
        return Solution(puzzle8_astar(board["tiles"]), optimal=True)
    raise ValueError(f"no graph search oracle for {game}")


SOLVABLE_GAMES = (
    "tower-of-hanoi",
    "lights-out",
    "sudoku",
    "one-stroke-drawing",
    "maze",
    "sokoban",
    "8-puzzle",
    "black-white-copy",
)


def solve(state: GameState) -> Solution:
    """Oracle transcript for the single-epoch game in ``state``."""
    game = get_game(state.game).name
    board = state.board
    if game == "tower-of-hanoi":
        n = sum(len(p) for p in board["pegs"].values())
        return Solution(format_hanoi(hanoi_optimal(n, target=board["target"])), optimal=True)
    if game == "lights-out":
        return Solution(format_presses(lights_gf2_solve(board["grid"])), optimal=True)
    if game == "sudoku":
        grid = sudoku_solve(board["givens"])
        return Solution("\n".join(" ".join(map(str, row)) for row in grid))
    if game == "one-stroke-drawing":
        return Solution(",".join(eulerian_path(board["edges"])))
    if game in ("maze", "sokoban", "8-puzzle"):
        return graph_search_solve(game, board)
    if game == "black-white-copy":
        return Solution(format_ops(bwcopy_bfs(board["grid"], board["target"])), optimal=True)
    raise ValueError(f"no oracle for {game}")


def degree_parity_ok(edges: list[list[str]]) -> bool:
    deg: Counter = Counter()
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return sum(1 for d in deg.values() if d % 2) in (0, 2)
