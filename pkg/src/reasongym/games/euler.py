"""One Stroke Drawing: trace every edge of a multigraph exactly once."""

from __future__ import annotations

import re
from collections import Counter

from ..core import Game, InvalidParameterError, Move, Param, register


def edge_key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


def parse_path(payload: str) -> list[str]:
    return [tok for tok in re.split(r"[\s,;>\-→]+", payload.upper()) if tok]


def apply_euler(edges: list[list[str]], path: list[str]) -> float:
    """1.0 iff ``path`` walks along every edge exactly once (multiplicity counts)."""
    remaining = Counter(edge_key(u, v) for u, v in edges)
    if len(path) != sum(remaining.values()) + 1:
        return 0.0
    for u, v in zip(path, path[1:]):
        key = edge_key(u, v)
        if remaining[key] <= 0:
            return 0.0
        remaining[key] -= 1
    return 1.0


def labels(n: int) -> list[str]:
    return [chr(ord("A") + i) for i in range(n)]


@register
class OneStrokeDrawing(Game):
    name = "one-stroke-drawing"
    dimension = "MLR"
    epoch_mode = "single"
    score_rule = "binary"
    params = (
        Param("vertices", 6, 3, 12, "number of vertices"),
        Param("edges", 9, 2, 36, "number of edges, at least vertices - 1"),
    )
    rules = (
        "One Stroke Drawing. The undirected graph below may contain repeated edges. "
        "Draw it in one stroke: give a sequence of vertices in which consecutive "
        "vertices are joined by an edge and every edge is used exactly once "
        "(an edge listed twice must be traversed twice)."
    )
    answer_format = "Answer format: the vertex sequence, e.g. `A,B,C,A`."

    def check_params(self, params):
        n, e = params["vertices"], params["edges"]
        if e < n - 1 or e > 3 * n:
            raise InvalidParameterError(f"one-stroke-drawing: edges must lie in [{n - 1}, {3 * n}] for {n} vertices")

    def generate(self, rng, params):
        names = labels(params["vertices"])
        n_edges = params["edges"]
        # the walk itself is an Euler trail of the multigraph it traces
        cur = rng.choice(names)
        seen = {cur}
        multiplicity: Counter = Counter()
        edges: list[list[str]] = []
        while len(edges) < n_edges or len(seen) < len(names):
            options = [v for v in names if v != cur and multiplicity[edge_key(cur, v)] < 2]
            unseen = [v for v in options if v not in seen]
            if len(edges) >= n_edges - (len(names) - len(seen)) and unseen:
                options = unseen
            if not options:
                options = [v for v in names if v != cur]
            nxt = rng.choice(options)
            multiplicity[edge_key(cur, nxt)] += 1
            edges.append(list(edge_key(cur, nxt)))
            seen.add(nxt)
            cur = nxt
        rng.shuffle(edges)
        return {"vertices": names, "edges": edges}

    def render(self, board):
        lines = [f"Vertices: {', '.join(board['vertices'])}", f"Edges ({len(board['edges'])}):"]
        lines += [f"{u}-{v}" for u, v in board["edges"]]
        return "\n".join(lines)

    def apply(self, board, payload, rng):
        path = parse_path(payload)
        unknown = [v for v in path if v not in board["vertices"]]
        if unknown or not path:
            what = f"Unknown vertex {unknown[0]!r}." if unknown else "Empty path."
            return Move(False, feedback=f"{what} {self.answer_format}")
        score = apply_euler(board["edges"], path)
        return Move(True, score, "Every edge drawn once." if score else "The path does not use every edge exactly once.", done=True)
