"""Agents that turn a prompt into a response text.

Scripted agents (oracle, random, fixed) stand in for a model endpoint in
tests and baselines.  Every agent sees the same messages a hosted model
would; the oracle additionally regenerates the instance from its seed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Protocol

import httpx

from .. import oracles
from ..core import get_game, new_state
from ..games.euler import labels
from ..games.lights import SIZE as LIGHTS_SIZE
from ..games.wordle import word_list
from ..rng import RngStream
from .chat import ModelEndpoint, chat_complete


@dataclass
class EpisodeContext:
    game: str
    seed: int
    params: dict[str, int]
    max_rounds: int
    round: int = 0
    memo: dict[str, Any] = field(default_factory=dict)


class Agent(Protocol):
    name: str

    def respond(self, messages: list[dict[str, str]], ctx: EpisodeContext) -> str: ...


class OracleAgent:
    """Plays the oracle transcript of the regenerated instance."""

    name = "oracle"

    def respond(self, messages, ctx):
        if ctx.game not in oracles.SOLVABLE_GAMES:
            raise ValueError(f"no oracle for {ctx.game}")
        state = new_state(ctx.game, ctx.seed, ctx.params)
        return "Following the solver.\n" + oracles.solve(state).as_answer()


class FixedActionAgent:
    """Sends the same action every round (e.g. always `stand`)."""

    def __init__(self, action: str, name: str | None = None) -> None:
        self.action = action
        self.name = name or f"fixed-{action}"

    def respond(self, messages, ctx):
        return f"Answer: {self.action}"


class ThresholdAgent:
    """N-point policy read off the prompt: hit until the sum reaches N - margin."""

    _N = re.compile(r"Threshold N:\s*(\d+)")
    _SUM = re.compile(r"Your cards:.*\(sum (\d+)\)")

    def __init__(self, margin: int = 2) -> None:
        self.margin = margin
        self.name = f"stand-at-n-minus-{margin}"

    def respond(self, messages, ctx):
        prompt = messages[-1]["content"]
        n = int(self._N.search(prompt).group(1))
        total = int(self._SUM.search(prompt).group(1))
        return "Answer: " + ("stand" if total >= n - self.margin else "hit")


def _moves(rng: RngStream, n: int, alphabet: str = "UDLR") -> str:
    return "".join(rng.choice(alphabet) for _ in range(n))


def random_action(game: str, params: dict[str, int], rng: RngStream) -> str:
    """A well-formed but uninformed action for ``game``."""
    name = get_game(game).name
    if name == "maze":
        return _moves(rng, 2 * params["side"])
    if name == "sokoban":
        return _moves(rng, 4 * params["side"])
    if name == "8-puzzle":
        return _moves(rng, 20)
    if name == "tower-of-hanoi":
        k = 2 ** params["disks"] - 1
        pairs = [("A", "B"), ("A", "C"), ("B", "A"), ("B", "C"), ("C", "A"), ("C", "B")]
        return ", ".join("{}->{}".format(*rng.choice(pairs)) for _ in range(k))
    if name == "lights-out":
        n = rng.randint(1, 5)
        return ", ".join(f"({rng.randbelow(LIGHTS_SIZE)},{rng.randbelow(LIGHTS_SIZE)})" for _ in range(n))
    if name == "sudoku":
        side = 4 if params["level"] == 1 else 9
        return "\n".join(" ".join(str(rng.randint(1, side)) for _ in range(side)) for _ in range(side))
    if name == "one-stroke-drawing":
        names = labels(params["vertices"])
        return ",".join(rng.choice(names) for _ in range(params["edges"] + 1))
    if name == "black-white-copy":
        n = params["size"]
        ops = []
        for _ in range(params["ops"]):
            if rng.randbelow(2) == 0:
                ops.append(f"toggle({rng.randint(1, n)})")
            else:
                ops.append(f"copy({rng.randint(1, n - 1)})")
        return ", ".join(ops)
    if name == "wordle":
        return rng.choice(word_list())
    if name in ("2048", "snake"):
        return rng.choice("UDLR")
    if name == "n-point":
        return rng.choice(["hit", "stand"])
    if name == "trust-evolution":
        return rng.choice(["cooperate", "cheat"])
    if name == "minesweeper":
        n = params["size"]
        return f"reveal({rng.randbelow(n)},{rng.randbelow(n)})"
    raise ValueError(f"no random policy for {game}")


class RandomAgent:
    """Uniformly random well-formed actions, seeded per (game, seed, round)."""

    name = "random"

    def __init__(self, seed: int = 1) -> None:
        self.seed = seed

    def respond(self, messages, ctx):
        rng = RngStream.derive(self.seed, f"random-agent:{ctx.game}:{ctx.seed}", ctx.round)
        return f"Answer: {random_action(ctx.game, ctx.params, rng)}"


class ChatAgent:
    """Zero-shot calls to a hosted chat model."""

    def __init__(self, endpoint: ModelEndpoint, http: httpx.Client | None = None, **retry: Any) -> None:
        self.endpoint = endpoint
        self.http = http
        self.retry = retry
        self.name = endpoint.model

    def respond(self, messages, ctx):
        return chat_complete(self.endpoint, messages, http=self.http, **self.retry).text
