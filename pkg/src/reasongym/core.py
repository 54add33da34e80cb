"""Environment contract shared by every game.

A game is generated from ``(game, seed, difficulty)``, rendered into a prompt
(print-board) and advanced one agent action at a time (verify).  The
functions here are pure over :class:`GameState`; :class:`Environment` adds
in-memory sessions with per-session locks on top of them.
"""

from __future__ import annotations

import copy
import json
import re
import secrets
import threading
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, ClassVar, Mapping

from .rng import RngStream

DIMENSIONS = ("MLR", "CIR", "PR", "SGR", "SR")
EPOCH_MODES = ("single", "multi")
SCORE_RULES = ("binary", "proportional", "cumulative")

DEFAULT_MULTI_ROUNDS = 100

ANSWER_INSTRUCTION = (
    "End your response with a final line of the form `Answer: <action>`. "
    "Only the text after the last `Answer:` marker is read."
)

_MARKER = re.compile(r"answer\s*:", re.IGNORECASE)
_BLANK_LINE = re.compile(r"\n[ \t]*\n")


class GymError(Exception):
    """Base class for errors raised by the environment layer."""

    code = "error"


class UnknownGameError(GymError):
    code = "unknown_game"


class InvalidParameterError(GymError):
    code = "invalid_parameter"


class SessionNotFoundError(GymError):
    code = "session_not_found"


class EpisodeFinishedError(GymError):
    code = "episode_finished"


class CapacityError(GymError):
    code = "too_many_sessions"


def extract_answer(text: str) -> str | None:
    """Payload after the last case-insensitive ``Answer:`` marker.

    The payload runs to the end of its line block (the first blank line), so
    multi-line answers such as a Sudoku grid survive.  Returns None when no
    marker is present.
    """
    last = None
    for last in _MARKER.finditer(text):
        pass
    if last is None:
        return None
    rest = text[last.end():].replace("\r\n", "\n")
    rest = rest.lstrip(" \t")
    if rest.startswith("\n"):
        rest = rest.lstrip("\n")
    end = _BLANK_LINE.search(rest)
    if end is not None:
        rest = rest[: end.start()]
    return rest.strip().strip("`").strip()


@dataclass(frozen=True)
class Param:
    name: str
    default: int
    lo: int
    hi: int
    doc: str = ""


@dataclass
class Move:
    """What a game engine reports after consuming one action payload."""

    valid: bool
    score_delta: float = 0.0
    feedback: str = ""
    done: bool = False


class Game:
    """Base class for game engines.

    Subclasses are stateless: everything that changes lives in the ``board``
    dict, which must stay JSON-serialisable.  ``apply`` may mutate the board
    only when it returns a valid move.
    """

    name: ClassVar[str]
    dimension: ClassVar[str]
    epoch_mode: ClassVar[str]
    score_rule: ClassVar[str]
    params: ClassVar[tuple[Param, ...]] = ()
    rules: ClassVar[str] = ""
    answer_format: ClassVar[str] = ""

    def generate(self, rng: RngStream, params: dict[str, int]) -> dict:
        raise NotImplementedError

    def render(self, board: dict) -> str:
        raise NotImplementedError

    def apply(self, board: dict, payload: str, rng: RngStream) -> Move:
        raise NotImplementedError

    def check_params(self, params: dict[str, int]) -> None:
        """Hook for cross-parameter constraints; raise InvalidParameterError."""


_REGISTRY: dict[str, Game] = {}


def register(cls: type[Game]) -> type[Game]:
    if cls.dimension not in DIMENSIONS:
        raise ValueError(f"{cls.name}: unknown dimension {cls.dimension}")
    if cls.epoch_mode not in EPOCH_MODES or cls.score_rule not in SCORE_RULES:
        raise ValueError(f"{cls.name}: bad epoch mode or score rule")
    if cls.name in _REGISTRY:
        raise ValueError(f"duplicate game {cls.name}")
    _REGISTRY[cls.name] = cls()
    return cls


def get_game(name: str) -> Game:
    _load_games()
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownGameError(f"unknown game {name!r}") from None


def game_names() -> list[str]:
    _load_games()
    return list(_REGISTRY)


def dimension_map() -> dict[str, str]:
    _load_games()
    return {name: g.dimension for name, g in _REGISTRY.items()}


def _load_games() -> None:
    from . import games  # noqa: F401  (registers engines on import)


def resolve_params(game: Game, difficulty: Mapping[str, Any] | None) -> dict[str, int]:
    difficulty = dict(difficulty or {})
    known = {p.name: p for p in game.params}
    unknown = sorted(set(difficulty) - set(known))
    if unknown:
        raise InvalidParameterError(f"{game.name}: unknown parameter(s) {', '.join(unknown)}")
    out: dict[str, int] = {}
    for p in game.params:
        value = difficulty.get(p.name, p.default)
        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidParameterError(f"{game.name}: {p.name} must be an integer")
        if not p.lo <= value <= p.hi:
            raise InvalidParameterError(f"{game.name}: {p.name}={value} outside [{p.lo}, {p.hi}]")
        out[p.name] = value
    game.check_params(out)
    return out


@dataclass
class StepResult:
    score_delta: float
    total_score: float
    done: bool
    feedback: str
    valid: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Observation:
    prompt_text: str
    round: int


@dataclass
class GameState:
    game: str
    seed: int
    params: dict[str, int]
    board: dict
    rng: RngStream
    max_rounds: int
    round: int = 0
    cumulative_score: float = 0.0
    done: bool = False
    last_feedback: str = ""

    def to_dict(self) -> dict:
        return {
            "game": self.game,
            "seed": self.seed,
            "params": self.params,
            "board": self.board,
            "rng": self.rng.state,
            "max_rounds": self.max_rounds,
            "round": self.round,
            "cumulative_score": self.cumulative_score,
            "done": self.done,
            "last_feedback": self.last_feedback,
        }

    def to_json(self) -> str:
        """Canonical JSON: sorted keys, no insignificant whitespace."""
        return canonical_json(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GameState":
        data = dict(data)
        data["rng"] = RngStream(int(data["rng"]))
        return cls(**data)

    def copy(self) -> "GameState":
        return GameState(
            game=self.game,
            seed=self.seed,
            params=dict(self.params),
            board=copy.deepcopy(self.board),
            rng=self.rng.copy(),
            max_rounds=self.max_rounds,
            round=self.round,
            cumulative_score=self.cumulative_score,
            done=self.done,
            last_feedback=self.last_feedback,
        )


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def new_state(
    game: str,
    seed: int,
    difficulty: Mapping[str, Any] | None = None,
    max_rounds: int | None = None,
) -> GameState:
    """Generate a fresh game; a pure function of its arguments."""
    engine = get_game(game)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 1:
        raise InvalidParameterError("seed must be an integer >= 1")
    params = resolve_params(engine, difficulty)
    cap = 1 if engine.epoch_mode == "single" else DEFAULT_MULTI_ROUNDS
    if max_rounds is not None:
        if engine.epoch_mode == "single" and max_rounds != 1:
            raise InvalidParameterError(f"{game} is single-epoch; max_rounds must be 1")
        if max_rounds < 1:
            raise InvalidParameterError("max_rounds must be >= 1")
        cap = max_rounds
    rng = RngStream.derive(seed, engine.name)
    board = engine.generate(rng, params)
    return GameState(game=engine.name, seed=seed, params=params, board=board, rng=rng, max_rounds=cap)


def observe(state: GameState) -> Observation:
    """Render the prompt for the current state (print-board)."""
    if state.done:
        raise EpisodeFinishedError("episode finished")
    engine = get_game(state.game)
    parts = [engine.rules.strip(), f"Current state (round {state.round + 1} of {state.max_rounds}):", engine.render(state.board)]
    if state.last_feedback:
        parts.append(f"Feedback on your previous action: {state.last_feedback}")
    if engine.epoch_mode == "multi":
        parts.append(f"Score so far: {format_score(state.cumulative_score)}")
    parts.append(engine.answer_format.strip())
    parts.append(ANSWER_INSTRUCTION)
    return Observation(prompt_text="\n\n".join(parts), round=state.round)


def advance(state: GameState, action_text: str) -> StepResult:
    """Apply one agent response (verify); mutates ``state``."""
    if state.done:
        raise EpisodeFinishedError("episode finished")
    engine = get_game(state.game)
    payload = extract_answer(action_text)
    if payload is None:
        move = Move(valid=False, feedback=f"No `Answer:` line found. {engine.answer_format.strip()}")
    else:
        move = engine.apply(state.board, payload, state.rng)
        if not move.valid:
            move.score_delta = 0.0
    state.round += 1
    state.cumulative_score = state.cumulative_score + move.score_delta
    if engine.epoch_mode == "single" or move.done or state.round >= state.max_rounds:
        state.done = True
    state.last_feedback = move.feedback
    return StepResult(
        score_delta=move.score_delta,
        total_score=state.cumulative_score,
        done=state.done,
        feedback=move.feedback,
        valid=move.valid,
    )


def format_score(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".") if x != int(x) else str(int(x))


@dataclass
class _Session:
    state: GameState
    created_at: float
    last_touch: float
    meta: dict = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


class Environment:
    """In-memory session registry.

    Distinct sessions can be stepped concurrently; steps on one session are
    serialised by that session's lock.  Idle sessions are evicted lazily.
    """

    def __init__(
        self,
        max_sessions: int | None = None,
        idle_timeout: float | None = 3600.0,
        clock: Callable[[], float] = time.monotonic,
    ) -> None:
        self.max_sessions = max_sessions
        self.idle_timeout = idle_timeout
        self._clock = clock
        self._sessions: dict[str, _Session] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._sessions)

    def create_session(
        self,
        game: str,
        seed: int,
        difficulty: Mapping[str, Any] | None = None,
        max_rounds: int | None = None,
        meta: Mapping[str, Any] | None = None,
    ) -> tuple[str, GameState]:
        state = new_state(game, seed, difficulty, max_rounds)
        now = self._clock()
        with self._lock:
            self._evict_locked(now)
            if self.max_sessions is not None and len(self._sessions) >= self.max_sessions:
                raise CapacityError(f"session limit {self.max_sessions} reached")
            sid = secrets.token_hex(16)
            while sid in self._sessions:
                sid = secrets.token_hex(16)
            self._sessions[sid] = _Session(state, now, now, dict(meta or {}))
        return sid, state.copy()

    def _get(self, sid: str) -> _Session:
        now = self._clock()
        with self._lock:
            self._evict_locked(now)
            entry = self._sessions.get(sid)
            if entry is None:
                raise SessionNotFoundError(f"no session {sid!r}")
            entry.last_touch = now
            return entry

    def _evict_locked(self, now: float) -> None:
        if self.idle_timeout is None:
            return
        stale = [k for k, s in self._sessions.items() if now - s.last_touch > self.idle_timeout]
        for k in stale:
            del self._sessions[k]

    def evict_idle(self) -> int:
        with self._lock:
            before = len(self._sessions)
            self._evict_locked(self._clock())
            return before - len(self._sessions)

    def render_observation(self, sid: str) -> Observation:
        entry = self._get(sid)
        with entry.lock:
            return observe(entry.state)

    def step(self, sid: str, action_text: str) -> StepResult:
        entry = self._get(sid)
        with entry.lock:
            return advance(entry.state, action_text)

    def get_state(self, sid: str) -> GameState:
        entry = self._get(sid)
        with entry.lock:
            return entry.state.copy()

    def meta(self, sid: str) -> dict:
        return dict(self._get(sid).meta)

    def close(self, sid: str) -> None:
        with self._lock:
            self._sessions.pop(sid, None)
