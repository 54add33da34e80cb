"""Clients for the generate / print_board / verify protocol."""

from __future__ import annotations

import time
from typing import Any, Callable, Mapping, Protocol

import httpx

from ..core import (
    CapacityError,
    Environment,
    EpisodeFinishedError,
    GymError,
    InvalidParameterError,
    SessionNotFoundError,
    UnknownGameError,
    get_game,
)

_BY_CODE = {
    cls.code: cls
    for cls in (UnknownGameError, InvalidParameterError, SessionNotFoundError, EpisodeFinishedError, CapacityError)
}


class TransportFailure(Exception):
    """A remote call failed after all retries."""


class ServiceError(GymError):
    """Error body returned by the service that has no local exception class."""

    def __init__(self, code: str, detail: str = "") -> None:
        super().__init__(detail or code)
        self.code = code


class EnvClient(Protocol):
    def generate(self, game: str, seed: int, difficulty: Mapping[str, int] | None = None,
                 max_rounds: int | None = None, model_info: Mapping[str, Any] | None = None) -> dict: ...

    def print_board(self, session_id: str) -> dict: ...

    def verify(self, session_id: str, action: str) -> dict: ...


class LocalEnvClient:
    """In-process client with the same return shapes as the HTTP service."""

    def __init__(self, env: Environment | None = None) -> None:
        self.env = env if env is not None else Environment(idle_timeout=None)

    def generate(self, game, seed, difficulty=None, max_rounds=None, model_info=None):
        sid, state = self.env.create_session(game, seed, difficulty, max_rounds, {"model_info": dict(model_info or {})})
        return {
            "session_id": sid, "game": state.game, "seed": state.seed, "round": state.round,
            "max_rounds": state.max_rounds, "epoch_mode": get_game(state.game).epoch_mode, "difficulty": state.params,
        }

    def print_board(self, session_id):
        obs = self.env.render_observation(session_id)
        return {"prompt": obs.prompt_text, "round": obs.round}

    def verify(self, session_id, action):
        return self.env.step(session_id, action).to_dict()


class HttpEnvClient:
    """Talks to a running service.

    ``http`` may be any object with an httpx-style ``post`` (a FastAPI
    ``TestClient`` works).  Connection failures are retried with exponential
    backoff.  A verify is retried only when the request never reached the
    server, so an action is never applied twice.
    """

    def __init__(
        self,
        base_url: str | None = None,
        http: Any = None,
        retries: int = 3,
        backoff: float = 0.5,
        timeout: float = 30.0,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        if http is None:
            if base_url is None:
                raise ValueError("need base_url or http client")
            http = httpx.Client(base_url=base_url.rstrip("/"), timeout=timeout)
        self.http = http
        self.retries = retries
        self.backoff = backoff
        self.sleep = sleep

    def _post(self, path: str, body: dict, idempotent: bool = True) -> dict:
        retryable = httpx.TransportError if idempotent else (httpx.ConnectError,)
        for attempt in range(self.retries):
            try:
                resp = self.http.post(path, json=body)
                break
            except retryable as exc:
                if attempt == self.retries - 1:
                    raise TransportFailure(f"{path}: {exc}") from exc
                self.sleep(self.backoff * 2**attempt)
            except httpx.TransportError as exc:
                raise TransportFailure(f"{path}: {exc}") from exc
        if resp.status_code >= 400:
            try:
                data = resp.json()
                code, detail = data.get("error", "error"), data.get("detail", "")
            except ValueError:
                code, detail = "http_error", resp.text
            cls = _BY_CODE.get(code)
            raise cls(detail) if cls else ServiceError(code, f"HTTP {resp.status_code}: {detail}")
        return resp.json()

    def generate(self, game, seed, difficulty=None, max_rounds=None, model_info=None):
        body = {"game": game, "seed": seed, "difficulty": dict(difficulty or {}), "model_info": dict(model_info or {})}
        if max_rounds is not None:
            body["max_rounds"] = max_rounds
        return self._post("/generate", body)

    def print_board(self, session_id):
        return self._post("/print_board", {"session_id": session_id})

    def verify(self, session_id, action):
        return self._post("/verify", {"session_id": session_id, "action": action}, idempotent=False)
