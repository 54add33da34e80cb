"""HTTP front end over :class:`reasongym.core.Environment`."""

from __future__ import annotations

import json
import threading
import time
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..core import (
    CapacityError,
    Environment,
    EpisodeFinishedError,
    GymError,
    InvalidParameterError,
    SessionNotFoundError,
    UnknownGameError,
    get_game,
    game_names,
)
from .schemas import (
    BoardResponse,
    GameInfo,
    GenerateResponse,
    InitPacket,
    SessionRequest,
    StateResponse,
    VerifyRequest,
    VerifyResponse,
)

DEFAULT_MAX_ACTION_BYTES = 64 * 1024

STATUS = {
    UnknownGameError: 404,
    InvalidParameterError: 400,
    SessionNotFoundError: 404,
    EpisodeFinishedError: 409,
    CapacityError: 503,
}


class RequestLog:
    """Append-only JSONL log; one file per output directory."""

    def __init__(self, default_dir: str | Path | None) -> None:
        self.default_dir = Path(default_dir) if default_dir else None
        self._lock = threading.Lock()

    def write(self, record: dict, output_dir: str | None = None) -> None:
        target = Path(output_dir) if output_dir else self.default_dir
        if target is None:
            return
        record = {"ts": time.time(), **record}
        line = json.dumps(record, sort_keys=True, default=str) + "\n"
        with self._lock:
            target.mkdir(parents=True, exist_ok=True)
            with open(target / "requests.jsonl", "a", encoding="utf-8") as fh:
                fh.write(line)


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "detail": detail})


def create_app(
    environment: Environment | None = None,
    log_dir: str | Path | None = None,
    max_action_bytes: int = DEFAULT_MAX_ACTION_BYTES,
) -> FastAPI:
    env = environment if environment is not None else Environment()
    log = RequestLog(log_dir)
    app = FastAPI(title="reasongym", version="0.1.0")
    app.state.env = env
    app.state.log = log

    @app.exception_handler(GymError)
    def _gym_error(request: Request, exc: GymError):
        return _error(STATUS.get(type(exc), 400), exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    def _validation_error(request: Request, exc: RequestValidationError):
        detail = "; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors())
        return _error(400, "invalid_parameter", detail)

    def _session_dir(sid: str) -> str | None:
        try:
            return env.meta(sid).get("output_dir")
        except SessionNotFoundError:
            return None

    @app.get("/games", response_model=list[GameInfo])
    def games():
        out = []
        for name in game_names():
            g = get_game(name)
            params = {p.name: {"default": p.default, "min": p.lo, "max": p.hi, "doc": p.doc} for p in g.params}
            out.append(GameInfo(name=name, dimension=g.dimension, epoch_mode=g.epoch_mode, score_rule=g.score_rule, params=params))
        return out

    @app.post("/generate", response_model=GenerateResponse)
    def generate(packet: InitPacket):
        meta = {"model_info": packet.model_info, "port": packet.port, "output_dir": packet.output_dir}
        sid, state = env.create_session(packet.game, packet.seed, packet.difficulty, packet.max_rounds, meta)
        log.write({"event": "generate", "session_id": sid, "game": state.game, "seed": state.seed,
                   "difficulty": state.params, "model_info": packet.model_info}, packet.output_dir)
        return GenerateResponse(
            session_id=sid, game=state.game, seed=state.seed, round=state.round,
            max_rounds=state.max_rounds, epoch_mode=get_game(state.game).epoch_mode, difficulty=state.params,
        )

    @app.post("/print_board", response_model=BoardResponse)
    def print_board(req: SessionRequest):
        obs = env.render_observation(req.session_id)
        log.write({"event": "print_board", "session_id": req.session_id, "round": obs.round}, _session_dir(req.session_id))
        return BoardResponse(prompt=obs.prompt_text, round=obs.round)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        size = len(req.action.encode("utf-8"))
        if size > max_action_bytes:
            return _error(413, "action_too_large", f"action is {size} bytes; limit is {max_action_bytes}")
        res = env.step(req.session_id, req.action)
        log.write({"event": "verify", "session_id": req.session_id, "action": req.action, **res.to_dict()},
                  _session_dir(req.session_id))
        return VerifyResponse(**res.to_dict())

    @app.post("/state", response_model=StateResponse)
    def state(req: SessionRequest):
        return StateResponse(session_id=req.session_id, state=env.get_state(req.session_id).to_json())

    return app
