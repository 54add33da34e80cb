"""Wire models for the generate / print_board / verify protocol."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field


class InitPacket(BaseModel):
    model_config = ConfigDict(extra="forbid")

    game: str
    seed: int
    difficulty: dict[str, int] = Field(default_factory=dict)
    model_info: dict[str, Any] = Field(default_factory=dict)
    port: Optional[int] = None
    output_dir: Optional[str] = None
    max_rounds: Optional[int] = None


class GenerateResponse(BaseModel):
    session_id: str
    game: str
    seed: int
    round: int
    max_rounds: int
    epoch_mode: str
    difficulty: dict[str, int]


class SessionRequest(BaseModel):
    session_id: str


class BoardResponse(BaseModel):
    prompt: str
    round: int


class VerifyRequest(BaseModel):
    session_id: str
    action: str


class VerifyResponse(BaseModel):
    score_delta: float
    total_score: float
    done: bool
    valid: bool
    feedback: str


class StateResponse(BaseModel):
    session_id: str
    state: str


class GameInfo(BaseModel):
    name: str
    dimension: str
    epoch_mode: str
    score_rule: str
    params: dict[str, dict[str, Any]]


class ErrorBody(BaseModel):
    error: str
    detail: str = ""
