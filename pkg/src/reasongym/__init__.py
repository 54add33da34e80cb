"""Seeded text-game environments for evaluating reasoning, with scoring and analysis tools."""

from .core import (
    DIMENSIONS,
    Environment,
    GameState,
    Observation,
    StepResult,
    advance,
    dimension_map,
    extract_answer,
    game_names,
    get_game,
    new_state,
    observe,
)

__version__ = "0.1.0"

__all__ = [
    "DIMENSIONS", "Environment", "GameState", "Observation", "StepResult", "advance",
    "dimension_map", "extract_answer", "game_names", "get_game", "new_state", "observe",
]
