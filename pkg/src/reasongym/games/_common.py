from __future__ import annotations

import re

DELTAS = {"U": (-1, 0), "D": (1, 0), "L": (0, -1), "R": (0, 1)}

_DIR_WORDS = {"UP": "U", "DOWN": "D", "LEFT": "L", "RIGHT": "R"}
_SEPARATORS = re.compile(r"[\s,;\[\]\"']+")


def parse_move_string(payload: str) -> str | None:
    """Normalise a U/D/L/R plan; None if any other character appears."""
    text = _SEPARATORS.sub("", payload).upper()
    if any(ch not in DELTAS for ch in text):
        return None
    return text


def parse_direction(payload: str) -> str | None:
    """A single direction given as a letter or a word."""
    token = payload.strip().strip(".").upper()
    if token in DELTAS:
        return token
    return _DIR_WORDS.get(token)


def plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"
