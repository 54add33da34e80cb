"""Wordle over a pinned list of 2,315 common five-letter words."""

from __future__ import annotations

import hashlib
from collections import Counter
from functools import lru_cache
from importlib import resources

from ..core import Game, Move, Param, register

WORD_LIST_SHA256 = "e1c1165ae1885e41c54f86397d7499c088debfef87a5b6f5b96ca7a4c823d73c"


@lru_cache(maxsize=None)
def word_list() -> tuple[str, ...]:
    raw = resources.files(__package__).joinpath("data/words.txt").read_bytes()
    if hashlib.sha256(raw).hexdigest() != WORD_LIST_SHA256:
        raise RuntimeError("word list does not match its recorded digest")
    return tuple(raw.decode("ascii").split())


@lru_cache(maxsize=None)
def word_set() -> frozenset[str]:
    return frozenset(word_list())


def wordle_feedback(secret: str, guess: str) -> str:
    """G = right letter right place, Y = elsewhere, X = absent.

    Greens are assigned first; the remaining letters of the secret are then
    handed out as yellows from left to right.
    """
    result = ["X"] * len(guess)
    unmatched: Counter = Counter()
    for i, (s, g) in enumerate(zip(secret, guess)):
        if s == g:
            result[i] = "G"
        else:
            unmatched[s] += 1
    for i, g in enumerate(guess):
        if result[i] != "G" and unmatched[g] > 0:
            result[i] = "Y"
            unmatched[g] -= 1
    return "".join(result)


@register
class Wordle(Game):
    name = "wordle"
    dimension = "PR"
    epoch_mode = "multi"
    score_rule = "binary"
    params = (Param("max_guesses", 6, 1, 10, "guesses allowed"),)
    rules = (
        "Wordle. Guess the secret five-letter English word. After each guess every "
        "letter is marked G (correct letter, correct position), Y (in the word but "
        "elsewhere) or X (not in the word, or all of its copies are already "
        "accounted for). Guesses must be real words from the game's list; an unknown "
        "word is rejected without using up a guess."
    )
    answer_format = "Answer format: one lowercase five-letter word, e.g. `crane`."

    def generate(self, rng, params):
        return {"secret": rng.choice(word_list()), "guesses_left": params["max_guesses"], "history": []}

    def render(self, board):
        lines = [f"Guesses left: {board['guesses_left']}"]
        if board["history"]:
            lines.append("Previous guesses:")
            lines += [f"{g} -> {fb}" for g, fb in board["history"]]
        else:
            lines.append("No guesses yet.")
        return "\n".join(lines)

    def apply(self, board, payload, rng):
        guess = payload.strip().strip(".").lower()
        if len(guess) != 5 or not guess.isalpha():
            return Move(False, feedback="A guess must be exactly five letters. " + self.answer_format)
        if guess not in word_set():
            return Move(False, feedback=f"{guess!r} is not in the word list; the guess was not counted.")
        fb = wordle_feedback(board["secret"], guess)
        board["history"].append([guess, fb])
        board["guesses_left"] -= 1
        if fb == "GGGGG":
            return Move(True, 1.0, f"{guess} -> {fb}. Solved!", done=True)
        if board["guesses_left"] == 0:
            return Move(True, 0.0, f"{guess} -> {fb}. Out of guesses; the word was {board['secret']}.", done=True)
        return Move(True, 0.0, f"{guess} -> {fb}")
