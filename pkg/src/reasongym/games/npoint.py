"""N-point: ten hands of a blackjack variant with a seeded threshold.

Each hand deals one card to the player and one to the dealer (in that
order).  The player hits or stands; on stand the dealer draws while its sum
is below N - 3.  Cards are uniform on 1..10 from the session stream.
"""

from __future__ import annotations

from ..core import Game, Move, Param, register


def draw(rng) -> int:
    return rng.randint(1, 10)


def deal(board: dict, rng) -> None:
    board["player"] = [draw(rng)]
    board["dealer"] = [draw(rng)]


def dealer_play(board: dict, rng) -> None:
    limit = board["threshold"] - 3
    while sum(board["dealer"]) < limit:
        board["dealer"].append(draw(rng))


def step_npoint(board: dict, action: str, rng) -> tuple[float, str, bool]:
    """Apply ``hit`` or ``stand`` in place; returns (score_delta, feedback, done)."""
    n = board["threshold"]
    if action == "hit":
        card = draw(rng)
        board["player"].append(card)
        total = sum(board["player"])
        if total <= n:
            return 0.0, f"You drew {card}; your sum is {total}.", False
        won = False
        outcome = f"You drew {card} and bust with {total} > {n}. Hand lost."
    else:
        dealer_play(board, rng)
        p, d = sum(board["player"]), sum(board["dealer"])
        won = d > n or p > d
        if d > n:
            outcome = f"You stand on {p}; dealer busts with {d}. Hand won."
        else:
            outcome = f"You stand on {p}; dealer stands on {d}. Hand {'won' if won else 'lost'}."
    board["hands_remaining"] -= 1
    board["hand"] += 1
    if won:
        board["wins"] += 1
    done = board["hands_remaining"] == 0
    if not done:
        deal(board, rng)
    return (1.0 if won else 0.0), outcome, done


@register
class NPoint(Game):
    name = "n-point"
    dimension = "SR"
    epoch_mode = "multi"
    score_rule = "cumulative"
    params = (Param("hands", 10, 1, 50, "hands per episode"),)
    rules = (
        "N-point, a variant of 21. A threshold N between 15 and 30 is fixed for the "
        "whole game. Cards are worth 1 to 10. Each hand you and the dealer receive one "
        "card. Say `hit` to draw another card or `stand` to stop. Going over N loses "
        "the hand immediately. When you stand the dealer follows a fixed rule: it "
        "keeps drawing while its sum is below N - 3. You win the hand if the dealer "
        "goes over N or your sum is strictly higher; ties go to the dealer. Each won "
        "hand scores 1 point."
    )
    answer_format = "Answer format: `hit` or `stand`."

    def generate(self, rng, params):
        board = {
            "threshold": rng.randint(15, 30),
            "hands_remaining": params["hands"],
            "hand": 1,
            "wins": 0,
            "player": [],
            "dealer": [],
        }
        deal(board, rng)
        return board

    def render(self, board):
        p, d = board["player"], board["dealer"]
        total = board["hand"] - 1 + board["hands_remaining"]
        return "\n".join([
            f"Threshold N: {board['threshold']}",
            f"Hand {board['hand']} of {total}",
            f"Your cards: {', '.join(map(str, p))} (sum {sum(p)})",
            f"Dealer cards: {', '.join(map(str, d))} (sum {sum(d)})",
            f"Hands won: {board['wins']}",
        ])

    def apply(self, board, payload, rng):
        action = payload.strip().strip(".").lower()
        if action not in ("hit", "stand"):
            return Move(False, feedback="Reply with `hit` or `stand`.")
        delta, feedback, done = step_npoint(board, action, rng)
        return Move(True, delta, feedback, done)
