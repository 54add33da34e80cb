"""Trust Evolution: repeated cooperate/cheat rounds against four fixed opponents."""

from __future__ import annotations

from ..core import Game, Move, Param, register

OPPONENTS = ("always-cooperate", "always-cheat", "copycat", "grudger")

# (player, opponent) -> (player coins, opponent coins)
PAYOFF = {
    ("cooperate", "cooperate"): (2, 2),
    ("cheat", "cooperate"): (3, -1),
    ("cooperate", "cheat"): (-1, 3),
    ("cheat", "cheat"): (0, 0),
}


def opponent_move(policy: str, history: list[list[str]]) -> str:
    """The opponent's move given this match's (player, opponent) history."""
    if policy == "always-cooperate":
        return "cooperate"
    if policy == "always-cheat":
        return "cheat"
    if policy == "copycat":
        return history[-1][0] if history else "cooperate"
    if policy == "grudger":
        return "cheat" if any(p == "cheat" for p, _ in history) else "cooperate"
    raise ValueError(policy)


def step_trust(board: dict, action: str) -> tuple[float, str, bool]:
    policy = OPPONENTS[board["opponent"]]
    theirs = opponent_move(policy, board["history"])
    gain, _ = PAYOFF[(action, theirs)]
    board["history"].append([action, theirs])
    board["coins"] += gain
    fb = f"You {action}, opponent {board['opponent'] + 1} {'cooperates' if theirs == 'cooperate' else 'cheats'}: {gain:+d} coins."
    if len(board["history"]) == board["rounds_per_opponent"]:
        board["opponent"] += 1
        board["history"] = []
        if board["opponent"] == len(OPPONENTS):
            return float(gain), fb + " All matches finished.", True
        fb += f" Now facing opponent {board['opponent'] + 1}."
    return float(gain), fb, False


@register
class TrustEvolution(Game):
    name = "trust-evolution"
    dimension = "SR"
    epoch_mode = "multi"
    score_rule = "cumulative"
    params = (Param("rounds", 10, 1, 25, "rounds played against each opponent"),)
    rules = (
        "Trust Evolution. You play a fixed number of rounds against each of four "
        "opponents in turn; each opponent follows its own hidden but consistent "
        "strategy. Every round both sides choose `cooperate` or `cheat` at the same "
        "time. Payoffs to you: both cooperate +2; you cheat while they cooperate +3; "
        "you cooperate while they cheat -1; both cheat 0. Your score is your total coins."
    )
    answer_format = "Answer format: `cooperate` or `cheat`."

    def generate(self, rng, params):
        return {"opponent": 0, "rounds_per_opponent": params["rounds"], "history": [], "coins": 0}

    def render(self, board):
        lines = [
            f"Opponent {board['opponent'] + 1} of {len(OPPONENTS)}, round {len(board['history']) + 1} of {board['rounds_per_opponent']}",
            f"Coins: {board['coins']}",
        ]
        if board["history"]:
            lines.append("This match so far (you / opponent):")
            lines += [f"{i}. {p} / {o}" for i, (p, o) in enumerate(board["history"], 1)]
        return "\n".join(lines)

    def apply(self, board, payload, rng):
        action = payload.strip().strip(".").lower()
        if action not in ("cooperate", "cheat"):
            return Move(False, feedback="Reply with `cooperate` or `cheat`.")
        delta, fb, done = step_trust(board, action)
        return Move(True, delta, fb, done)
