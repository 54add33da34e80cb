"""Episode loop, campaigns and the JSONL checkpoint."""

from __future__ import annotations

import csv
import json
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from ..core import DEFAULT_MULTI_ROUNDS, GymError, dimension_map, extract_answer, get_game
from ..scoring import ConfigurationError, ScoreMatrix, episode_score, write_dims_csv
from .agents import Agent, EpisodeContext
from .client import EnvClient, TransportFailure

SYSTEM_PROMPT = (
    "You are playing a text game. The rules, the current state and the required "
    "answer format are in the user message."
)

BAN_CLAUSES = {
    "code": "Do not write or simulate code.",
    "math": "Do not set up equations or use mathematical formalism.",
    "algorithm": "Do not name or step through a known algorithm or search procedure.",
    "natural-language": "Do not reason in prose; give only terse symbolic working.",
}

MAX_CONSECUTIVE_INVALID = 3
CHECKPOINT = "checkpoint.jsonl"


def parse_action(response_text: str) -> str | None:
    """Payload after the last ``Answer:`` marker, or None when there is none."""
    return extract_answer(response_text)


def system_prompt(bans: Iterable[str] = ()) -> str:
    clauses = [BAN_CLAUSES[b] for b in sorted(set(bans))]
    return " ".join([SYSTEM_PROMPT, *clauses])


def token_length(text: str) -> int:
    return len(text.split())


@dataclass
class EpisodeRecord:
    game: str
    seed: int
    model: str
    transcript: list[dict] = field(default_factory=list)
    raw_score: float = 0.0
    response_lengths: list[int] = field(default_factory=list)
    wall_time: float = 0.0
    status: str = "finished"  # finished | terminated | errored
    error: str = ""

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.model, self.game, self.seed)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "EpisodeRecord":
        return cls(**data)


@dataclass
class CampaignConfig:
    games: Sequence[str]
    model: str
    output_dir: str | Path
    seeds: Sequence[int] = tuple(range(1, 51))
    single_episodes: int = 50
    multi_episodes: int = 20
    max_rounds: int = DEFAULT_MULTI_ROUNDS
    concurrency: int = 1
    resume: bool = False
    paradigm_ban: frozenset[str] = frozenset()
    difficulty: dict[str, dict[str, int]] = field(default_factory=dict)

    def validate(self) -> None:
        if not self.seeds:
            raise ConfigurationError("seed range is empty")
        if self.max_rounds < 1:
            raise ConfigurationError("max_rounds must be >= 1")
        if self.concurrency < 1:
            raise ConfigurationError("concurrency must be >= 1")
        if not self.games:
            raise ConfigurationError("no games selected")
        unknown = set(self.paradigm_ban) - set(BAN_CLAUSES)
        if unknown:
            raise ConfigurationError(f"unknown paradigm ban(s): {', '.join(sorted(unknown))}")
        for g in self.games:
            get_game(g)

    def seeds_for(self, game: str) -> list[int]:
        n = self.single_episodes if get_game(game).epoch_mode == "single" else self.multi_episodes
        return list(self.seeds)[:n]

    def rounds_for(self, game: str) -> int | None:
        return None if get_game(game).epoch_mode == "single" else self.max_rounds


def run_episode(
    client: EnvClient,
    agent: Agent,
    game: str,
    seed: int,
    model: str | None = None,
    max_rounds: int | None = None,
    difficulty: dict[str, int] | None = None,
    bans: Iterable[str] = (),
) -> EpisodeRecord:
    """print_board -> agent -> parse -> verify until done, the cap, or 3 invalids in a row."""
    rec = EpisodeRecord(game=get_game(game).name, seed=seed, model=model or agent.name)
    start = time.perf_counter()
    system = system_prompt(bans)
    try:
        info = client.generate(game, seed, difficulty, max_rounds, {"model": rec.model})
        sid = info["session_id"]
        ctx = EpisodeContext(rec.game, seed, dict(info["difficulty"]), info["max_rounds"])
        invalid_run = 0
        while True:
            board = client.print_board(sid)
            ctx.round = board["round"]
            messages = [{"role": "system", "content": system}, {"role": "user", "content": board["prompt"]}]
            response = agent.respond(messages, ctx)
            action = parse_action(response)
            sent = response if action is None else f"Answer: {action}"
            result = client.verify(sid, sent)
            rec.transcript.append({"prompt": board["prompt"], "system": system, "response": response, "action": action, "result": result})
            rec.response_lengths.append(token_length(response))
            rec.raw_score = result["total_score"]
            if result["done"]:
                break
            invalid_run = 0 if result["valid"] else invalid_run + 1
            if invalid_run >= MAX_CONSECUTIVE_INVALID:
                rec.status = "terminated"
                break
    except (TransportFailure, GymError) as exc:
        rec.status = "errored"
        rec.error = f"{type(exc).__name__}: {exc}"
    rec.wall_time = time.perf_counter() - start
    return rec


class Checkpoint:
    """Append-only JSONL of EpisodeRecords keyed by (model, game, seed).

    Without ``resume`` the records of ``fresh_model`` are dropped (other
    models sharing the file are kept).  Unparsable or truncated lines are
    always discarded.
    """

    def __init__(self, path: str | Path, resume: bool, fresh_model: str | None = None) -> None:
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.records: dict[tuple, EpisodeRecord] = {}
        self._lock = threading.Lock()
        good = []
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines(keepends=True):
                try:
                    if not line.endswith("\n"):
                        raise ValueError("truncated line")
                    rec = EpisodeRecord.from_dict(json.loads(line))
                except (ValueError, TypeError):
                    continue
                if not resume and rec.model == fresh_model:
                    continue
                if rec.key not in self.records:
                    self.records[rec.key] = rec
                    good.append(line)
        # rewrite so later appends start on a clean line
        self.path.write_text("".join(good), encoding="utf-8")

    def __contains__(self, key) -> bool:
        return key in self.records

    def append(self, rec: EpisodeRecord) -> None:
        line = json.dumps(rec.to_dict(), sort_keys=True, ensure_ascii=False) + "\n"
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line)
            self.records[rec.key] = rec


@dataclass
class CampaignResult:
    matrix: ScoreMatrix
    records: list[EpisodeRecord]
    failures: list[dict]


def game_scores(records: Iterable[EpisodeRecord]) -> dict[tuple[str, str], float]:
    """Mean episode score per (model, game), errored episodes excluded."""
    buckets: dict[tuple[str, str], list[float]] = {}
    for r in records:
        if r.status == "errored":
            continue
        rule = get_game(r.game).score_rule
        buckets.setdefault((r.model, r.game), []).append(episode_score(rule, r))
    return {k: math.fsum(v) / len(v) for k, v in buckets.items()}


def _write_outputs(out: Path, records: list[EpisodeRecord], games: Sequence[str], model: str) -> tuple[ScoreMatrix, list[dict]]:
    scores = game_scores(records)
    models = sorted({m for m, _ in scores})
    all_games = [g for g in dict.fromkeys([*games, *sorted({g for _, g in scores})])]
    with open(out / "scores.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", *all_games])
        for m in models:
            w.writerow([m, *(repr(scores[(m, g)]) if (m, g) in scores else "" for g in all_games)])
    write_dims_csv(dimension_map(), all_games, out / "dims.csv")

    with open(out / "lengths.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", "game", "seed", "length", "score"])
        for r in records:
            if r.status != "errored" and r.response_lengths:
                mean_len = math.fsum(r.response_lengths) / len(r.response_lengths)
                w.writerow([r.model, r.game, r.seed, repr(mean_len), repr(r.raw_score)])

    failures = [{"model": r.model, "game": r.game, "seed": r.seed, "error": r.error} for r in records if r.status == "errored"]
    (out / "failures.json").write_text(json.dumps(failures, indent=2, sort_keys=True) + "\n")

    row_games = [g for g in games if (model, g) in scores]
    raw = [[scores[(model, g)] for g in row_games]]
    matrix = ScoreMatrix([model], row_games, raw, {g: dimension_map()[g] for g in row_games})
    return matrix, failures


def run_campaign(config: CampaignConfig, client: EnvClient, agent: Agent) -> CampaignResult:
    """Run every (game, seed) episode not already in the checkpoint, then write summaries."""
    config.validate()
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    ckpt = Checkpoint(out / CHECKPOINT, config.resume, config.model)
    games = [get_game(g).name for g in config.games]
    todo = [(g, s) for g in games for s in config.seeds_for(g) if (config.model, g, s) not in ckpt]

    def job(item):
        g, s = item
        rec = run_episode(client, agent, g, s, config.model, config.rounds_for(g), config.difficulty.get(g), config.paradigm_ban)
        ckpt.append(rec)
        return rec

    if config.concurrency == 1:
        for item in todo:
            job(item)
    else:
        with ThreadPoolExecutor(max_workers=config.concurrency) as pool:
            for fut in [pool.submit(job, item) for item in todo]:
                fut.result()

    records = sorted(ckpt.records.values(), key=lambda r: (r.model, games.index(r.game) if r.game in games else len(games), r.game, r.seed))
    matrix, failures = _write_outputs(out, records, games, config.model)
    return CampaignResult(matrix, [r for r in records if r.model == config.model], failures)


def summarize(records: Iterable[EpisodeRecord]) -> dict[str, Any]:
    recs = list(records)
    return {
        "episodes": len(recs),
        "errored": sum(r.status == "errored" for r in recs),
        "terminated": sum(r.status == "terminated" for r in recs),
    }
