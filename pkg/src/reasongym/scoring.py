"""Episode scoring rules and capability-dimension aggregation.

The aggregation runs per game column: columns whose best raw score exceeds
1 are compressed with ln(1 + x), every column is then min-max normalised
(constant columns map to 0.5), and the normalised scores are averaged within
each capability dimension.  The overall figure is the unweighted mean of the
dimension means.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .core import DIMENSIONS, SCORE_RULES, get_game

TIE_SCORE = 0.5


class ScoringError(ValueError):
    pass


class ConfigurationError(ScoringError):
    pass


class DataError(ScoringError):
    pass


def episode_score(rule: str, episode) -> float:
    """Final score of a finished episode under ``rule``.

    ``episode`` needs ``game``, ``raw_score`` and ``status`` attributes (an
    ``EpisodeRecord`` works).
    """
    if rule not in SCORE_RULES:
        raise ConfigurationError(f"unknown score rule {rule!r}")
    expected = get_game(episode.game).score_rule
    if expected != rule:
        raise ConfigurationError(f"{episode.game} is scored by the {expected} rule, not {rule}")
    if getattr(episode, "status", "finished") == "errored":
        raise DataError("errored episodes have no score")
    x = float(episode.raw_score)
    if rule == "binary" and x not in (0.0, 1.0):
        raise DataError(f"binary score must be 0 or 1, got {x}")
    if rule == "proportional" and not 0.0 <= x <= 1.0 + 1e-12:
        raise DataError(f"proportional score must lie in [0, 1], got {x}")
    if rule == "cumulative" and x < 0:
        raise DataError(f"cumulative score must be >= 0, got {x}")
    return x


@dataclass
class ScoreMatrix:
    """Raw scores, one row per model and one column per game."""

    models: list[str]
    games: list[str]
    raw: np.ndarray
    dims: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.raw = np.asarray(self.raw, dtype=float)
        if self.raw.shape != (len(self.models), len(self.games)):
            raise DataError(f"raw shape {self.raw.shape} does not match {len(self.models)} models x {len(self.games)} games")
        validate_raw(self.raw)
        missing = [g for g in self.games if g not in self.dims]
        if missing:
            raise ConfigurationError(f"no dimension for game(s): {', '.join(missing)}")
        bad = sorted({d for g, d in self.dims.items() if g in self.games and d not in DIMENSIONS})
        if bad:
            raise ConfigurationError(f"unknown dimension(s): {', '.join(bad)}")

    def column(self, game: str) -> np.ndarray:
        return self.raw[:, self.games.index(game)]


def validate_raw(raw: np.ndarray) -> None:
    if np.isnan(raw).any():
        raise DataError("score matrix has missing (NaN) cells")
    if not np.isfinite(raw).all():
        raise DataError("score matrix has infinite cells")
    if (raw < 0).any():
        raise DataError("raw scores must be >= 0")


def adjust_scores(raw: np.ndarray) -> np.ndarray:
    """ln(1 + x) on every game column whose maximum is strictly above 1."""
    raw = np.asarray(raw, dtype=float)
    validate_raw(raw)
    out = raw.copy()
    compress = raw.max(axis=0) > 1.0
    out[:, compress] = np.log1p(raw[:, compress])
    return out


def minmax_normalize(adjusted: np.ndarray) -> np.ndarray:
    """Per-column min-max scaling to [0, 1]; a constant column becomes 0.5."""
    adjusted = np.asarray(adjusted, dtype=float)
    lo = adjusted.min(axis=0)
    hi = adjusted.max(axis=0)
    out = np.full_like(adjusted, TIE_SCORE)
    spread = hi != lo
    out[:, spread] = (adjusted[:, spread] - lo[spread]) / (hi[spread] - lo[spread])
    return out


@dataclass
class DimensionReport:
    models: list[str]
    dimensions: list[str]
    means: np.ndarray  # models x dimensions
    overall: np.ndarray  # one entry per model

    def row(self, model: str) -> dict[str, float]:
        i = self.models.index(model)
        out = {d: float(self.means[i, j]) for j, d in enumerate(self.dimensions)}
        out["Avg"] = float(self.overall[i])
        return out

    def to_csv(self, path: str | Path, percent: bool = False) -> None:
        scale = 100.0 if percent else 1.0
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["model", *self.dimensions, "Avg"])
            for i, m in enumerate(self.models):
                vals = [*self.means[i], self.overall[i]]
                w.writerow([m, *(f"{v * scale:.6f}" for v in vals)])


def dimension_order(dims: Mapping[str, str], games: Sequence[str]) -> list[str]:
    present = {dims[g] for g in games}
    return [d for d in DIMENSIONS if d in present]


def dimension_mean(normalized: np.ndarray, games: Sequence[str], dims: Mapping[str, str], models: Sequence[str]) -> DimensionReport:
    normalized = np.asarray(normalized, dtype=float)
    order = dimension_order(dims, games)
    if not order:
        raise ConfigurationError("no dimensions to aggregate")
    cols = []
    for d in order:
        idx = [k for k, g in enumerate(games) if dims[g] == d]
        if not idx:
            raise ConfigurationError(f"dimension {d} has no games")
        cols.append(normalized[:, idx].mean(axis=1))
    means = np.column_stack(cols)
    overall = np.array([overall_average(row) for row in means])
    return DimensionReport(list(models), order, means, overall)


def overall_average(dimension_means: Sequence[float]) -> float:
    """Unweighted mean of a model's dimension means."""
    values = [float(v) for v in dimension_means]
    if not values:
        raise ConfigurationError("no dimension means")
    return math.fsum(values) / len(values)


def aggregate(matrix: ScoreMatrix) -> DimensionReport:
    normalized = minmax_normalize(adjust_scores(matrix.raw))
    return dimension_mean(normalized, matrix.games, matrix.dims, matrix.models)


def read_dims_csv(path: str | Path) -> dict[str, str]:
    """``game,dimension`` rows; a header row is optional."""
    dims: dict[str, str] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2:
                raise DataError(f"dimension map rows need 2 fields, got {row}")
            game, dim = row[0].strip(), row[1].strip()
            if (game, dim) == ("game", "dimension"):
                continue
            if game in dims and dims[game] != dim:
                raise ConfigurationError(f"game {game} mapped to two dimensions")
            dims[game] = dim
    return dims


def read_score_matrix(scores_path: str | Path, dims_path: str | Path | None = None) -> ScoreMatrix:
    """Read ``model,<game>,...`` CSV plus a dimension map (defaults to the registry)."""
    with open(scores_path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and "".join(r).strip()]
    if not rows or rows[0][0].strip() != "model":
        raise DataError("score CSV must start with a `model,<game>,...` header")
    games = [g.strip() for g in rows[0][1:]]
    if len(set(games)) != len(games):
        raise DataError("duplicate game columns")
    models, values = [], []
    for r in rows[1:]:
        if len(r) != len(games) + 1:
            raise DataError(f"row for {r[0]!r} has {len(r) - 1} scores, expected {len(games)}")
        models.append(r[0].strip())
        try:
            values.append([float(v) if v.strip() else math.nan for v in r[1:]])
        except ValueError as exc:
            raise DataError(f"non-numeric score in row {r[0]!r}: {exc}") from None
    raw = np.array(values, dtype=float).reshape(len(models), len(games))
    if np.isnan(raw).any():
        i, j = map(int, np.argwhere(np.isnan(raw))[0])
        raise DataError(f"missing score for model {models[i]!r}, game {games[j]!r}")
    if dims_path is None:
        from .core import dimension_map

        dims = dimension_map()
    else:
        dims = read_dims_csv(dims_path)
    return ScoreMatrix(models, games, raw, dims)


def write_score_csv(matrix: ScoreMatrix, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", *matrix.games])
        for m, row in zip(matrix.models, matrix.raw):
            w.writerow([m, *(repr(float(v)) for v in row)])


def write_dims_csv(dims: Mapping[str, str], games: Sequence[str], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["game", "dimension"])
        for g in games:
            w.writerow([g, dims[g]])
