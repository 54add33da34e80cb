"""Leaderboard assembly, stability statistics, PCA and response-length fits."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .rng import RngStream
from .scoring import DimensionReport, ScoreMatrix, aggregate

PCA_TOL = 1e-12
PCA_MAX_ITER = 10_000
_PCA_START_SEED = 0x9E3779B9


class AnalysisError(ValueError):
    pass


class DegenerateInputError(AnalysisError):
    pass


class FitError(AnalysisError):
    pass


def compute_leaderboard(matrix: ScoreMatrix) -> DimensionReport:
    return aggregate(matrix)


def stability_stats(report: DimensionReport) -> dict[str, tuple[float, float]]:
    """Per model: mean and population standard deviation of its dimension means."""
    if len(report.dimensions) < 2:
        raise AnalysisError("stability needs at least two dimensions")
    out = {}
    for model, row in zip(report.models, report.means):
        out[model] = (float(np.mean(row)), float(np.std(row)))
    return out


@dataclass
class PcaResult:
    components: np.ndarray  # 2 x games, rows orthonormal
    projections: np.ndarray  # models x 2
    explained_variance: np.ndarray  # two fractions
    eigenvalues: np.ndarray
    iterations: tuple[int, int]


def _sign_fix(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > 1e-15)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def _power_iterate(c: np.ndarray, start: np.ndarray, against: np.ndarray | None) -> tuple[np.ndarray, int]:
    v = start.copy()
    if against is not None:
        v -= (v @ against) * against
    v /= np.linalg.norm(v)
    scale = max(float(np.trace(c)), 1e-300)
    for it in range(1, PCA_MAX_ITER + 1):
        w = c @ v
        if against is not None:
            w -= (w @ against) * against
        norm = np.linalg.norm(w)
        if norm <= 1e-14 * scale:
            # null direction: eigenvalue is zero, any orthogonal unit vector will do
            return v, it
        w /= norm
        if np.linalg.norm(w - v) < PCA_TOL:
            return w, it
        v = w
    return v, PCA_MAX_ITER


def pca_top2(normalized: np.ndarray) -> PcaResult:
    """Top two principal components by power iteration with deflation."""
    x = np.asarray(normalized, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 2:
        raise AnalysisError("PCA needs at least 2 models and 2 games")
    if not np.isfinite(x).all():
        raise AnalysisError("PCA input has non-finite entries")
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / x.shape[0]
    total = float(np.trace(cov))
    if total <= 0.0:
        raise DegenerateInputError("score matrix has zero variance")
    rng = RngStream(_PCA_START_SEED)
    start = np.array([rng.random() + 0.5 for _ in range(x.shape[1])])

    v1, it1 = _power_iterate(cov, start, None)
    lam1 = float(v1 @ cov @ v1)
    deflated = cov - lam1 * np.outer(v1, v1)
    v2, it2 = _power_iterate(deflated, start[::-1].copy(), v1)
    v2 -= (v2 @ v1) * v1
    v2 /= np.linalg.norm(v2)
    lam2 = max(float(v2 @ cov @ v2), 0.0)
    v1, v2 = _sign_fix(v1), _sign_fix(v2)

    comps = np.vstack([v1, v2])
    eig = np.array([lam1, lam2])
    return PcaResult(
        components=comps,
        projections=centered @ comps.T,
        explained_variance=np.clip(eig / total, 0.0, 1.0),
        eigenvalues=eig,
        iterations=(it1, it2),
    )


@dataclass
class LengthFit:
    a: float
    b: float
    pearson_r: float
    n: int

    def predict(self, length: float) -> float:
        return self.a * math.log(length) + self.b


def length_score_fit(pairs: Iterable[tuple[float, float]]) -> LengthFit:
    """Least squares of score on ln(length), with Pearson r on the same axes."""
    data = [(float(l), float(s)) for l, s in pairs]
    if len(data) < 3:
        raise FitError("need at least 3 (length, score) pairs")
    if any(l <= 0 for l, _ in data):
        raise FitError("lengths must be positive")
    x = np.log(np.array([l for l, _ in data]))
    y = np.array([s for _, s in data])
    dx = x - x.mean()
    # constant scores: keep the residuals exactly zero rather than mean rounding noise
    dy = np.zeros_like(y) if np.all(y == y[0]) else y - y.mean()
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise FitError("all lengths are equal")
    sxy = float(dx @ dy)
    syy = float(dy @ dy)
    a = sxy / sxx
    b = float(y.mean() - a * x.mean())
    r = 0.0 if syy == 0.0 else max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))
    return LengthFit(a, b, r, len(data))


def read_length_pairs(path: str | Path) -> list[tuple[float, float]]:
    """``length,score`` CSV as written by the harness (extra columns are ignored)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or not {"length", "score"} <= set(reader.fieldnames):
            raise FitError("length CSV needs `length` and `score` columns")
        return [(float(r["length"]), float(r["score"])) for r in reader]


def _points(labels: Sequence[str], xs, ys) -> list[dict]:
    return [{"label": l, "x": float(x), "y": float(y)} for l, x, y in zip(labels, xs, ys)]


def write_plot_json(path: str | Path, title: str, x_label: str, y_label: str, series: list[dict]) -> None:
    doc = {"title": title, "x_label": x_label, "y_label": y_label, "series": series}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def write_leaderboard(report: DimensionReport, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "leaderboard.csv"
    report.to_csv(csv_path)
    series = [
        {"label": m, "points": [{"label": d, "x": j, "y": float(report.means[i, j])} for j, d in enumerate(report.dimensions)]}
        for i, m in enumerate(report.models)
    ]
    json_path = out / "leaderboard_plot.json"
    write_plot_json(json_path, "Dimension scores", "dimension", "score", series)
    return [csv_path, json_path]


def write_stability(stats: dict[str, tuple[float, float]], out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "stability.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", "mean", "std"])
        for m, (mu, sd) in stats.items():
            w.writerow([m, f"{mu:.6f}", f"{sd:.6f}"])
    labels = list(stats)
    json_path = out / "stability_plot.json"
    write_plot_json(
        json_path, "Mean vs. spread of dimension scores", "mean", "std",
        [{"label": "models", "points": _points(labels, [stats[m][0] for m in labels], [stats[m][1] for m in labels])}],
    )
    return [csv_path, json_path]


def write_pca(result: PcaResult, models: Sequence[str], games: Sequence[str], out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    proj_path = out / "pca_projections.csv"
    with open(proj_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", "pc1", "pc2"])
        for m, (p1, p2) in zip(models, result.projections):
            w.writerow([m, f"{p1:.9f}", f"{p2:.9f}"])
    comp_path = out / "pca_components.csv"
    with open(comp_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["component", "explained_variance", *games])
        for k, (vec, frac) in enumerate(zip(result.components, result.explained_variance), 1):
            w.writerow([f"pc{k}", f"{frac:.9f}", *(f"{v:.9f}" for v in vec)])
    json_path = out / "pca_plot.json"
    p = result.projections
    write_plot_json(
        json_path,
        f"PCA projection ({result.explained_variance[0]:.1%} + {result.explained_variance[1]:.1%} of variance)",
        "pc1", "pc2",
        [{"label": "models", "points": _points(models, p[:, 0], p[:, 1])}],
    )
    return [proj_path, comp_path, json_path]


def write_lengthfit(fit: LengthFit, pairs: Sequence[tuple[float, float]], out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "lengthfit.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["a", "b", "pearson_r", "n"])
        w.writerow([f"{fit.a:.9f}", f"{fit.b:.9f}", f"{fit.pearson_r:.9f}", fit.n])
    lengths = sorted(l for l, _ in pairs)
    grid = np.geomspace(lengths[0], lengths[-1], 50) if lengths[0] != lengths[-1] else np.array(lengths[:1])
    json_path = out / "lengthfit_plot.json"
    write_plot_json(
        json_path,
        "Score vs. response length (whitespace tokens)",
        "length", "score",
        [
            {"label": "episodes", "points": _points([""] * len(pairs), [l for l, _ in pairs], [s for _, s in pairs])},
            {"label": "fit", "points": _points([""] * len(grid), grid, [fit.predict(g) for g in grid])},
        ],
    )
    return [csv_path, json_path]
