"""Command line: serve the environment, run evaluations, analyse score tables."""

from __future__ import annotations

import json
import sys

import click

from . import analysis, oracles
from .core import Environment, GymError, game_names, get_game, new_state
from .scoring import ScoringError, adjust_scores, minmax_normalize, read_score_matrix


def parse_seeds(text: str) -> list[int]:
    """``1..50``, ``3``, or a comma list mixing both."""
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


def parse_kv(pairs: tuple[str, ...]) -> dict[str, int]:
    out = {}
    for p in pairs:
        k, _, v = p.partition("=")
        if not _:
            raise click.BadParameter(f"expected key=value, got {p!r}")
        out[k.strip()] = int(v)
    return out


def _games(text: str) -> list[str]:
    if text.strip() == "all":
        return game_names()
    return [g.strip() for g in text.split(",") if g.strip()]


@click.group()
@click.version_option(package_name="reasongym")
def main() -> None:
    """Seeded text-game environments for reasoning evaluation."""


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--max-sessions", type=int, default=None, help="Refuse new sessions beyond this many.")
@click.option("--idle-timeout", type=float, default=3600.0, show_default=True, help="Seconds before an idle session is dropped.")
@click.option("--log-dir", type=click.Path(file_okay=False), default=None, help="Where requests.jsonl goes by default.")
@click.option("--max-action-bytes", type=int, default=64 * 1024, show_default=True)
def serve(port, host, max_sessions, idle_timeout, log_dir, max_action_bytes):
    """Run the HTTP service (POST /generate, /print_board, /verify)."""
    import uvicorn

    from .service import create_app

    app = create_app(Environment(max_sessions=max_sessions, idle_timeout=idle_timeout), log_dir, max_action_bytes)
    uvicorn.run(app, host=host, port=port)


@main.command("games")
def list_games():
    """List games with their dimension, episode mode and parameters."""
    for name in game_names():
        g = get_game(name)
        params = ", ".join(f"{p.name}={p.default} [{p.lo}..{p.hi}]" for p in g.params) or "-"
        click.echo(f"{name:20s} {g.dimension:4s} {g.epoch_mode:6s} {g.score_rule:12s} {params}")


@main.command("eval")
@click.option("--games", "games_", default="all", show_default=True, help="Comma list of games or `all`.")
@click.option("--model", default=None, help="Model name sent to the endpoint and used as the row label.")
@click.option("--base-url", default=None, help="Chat-completions base URL (…/v1).")
@click.option("--api-key-env", default="OPENAI_API_KEY", show_default=True)
@click.option("--seeds", default="1..50", show_default=True)
@click.option("--max-rounds", type=int, default=100, show_default=True)
@click.option("--single-episodes", type=int, default=50, show_default=True)
@click.option("--multi-episodes", type=int, default=20, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--resume", is_flag=True, help="Skip episodes already in the checkpoint.")
@click.option("--ban", default="", help="Comma list from code,math,algorithm,natural-language.")
@click.option("--service", default=None, help="URL of a running service; default runs in-process.")
@click.option("--agent", "agent_kind", type=click.Choice(["chat", "oracle", "random"]), default="chat", show_default=True)
@click.option("--concurrency", type=int, default=1, show_default=True)
@click.option("--timeout", type=float, default=120.0, show_default=True, help="Per model call, seconds.")
def eval_cmd(games_, model, base_url, api_key_env, seeds, max_rounds, single_episodes, multi_episodes,
             out_dir, resume, ban, service, agent_kind, concurrency, timeout):
    """Run an evaluation campaign and write checkpoint.jsonl, scores.csv and friends."""
    from .harness import (
        CampaignConfig, ChatAgent, HttpEnvClient, LocalEnvClient, ModelEndpoint, OracleAgent, RandomAgent, run_campaign,
    )

    if agent_kind == "chat":
        if not (model and base_url):
            raise click.UsageError("--model and --base-url are required with --agent chat")
        agent = ChatAgent(ModelEndpoint(base_url, model, api_key_env, timeout))
    elif agent_kind == "oracle":
        agent = OracleAgent()
    else:
        agent = RandomAgent()
    config = CampaignConfig(
        games=_games(games_), model=model or agent.name, output_dir=out_dir, seeds=parse_seeds(seeds),
        single_episodes=single_episodes, multi_episodes=multi_episodes, max_rounds=max_rounds,
        concurrency=concurrency, resume=resume,
        paradigm_ban=frozenset(b.strip() for b in ban.split(",") if b.strip()),
    )
    client = HttpEnvClient(service) if service else LocalEnvClient(Environment(idle_timeout=None))
    try:
        result = run_campaign(config, client, agent)
    except (GymError, ScoringError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    for g, v in zip(result.matrix.games, result.matrix.raw[0]):
        click.echo(f"{g:20s} {v:.4f}")
    if result.failures:
        click.echo(f"{len(result.failures)} episode(s) errored; see failures.json", err=True)


@main.command()
@click.argument("kind", type=click.Choice(["leaderboard", "stability", "pca", "lengthfit"]))
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--dims", "dims_path", default=None, type=click.Path(exists=True, dir_okay=False),
              help="game,dimension CSV; defaults to the built-in grouping.")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def analyze(kind, in_path, dims_path, out_dir):
    """Leaderboard, stability, PCA or length-fit analysis of a score table."""
    try:
        if kind == "lengthfit":
            pairs = analysis.read_length_pairs(in_path)
            fit = analysis.length_score_fit(pairs)
            paths = analysis.write_lengthfit(fit, pairs, out_dir)
            click.echo(f"score = {fit.a:.6f} * ln(length) + {fit.b:.6f}   r = {fit.pearson_r:.4f}")
        else:
            matrix = read_score_matrix(in_path, dims_path)
            if kind == "leaderboard":
                report = analysis.compute_leaderboard(matrix)
                paths = analysis.write_leaderboard(report, out_dir)
                click.echo(" ".join(f"{h:>8s}" for h in ["", *report.dimensions, "Avg"]))
                for i, m in enumerate(report.models):
                    click.echo(" ".join([f"{m[:8]:>8s}", *(f"{v:8.3f}" for v in [*report.means[i], report.overall[i]])]))
            elif kind == "stability":
                stats = analysis.stability_stats(analysis.compute_leaderboard(matrix))
                paths = analysis.write_stability(stats, out_dir)
                for m, (mu, sd) in stats.items():
                    click.echo(f"{m}: mean {mu:.4f} std {sd:.4f}")
            else:
                result = analysis.pca_top2(minmax_normalize(adjust_scores(matrix.raw)))
                paths = analysis.write_pca(result, matrix.models, matrix.games, out_dir)
                ev = result.explained_variance
                click.echo(f"PC1 {ev[0]:.4f}  PC2 {ev[1]:.4f}  total {ev.sum():.4f}")
    except (ScoringError, analysis.AnalysisError) as exc:
        raise click.ClickException(str(exc)) from exc
    for p in paths:
        click.echo(f"wrote {p}")


@main.group()
def oracle():
    """Reference solvers."""


@oracle.command("solve")
@click.option("--game", required=True)
@click.option("--seed", type=int, required=True)
@click.option("--param", "params", multiple=True, help="Difficulty override, key=value.")
@click.option("--json", "as_json", is_flag=True)
def oracle_solve(game, seed, params, as_json):
    """Print the oracle answer for one instance."""
    try:
        state = new_state(game, seed, parse_kv(params))
        sol = oracles.solve(state)
    except (GymError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    if as_json:
        click.echo(json.dumps({"game": state.game, "seed": seed, "answer": sol.actions, "optimal": sol.optimal}))
    else:
        click.echo(sol.as_answer())


@main.command()
@click.option("--game", required=True)
@click.option("--seed", type=int, required=True)
@click.option("--param", "params", multiple=True, help="Difficulty override, key=value.")
def show(game, seed, params):
    """Print the first prompt of an instance."""
    from .core import observe

    try:
        click.echo(observe(new_state(game, seed, parse_kv(params))).prompt_text)
    except GymError as exc:
        raise click.ClickException(str(exc)) from exc


if __name__ == "__main__":
    sys.exit(main())
