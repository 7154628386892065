"""Operator CLI: ingest corpora, synthesize data, run experiments, serve the
labeling API, and render reports.

Exit codes: 0 success, 1 data errors, 2 usage/config errors.
"""

import dataclasses
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import click
import yaml

from . import __version__
from .corpus import SyntheticSpec, generate_synthetic, load_jsonl, save_jsonl
from .errors import CorpusError, EvalError, KeyselError
from .eval import (
    ExperimentConfig,
    default_jobs,
    load_oracle_file,
    read_records_csv,
    run_experiment,
    save_oracle_file,
    summarize,
    write_records_csv,
    write_summary_json,
)
from .selection import METHOD_NAMES, Method

_METHOD_PARAM_NAMES = {f.name for f in dataclasses.fields(Method)} - {"name"}


@dataclass
class CliContext:
    data_dir: Path


@click.group(name="keysel")
@click.version_option(version=__version__)
@click.option("--data-dir", envvar="KEYSEL_DATA_DIR", default="keysel-data",
              type=click.Path(file_okay=False), show_default=True,
              help="Directory for registered corpora and session logs.")
@click.option("--log-level", default="warning", show_default=True,
              type=click.Choice(["debug", "info", "warning", "error"], case_sensitive=False))
@click.pass_context
def main(ctx, data_dir, log_level):
    logging.basicConfig(level=getattr(logging, log_level.upper()),
                        format="%(asctime)s %(levelname)s %(name)s %(message)s")
    ctx.obj = CliContext(data_dir=Path(data_dir))


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--corpus-id", default=None, help="Registry id (default: file stem).")
@click.option("--strict/--lenient", default=False, show_default=True,
              help="Abort on the first malformed line instead of skipping.")
@click.pass_obj
def ingest(obj, path, corpus_id, strict):
    """Load a JSONL corpus and register it under the data directory."""
    corpus_id = corpus_id or Path(path).stem
    try:
        result = load_jsonl(path, strict=strict)
    except (CorpusError, OSError) as exc:
        raise click.ClickException(str(exc))
    dest = obj.data_dir / "corpora" / f"{corpus_id}.jsonl"
    dest.parent.mkdir(parents=True, exist_ok=True)
    save_jsonl(result.corpus, dest)
    corpus = result.corpus
    click.echo(f"registered corpus {corpus_id!r} at {dest}")
    click.echo(f"tweets: {len(corpus.tweets)}")
    click.echo(f"users: {len(corpus.user_ids())}")
    click.echo(f"hashtags: {len(corpus.vocabulary())}")
    click.echo(f"skipped lines: {result.skipped}")
    click.echo(f"duplicate ids dropped: {result.duplicates}")
    for err in result.errors:
        logging.getLogger("keyselect.ingest").warning("%s: %s", path, err)


@main.command()
@click.option("--topics", default=2, show_default=True, type=int)
@click.option("--hashtags-per-topic", default=15, show_default=True, type=int)
@click.option("--background", default=20, show_default=True, type=int)
@click.option("--users", default=200, show_default=True, type=int)
@click.option("--tweets-per-user", default=1.0, show_default=True, type=float)
@click.option("--days", default=10, show_default=True, type=int)
@click.option("--homophily", default=0.9, show_default=True, type=float)
@click.option("--hashtags-per-tweet", default=2, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--corpus-id", default="synthetic", show_default=True)
def synth(topics, hashtags_per_topic, background, users, tweets_per_user, days,
          homophily, hashtags_per_tweet, seed, out, corpus_id):
    """Generate a planted-topic corpus and its oracle keyword files."""
    try:
        spec = SyntheticSpec(
            num_topics=topics,
            hashtags_per_topic=hashtags_per_topic,
            background_hashtags=background,
            num_users=users,
            tweets_per_user_per_day=tweets_per_user,
            num_days=days,
            homophily=homophily,
            hashtags_per_tweet=hashtags_per_tweet,
            rng_seed=seed,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    corpus, oracles = generate_synthetic(spec)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    corpus_path = out_dir / f"{corpus_id}.jsonl"
    save_jsonl(corpus, corpus_path)
    click.echo(f"corpus: {corpus_path} ({len(corpus.tweets)} tweets)")
    for oracle in oracles:
        oracle_path = out_dir / f"{corpus_id}.{oracle.topic_name}.oracle.txt"
        save_oracle_file(oracle, oracle_path)
        click.echo(f"oracle: {oracle_path} ({len(oracle.keywords)} keywords)")


_RUN_CONFIG_KEYS = {
    "corpus", "oracle", "methods", "budgets", "days", "seed_count",
    "replicates", "replicate_seeds", "daily_oracle_filter", "method_params",
    "output_dir", "jobs",
}


def validate_run_config(cfg) -> list[str]:
    """Collect every schema violation in the run config; empty list = valid."""
    problems = []
    if not isinstance(cfg, dict):
        return ["config must be a mapping"]
    for key in sorted(set(cfg) - _RUN_CONFIG_KEYS):
        problems.append(f"unknown key {key!r}")
    for key in ("corpus", "oracle", "output_dir"):
        if key not in cfg:
            problems.append(f"missing required key {key!r}")
        elif not isinstance(cfg[key], str):
            problems.append(f"{key} must be a string path")
    methods = cfg.get("methods")
    if not isinstance(methods, list) or not methods:
        problems.append("methods must be a non-empty list")
    else:
        for m in methods:
            if m not in METHOD_NAMES:
                problems.append(f"unknown method {m!r} (choose from {', '.join(METHOD_NAMES)})")
    budgets = cfg.get("budgets")
    if not isinstance(budgets, list) or not budgets:
        problems.append("budgets must be a non-empty list")
    elif not all(isinstance(b, int) and b >= 1 for b in budgets):
        problems.append("budgets must be positive integers")
    if "days" in cfg:
        days = cfg["days"]
        if (not isinstance(days, list) or len(days) != 2
                or not all(isinstance(d, int) for d in days) or days[0] > days[1]):
            problems.append("days must be [first_day, last_day] with first <= last")
    if "seed_count" in cfg and not (isinstance(cfg["seed_count"], int) and cfg["seed_count"] >= 1):
        problems.append("seed_count must be a positive integer")
    if "replicates" in cfg and "replicate_seeds" in cfg:
        problems.append("give replicates or replicate_seeds, not both")
    if "replicates" in cfg and not (isinstance(cfg["replicates"], int) and cfg["replicates"] >= 1):
        problems.append("replicates must be a positive integer")
    if "replicate_seeds" in cfg:
        seeds = cfg["replicate_seeds"]
        if not isinstance(seeds, list) or not seeds or not all(isinstance(s, int) for s in seeds):
            problems.append("replicate_seeds must be a non-empty list of integers")
    if "daily_oracle_filter" in cfg and not isinstance(cfg["daily_oracle_filter"], bool):
        problems.append("daily_oracle_filter must be a boolean")
    if "jobs" in cfg and not (isinstance(cfg["jobs"], int) and cfg["jobs"] >= 1):
        problems.append("jobs must be a positive integer")
    params = cfg.get("method_params", {})
    if not isinstance(params, dict):
        problems.append("method_params must be a mapping of method name to parameters")
    else:
        for name, overrides in sorted(params.items()):
            if name not in METHOD_NAMES:
                problems.append(f"method_params for unknown method {name!r}")
                continue
            if not isinstance(overrides, dict):
                problems.append(f"method_params.{name} must be a mapping")
                continue
            for p in sorted(set(overrides) - _METHOD_PARAM_NAMES):
                problems.append(f"method_params.{name}: unknown parameter {p!r}")
    return problems


@main.command()
@click.argument("config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--jobs", type=int, default=None,
              help="Parallel experiment cells (default: config value or CPU count).")
@click.option("--out", "out_override", type=click.Path(file_okay=False), default=None,
              help="Override the config's output_dir.")
def run(config_path, jobs, out_override):
    """Run the experiment grid described by a YAML config file."""
    try:
        with open(config_path, encoding="utf-8") as fh:
            cfg = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise click.UsageError(f"{config_path}: invalid YAML: {exc}")

    problems = validate_run_config(cfg)
    if problems:
        for p in problems:
            click.echo(f"config error: {p}", err=True)
        sys.exit(2)

    base = Path(config_path).parent

    def resolve(p):
        p = Path(p)
        return p if p.is_absolute() else base / p

    corpus_path = resolve(cfg["corpus"])
    oracle_path = resolve(cfg["oracle"])
    try:
        corpus = load_jsonl(corpus_path).corpus
        oracle = load_oracle_file(oracle_path)
    except (CorpusError, EvalError, OSError) as exc:
        raise click.ClickException(str(exc))

    params = cfg.get("method_params", {})
    methods = tuple(Method(name=m, **params.get(m, {})) for m in cfg["methods"])
    if "replicate_seeds" in cfg:
        replicate_seeds = tuple(cfg["replicate_seeds"])
    else:
        replicate_seeds = tuple(range(cfg.get("replicates", 1)))
    days = cfg.get("days")
    try:
        config = ExperimentConfig(
            corpus=corpus,
            oracle=oracle,
            methods=methods,
            budgets=tuple(cfg["budgets"]),
            day_lo=days[0] if days else None,
            day_hi=days[1] if days else None,
            seed_count=cfg.get("seed_count", 10),
            replicate_seeds=replicate_seeds,
            daily_oracle_filter=cfg.get("daily_oracle_filter", False),
        )
        records = run_experiment(config, jobs=jobs or cfg.get("jobs") or default_jobs())
    except (ValueError, KeyselError) as exc:
        raise click.ClickException(str(exc))

    out_dir = Path(out_override) if out_override else resolve(cfg["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "results.csv"
    summary_path = out_dir / "summary.json"
    write_records_csv(records, csv_path)
    write_summary_json(records, summary_path)
    click.echo(f"results: {csv_path} ({len(records)} records)")
    click.echo(f"summary: {summary_path}")


@main.command()
@click.argument("results_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--json-out", type=click.Path(dir_okay=False), default=None)
def report(results_csv, json_out):
    """Aggregate a results CSV into final-recall tables and per-day series."""
    try:
        records = read_records_csv(results_csv)
    except EvalError as exc:
        raise click.ClickException(str(exc))
    if not records:
        raise click.ClickException("no data")

    summary = summarize(records)
    click.echo(f"{'method':<20}{'budget':>7}  {'final recall':>16}  {'precision':>16}  "
               f"{'tweet_cov':>16}  {'user_cov':>16}  {'n':>3}")
    for c in summary["configurations"]:
        cells = "  ".join(
            f"{c[k]['mean']:.4f} +/- {c[k]['sd']:.4f}"
            for k in ("recall", "precision", "tweet_coverage", "user_coverage")
        )
        click.echo(f"{c['method']:<20}{c['budget']:>7}  {cells}  {c['replicates']:>3}")

    series = {}
    for r in records:
        series.setdefault((r.method, r.budget, r.day), []).append(r.recall)
    series_rows = [
        {"method": m, "budget": b, "day": d, "recall_mean": sum(v) / len(v)}
        for (m, b, d), v in sorted(series.items())
    ]
    click.echo("\nrecall by day:")
    for (method, budget) in sorted({(r["method"], r["budget"]) for r in series_rows}):
        days = [r for r in series_rows if r["method"] == method and r["budget"] == budget]
        path = " ".join(f"{r['day']}:{r['recall_mean']:.3f}" for r in days)
        click.echo(f"{method} b={budget}: {path}")

    if json_out:
        payload = {"final": summary["configurations"], "series": series_rows}
        with open(json_out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        click.echo(f"\njson report: {json_out}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--strict", is_flag=True,
              help="Require labels to target the current top suggestion.")
@click.option("--frontend", type=click.Path(file_okay=False), default=None,
              help="Directory of built UI assets to serve under /ui.")
@click.pass_obj
def serve(obj, host, port, strict, frontend):
    """Start the HTTP labeling service."""
    import uvicorn

    from .service import create_app

    if frontend is None:
        default_front = Path("frontend") / "dist"
        frontend = default_front if default_front.is_dir() else None
    app = create_app(obj.data_dir, strict=strict, frontend_dir=frontend)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
