"""Command-line surface: index building, batch runs, evaluation, tuning, and
the HTTP session service."""
import json
import sys

import click

from . import evaluation
from .index import Bm25Params, CorpusError, InvertedIndex, build_index, read_jsonl
from .pipeline import PipelineConfig, TopicError, load_topics, run_topics
from .tuner import SearchSpace, TuningError, greedy_tune


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_config(path: str | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        return PipelineConfig.from_file(path)
    except (OSError, ValueError, TypeError) as exc:
        _fail(f"bad config {path}: {exc}")


@click.group()
def cli():
    """Conversational passage search: index, run, eval, tune, serve."""


@cli.command("index")
@click.argument("jsonl_path", type=click.Path())
@click.option("-o", "--output", "output_path", required=True, help="Index output path.")
def index_cmd(jsonl_path, output_path):
    """Build an inverted index from a jsonl collection."""
    try:
        index = build_index(read_jsonl(jsonl_path))
    except (OSError, CorpusError) as exc:
        _fail(str(exc))
    index.save(output_path)
    click.echo(f"indexed {index.doc_count} docs, avg length {index.avg_doc_len:.2f} -> {output_path}")


@cli.command("run")
@click.option("--index", "index_path", required=True, type=click.Path())
@click.option("--topics", "topics_path", required=True, type=click.Path())
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("-o", "--output", "output_path", required=True, help="TREC run file output path.")
@click.option("--explain", is_flag=True, help="Dump per-turn expansion provenance as json lines.")
def run_cmd(index_path, topics_path, config_path, output_path, explain):
    """Run the retrieval pipeline over a topic file, writing a TREC run."""
    cfg = _load_config(config_path)
    try:
        index = InvertedIndex.load(index_path)
        topics = load_topics(topics_path)
        entries, results = run_topics(topics, cfg, index)
    except (OSError, CorpusError, TopicError) as exc:
        _fail(str(exc))
    evaluation.write_run(entries, output_path)
    if explain:
        for result in results:
            click.echo(
                json.dumps(
                    {
                        "turn_id": result.turn_id,
                        "rewritten": result.rewritten,
                        "expansion": result.expanded.to_debug_json(),
                        "fallbacks": result.diagnostics["fallbacks"],
                    }
                )
            )
    click.echo(f"wrote {len(entries)} run entries for {len(results)} turns -> {output_path}", err=True)


@cli.command("eval")
@click.option("--run", "run_path", required=True, type=click.Path())
@click.option("--qrels", "qrels_path", required=True, type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Print the report as json instead of a table.")
def eval_cmd(run_path, qrels_path, as_json):
    """Score a TREC run file against qrels."""
    try:
        run = evaluation.read_run(run_path)
        qrels = evaluation.read_qrels(qrels_path)
        report = evaluation.evaluate_run(run, qrels)
    except (OSError, evaluation.RunFormatError) as exc:
        _fail(str(exc))
    if as_json:
        click.echo(json.dumps(report.to_json(), sort_keys=True))
    else:
        click.echo(report.to_table())


@cli.command("tune")
@click.option("--index", "index_path", required=True, type=click.Path())
@click.option("--topics", "topics_path", required=True, type=click.Path())
@click.option("--qrels", "qrels_path", required=True, type=click.Path())
@click.option("--space", "space_path", required=True, type=click.Path(),
              help='JSON file {"q_s": [...], "q_t": [...], "theta": [...]}; "inf" allowed.')
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--metric", default="ndcg@3", show_default=True)
@click.option("--phase3", type=click.Choice(["qt", "qs"]), default="qt", show_default=True,
              help="Which cutoff the final phase line-searches.")
@click.option("--trace-out", "trace_path", default=None, type=click.Path())
def tune_cmd(index_path, topics_path, qrels_path, space_path, config_path, metric, phase3, trace_path):
    """Greedy line search over the HQE cutoffs on a training topic set."""
    cfg = _load_config(config_path)
    try:
        index = InvertedIndex.load(index_path)
        topics = load_topics(topics_path)
        qrels = evaluation.read_qrels(qrels_path)
        with open(space_path, encoding="utf-8") as fh:
            raw_space = json.load(fh)
        space = SearchSpace(
            q_s=[float(v) for v in raw_space["q_s"]],
            q_t=[float(v) for v in raw_space["q_t"]],
            theta=[float(v) for v in raw_space["theta"]],
        )
        tuned, trace = greedy_tune(topics, qrels, space, cfg, index, metric=metric, phase3=phase3)
    except (OSError, CorpusError, TopicError, TuningError, evaluation.RunFormatError,
            KeyError, ValueError, json.JSONDecodeError) as exc:
        _fail(str(exc))
    click.echo(f"{'phase':>5} {'param':>6} {'value':>8} {'score':>8}")
    for entry in trace:
        click.echo(f"{entry.phase:>5} {entry.param:>6} {entry.value:>8g} {entry.score:>8.4f}")
    click.echo(json.dumps({
        "tuned": {"q_s": _num(tuned.q_s), "q_t": _num(tuned.q_t), "theta": _num(tuned.theta)},
        "metric": metric,
    }))
    if trace_path:
        with open(trace_path, "w", encoding="utf-8") as fh:
            json.dump([entry.to_json() for entry in trace], fh, indent=2)


def _num(value: float):
    import math

    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


@cli.command("serve")
@click.option("--index", "index_path", required=True, type=click.Path())
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--port", default=8000, show_default=True, envvar="CONVSEARCH_PORT")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve_cmd(index_path, config_path, port, host):
    """Serve the HTTP session API (consumed by the chat UI)."""
    import uvicorn

    from .service import create_app

    cfg = _load_config(config_path)
    try:
        index = InvertedIndex.load(index_path)
    except (OSError, CorpusError) as exc:
        _fail(str(exc))
    uvicorn.run(create_app(index, cfg), host=host, port=port, log_level="info")


def main():
    cli()


if __name__ == "__main__":
    main()
