"""``ztopics`` command line interface.

Every subcommand is a thin client over the JSON service; by default the
service runs inside this process, so no server needs to be up.  Pass
``--server`` (or set ZTOPICS_SERVER) to send the same requests to a
remote ``ztopics serve`` instead.
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

import click

from .client import ServiceClient
from .errors import ZeroshotTopicsError


@click.group()
@click.option(
    "--server",
    envvar="ZTOPICS_SERVER",
    default="",
    help="Base URL of a running service; empty runs in process.",
)
@click.pass_context
def main(ctx: click.Context, server: str) -> None:
    """Zero-shot multi-label topic inference over pluggable embeddings."""
    ctx.obj = server


def _post(ctx: click.Context, path: str, payload: dict) -> dict:
    with ServiceClient(ctx.obj or "") as client:
        try:
            return client.post(path, payload)
        except ZeroshotTopicsError as exc:
            raise click.ClickException(str(exc)) from exc


def _parse_thetas(raw: str) -> list[float]:
    if not raw:
        return []
    try:
        return [float(piece) for piece in raw.split(",") if piece.strip()]
    except ValueError as exc:
        raise click.ClickException(f"bad --thetas value: {raw!r}") from exc


def _echo_metrics(data: dict) -> None:
    best = data["best"]
    click.echo(f"method:    {data['method']}")
    if data.get("dataset"):
        click.echo(f"dataset:   {data['dataset']}")
    click.echo(f"threshold: {best['threshold']}")
    click.echo(
        f"precision: {best['precision']:.4f}  recall: {best['recall']:.4f}  "
        f"f1: {best['f1']:.4f}  (tp={best['tp']} fp={best['fp']} fn={best['fn']})"
    )
    for name, path in sorted(data["paths"].items()):
        click.echo(f"{name}: {path}")


@main.command()
@click.argument("corpus", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Print raw JSON.")
@click.pass_context
def stats(ctx: click.Context, corpus: str, as_json: bool) -> None:
    """Summarize a corpus file."""
    data = _post(ctx, "/corpus/stats", {"corpus_path": corpus})
    if as_json:
        click.echo(json.dumps(data, indent=2, sort_keys=True))
        return
    click.echo(f"articles:          {data['article_count']}")
    click.echo(f"unique topics:     {data['unique_topics']}")
    click.echo(f"avg tokens:        {data['avg_article_length_tokens']:.2f}")
    click.echo(f"topics/article:    {data['topics_per_article']:.2f}")


@main.command("suggest-keywords")
@click.argument("corpus", type=click.Path())
@click.argument("topic")
@click.option("-k", "--count", default=10, show_default=True)
@click.pass_context
def suggest_keywords_cmd(ctx: click.Context, corpus: str, topic: str, count: int) -> None:
    """Rank candidate keywords for TOPIC from its gold-labeled articles."""
    data = _post(
        ctx, "/topics/suggest", {"corpus_path": corpus, "topic": topic, "k": count}
    )
    for word in data["keywords"]:
        click.echo(word)


@main.command("annotate-explicit")
@click.argument("corpus", type=click.Path())
@click.argument("topics", type=click.Path())
@click.option("--min-keywords", default=3, show_default=True)
@click.option("--topic", default="", help="Restrict to one topic name.")
@click.pass_context
def annotate_explicit_cmd(
    ctx: click.Context, corpus: str, topics: str, min_keywords: int, topic: str
) -> None:
    """List, per topic, the articles that mention it explicitly."""
    data = _post(
        ctx,
        "/topics/explicit",
        {
            "corpus_path": corpus,
            "topics_path": topics,
            "min_keywords": min_keywords,
            "topic": topic,
        },
    )
    for name in sorted(data["matches"]):
        ids = data["matches"][name]
        click.echo(f"{name}: {' '.join(ids) if ids else '(none)'}")


@main.command()
@click.argument("corpus", type=click.Path())
@click.argument("topics", type=click.Path())
@click.option("--out", required=True, type=click.Path(), help="Manifest file to write.")
@click.option("--article-strategy", default="ea", show_default=True)
@click.option("--topic-strategy", default="name_only", show_default=True)
@click.pass_context
def manifest(
    ctx: click.Context,
    corpus: str,
    topics: str,
    out: str,
    article_strategy: str,
    topic_strategy: str,
) -> None:
    """Write the key/text manifest an external encoder must embed."""
    data = _post(
        ctx,
        "/embeddings/manifest",
        {
            "corpus_path": corpus,
            "topics_path": topics,
            "out_path": out,
            "article_strategy": article_strategy,
            "topic_strategy": topic_strategy,
        },
    )
    click.echo(f"wrote {data['entry_count']} entries to {data['path']}")


def _run_options(f):
    options = [
        click.option("--out", "output_dir", required=True, type=click.Path()),
        click.option(
            "--provider",
            default="pseudo",
            show_default=True,
            type=click.Choice(["pseudo", "store", "word_vectors"]),
        ),
        click.option("--article-strategy", default="ea", show_default=True),
        click.option("--topic-strategy", default="name_only", show_default=True),
        click.option("--pseudo-dim", default=64, show_default=True),
        click.option("--store", "store_path", default="", type=click.Path()),
        click.option("--vectors", "vectors_path", default="", type=click.Path()),
        click.option("--explicit-min-keywords", default=3, show_default=True),
        click.option("--dataset", default=""),
        click.option("--jobs", default=1, show_default=True),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _run_payload(corpus: str, topics: str, **kw) -> dict:
    payload = {"corpus_path": corpus, "topics_path": topics}
    payload.update(kw)
    return payload


@main.command()
@click.argument("corpus", type=click.Path())
@click.argument("topics", type=click.Path())
@_run_options
@click.option("--theta", default=0.5, show_default=True)
@click.option(
    "--mode",
    default="threshold",
    show_default=True,
    type=click.Choice(["threshold", "argmax"]),
)
@click.pass_context
def infer(ctx: click.Context, corpus: str, topics: str, theta: float, mode: str, **kw) -> None:
    """Assign topics at one cutoff (or by argmax) and write predictions."""
    data = _post(ctx, "/runs/infer", _run_payload(corpus, topics, theta=theta, mode=mode, **kw))
    _echo_metrics(data)


@main.command()
@click.argument("corpus", type=click.Path())
@click.argument("topics", type=click.Path())
@_run_options
@click.option("--thetas", default="", help="Comma-separated grid; empty = 0.00..1.00 step 0.01.")
@click.pass_context
def sweep(ctx: click.Context, corpus: str, topics: str, thetas: str, **kw) -> None:
    """Sweep the threshold grid and report the best operating point."""
    payload = _run_payload(corpus, topics, thetas=_parse_thetas(thetas), **kw)
    data = _post(ctx, "/runs/sweep", payload)
    _echo_metrics(data)


@main.command()
@click.argument("corpus", type=click.Path())
@click.argument("topics", type=click.Path())
@click.option("--out", "output_dir", required=True, type=click.Path())
@click.option("--lambda-background", default=0.7, show_default=True)
@click.option("--topic-smoothing", default=0.5, show_default=True)
@click.option("--max-iterations", default=200, show_default=True)
@click.option("--tolerance", default=1e-6, show_default=True)
@click.option("--thetas", default="", help="Comma-separated grid; empty = default grid.")
@click.option("--dataset", default="")
@click.option(
    "--variant",
    "variants",
    multiple=True,
    type=click.Choice(["gflm-w", "gflm-s"]),
    help="Repeatable; default runs both.",
)
@click.option("--jobs", default=1, show_default=True)
@click.pass_context
def gflm(
    ctx: click.Context,
    corpus: str,
    topics: str,
    output_dir: str,
    lambda_background: float,
    topic_smoothing: float,
    max_iterations: int,
    tolerance: float,
    thetas: str,
    dataset: str,
    variants: tuple,
    jobs: int,
) -> None:
    """Fit the seeded mixture model and score both assignment rules."""
    payload = {
        "corpus_path": corpus,
        "topics_path": topics,
        "output_dir": output_dir,
        "lambda_background": lambda_background,
        "topic_seed_smoothing": topic_smoothing,
        "max_iterations": max_iterations,
        "rel_ll_tolerance": tolerance,
        "thetas": _parse_thetas(thetas),
        "dataset": dataset,
        "jobs": jobs,
    }
    if variants:
        payload["variants"] = list(variants)
    data = _post(ctx, "/runs/gflm", payload)
    for variant in sorted(data["results"]):
        click.echo(f"== {variant} ==")
        _echo_metrics(data["results"][variant])


@main.command()
@click.argument("corpus", type=click.Path())
@click.argument("topics", type=click.Path())
@click.option("--vectors", "vectors_path", required=True, type=click.Path())
@click.option("--out", "output_dir", required=True, type=click.Path())
@click.option(
    "--metric",
    default="cosine",
    show_default=True,
    type=click.Choice(["cosine", "euclidean"]),
)
@click.option(
    "--granularity",
    default="sentence",
    show_default=True,
    type=click.Choice(["sentence", "word"]),
)
@click.option("--no-keywords", is_flag=True, help="Topic vector from name tokens only.")
@click.option("--thetas", default="", help="Comma-separated grid; empty = default grid.")
@click.option("--dataset", default="")
@click.option("--jobs", default=1, show_default=True)
@click.pass_context
def classic(
    ctx: click.Context,
    corpus: str,
    topics: str,
    vectors_path: str,
    output_dir: str,
    metric: str,
    granularity: str,
    no_keywords: bool,
    thetas: str,
    dataset: str,
    jobs: int,
) -> None:
    """Word-vector averaging baseline over a pretrained vector table."""
    payload = {
        "corpus_path": corpus,
        "topics_path": topics,
        "vectors_path": vectors_path,
        "output_dir": output_dir,
        "metric": metric,
        "granularity": granularity,
        "include_keywords": not no_keywords,
        "thetas": _parse_thetas(thetas),
        "dataset": dataset,
        "jobs": jobs,
    }
    data = _post(ctx, "/runs/classic", payload)
    _echo_metrics(data)


@main.command("eval")
@click.argument("predictions", type=click.Path())
@click.argument("corpus", type=click.Path())
@click.option("--topics", "topics_path", default="", type=click.Path())
@click.option("--method", default="")
@click.option("--dataset", default="")
@click.option("--json", "as_json", is_flag=True, help="Print raw JSON.")
@click.pass_context
def eval_cmd(
    ctx: click.Context,
    predictions: str,
    corpus: str,
    topics_path: str,
    method: str,
    dataset: str,
    as_json: bool,
) -> None:
    """Score a predictions file against a corpus's gold labels."""
    data = _post(
        ctx,
        "/evaluation/report",
        {
            "predictions_path": predictions,
            "corpus_path": corpus,
            "topics_path": topics_path,
            "method": method,
            "dataset": dataset,
        },
    )
    if as_json:
        click.echo(json.dumps(data, indent=2, sort_keys=True))
        return
    label = data["method"] or "(unlabeled)"
    click.echo(f"{label} @ {data['threshold']} [{data['mode']}]")
    click.echo(
        f"precision: {data['precision']:.4f}  recall: {data['recall']:.4f}  "
        f"f1: {data['f1']:.4f}  (tp={data['tp']} fp={data['fp']} fn={data['fn']})"
    )


@main.command()
@click.option("--corpus", "corpus_path", default="", type=click.Path())
@click.option("--topics", "topics_path", default="", type=click.Path())
@click.option("--synthetic", default=0, help="Generate this many articles instead.")
@click.option("--seed", default=0, show_default=True, help="Generator seed.")
@click.option("--article-strategy", default="ea", show_default=True)
@click.option("--topic-strategy", default="name_only", show_default=True)
@click.option("--pseudo-dim", default=64, show_default=True)
@click.option("--jobs", default=1, show_default=True)
@click.pass_context
def bench(
    ctx: click.Context,
    corpus_path: str,
    topics_path: str,
    synthetic: int,
    seed: int,
    article_strategy: str,
    topic_strategy: str,
    pseudo_dim: int,
    jobs: int,
) -> None:
    """Time the embed and score phases on a corpus or a synthetic one."""
    if synthetic:
        if corpus_path or topics_path:
            raise click.ClickException("--synthetic replaces --corpus/--topics")
        # generated client side so the seed stays an explicit flag
        from .corpus import write_corpus, write_topics
        from .synth import synthetic_corpus

        articles, topic_specs = synthetic_corpus(n_articles=synthetic, seed=seed)
        workdir = Path(tempfile.mkdtemp(prefix="ztopics-bench-"))
        corpus_path = str(workdir / "corpus.jsonl")
        topics_path = str(workdir / "topics.json")
        write_corpus(corpus_path, articles)
        write_topics(topics_path, topic_specs)
    elif not corpus_path or not topics_path:
        raise click.ClickException("pass --corpus and --topics, or --synthetic N")
    data = _post(
        ctx,
        "/runs/bench",
        {
            "corpus_path": corpus_path,
            "topics_path": topics_path,
            "article_strategy": article_strategy,
            "topic_strategy": topic_strategy,
            "pseudo_dim": pseudo_dim,
            "jobs": jobs,
        },
    )
    for timing in data["timings"]:
        rate = timing["unit_count"] / timing["wall_seconds"] if timing["wall_seconds"] > 0 else float("inf")
        click.echo(
            f"{timing['phase']:>16}: {timing['wall_seconds']:.4f}s "
            f"({timing['unit_count']} units, {rate:.0f}/s)"
        )


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8033, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the JSON service for remote clients."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
