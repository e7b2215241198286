import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from zeroshot_topics.cli import main
from zeroshot_topics.corpus import make_article, write_corpus, write_topics
from zeroshot_topics.synth import planted_gflm_corpus, synthetic_corpus


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def files(tmp_path):
    articles, topics = synthetic_corpus(n_articles=8, seed=4)
    corpus_path = tmp_path / "corpus.jsonl"
    topics_path = tmp_path / "topics.json"
    write_corpus(corpus_path, articles)
    write_topics(topics_path, topics)
    return str(corpus_path), str(topics_path), tmp_path


def test_stats(runner, files):
    corpus, _, _ = files
    result = runner.invoke(main, ["stats", corpus])
    assert result.exit_code == 0, result.output
    assert "articles:          8" in result.output


def test_stats_json(runner, files):
    corpus, _, _ = files
    result = runner.invoke(main, ["stats", corpus, "--json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["article_count"] == 8


def test_stats_missing_file_nonzero_exit(runner):
    result = runner.invoke(main, ["stats", "/missing/corpus.jsonl"])
    assert result.exit_code != 0
    assert "Error" in result.output


def test_suggest_keywords(runner, files):
    corpus, _, _ = files
    result = runner.invoke(main, ["suggest-keywords", corpus, "Alpha", "-k", "3"])
    assert result.exit_code == 0, result.output
    lines = [ln for ln in result.output.splitlines() if ln]
    assert 0 < len(lines) <= 3


def test_annotate_explicit(runner, tmp_path):
    from zeroshot_topics import TopicSpec

    write_corpus(tmp_path / "c.jsonl", [make_article("a1", "pure sound here")])
    write_topics(tmp_path / "t.json", [TopicSpec(name="Sound")])
    result = runner.invoke(
        main, ["annotate-explicit", str(tmp_path / "c.jsonl"), str(tmp_path / "t.json")]
    )
    assert result.exit_code == 0, result.output
    assert "Sound: a1" in result.output


def test_manifest(runner, files):
    corpus, topics, tmp_path = files
    out = tmp_path / "m.jsonl"
    result = runner.invoke(main, ["manifest", corpus, topics, "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert out.exists()
    assert "wrote 11 entries" in result.output  # 8 articles + 3 topics


def test_sweep_writes_artifacts(runner, files):
    corpus, topics, tmp_path = files
    out = tmp_path / "run"
    result = runner.invoke(main, ["sweep", corpus, topics, "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert "method:    embed-ea-name_only" in result.output
    for name in ("sweep.json", "sweep.csv", "predictions.jsonl", "config.json"):
        assert (out / name).exists()


def test_sweep_custom_thetas(runner, files):
    corpus, topics, tmp_path = files
    out = tmp_path / "run"
    result = runner.invoke(
        main, ["sweep", corpus, topics, "--out", str(out), "--thetas", "0.2,0.8"]
    )
    assert result.exit_code == 0, result.output
    report = json.loads((out / "sweep.json").read_text())
    assert [p["threshold"] for p in report["points"]] == [0.2, 0.8]


def test_sweep_bad_thetas_usage_error(runner, files):
    corpus, topics, tmp_path = files
    result = runner.invoke(
        main, ["sweep", corpus, topics, "--out", str(tmp_path / "x"), "--thetas", "a,b"]
    )
    assert result.exit_code != 0
    assert "bad --thetas" in result.output


def test_infer_fixed_theta(runner, files):
    corpus, topics, tmp_path = files
    out = tmp_path / "inf"
    result = runner.invoke(
        main, ["infer", corpus, topics, "--out", str(out), "--theta", "0.3"]
    )
    assert result.exit_code == 0, result.output
    assert "threshold: 0.3" in result.output
    rows = [
        json.loads(line)
        for line in (out / "predictions.jsonl").read_text().splitlines()
    ]
    assert all(r["threshold"] == 0.3 for r in rows)


def test_infer_argmax(runner, files):
    corpus, topics, tmp_path = files
    out = tmp_path / "am"
    result = runner.invoke(
        main, ["infer", corpus, topics, "--out", str(out), "--mode", "argmax"]
    )
    assert result.exit_code == 0, result.output
    rows = [
        json.loads(line)
        for line in (out / "predictions.jsonl").read_text().splitlines()
    ]
    assert all(len(r["topics"]) == 1 for r in rows)


def test_gflm(runner, tmp_path):
    articles, topics = planted_gflm_corpus(seed=5, n_docs=8, n_topics=2)
    write_corpus(tmp_path / "c.jsonl", articles)
    write_topics(tmp_path / "t.json", topics)
    result = runner.invoke(
        main,
        [
            "gflm",
            str(tmp_path / "c.jsonl"),
            str(tmp_path / "t.json"),
            "--out",
            str(tmp_path / "out"),
            "--lambda-background",
            "0.5",
            "--thetas",
            "0.0,0.3,0.6",
        ],
    )
    assert result.exit_code == 0, result.output
    assert "== gflm-s ==" in result.output
    assert "== gflm-w ==" in result.output


def test_gflm_single_variant(runner, tmp_path):
    articles, topics = planted_gflm_corpus(seed=5, n_docs=6, n_topics=2)
    write_corpus(tmp_path / "c.jsonl", articles)
    write_topics(tmp_path / "t.json", topics)
    result = runner.invoke(
        main,
        [
            "gflm",
            str(tmp_path / "c.jsonl"),
            str(tmp_path / "t.json"),
            "--out",
            str(tmp_path / "out"),
            "--variant",
            "gflm-s",
            "--thetas",
            "0.0,0.5",
        ],
    )
    assert result.exit_code == 0, result.output
    assert "== gflm-s ==" in result.output
    assert "gflm-w" not in result.output


def test_classic(runner, tmp_path):
    from zeroshot_topics import TopicSpec

    write_corpus(tmp_path / "c.jsonl", [make_article("a1", "cat purr", ["Cats"])])
    write_topics(tmp_path / "t.json", [TopicSpec(name="Cats", keywords=("cat",))])
    (tmp_path / "v.txt").write_text("cat 1 0\npurr 0.9 0.1\ncats 1 0\n")
    result = runner.invoke(
        main,
        [
            "classic",
            str(tmp_path / "c.jsonl"),
            str(tmp_path / "t.json"),
            "--vectors",
            str(tmp_path / "v.txt"),
            "--out",
            str(tmp_path / "out"),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "f1: 1.0000" in result.output


def test_eval_round_trip(runner, files):
    corpus, topics, tmp_path = files
    out = tmp_path / "run"
    assert runner.invoke(main, ["sweep", corpus, topics, "--out", str(out)]).exit_code == 0
    result = runner.invoke(
        main, ["eval", str(out / "predictions.jsonl"), corpus, "--json"]
    )
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["method"] == "embed-ea-name_only"
    assert 0.0 <= data["f1"] <= 1.0


def test_bench_on_files(runner, files):
    corpus, topics, _ = files
    result = runner.invoke(main, ["bench", "--corpus", corpus, "--topics", topics])
    assert result.exit_code == 0, result.output
    for phase in ("embed_topics", "embed_articles", "score"):
        assert phase in result.output


def test_bench_synthetic_seeded(runner):
    result = runner.invoke(main, ["bench", "--synthetic", "6", "--seed", "9"])
    assert result.exit_code == 0, result.output
    assert "score" in result.output


def test_bench_requires_some_input(runner):
    result = runner.invoke(main, ["bench"])
    assert result.exit_code != 0
    assert "--synthetic" in result.output


def test_remote_server_mode(runner, files):
    import socket
    import threading
    import time

    import uvicorn

    from zeroshot_topics.service import create_app

    corpus, _, _ = files
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    config = uvicorn.Config(
        create_app(), host="127.0.0.1", port=port, log_level="error"
    )
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    while not server.started:
        assert time.monotonic() < deadline, "server did not come up"
        time.sleep(0.05)
    url = f"http://127.0.0.1:{port}"
    try:
        result = runner.invoke(main, ["--server", url, "stats", corpus])
        assert result.exit_code == 0, result.output
        assert "articles:          8" in result.output
        # same thing through the environment variable
        result = runner.invoke(
            main, ["stats", corpus], env={"ZTOPICS_SERVER": url}
        )
        assert result.exit_code == 0, result.output
    finally:
        server.should_exit = True
        thread.join(timeout=5)


def test_help_lists_subcommands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for name in (
        "stats",
        "suggest-keywords",
        "annotate-explicit",
        "manifest",
        "infer",
        "gflm",
        "classic",
        "eval",
        "sweep",
        "bench",
        "serve",
    ):
        assert name in result.output
