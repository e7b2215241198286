import json
from pathlib import Path

import numpy as np
import pytest

from zeroshot_topics import MissingStoreKeysError, ValidationError
from zeroshot_topics.corpus import load_corpus, write_corpus, write_topics
from zeroshot_topics.embeddings import (
    EmbeddingStore,
    PseudoProvider,
    article_key,
    pseudo_embed,
    read_manifest,
    sentence_key,
    text_key,
)
from zeroshot_topics.gflm import GflmConfig
from zeroshot_topics.pipeline import (
    RunConfig,
    explicit_matches,
    required_texts,
    run_bench,
    run_classic,
    run_experiment,
    run_gflm,
)
from zeroshot_topics.synth import planted_gflm_corpus, synthetic_corpus


@pytest.fixture()
def small_run(tmp_path):
    articles, topics = synthetic_corpus(n_articles=8, seed=11)
    corpus_path = tmp_path / "corpus.jsonl"
    topics_path = tmp_path / "topics.json"
    write_corpus(corpus_path, articles)
    write_topics(topics_path, topics)
    return articles, topics, corpus_path, topics_path


class TestRunConfig:
    def test_validates_provider(self, small_run):
        _, _, corpus_path, topics_path = small_run
        with pytest.raises(ValidationError):
            RunConfig(
                corpus_path=str(corpus_path),
                topics_path=str(topics_path),
                output_dir="out",
                provider="magic",
            )

    def test_store_requires_path(self, small_run):
        _, _, corpus_path, topics_path = small_run
        with pytest.raises(ValidationError):
            RunConfig(
                corpus_path=str(corpus_path),
                topics_path=str(topics_path),
                output_dir="out",
                provider="store",
            )

    def test_method_string(self, small_run):
        _, _, corpus_path, topics_path = small_run
        cfg = RunConfig(
            corpus_path=str(corpus_path),
            topics_path=str(topics_path),
            output_dir="out",
            article_strategy="SEA",
            topic_strategy="name_plus_keywords",
        )
        assert cfg.method == "embed-sea-name_plus_keywords"


class TestRequiredTexts:
    def test_ea_name_only(self, small_run):
        articles, topics, _, _ = small_run
        items = required_texts(articles, topics, "ea", "name_only")
        keys = [k for k, _ in items]
        assert article_key(articles[0].id) in keys
        assert text_key(topics[0].name) in keys
        assert len(keys) == len(set(keys))

    def test_sentence_strategies_use_sentence_keys(self, small_run):
        articles, topics, _, _ = small_run
        items = dict(required_texts(articles, topics, "ise", "name_only"))
        assert sentence_key(articles[0].id, 0) in items
        assert items[sentence_key(articles[0].id, 0)] == articles[0].sentences[0]
        assert article_key(articles[0].id) not in items

    def test_explicit_adds_article_keys_even_for_ise(self, small_run):
        articles, topics, _, _ = small_run
        items = dict(required_texts(articles, topics, "ise", "explicit_mentions"))
        assert article_key(articles[0].id) in items
        assert sentence_key(articles[0].id, 0) in items

    def test_definitions_uses_glosses(self, small_run):
        articles, _, _, _ = small_run
        from zeroshot_topics import TopicSpec

        topic = TopicSpec(name="Alpha", keywords=("beta",), definitions={"beta": "the gloss"})
        items = dict(required_texts(articles, [topic], "ea", "definitions"))
        assert text_key("the gloss") in items
        assert items[text_key("the gloss")] == "the gloss"


class TestRunExperiment:
    def _config(self, corpus_path, topics_path, out, **kw):
        return RunConfig(
            corpus_path=str(corpus_path),
            topics_path=str(topics_path),
            output_dir=str(out),
            **kw,
        )

    def test_writes_all_artifacts(self, small_run, tmp_path):
        _, _, corpus_path, topics_path = small_run
        out = tmp_path / "out"
        report, paths = run_experiment(self._config(corpus_path, topics_path, out))
        for name in ("config", "sweep_json", "sweep_csv", "predictions", "timings"):
            assert Path(paths[name]).exists()
        assert len(report.points) == 101

    def test_rerun_byte_identical(self, small_run, tmp_path):
        _, _, corpus_path, topics_path = small_run
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        cfg1 = self._config(corpus_path, topics_path, out1)
        cfg2 = self._config(corpus_path, topics_path, out2)
        run_experiment(cfg1)
        run_experiment(cfg2)
        for name in ("sweep.json", "sweep.csv", "predictions.jsonl"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_jobs_do_not_change_results(self, small_run, tmp_path):
        _, _, corpus_path, topics_path = small_run
        out1, out2 = tmp_path / "j1", tmp_path / "j4"
        run_experiment(self._config(corpus_path, topics_path, out1, jobs=1))
        run_experiment(self._config(corpus_path, topics_path, out2, jobs=4))
        assert (out1 / "sweep.json").read_bytes() == (out2 / "sweep.json").read_bytes()
        assert (out1 / "predictions.jsonl").read_bytes() == (
            out2 / "predictions.jsonl"
        ).read_bytes()

    def test_argmax_mode_single_point(self, small_run, tmp_path):
        _, _, corpus_path, topics_path = small_run
        report, paths = run_experiment(
            self._config(corpus_path, topics_path, tmp_path / "am", mode="argmax")
        )
        assert len(report.points) == 1
        rows = [
            json.loads(line)
            for line in Path(paths["predictions"]).read_text().splitlines()
        ]
        assert all(len(r["topics"]) == 1 for r in rows)
        assert all(r["mode"] == "argmax" for r in rows)

    def test_store_provider_missing_keys(self, small_run, tmp_path):
        _, _, corpus_path, topics_path = small_run
        store_path = tmp_path / "store.jsonl"
        EmbeddingStore(8).write(store_path)
        out = tmp_path / "out"
        cfg = self._config(
            corpus_path, topics_path, out, provider="store", store_path=str(store_path)
        )
        with pytest.raises(MissingStoreKeysError) as exc_info:
            run_experiment(cfg)
        manifest = read_manifest(out / "missing_manifest.jsonl")
        assert len(manifest) == len(exc_info.value.missing_keys)
        assert set(k for k, _ in manifest) == set(exc_info.value.missing_keys)

    def test_store_provider_complete_store_runs(self, small_run, tmp_path):
        articles, topics, corpus_path, topics_path = small_run
        needed = required_texts(articles, topics, "ea", "name_only")
        store = EmbeddingStore(16)
        for key, text in needed:
            store.put(key, pseudo_embed(text, 16))
        store_path = tmp_path / "store.jsonl"
        store.write(store_path)
        out_store = tmp_path / "via_store"
        out_pseudo = tmp_path / "via_pseudo"
        report_store, _ = run_experiment(
            self._config(
                corpus_path,
                topics_path,
                out_store,
                provider="store",
                store_path=str(store_path),
            )
        )
        report_pseudo, _ = run_experiment(
            self._config(corpus_path, topics_path, out_pseudo, pseudo_dim=16)
        )
        # same vectors by construction: identical sweep results
        assert (out_store / "sweep.json").read_bytes() == (
            out_pseudo / "sweep.json"
        ).read_bytes()

    def test_unknown_gold_topic_fails(self, tmp_path):
        articles, topics = synthetic_corpus(n_articles=3, seed=5)
        bad = articles[0]
        from zeroshot_topics import make_article

        articles[0] = make_article(bad.id, bad.text, ["NotATopic"])
        corpus_path = tmp_path / "corpus.jsonl"
        topics_path = tmp_path / "topics.json"
        write_corpus(corpus_path, articles)
        write_topics(topics_path, topics)
        with pytest.raises(ValidationError, match="NotATopic"):
            run_experiment(self._config(corpus_path, topics_path, tmp_path / "out"))


class TestExplicitMatches:
    def test_lists_matching_ids_in_corpus_order(self):
        from zeroshot_topics import TopicSpec, make_article

        articles = [
            make_article("a1", "sound systems are loud"),
            make_article("a2", "nothing here"),
            make_article("a3", "the sound of music"),
        ]
        matches = explicit_matches(articles, [TopicSpec(name="Sound")])
        assert matches == {"Sound": ["a1", "a3"]}


class TestRunGflm:
    def test_planted_corpus_run(self, tmp_path):
        articles, topics = planted_gflm_corpus(seed=3, n_docs=12, n_topics=3)
        corpus_path = tmp_path / "corpus.jsonl"
        topics_path = tmp_path / "topics.json"
        write_corpus(corpus_path, articles)
        write_topics(topics_path, topics)
        results = run_gflm(
            str(corpus_path),
            str(topics_path),
            str(tmp_path / "out"),
            GflmConfig(lambda_background=0.5),
            theta_grid=[0.0, 0.1, 0.2, 0.3, 0.5, 0.7],
        )
        assert set(results) == {"gflm-w", "gflm-s"}
        for variant, (report, paths) in results.items():
            assert Path(paths["sweep_json"]).exists()
            assert Path(paths["predictions"]).exists()
            assert report.best.f1 > 0.3
        assert (tmp_path / "out" / "timings.json").exists()

    def test_unknown_variant_rejected(self, tmp_path):
        with pytest.raises(ValidationError):
            run_gflm("c", "t", str(tmp_path), variants=("gflm-x",))

    def test_strict_rule_in_predictions(self, tmp_path):
        articles, topics = planted_gflm_corpus(seed=9, n_docs=6, n_topics=2)
        corpus_path = tmp_path / "corpus.jsonl"
        topics_path = tmp_path / "topics.json"
        write_corpus(corpus_path, articles)
        write_topics(topics_path, topics)
        results = run_gflm(
            str(corpus_path),
            str(topics_path),
            str(tmp_path / "out"),
            theta_grid=[0.0, 0.5],
        )
        report, paths = results["gflm-s"]
        rows = [
            json.loads(line)
            for line in Path(paths["predictions"]).read_text().splitlines()
        ]
        for row in rows:
            for t in row["topics"]:
                assert t["score"] > report.best.threshold


class TestRunClassic:
    def test_full_run(self, tmp_path):
        from zeroshot_topics import TopicSpec, make_article

        articles = [
            make_article("a1", "cat purr", ["Cats"]),
            make_article("a2", "dog bark", ["Dogs"]),
        ]
        topics = [TopicSpec(name="Cats", keywords=("cat",)), TopicSpec(name="Dogs", keywords=("dog",))]
        corpus_path = tmp_path / "corpus.jsonl"
        topics_path = tmp_path / "topics.json"
        write_corpus(corpus_path, articles)
        write_topics(topics_path, topics)
        vectors = tmp_path / "vecs.txt"
        vectors.write_text(
            "cat 1.0 0.0\npurr 0.9 0.1\ndog 0.0 1.0\nbark 0.1 0.9\ncats 1.0 0.0\ndogs 0.0 1.0\n"
        )
        report, paths = run_classic(
            str(corpus_path),
            str(topics_path),
            str(vectors),
            str(tmp_path / "out"),
            metric="cosine",
            granularity="sentence",
        )
        assert report.best.f1 == 1.0
        assert Path(paths["sweep_json"]).exists()


class TestRunBench:
    def test_produces_phase_timings(self, tmp_path):
        articles, topics = synthetic_corpus(n_articles=5, seed=2)
        corpus_path = tmp_path / "corpus.jsonl"
        topics_path = tmp_path / "topics.json"
        write_corpus(corpus_path, articles)
        write_topics(topics_path, topics)
        timings = run_bench(str(corpus_path), str(topics_path))
        assert [t.phase for t in timings] == ["embed_topics", "embed_articles", "score"]
        assert all(t.wall_seconds >= 0 for t in timings)


class TestCorpusWriters:
    def test_corpus_roundtrip(self, tmp_path):
        articles, _ = synthetic_corpus(n_articles=4, seed=1)
        p = tmp_path / "c.jsonl"
        write_corpus(p, articles)
        loaded = load_corpus(p)
        assert [a.id for a in loaded] == [a.id for a in articles]
        assert all(a.text == b.text for a, b in zip(loaded, articles))
        assert all(a.gold_topics == b.gold_topics for a, b in zip(loaded, articles))
