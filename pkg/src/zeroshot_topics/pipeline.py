"""End-to-end experiment runs: load inputs, build vectors, score, sweep,
and write every artifact needed to reproduce the run.

Every runner writes a config snapshot first, then deterministic result
files (sweep.json, sweep.csv, predictions.jsonl) plus a timings file;
reruns of the same config over the same inputs reproduce the result
files byte for byte (timings excluded).
"""

from __future__ import annotations

import dataclasses
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .article_rep import ArticleRepresentation, embed_article, normalize_article_strategy
from .classic import ClassicConfig, classic_scores
from .corpus import Article, TopicSpec, load_corpus, load_topics, validate_gold_topics
from .embeddings import (
    EmbeddingProvider,
    EmbeddingStore,
    PseudoProvider,
    StoreProvider,
    WordVectorProvider,
    article_key,
    load_word_vectors,
    sentence_key,
    text_key,
    write_manifest,
)
from .errors import MissingStoreKeysError, ProviderError, ValidationError
from .evaluation import (
    SweepReport,
    TimingReport,
    default_theta_grid,
    micro_prf,
    sweep,
    time_phase,
    write_sweep_csv,
    write_sweep_json,
    write_timings,
)
from .gflm import (
    GflmConfig,
    build_background_lm,
    build_topic_lm,
    fit_document,
    gflm_sentence_scores,
    gflm_word_scores,
)
from .inference import PredictionSet, assign, score_article, write_predictions
from .topic_rep import (
    TOPIC_STRATEGIES,
    TopicEmbedding,
    TopicEmbeddingConfig,
    annotate_explicit,
    embed_topic,
    gloss_or_term,
)

log = logging.getLogger(__name__)

PROVIDERS = ("pseudo", "store", "word_vectors")
GFLM_VARIANTS = ("gflm-w", "gflm-s")


@dataclass(frozen=True)
class RunConfig:
    corpus_path: str
    topics_path: str
    output_dir: str
    provider: str = "pseudo"
    article_strategy: str = "ea"
    topic_strategy: str = "name_only"
    mode: str = "threshold"
    theta_grid: tuple[float, ...] = ()
    pseudo_dim: int = 64
    store_path: str = ""
    vectors_path: str = ""
    explicit_min_keywords: int = 3
    dataset: str = ""
    jobs: int = 1

    def __post_init__(self):
        if self.provider not in PROVIDERS:
            raise ValidationError(
                f"unknown provider {self.provider!r}; expected one of {PROVIDERS}"
            )
        object.__setattr__(
            self, "article_strategy", normalize_article_strategy(self.article_strategy)
        )
        if self.topic_strategy not in TOPIC_STRATEGIES:
            raise ValidationError(
                f"unknown topic strategy {self.topic_strategy!r}; "
                f"expected one of {TOPIC_STRATEGIES}"
            )
        if self.mode not in ("threshold", "argmax"):
            raise ValidationError(f"unknown mode {self.mode!r}")
        if self.provider == "store" and not self.store_path:
            raise ValidationError("store provider requires store_path")
        if self.provider == "word_vectors" and not self.vectors_path:
            raise ValidationError("word_vectors provider requires vectors_path")
        if self.pseudo_dim < 2:
            raise ValidationError("pseudo_dim must be >= 2")
        if self.jobs < 1:
            raise ValidationError("jobs must be >= 1")
        if self.explicit_min_keywords < 1:
            raise ValidationError("explicit_min_keywords must be >= 1")

    @property
    def method(self) -> str:
        return f"embed-{self.article_strategy}-{self.topic_strategy}"

    def resolved_dataset(self) -> str:
        return self.dataset or Path(self.corpus_path).stem

    def resolved_grid(self) -> list[float]:
        return list(self.theta_grid) if self.theta_grid else default_theta_grid()


def required_texts(
    articles: Sequence[Article],
    topics: Sequence[TopicSpec],
    article_strategy: str,
    topic_strategy: str,
) -> list[tuple[str, str]]:
    """Every (key, text) pair a run could need, deduplicated by key.

    This is the manifest contract with the offline exporter: whatever
    strategy combination is configured, exporting exactly these keys
    makes the store complete for the run.  explicit_mentions includes
    whole-article keys for every article because which articles get
    averaged is only known at run time.
    """
    article_strategy = normalize_article_strategy(article_strategy)
    if topic_strategy not in TOPIC_STRATEGIES:
        raise ValidationError(f"unknown topic strategy {topic_strategy!r}")
    items: list[tuple[str, str]] = []
    seen: set[str] = set()

    def add(key: str, text: str) -> None:
        if key not in seen:
            seen.add(key)
            items.append((key, text))

    for a in articles:
        if article_strategy == "ea":
            add(article_key(a.id), a.text)
        else:
            for i, sent in enumerate(a.sentences):
                add(sentence_key(a.id, i), sent)
    if topic_strategy == "explicit_mentions":
        for a in articles:
            add(article_key(a.id), a.text)
    for t in topics:
        if topic_strategy in ("name_only", "explicit_mentions"):
            add(text_key(t.name), t.name)
        elif topic_strategy == "name_plus_keywords":
            for text in (t.name, *t.keywords):
                add(text_key(text), text)
        else:  # definitions
            for term in (t.name, *t.keywords):
                text = gloss_or_term(t, term)
                add(text_key(text), text)
    return items


def build_provider(config: RunConfig) -> EmbeddingProvider:
    if config.provider == "pseudo":
        return PseudoProvider(config.pseudo_dim)
    if config.provider == "store":
        return StoreProvider(EmbeddingStore.read(config.store_path))
    return WordVectorProvider(load_word_vectors(config.vectors_path))


def _check_store_complete(
    store: EmbeddingStore, needed: Sequence[tuple[str, str]], output_dir: Path
) -> None:
    missing = [(k, t) for k, t in needed if k not in store]
    if missing:
        manifest_path = output_dir / "missing_manifest.jsonl"
        write_manifest(manifest_path, missing)
        raise MissingStoreKeysError([k for k, _ in missing], manifest_path)


def _map_articles(
    articles: Sequence[Article],
    fn: Callable[[Article], object],
    jobs: int,
) -> list:
    if jobs <= 1:
        return [fn(a) for a in articles]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, articles))


def _config_snapshot(path: Path, config) -> None:
    payload = dataclasses.asdict(config)
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n",
        encoding="utf-8",
    )


def run_experiment(config: RunConfig) -> tuple[SweepReport, dict[str, str]]:
    """Embedding-similarity pipeline: embed topics and articles, score,
    sweep thresholds (or take the argmax), and write artifacts.

    Articles that cannot be represented (empty text, or no vector under
    a word-vector provider) are skipped with a warning and count as
    empty predictions in every report.
    """
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    _config_snapshot(out / "config.json", config)

    articles = load_corpus(config.corpus_path)
    topics = load_topics(config.topics_path)
    gold = validate_gold_topics(articles, topics)
    provider = build_provider(config)
    if config.provider == "store":
        needed = required_texts(
            articles, topics, config.article_strategy, config.topic_strategy
        )
        _check_store_complete(provider.store, needed, out)  # type: ignore[attr-defined]

    timings: list[TimingReport] = []
    topic_cfg = TopicEmbeddingConfig(
        strategy=config.topic_strategy,
        explicit_min_keywords=config.explicit_min_keywords,
    )

    def embed_topics() -> list[TopicEmbedding]:
        return [embed_topic(t, topic_cfg, provider, articles) for t in topics]

    topic_embs, timing = time_phase("embed_topics", embed_topics, unit_count=len(topics))
    timings.append(timing)

    def embed_one(article: Article) -> ArticleRepresentation | None:
        try:
            return embed_article(article, config.article_strategy, provider)
        except (ValidationError, ProviderError) as exc:
            log.warning("skipping article %r: %s", article.id, exc)
            return None

    reps, timing = time_phase(
        "embed_articles",
        lambda: _map_articles(articles, embed_one, config.jobs),
        unit_count=len(articles),
    )
    timings.append(timing)

    def score_all() -> dict[str, dict[str, float]]:
        maps: dict[str, dict[str, float]] = {}
        for rep in reps:
            if rep is not None:
                maps[rep.article_id] = score_article(rep, topic_embs)
        return maps

    score_maps, timing = time_phase("score", score_all, unit_count=len(articles))
    timings.append(timing)

    if config.mode == "argmax":
        def run_argmax() -> tuple[SweepReport, list[PredictionSet]]:
            preds = [
                assign(scores, 0.0, mode="argmax", article_id=a, method=config.method)
                for a, scores in score_maps.items()
            ]
            report = micro_prf(
                gold,
                {p.article_id: set(p.assignments) for p in preds},
                threshold=0.0,
                method=config.method,
                dataset=config.resolved_dataset(),
            )
            return SweepReport(points=((0.0, report),), best=report), preds

        (sweep_report, predictions), timing = time_phase("evaluate", run_argmax)
        timings.append(timing)
    else:
        def run_sweep() -> SweepReport:
            return sweep(
                score_maps,
                gold,
                config.resolved_grid(),
                method=config.method,
                dataset=config.resolved_dataset(),
            )

        sweep_report, timing = time_phase("sweep", run_sweep)
        timings.append(timing)
        best_theta = sweep_report.best.threshold
        predictions = [
            assign(scores, best_theta, article_id=a, method=config.method)
            for a, scores in score_maps.items()
        ]

    paths = {
        "config": str(out / "config.json"),
        "sweep_json": str(out / "sweep.json"),
        "sweep_csv": str(out / "sweep.csv"),
        "predictions": str(out / "predictions.jsonl"),
        "timings": str(out / "timings.json"),
    }
    write_sweep_json(paths["sweep_json"], sweep_report)
    write_sweep_csv(paths["sweep_csv"], sweep_report)
    write_predictions(paths["predictions"], predictions)
    write_timings(paths["timings"], timings)
    return sweep_report, paths


def explicit_matches(
    articles: Sequence[Article], topics: Sequence[TopicSpec], min_keywords: int = 3
) -> dict[str, list[str]]:
    """Article ids that mention each topic explicitly, in corpus order."""
    return {
        t.name: [a.id for a in articles if annotate_explicit(a, t, min_keywords)]
        for t in topics
    }


def _strict_predictions(
    score_maps: Mapping[str, Mapping[str, float]],
    theta: float,
    method: str,
) -> list[PredictionSet]:
    return [
        PredictionSet(
            article_id=a,
            assignments={t: s for t, s in scores.items() if s > theta},
            threshold=theta,
            mode="threshold",
            method=method,
        )
        for a, scores in score_maps.items()
    ]


def run_gflm(
    corpus_path: str,
    topics_path: str,
    output_dir: str,
    gflm_config: GflmConfig = GflmConfig(),
    theta_grid: Sequence[float] = (),
    dataset: str = "",
    variants: Sequence[str] = GFLM_VARIANTS,
    jobs: int = 1,
) -> dict[str, tuple[SweepReport, dict[str, str]]]:
    """Language-model baseline run: fit every document, sweep both
    inference rules (strict > comparisons), write per-variant artifacts."""
    for v in variants:
        if v not in GFLM_VARIANTS:
            raise ValidationError(f"unknown variant {v!r}; expected from {GFLM_VARIANTS}")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    _config_snapshot(out / "config.json", gflm_config)
    articles = load_corpus(corpus_path)
    topics = load_topics(topics_path)
    gold = validate_gold_topics(articles, topics)
    dataset = dataset or Path(corpus_path).stem
    grid = list(theta_grid) if theta_grid else default_theta_grid()

    timings: list[TimingReport] = []
    background, timing = time_phase(
        "background_lm", lambda: build_background_lm(articles), unit_count=len(articles)
    )
    timings.append(timing)
    topic_lms, timing = time_phase(
        "topic_lms",
        lambda: {
            t.name: build_topic_lm(t, background, gflm_config.topic_seed_smoothing)
            for t in topics
        },
        unit_count=len(topics),
    )
    timings.append(timing)

    def fit_one(article: Article):
        try:
            return fit_document(article, topic_lms, background, gflm_config)
        except ValidationError as exc:
            log.warning("skipping article %r: %s", article.id, exc)
            return None

    fits, timing = time_phase(
        "fit_documents",
        lambda: _map_articles(articles, fit_one, jobs),
        unit_count=len(articles),
    )
    timings.append(timing)

    results: dict[str, tuple[SweepReport, dict[str, str]]] = {}
    for variant in variants:
        scorer = gflm_word_scores if variant == "gflm-w" else gflm_sentence_scores
        score_maps = {
            fit.article_id: scorer(fit) for fit in fits if fit is not None
        }
        report, timing = time_phase(
            f"sweep_{variant}",
            lambda sm=score_maps: sweep(
                sm, gold, grid, strict=True, method=variant, dataset=dataset
            ),
        )
        timings.append(timing)
        preds = _strict_predictions(score_maps, report.best.threshold, variant)
        paths = {
            "sweep_json": str(out / f"{variant}.sweep.json"),
            "sweep_csv": str(out / f"{variant}.sweep.csv"),
            "predictions": str(out / f"{variant}.predictions.jsonl"),
        }
        write_sweep_json(paths["sweep_json"], report)
        write_sweep_csv(paths["sweep_csv"], report)
        write_predictions(paths["predictions"], preds)
        results[variant] = (report, paths)
    write_timings(out / "timings.json", timings)
    return results


def run_classic(
    corpus_path: str,
    topics_path: str,
    vectors_path: str,
    output_dir: str,
    metric: str = "cosine",
    granularity: str = "sentence",
    include_keywords: bool = True,
    theta_grid: Sequence[float] = (),
    dataset: str = "",
    jobs: int = 1,
) -> tuple[SweepReport, dict[str, str]]:
    """Word-vector baseline run with a threshold sweep (inclusive >=)."""
    cfg = ClassicConfig(
        metric=metric,
        granularity=granularity,
        threshold=0.0,
        include_keywords_in_topic=include_keywords,
    )
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    _config_snapshot(out / "config.json", cfg)
    articles = load_corpus(corpus_path)
    topics = load_topics(topics_path)
    gold = validate_gold_topics(articles, topics)
    dataset = dataset or Path(corpus_path).stem
    grid = list(theta_grid) if theta_grid else default_theta_grid()

    timings: list[TimingReport] = []
    table, timing = time_phase("load_vectors", lambda: load_word_vectors(vectors_path))
    timings.append(timing)

    def score_one(article: Article) -> dict[str, float]:
        return classic_scores(article, topics, table, cfg)

    score_lists, timing = time_phase(
        "score",
        lambda: _map_articles(articles, score_one, jobs),
        unit_count=len(articles),
    )
    timings.append(timing)
    score_maps = {
        a.id: scores for a, scores in zip(articles, score_lists) if scores
    }
    report, timing = time_phase(
        "sweep",
        lambda: sweep(score_maps, gold, grid, method=cfg.method, dataset=dataset),
    )
    timings.append(timing)
    best_theta = report.best.threshold
    predictions = [
        assign(scores, best_theta, article_id=a, method=cfg.method)
        for a, scores in score_maps.items()
    ]
    paths = {
        "config": str(out / "config.json"),
        "sweep_json": str(out / "sweep.json"),
        "sweep_csv": str(out / "sweep.csv"),
        "predictions": str(out / "predictions.jsonl"),
        "timings": str(out / "timings.json"),
    }
    write_sweep_json(paths["sweep_json"], report)
    write_sweep_csv(paths["sweep_csv"], report)
    write_predictions(paths["predictions"], predictions)
    write_timings(paths["timings"], timings)
    return report, paths


def run_bench(
    corpus_path: str,
    topics_path: str,
    article_strategy: str = "ea",
    topic_strategy: str = "name_only",
    pseudo_dim: int = 64,
    jobs: int = 1,
) -> list[TimingReport]:
    """Time the pipeline phases on a corpus with the hash-based provider."""
    articles = load_corpus(corpus_path)
    topics = load_topics(topics_path)
    provider = PseudoProvider(pseudo_dim)
    topic_cfg = TopicEmbeddingConfig(strategy=topic_strategy)
    timings: list[TimingReport] = []
    topic_embs, timing = time_phase(
        "embed_topics",
        lambda: [embed_topic(t, topic_cfg, provider, articles) for t in topics],
        unit_count=len(topics),
    )
    timings.append(timing)

    def embed_one(article: Article):
        try:
            return embed_article(article, article_strategy, provider)
        except (ValidationError, ProviderError):
            return None

    reps, timing = time_phase(
        "embed_articles",
        lambda: _map_articles(articles, embed_one, jobs),
        unit_count=len(articles),
    )
    timings.append(timing)
    _, timing = time_phase(
        "score",
        lambda: [score_article(r, topic_embs) for r in reps if r is not None],
        unit_count=len(articles),
    )
    timings.append(timing)
    return timings
