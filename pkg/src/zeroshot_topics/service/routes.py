"""Endpoint handlers.  Thin: parse the body, call the core, shape the reply."""

from __future__ import annotations

from fastapi import APIRouter

from .. import __version__
from ..corpus import corpus_stats, load_corpus, load_topics, validate_gold_topics
from ..embeddings import write_manifest
from ..evaluation import micro_prf
from ..gflm import GflmConfig
from ..inference import read_predictions
from ..pipeline import (
    RunConfig,
    explicit_matches,
    required_texts,
    run_bench,
    run_classic,
    run_experiment,
    run_gflm,
)
from ..topic_rep import suggest_keywords
from .schemas import (
    BenchRequest,
    BenchResponse,
    ClassicRequest,
    EvalRequest,
    EvalResponse,
    ExplicitRequest,
    ExplicitResponse,
    GflmRequest,
    GflmResponse,
    InferRequest,
    ManifestRequest,
    ManifestResponse,
    RunRequest,
    RunResult,
    StatsRequest,
    StatsResponse,
    SuggestRequest,
    SuggestResponse,
    phase_timing,
    run_result,
)

router = APIRouter()


@router.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@router.post("/corpus/stats", response_model=StatsResponse)
def stats(req: StatsRequest) -> StatsResponse:
    s = corpus_stats(load_corpus(req.corpus_path))
    return StatsResponse(
        article_count=s.article_count,
        unique_topics=s.unique_topics,
        avg_article_length_tokens=s.avg_article_length_tokens,
        topics_per_article=s.topics_per_article,
    )


@router.post("/topics/suggest", response_model=SuggestResponse)
def suggest(req: SuggestRequest) -> SuggestResponse:
    corpus = load_corpus(req.corpus_path)
    return SuggestResponse(
        topic=req.topic, keywords=suggest_keywords(corpus, req.topic, req.k)
    )


@router.post("/topics/explicit", response_model=ExplicitResponse)
def explicit(req: ExplicitRequest) -> ExplicitResponse:
    corpus = load_corpus(req.corpus_path)
    topics = load_topics(req.topics_path)
    if req.topic:
        wanted = req.topic.lower()
        topics = [t for t in topics if t.name.lower() == wanted]
    matches = explicit_matches(corpus, topics, min_keywords=req.min_keywords)
    return ExplicitResponse(min_keywords=req.min_keywords, matches=matches)


@router.post("/embeddings/manifest", response_model=ManifestResponse)
def manifest(req: ManifestRequest) -> ManifestResponse:
    corpus = load_corpus(req.corpus_path)
    topics = load_topics(req.topics_path)
    items = required_texts(corpus, topics, req.article_strategy, req.topic_strategy)
    write_manifest(req.out_path, items)
    return ManifestResponse(path=req.out_path, entry_count=len(items))


def _to_config(req: RunRequest, thetas: list[float]) -> RunConfig:
    return RunConfig(
        corpus_path=req.corpus_path,
        topics_path=req.topics_path,
        output_dir=req.output_dir,
        provider=req.provider,
        article_strategy=req.article_strategy,
        topic_strategy=req.topic_strategy,
        mode=req.mode,
        theta_grid=tuple(thetas),
        pseudo_dim=req.pseudo_dim,
        store_path=req.store_path,
        vectors_path=req.vectors_path,
        explicit_min_keywords=req.explicit_min_keywords,
        dataset=req.dataset,
        jobs=req.jobs,
    )


@router.post("/runs/sweep", response_model=RunResult)
def sweep_run(req: RunRequest) -> RunResult:
    report, paths = run_experiment(_to_config(req, req.thetas))
    return run_result(report, paths)


@router.post("/runs/infer", response_model=RunResult)
def infer_run(req: InferRequest) -> RunResult:
    # threshold mode pins the grid to the one requested cutoff
    thetas = [req.theta] if req.mode == "threshold" else []
    report, paths = run_experiment(_to_config(req, thetas))
    return run_result(report, paths)


@router.post("/runs/gflm", response_model=GflmResponse)
def gflm_run(req: GflmRequest) -> GflmResponse:
    config = GflmConfig(
        lambda_background=req.lambda_background,
        topic_seed_smoothing=req.topic_seed_smoothing,
        max_iterations=req.max_iterations,
        rel_ll_tolerance=req.rel_ll_tolerance,
    )
    results = run_gflm(
        req.corpus_path,
        req.topics_path,
        req.output_dir,
        config,
        theta_grid=req.thetas,
        dataset=req.dataset,
        variants=tuple(req.variants),
        jobs=req.jobs,
    )
    return GflmResponse(
        results={v: run_result(rep, paths) for v, (rep, paths) in results.items()}
    )


@router.post("/runs/classic", response_model=RunResult)
def classic_run(req: ClassicRequest) -> RunResult:
    report, paths = run_classic(
        req.corpus_path,
        req.topics_path,
        req.vectors_path,
        req.output_dir,
        metric=req.metric,
        granularity=req.granularity,
        include_keywords=req.include_keywords,
        theta_grid=req.thetas,
        dataset=req.dataset,
        jobs=req.jobs,
    )
    return run_result(report, paths)


@router.post("/runs/bench", response_model=BenchResponse)
def bench_run(req: BenchRequest) -> BenchResponse:
    timings = run_bench(
        req.corpus_path,
        req.topics_path,
        article_strategy=req.article_strategy,
        topic_strategy=req.topic_strategy,
        pseudo_dim=req.pseudo_dim,
        jobs=req.jobs,
    )
    return BenchResponse(timings=[phase_timing(t) for t in timings])


@router.post("/evaluation/report", response_model=EvalResponse)
def evaluate(req: EvalRequest) -> EvalResponse:
    predictions = read_predictions(req.predictions_path)
    corpus = load_corpus(req.corpus_path)
    topics = load_topics(req.topics_path) if req.topics_path else None
    gold = (
        validate_gold_topics(corpus, topics)
        if topics is not None
        else {a.id: frozenset(a.gold_topics) for a in corpus}
    )
    pred = {p.article_id: set(p.topics) for p in predictions}
    threshold = predictions[0].threshold if predictions else 0.0
    mode = predictions[0].mode if predictions else "threshold"
    method = req.method or (predictions[0].method if predictions else "")
    report = micro_prf(
        gold, pred, threshold=threshold, method=method, dataset=req.dataset
    )
    return EvalResponse(
        method=report.method,
        dataset=report.dataset,
        threshold=report.threshold,
        mode=mode,
        precision=report.precision,
        recall=report.recall,
        f1=report.f1,
        tp=report.tp,
        fp=report.fp,
        fn=report.fn,
    )
