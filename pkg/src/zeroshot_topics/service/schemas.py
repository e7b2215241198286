"""Request and response bodies for the JSON service.

Every run endpoint receives filesystem paths rather than inline payloads:
corpora can be large and the artifacts a run writes (reports, predictions)
are part of its contract, so the service and its caller share a filesystem.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from ..evaluation import EvalReport, SweepReport, TimingReport


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class StatsRequest(StrictModel):
    corpus_path: str


class StatsResponse(StrictModel):
    article_count: int
    unique_topics: int
    avg_article_length_tokens: float
    topics_per_article: float


class SuggestRequest(StrictModel):
    corpus_path: str
    topic: str
    k: int = 10


class SuggestResponse(StrictModel):
    topic: str
    keywords: list[str]


class ExplicitRequest(StrictModel):
    corpus_path: str
    topics_path: str
    min_keywords: int = 3
    topic: str = ""  # empty = all topics


class ExplicitResponse(StrictModel):
    min_keywords: int
    matches: dict[str, list[str]]


class ManifestRequest(StrictModel):
    corpus_path: str
    topics_path: str
    out_path: str
    article_strategy: str = "ea"
    topic_strategy: str = "name_only"


class ManifestResponse(StrictModel):
    path: str
    entry_count: int


class RunRequest(StrictModel):
    corpus_path: str
    topics_path: str
    output_dir: str
    provider: str = "pseudo"
    article_strategy: str = "ea"
    topic_strategy: str = "name_only"
    mode: str = "threshold"
    thetas: list[float] = Field(default_factory=list)
    pseudo_dim: int = 64
    store_path: str = ""
    vectors_path: str = ""
    explicit_min_keywords: int = 3
    dataset: str = ""
    jobs: int = 1


class InferRequest(RunRequest):
    theta: float = 0.5


class EvalPoint(StrictModel):
    threshold: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int


class RunResult(StrictModel):
    method: str
    dataset: str
    best: EvalPoint
    points: list[EvalPoint]
    paths: dict[str, str]


def eval_point(report: EvalReport) -> EvalPoint:
    return EvalPoint(
        threshold=report.threshold,
        precision=report.precision,
        recall=report.recall,
        f1=report.f1,
        tp=report.tp,
        fp=report.fp,
        fn=report.fn,
    )


def run_result(report: SweepReport, paths: dict[str, str]) -> RunResult:
    return RunResult(
        method=report.best.method,
        dataset=report.best.dataset,
        best=eval_point(report.best),
        points=[eval_point(r) for _, r in report.points],
        paths=dict(paths),
    )


class GflmRequest(StrictModel):
    corpus_path: str
    topics_path: str
    output_dir: str
    lambda_background: float = 0.7
    topic_seed_smoothing: float = 0.5
    max_iterations: int = 200
    rel_ll_tolerance: float = 1e-6
    thetas: list[float] = Field(default_factory=list)
    dataset: str = ""
    variants: list[str] = Field(default_factory=lambda: ["gflm-w", "gflm-s"])
    jobs: int = 1


class GflmResponse(StrictModel):
    results: dict[str, RunResult]


class ClassicRequest(StrictModel):
    corpus_path: str
    topics_path: str
    vectors_path: str
    output_dir: str
    metric: str = "cosine"
    granularity: str = "sentence"
    include_keywords: bool = True
    thetas: list[float] = Field(default_factory=list)
    dataset: str = ""
    jobs: int = 1


class BenchRequest(StrictModel):
    corpus_path: str
    topics_path: str
    article_strategy: str = "ea"
    topic_strategy: str = "name_only"
    pseudo_dim: int = 64
    jobs: int = 1


class PhaseTiming(StrictModel):
    phase: str
    wall_seconds: float
    unit_count: int


class BenchResponse(StrictModel):
    timings: list[PhaseTiming]


def phase_timing(report: TimingReport) -> PhaseTiming:
    return PhaseTiming(
        phase=report.phase,
        wall_seconds=report.wall_seconds,
        unit_count=report.unit_count,
    )


class EvalRequest(StrictModel):
    predictions_path: str
    corpus_path: str
    topics_path: str = ""  # empty = trust gold labels as written
    method: str = ""
    dataset: str = ""


class EvalResponse(StrictModel):
    method: str
    dataset: str
    threshold: float
    mode: str
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
