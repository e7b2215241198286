"""Micro-averaged precision/recall/F1, threshold sweeps, and timing.

Counts are summed over the whole corpus before any ratio is taken, so
large articles weigh exactly their label count.  Undefined ratios
(zero denominator) are reported as 0 by convention.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

from .errors import ValidationError

T = TypeVar("T")


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    threshold: float
    method: str = ""
    dataset: str = ""


@dataclass(frozen=True)
class SweepReport:
    points: tuple[tuple[float, EvalReport], ...]
    best: EvalReport


@dataclass(frozen=True)
class TimingReport:
    phase: str
    wall_seconds: float
    unit_count: int


def micro_prf(
    gold: Mapping[str, frozenset[str] | set[str]],
    pred: Mapping[str, frozenset[str] | set[str]],
    threshold: float = 0.0,
    method: str = "",
    dataset: str = "",
) -> EvalReport:
    """Micro-averaged scores; an article missing from pred counts as an
    empty prediction, but predicting an unknown article is an error."""
    unknown = set(pred) - set(gold)
    if unknown:
        raise ValidationError(
            f"predictions for articles absent from gold: {sorted(unknown)[:5]}"
        )
    tp = fp = fn = 0
    for article_id, gold_set in gold.items():
        pred_set = set(pred.get(article_id, frozenset()))
        gold_set = set(gold_set)
        tp += len(pred_set & gold_set)
        fp += len(pred_set - gold_set)
        fn += len(gold_set - pred_set)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return EvalReport(
        tp=tp,
        fp=fp,
        fn=fn,
        precision=precision,
        recall=recall,
        f1=f1,
        threshold=threshold,
        method=method,
        dataset=dataset,
    )


def default_theta_grid() -> list[float]:
    """101 thresholds from 0.00 to 1.00 in steps of 0.01."""
    return [i / 100 for i in range(101)]


def sweep(
    score_maps: Mapping[str, Mapping[str, float]],
    gold: Mapping[str, frozenset[str] | set[str]],
    thetas: Sequence[float],
    strict: bool = False,
    method: str = "",
    dataset: str = "",
) -> SweepReport:
    """Evaluate every threshold and pick the best by F1 (ties go to the
    lowest threshold).

    strict=False assigns topics scoring >= theta (the cosine pipeline's
    rule); strict=True requires > theta (the language-model rules).
    Articles present in gold but absent from score_maps count as empty
    predictions.
    """
    if not thetas:
        raise ValidationError("theta grid must be non-empty")
    grid = sorted(set(thetas))
    if grid[0] < 0.0 or grid[-1] > 1.0:
        raise ValidationError("every theta must be in [0, 1]")
    unknown = set(score_maps) - set(gold)
    if unknown:
        raise ValidationError(
            f"scores for articles absent from gold: {sorted(unknown)[:5]}"
        )
    points = []
    best: EvalReport | None = None
    for theta in grid:
        if strict:
            pred = {
                a: {t for t, s in scores.items() if s > theta}
                for a, scores in score_maps.items()
            }
        else:
            pred = {
                a: {t for t, s in scores.items() if s >= theta}
                for a, scores in score_maps.items()
            }
        report = micro_prf(gold, pred, threshold=theta, method=method, dataset=dataset)
        points.append((theta, report))
        if best is None or report.f1 > best.f1:
            best = report
    return SweepReport(points=tuple(points), best=best)


def time_phase(
    label: str, thunk: Callable[[], T], unit_count: int = 1
) -> tuple[T, TimingReport]:
    """Run the thunk and report wall-clock seconds around it."""
    start = time.perf_counter()
    result = thunk()
    elapsed = time.perf_counter() - start
    return result, TimingReport(phase=label, wall_seconds=elapsed, unit_count=unit_count)


def _report_dict(report: EvalReport) -> dict:
    return {
        "threshold": report.threshold,
        "tp": report.tp,
        "fp": report.fp,
        "fn": report.fn,
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
    }


def write_sweep_json(path: str | Path, report: SweepReport) -> None:
    payload = {
        "method": report.best.method,
        "dataset": report.best.dataset,
        "best": _report_dict(report.best),
        "points": [_report_dict(r) for _, r in report.points],
    }
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def write_sweep_csv(path: str | Path, report: SweepReport) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["threshold", "precision", "recall", "f1"])
        for theta, point in report.points:
            writer.writerow([repr(theta), repr(point.precision), repr(point.recall), repr(point.f1)])


def read_sweep_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_timings(path: str | Path, timings: Iterable[TimingReport]) -> None:
    payload = [asdict(t) for t in timings]
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
