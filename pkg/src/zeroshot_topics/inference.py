"""Cosine scoring of topic-article pairs and threshold/argmax assignment."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .article_rep import ArticleRepresentation
from .errors import FormatError, ValidationError
from .topic_rep import TopicEmbedding

MODES = ("threshold", "argmax")


@dataclass(frozen=True)
class PredictionSet:
    """Topics assigned to one article, with the score behind each."""

    article_id: str
    assignments: Mapping[str, float]
    threshold: float
    mode: str
    method: str = ""

    @property
    def topics(self) -> frozenset[str]:
        return frozenset(self.assignments)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity, clamped into [-1, 1] against float drift."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValidationError(f"dim mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ValidationError("cosine undefined for zero vector")
    return float(min(1.0, max(-1.0, float(np.dot(a, b)) / (na * nb))))


def score_article(
    rep: ArticleRepresentation, topics: Sequence[TopicEmbedding]
) -> dict[str, float]:
    """Score every topic against one article representation.

    Single-vector representations use the cosine directly; per-sentence
    representations take the best sentence (max over cosines), so one
    on-topic sentence is enough.
    """
    scores: dict[str, float] = {}
    for topic in topics:
        if rep.kind == "single":
            scores[topic.topic] = cosine(rep.vectors[0], topic.vector)
        else:
            scores[topic.topic] = max(cosine(v, topic.vector) for v in rep.vectors)
    return scores


def assign(
    scores: Mapping[str, float],
    threshold: float,
    mode: str = "threshold",
    article_id: str = "",
    method: str = "",
) -> PredictionSet:
    """Turn scores into an assignment.

    threshold mode keeps every topic scoring >= threshold (possibly
    none); argmax keeps exactly the top scorer, ties broken by topic
    name.
    """
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}; expected one of {MODES}")
    if not scores:
        raise ValidationError("empty score map")
    if mode == "threshold":
        if not 0.0 <= threshold <= 1.0:
            raise ValidationError(f"threshold must be in [0, 1], got {threshold}")
        chosen = {t: s for t, s in scores.items() if s >= threshold}
    else:
        # max score, ties to the lexicographically smallest name
        top = max(scores.values())
        name = min(t for t, s in scores.items() if s == top)
        chosen = {name: scores[name]}
    return PredictionSet(
        article_id=article_id,
        assignments=dict(chosen),
        threshold=threshold,
        mode=mode,
        method=method,
    )


def write_predictions(path: str | Path, predictions: Sequence[PredictionSet]) -> None:
    """One JSON object per article; topics sorted by name for stable bytes."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for pred in predictions:
            row: dict = {
                "id": pred.article_id,
                "topics": [
                    {"name": name, "score": pred.assignments[name]}
                    for name in sorted(pred.assignments)
                ],
                "threshold": pred.threshold,
                "mode": pred.mode,
            }
            if pred.method:
                row["method"] = pred.method
            fh.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n")


def read_predictions(path: str | Path) -> list[PredictionSet]:
    path = Path(path)
    out: list[PredictionSet] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
            if (
                not isinstance(row, dict)
                or not isinstance(row.get("id"), str)
                or not isinstance(row.get("topics"), list)
            ):
                raise FormatError(f"{path}:{lineno}: expected {{id, topics, threshold, mode}}")
            try:
                assignments = {t["name"]: float(t["score"]) for t in row["topics"]}
                out.append(
                    PredictionSet(
                        article_id=row["id"],
                        assignments=assignments,
                        threshold=float(row["threshold"]),
                        mode=str(row["mode"]),
                        method=str(row.get("method", "")),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}:{lineno}: malformed prediction row") from exc
    return out
