"""Static word-vector baseline: topics and articles represented by
averaged word vectors, compared by cosine or Euclidean similarity at
article or word granularity."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Article, TopicSpec, tokenize
from .embeddings import WordVectorTable, average_word_vectors
from .errors import ValidationError
from .inference import PredictionSet, cosine

log = logging.getLogger(__name__)

CLASSIC_METRICS = ("cosine", "euclidean")
CLASSIC_GRANULARITIES = ("word", "sentence")


@dataclass(frozen=True)
class ClassicConfig:
    metric: str = "cosine"
    granularity: str = "sentence"
    threshold: float = 0.5
    include_keywords_in_topic: bool = True

    def __post_init__(self):
        if self.metric not in CLASSIC_METRICS:
            raise ValidationError(
                f"unknown metric {self.metric!r}; expected one of {CLASSIC_METRICS}"
            )
        if self.granularity not in CLASSIC_GRANULARITIES:
            raise ValidationError(
                f"unknown granularity {self.granularity!r}; "
                f"expected one of {CLASSIC_GRANULARITIES}"
            )
        if self.threshold < 0:
            raise ValidationError("threshold must be >= 0")
        if self.metric == "cosine" and self.threshold > 1:
            raise ValidationError("cosine threshold must be in [0, 1]")

    @property
    def method(self) -> str:
        return f"classic-{self.metric}-{self.granularity}"


def _similarity(a: np.ndarray, b: np.ndarray, metric: str) -> float:
    if metric == "cosine":
        return cosine(a, b)
    # distance folded into (0, 1] so one threshold rule covers both metrics
    return 1.0 / (1.0 + float(np.linalg.norm(a - b)))


def topic_vector(
    topic: TopicSpec, table: WordVectorTable, include_keywords: bool = True
) -> np.ndarray | None:
    """Average vector of the topic's name tokens (plus keyword tokens).

    None when no token is in vocabulary; callers skip such topics.
    """
    tokens = list(tokenize(topic.name))
    if include_keywords:
        for kw in topic.keywords:
            tokens.extend(tokenize(kw))
    return average_word_vectors(tokens, table)


def classic_scores(
    article: Article,
    topics: Sequence[TopicSpec],
    table: WordVectorTable,
    config: ClassicConfig,
) -> dict[str, float]:
    """Similarity of each topic to the article under the configured
    metric and granularity.

    Sentence granularity compares one averaged article vector per topic;
    word granularity compares every in-vocabulary article token and
    keeps the best.  Topics with no in-vocabulary token are skipped with
    a warning; an article with no in-vocabulary token scores nothing.
    """
    scores: dict[str, float] = {}
    topic_vecs: dict[str, np.ndarray] = {}
    for topic in topics:
        vec = topic_vector(topic, table, config.include_keywords_in_topic)
        if vec is None:
            log.warning(
                "topic %r has no in-vocabulary token; skipped", topic.name
            )
            continue
        topic_vecs[topic.name] = vec
    if config.granularity == "sentence":
        article_vec = average_word_vectors(article.tokens, table)
        if article_vec is None:
            return {}
        for name, tvec in topic_vecs.items():
            scores[name] = _similarity(article_vec, tvec, config.metric)
        return scores
    word_vecs = [table.get(tok) for tok in article.tokens]
    word_vecs = [v for v in word_vecs if v is not None]
    if not word_vecs:
        return {}
    for name, tvec in topic_vecs.items():
        scores[name] = max(_similarity(wv, tvec, config.metric) for wv in word_vecs)
    return scores


def classic_infer(
    article: Article,
    topics: Sequence[TopicSpec],
    table: WordVectorTable,
    config: ClassicConfig,
) -> PredictionSet:
    """Assign every topic whose similarity reaches the threshold."""
    scores = classic_scores(article, topics, table, config)
    assignments = {t: s for t, s in scores.items() if s >= config.threshold}
    return PredictionSet(
        article_id=article.id,
        assignments=assignments,
        threshold=config.threshold,
        mode="threshold",
        method=config.method,
    )
