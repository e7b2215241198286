"""Article representations: one vector for the whole text, the mean of
its sentence vectors, or the per-sentence vectors kept separate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Article
from .embeddings import EmbeddingProvider, article_key, sentence_key
from .errors import ValidationError

ARTICLE_STRATEGIES = ("ea", "sea", "ise")


@dataclass(frozen=True)
class ArticleRepresentation:
    """kind="single" carries exactly one vector; kind="per_sentence"
    carries one vector per sentence in sentence order."""

    article_id: str
    kind: str
    vectors: tuple[np.ndarray, ...]


def normalize_article_strategy(strategy: str) -> str:
    s = strategy.lower()
    if s not in ARTICLE_STRATEGIES:
        raise ValidationError(
            f"unknown article strategy {strategy!r}; expected one of {ARTICLE_STRATEGIES}"
        )
    return s


def embed_article(
    article: Article, strategy: str, provider: EmbeddingProvider
) -> ArticleRepresentation:
    """Embed an article under one of the three strategies.

    "ea" encodes the full text at once; "sea" averages the sentence
    vectors into one; "ise" keeps every sentence vector so downstream
    scoring can take a max over sentences.
    """
    strategy = normalize_article_strategy(strategy)
    if strategy == "ea":
        if not article.text:
            raise ValidationError(f"article {article.id!r} has empty text")
        vec = provider.embed(article_key(article.id), article.text)
        return ArticleRepresentation(article.id, "single", (vec,))
    if not article.sentences:
        raise ValidationError(f"article {article.id!r} has no sentences")
    sent_vecs = tuple(
        provider.embed(sentence_key(article.id, i), sent)
        for i, sent in enumerate(article.sentences)
    )
    if strategy == "sea":
        mean = np.mean(np.stack(sent_vecs), axis=0)
        return ArticleRepresentation(article.id, "single", (mean,))
    return ArticleRepresentation(article.id, "per_sentence", sent_vecs)
