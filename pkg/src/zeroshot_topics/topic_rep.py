"""Topic representations, explicit-mention annotation, and TF-IDF
keyword suggestion.

Four ways to turn a topic into a vector: the bare name, the name
averaged with its keywords, the averaged dictionary glosses of name and
keywords, or the mean of whole-article embeddings of articles that
mention the topic explicitly.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Article, TopicSpec, tokenize
from .embeddings import EmbeddingProvider, article_key, text_key
from .errors import ValidationError

TOPIC_STRATEGIES = ("name_only", "name_plus_keywords", "definitions", "explicit_mentions")


@dataclass(frozen=True)
class TopicEmbeddingConfig:
    strategy: str = "name_only"
    explicit_min_keywords: int = 3
    article_embed_for_explicit: str = "entire_article"

    def __post_init__(self):
        if self.strategy not in TOPIC_STRATEGIES:
            raise ValidationError(
                f"unknown topic strategy {self.strategy!r}; expected one of {TOPIC_STRATEGIES}"
            )
        if self.explicit_min_keywords < 1:
            raise ValidationError("explicit_min_keywords must be >= 1")
        if self.article_embed_for_explicit != "entire_article":
            raise ValidationError("only entire_article embedding is supported for explicit mentions")


@dataclass(frozen=True)
class TopicEmbedding:
    topic: str
    vector: np.ndarray
    source_count: int


def gloss_or_term(topic: TopicSpec, term: str) -> str:
    """Definition text for a term, the term itself when no gloss exists."""
    if term in topic.definitions:
        return topic.definitions[term]
    folded = term.lower()
    for key, gloss in topic.definitions.items():
        if key.lower() == folded:
            return gloss
    return term


def _mean(vectors: Sequence[np.ndarray]) -> np.ndarray:
    return np.mean(np.stack(vectors), axis=0)


def _embed_text(provider: EmbeddingProvider, text: str) -> np.ndarray:
    return provider.embed(text_key(text), text)


def embed_topic(
    topic: TopicSpec,
    config: TopicEmbeddingConfig,
    provider: EmbeddingProvider,
    corpus: Sequence[Article] = (),
) -> TopicEmbedding:
    """Build one vector for the topic under the configured strategy.

    explicit_mentions scans the corpus with annotate_explicit and
    averages whole-article embeddings of the flagged articles; a topic
    nobody mentions falls back to its bare name (source_count=1).
    """
    strategy = config.strategy
    if strategy == "name_only":
        return TopicEmbedding(topic.name, _embed_text(provider, topic.name), 1)
    if strategy == "name_plus_keywords":
        texts = [topic.name, *topic.keywords]
        vecs = [_embed_text(provider, t) for t in texts]
        return TopicEmbedding(topic.name, _mean(vecs), len(vecs))
    if strategy == "definitions":
        texts = [gloss_or_term(topic, term) for term in (topic.name, *topic.keywords)]
        vecs = [_embed_text(provider, t) for t in texts]
        return TopicEmbedding(topic.name, _mean(vecs), len(vecs))
    # explicit_mentions
    if not corpus:
        raise ValidationError(
            f"explicit_mentions for topic {topic.name!r} requires a non-empty corpus"
        )
    flagged = [
        a for a in corpus if annotate_explicit(a, topic, config.explicit_min_keywords)
    ]
    if not flagged:
        return TopicEmbedding(topic.name, _embed_text(provider, topic.name), 1)
    vecs = [provider.embed(article_key(a.id), a.text) for a in flagged]
    return TopicEmbedding(topic.name, _mean(vecs), len(vecs))


def _contains_sequence(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    n = len(needle)
    if n == 0 or n > len(haystack):
        return False
    first = needle[0]
    for i in range(len(haystack) - n + 1):
        if haystack[i] == first and tuple(haystack[i : i + n]) == tuple(needle):
            return True
    return False


def annotate_explicit(article: Article, topic: TopicSpec, min_keywords: int = 3) -> bool:
    """True iff the article mentions the topic explicitly.

    Either the topic-name token sequence occurs contiguously in the
    article tokens, or at least min(min_keywords, number of keywords)
    distinct keywords occur (each as a contiguous token sequence).
    Keywords are distinct by token sequence, so "Health-Care" and
    "health care" count once.  Topics without keywords rely on the name
    clause alone.

    Caveat: growing a keyword list that is still below min_keywords
    raises the required match count with it, so adding keywords is only
    guaranteed to never drop an article once the list has reached
    min_keywords entries.
    """
    if min_keywords < 1:
        raise ValidationError("min_keywords must be >= 1")
    tokens = article.tokens
    name_seq = tuple(tokenize(topic.name))
    if name_seq and _contains_sequence(tokens, name_seq):
        return True
    keyword_seqs = {tuple(tokenize(k)) for k in topic.keywords}
    keyword_seqs.discard(())
    if not keyword_seqs:
        return False
    needed = min(min_keywords, len(topic.keywords))
    matched = sum(1 for seq in keyword_seqs if _contains_sequence(tokens, seq))
    return matched >= needed


def suggest_keywords(corpus: Sequence[Article], topic: str, k: int) -> list[str]:
    """Rank candidate keywords for a topic by TF-IDF over its articles.

    Tokens of every article gold-labeled with the topic are pooled into
    one pseudo-document; each term scores tf(term, pool) * ln(N / df)
    with N the corpus size and df the number of articles containing the
    term.  Terms appearing in the topic name are excluded.  Ties break
    lexicographically, so the ranking does not depend on corpus order.
    Candidates only; curation stays with the user.
    """
    if k < 1:
        raise ValidationError("k must be >= 1")
    folded = topic.lower()
    labeled = [a for a in corpus if any(g.lower() == folded for g in a.gold_topics)]
    if not labeled:
        raise ValidationError(f"no article is gold-labeled with topic {topic!r}")
    pool: Counter[str] = Counter()
    for a in labeled:
        pool.update(a.tokens)
    df: Counter[str] = Counter()
    for a in corpus:
        df.update(set(a.tokens))
    n = len(corpus)
    name_tokens = set(tokenize(topic))
    scored = [
        (term, tf * math.log(n / df[term]))
        for term, tf in pool.items()
        if term not in name_tokens
    ]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return [term for term, _ in scored[:k]]
