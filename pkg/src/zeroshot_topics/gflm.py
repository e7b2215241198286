"""Per-document mixture of fixed topic language models plus a background
model, fitted with EM; word-level and share-level topic inference rules.

Each document D is modeled as
    p(w|D) = lam_B * p(w|B) + (1 - lam_B) * sum_t pi_t * p(w|t)
where only the per-document topic shares pi are estimated.  Topic models
are built once from seed tokens (name and keywords) interpolated with
the background; the background is an add-one-smoothed corpus unigram
model, so every in-vocabulary word has positive probability everywhere.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import Article, TopicSpec, tokenize
from .errors import ValidationError


@dataclass(frozen=True)
class LanguageModel:
    """Unigram distribution over the corpus vocabulary; all entries > 0."""

    probs: Mapping[str, float]


@dataclass(frozen=True)
class GflmConfig:
    lambda_background: float = 0.7
    topic_seed_smoothing: float = 0.5
    max_iterations: int = 200
    rel_ll_tolerance: float = 1e-6

    def __post_init__(self):
        if not 0.0 <= self.lambda_background < 1.0:
            raise ValidationError("lambda_background must be in [0, 1)")
        if not 0.0 < self.topic_seed_smoothing < 1.0:
            raise ValidationError("topic_seed_smoothing must be in (0, 1)")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if self.rel_ll_tolerance <= 0:
            raise ValidationError("rel_ll_tolerance must be > 0")


@dataclass(frozen=True)
class GflmDocumentFit:
    """EM result for one document.

    word_topic_resp[(w, t)] is the probability that an occurrence of w
    came from topic t given it did not come from the background;
    word_background_resp[w] is the probability it came from the
    background.  Both are consistent with the final pi.
    """

    article_id: str
    pi: Mapping[str, float]
    word_topic_resp: Mapping[tuple[str, str], float]
    word_background_resp: Mapping[str, float]
    log_likelihood_trace: tuple[float, ...]


def build_background_lm(corpus: Sequence[Article]) -> LanguageModel:
    """Add-one-smoothed unigram distribution over all corpus tokens."""
    if not corpus:
        raise ValidationError("background model requires a non-empty corpus")
    counts: Counter[str] = Counter()
    for article in corpus:
        counts.update(article.tokens)
    if not counts:
        raise ValidationError("corpus has no tokens")
    total = sum(counts.values())
    vocab_size = len(counts)
    denom = total + vocab_size
    return LanguageModel({w: (c + 1) / denom for w, c in counts.items()})


def build_topic_lm(
    topic: TopicSpec, background: LanguageModel, smoothing: float
) -> LanguageModel:
    """Seed-uniform distribution interpolated with the background.

    Seeds are the distinct tokens of the topic name and keywords that
    exist in the corpus vocabulary; out-of-vocabulary seeds are dropped.
    p(w|t) = (1 - mu) * uniform_over_seeds(w) + mu * p(w|B).
    """
    if not 0.0 < smoothing < 1.0:
        raise ValidationError("smoothing must be in (0, 1)")
    seeds: set[str] = set(tokenize(topic.name))
    for kw in topic.keywords:
        seeds.update(tokenize(kw))
    seeds &= set(background.probs)
    if not seeds:
        raise ValidationError(
            f"topic {topic.name!r} has no seed token in the corpus vocabulary"
        )
    uniform = 1.0 / len(seeds)
    mu = smoothing
    probs = {
        w: (1.0 - mu) * (uniform if w in seeds else 0.0) + mu * pb
        for w, pb in background.probs.items()
    }
    return LanguageModel(probs)


def fit_document(
    article: Article,
    topic_lms: Mapping[str, LanguageModel],
    background: LanguageModel,
    config: GflmConfig,
) -> GflmDocumentFit:
    """Estimate the document's topic shares pi by EM.

    pi starts uniform; words iterate in sorted order, so the fit is
    fully deterministic.  The log-likelihood trace starts at the initial
    pi and is non-decreasing; iteration stops when the relative change
    drops below rel_ll_tolerance or after max_iterations.
    """
    if not topic_lms:
        raise ValidationError("fit_document requires at least one topic model")
    if not article.tokens:
        raise ValidationError(f"article {article.id!r} has no tokens")
    token_counts = Counter(article.tokens)
    words = sorted(w for w in token_counts if w in background.probs)
    if not words:
        raise ValidationError(
            f"article {article.id!r} has no token in the corpus vocabulary"
        )
    topic_names = sorted(topic_lms)
    counts = np.array([token_counts[w] for w in words], dtype=np.float64)
    p_bg = np.array([background.probs[w] for w in words], dtype=np.float64)
    try:
        p_topic = np.array(
            [[topic_lms[t].probs[w] for w in words] for t in topic_names],
            dtype=np.float64,
        )
    except KeyError as exc:
        raise ValidationError(
            f"topic model missing word {exc.args[0]!r}; was it built on this corpus?"
        ) from exc
    lam = config.lambda_background
    n_topics = len(topic_names)
    pi = np.full(n_topics, 1.0 / n_topics)

    def log_likelihood(pi_vec: np.ndarray) -> float:
        mix = p_topic.T @ pi_vec
        p_doc = lam * p_bg + (1.0 - lam) * mix
        return float(np.dot(counts, np.log(p_doc)))

    def e_step(pi_vec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        mix = p_topic.T @ pi_vec
        p_doc = lam * p_bg + (1.0 - lam) * mix
        resp_bg = lam * p_bg / p_doc
        resp_topic = (pi_vec[:, None] * p_topic) / mix[None, :]
        return resp_bg, resp_topic

    ll_prev = log_likelihood(pi)
    trace = [ll_prev]
    for _ in range(config.max_iterations):
        resp_bg, resp_topic = e_step(pi)
        weights = counts * (1.0 - resp_bg)
        numer = resp_topic @ weights
        pi = numer / numer.sum()
        ll = log_likelihood(pi)
        trace.append(ll)
        if abs(ll - ll_prev) / max(abs(ll_prev), 1e-12) < config.rel_ll_tolerance:
            break
        ll_prev = ll
    # responsibilities consistent with the returned pi
    resp_bg, resp_topic = e_step(pi)
    word_topic_resp = {
        (w, t): float(resp_topic[ti, wi])
        for ti, t in enumerate(topic_names)
        for wi, w in enumerate(words)
    }
    word_background_resp = {w: float(resp_bg[wi]) for wi, w in enumerate(words)}
    return GflmDocumentFit(
        article_id=article.id,
        pi={t: float(pi[ti]) for ti, t in enumerate(topic_names)},
        word_topic_resp=word_topic_resp,
        word_background_resp=word_background_resp,
        log_likelihood_trace=tuple(trace),
    )


def gflm_word_scores(fit: GflmDocumentFit) -> dict[str, float]:
    """Per-topic best word evidence: max over words of resp_t * (1 - resp_B).

    A topic passes the word rule at threshold theta iff its score here
    is strictly greater than theta.
    """
    scores = {t: 0.0 for t in fit.pi}
    for (word, topic), resp in fit.word_topic_resp.items():
        value = resp * (1.0 - fit.word_background_resp[word])
        if value > scores[topic]:
            scores[topic] = value
    return scores


def gflm_sentence_scores(fit: GflmDocumentFit) -> dict[str, float]:
    """Topic shares pi; the share rule assigns topics with pi strictly
    above the threshold."""
    return dict(fit.pi)


def gflm_w_infer(fit: GflmDocumentFit, article: Article, theta: float) -> set[str]:
    """Topics with at least one word whose topic responsibility, discounted
    by the background responsibility, strictly exceeds theta."""
    if not 0.0 <= theta <= 1.0:
        raise ValidationError(f"theta must be in [0, 1], got {theta}")
    if fit.article_id != article.id:
        raise ValidationError(
            f"fit was computed for article {fit.article_id!r}, not {article.id!r}"
        )
    scores = gflm_word_scores(fit)
    return {t for t, s in scores.items() if s > theta}


def gflm_s_infer(fit: GflmDocumentFit, theta: float) -> set[str]:
    """Topics whose estimated document share strictly exceeds theta."""
    if not 0.0 <= theta <= 1.0:
        raise ValidationError(f"theta must be in [0, 1], got {theta}")
    return {t for t, s in fit.pi.items() if s > theta}
