"""Seeded synthetic corpora for tests and benchmarks.

Everything here is driven by an explicit seed; the same seed always
produces the same corpus, so generated data can serve as its own ground
truth.
"""

from __future__ import annotations

import random
from typing import Sequence

from .corpus import Article, TopicSpec, make_article
from .errors import ValidationError


def synthetic_corpus(
    n_articles: int,
    seed: int,
    topic_names: Sequence[str] = ("Alpha", "Beta", "Gamma"),
    sentences_per_article: tuple[int, int] = (1, 4),
    words_per_sentence: tuple[int, int] = (3, 10),
) -> tuple[list[Article], list[TopicSpec]]:
    """Word-soup articles with random gold labels over the given topics."""
    if n_articles < 1:
        raise ValidationError("n_articles must be >= 1")
    rng = random.Random(seed)
    pool = [f"word{i}" for i in range(40)] + [name.lower() for name in topic_names]
    articles = []
    for i in range(n_articles):
        sentences = []
        for _ in range(rng.randint(*sentences_per_article)):
            words = [rng.choice(pool) for _ in range(rng.randint(*words_per_sentence))]
            sentences.append(" ".join(words) + ".")
        gold = [name for name in topic_names if rng.random() < 0.4]
        articles.append(make_article(f"doc{i:04d}", " ".join(sentences), gold))
    specs = [TopicSpec(name=name) for name in topic_names]
    return articles, specs


def single_topic_sanity_corpus(
    topic_name: str = "Sound",
    n_positive: int = 5,
    n_negative: int = 5,
) -> tuple[list[Article], list[TopicSpec]]:
    """Corpus where positive articles' text is exactly the topic name.

    With any provider that embeds identical texts identically, positives
    score cosine 1.0 against the name-only topic vector, so some
    threshold separates them perfectly.
    """
    articles = []
    for i in range(n_positive):
        articles.append(make_article(f"pos{i}", topic_name, [topic_name]))
    for i in range(n_negative):
        articles.append(
            make_article(f"neg{i}", f"unrelated filler text number {i}.", [])
        )
    return articles, [TopicSpec(name=topic_name)]


def planted_gflm_corpus(
    seed: int,
    n_docs: int = 100,
    n_topics: int = 5,
    words_per_topic: int = 20,
    background_words: int = 30,
    lambda_background: float = 0.5,
    doc_length: tuple[int, int] = (80, 160),
) -> tuple[list[Article], list[TopicSpec]]:
    """Sample documents from the mixture model itself.

    Each topic owns a disjoint seed vocabulary; each document plants one
    or two topics with shares bounded away from zero, then draws every
    token from the background (probability lambda_background, uniform
    over the whole vocabulary) or from a planted topic's seed words.
    The planted topics are the gold labels, so the sampler is the
    ground-truth oracle for recovery experiments.
    """
    rng = random.Random(seed)
    topic_words = {
        f"Topic{t}": [f"t{t}w{j}" for j in range(words_per_topic)]
        for t in range(n_topics)
    }
    bg_only = [f"bg{j}" for j in range(background_words)]
    full_vocab = bg_only + [w for words in topic_words.values() for w in words]
    names = list(topic_words)
    articles = []
    for d in range(n_docs):
        k = rng.choice([1, 2])
        planted = rng.sample(names, k)
        if k == 1:
            shares = {planted[0]: 1.0}
        else:
            first = rng.uniform(0.35, 0.65)
            shares = {planted[0]: first, planted[1]: 1.0 - first}
        tokens = []
        for _ in range(rng.randint(*doc_length)):
            if rng.random() < lambda_background:
                tokens.append(rng.choice(full_vocab))
            else:
                topic = rng.choices(planted, weights=[shares[t] for t in planted])[0]
                tokens.append(rng.choice(topic_words[topic]))
        articles.append(make_article(f"doc{d:04d}", " ".join(tokens), planted))
    specs = [
        TopicSpec(name=name, keywords=tuple(words))
        for name, words in topic_words.items()
    ]
    return articles, specs
