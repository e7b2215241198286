"""Zero-shot multi-label topic inference toolkit.

Core pipeline: embed topics and articles with a pluggable provider,
score every (article, topic) pair by cosine similarity, assign topics by
threshold or argmax, and evaluate with micro-averaged precision, recall
and F1.  Generative language-model and static word-vector baselines ship
alongside, plus a FastAPI service and a thin CLI client.
"""

from .corpus import (
    Article,
    CorpusStats,
    TopicSpec,
    corpus_stats,
    load_corpus,
    load_topics,
    make_article,
    split_sentences,
    tokenize,
    validate_gold_topics,
)
from .errors import (
    FormatError,
    MissingStoreKeysError,
    ParseError,
    ProviderError,
    ValidationError,
    ZeroshotTopicsError,
)

__version__ = "0.1.0"

__all__ = [
    "Article",
    "CorpusStats",
    "TopicSpec",
    "corpus_stats",
    "load_corpus",
    "load_topics",
    "make_article",
    "split_sentences",
    "tokenize",
    "validate_gold_topics",
    "FormatError",
    "MissingStoreKeysError",
    "ParseError",
    "ProviderError",
    "ValidationError",
    "ZeroshotTopicsError",
    "__version__",
]
