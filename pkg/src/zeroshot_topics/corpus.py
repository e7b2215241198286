"""Corpus and topic-file loading, text segmentation, and summary statistics.

Corpus files are JSONL, one ``{"id", "text", "topics"}`` object per line.
Topic files hold a single JSON object ``{"topics": [{"name", "keywords",
"definitions"}]}``; keywords and definitions are optional per topic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, ValidationError

# Unicode letters and digits; underscore excluded so "a_b" splits.
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

_TERMINATORS = ".!?"


@dataclass(frozen=True)
class Article:
    """One document: raw text plus its derived sentence and token views.

    Immutable after construction; safe to share across threads.
    """

    id: str
    text: str
    sentences: tuple[str, ...]
    tokens: tuple[str, ...]
    gold_topics: frozenset[str] = frozenset()


@dataclass(frozen=True)
class TopicSpec:
    """A user-provided topic: name plus optional keywords and definitions."""

    name: str
    keywords: tuple[str, ...] = ()
    definitions: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class CorpusStats:
    article_count: int
    unique_topics: int
    avg_article_length_tokens: float
    topics_per_article: float


def split_sentences(text: str) -> list[str]:
    """Split text at '.', '!' or '?' followed by whitespace or end-of-text.

    Deterministic rule-based segmentation; surrounding whitespace is
    stripped from each segment and empty segments are dropped.  Known
    limitation: abbreviations split ("Dr. Smith" -> "Dr.", "Smith ...").
    """
    sentences: list[str] = []
    start = 0
    n = len(text)
    for i, ch in enumerate(text):
        if ch in _TERMINATORS and (i + 1 == n or text[i + 1].isspace()):
            segment = text[start : i + 1].strip()
            if segment:
                sentences.append(segment)
            start = i + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize(text: str) -> list[str]:
    """Lowercase and split on any non-alphanumeric character."""
    return _WORD_RE.findall(text.lower())


def make_article(article_id: str, text: str, topics: Iterable[str] = ()) -> Article:
    """Build an Article, deriving sentences and tokens from the text."""
    if not article_id:
        raise ValidationError("article id must be non-empty")
    return Article(
        id=article_id,
        text=text,
        sentences=tuple(split_sentences(text)),
        tokens=tuple(tokenize(text)),
        gold_topics=frozenset(topics),
    )


def load_corpus(path: str | Path, format: str = "jsonl") -> list[Article]:
    """Load a JSONL corpus file, one Article per line, in file order.

    Blank lines are skipped.  A malformed line raises ParseError naming
    the line number; a duplicate article id raises ValidationError.
    """
    if format != "jsonl":
        raise ValidationError(f"unsupported corpus format: {format!r}")
    path = Path(path)
    articles: list[Article] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise ParseError(f"{path}:{lineno}: expected a JSON object")
            try:
                article_id = obj["id"]
                text = obj["text"]
                topics = obj["topics"]
            except KeyError as exc:
                raise ParseError(f"{path}:{lineno}: missing field {exc.args[0]!r}") from exc
            if not isinstance(article_id, str) or not article_id:
                raise ParseError(f"{path}:{lineno}: 'id' must be a non-empty string")
            if not isinstance(text, str):
                raise ParseError(f"{path}:{lineno}: 'text' must be a string")
            if not isinstance(topics, list) or any(not isinstance(t, str) for t in topics):
                raise ParseError(f"{path}:{lineno}: 'topics' must be a list of strings")
            if article_id in seen:
                raise ValidationError(f"{path}: duplicate article id {article_id!r}")
            seen.add(article_id)
            articles.append(make_article(article_id, text, topics))
    return articles


def load_topics(path: str | Path) -> list[TopicSpec]:
    """Load a topics JSON file.

    Topic names must be unique case-insensitively.  Keywords are deduped
    case-insensitively, first occurrence wins; definitions keys are kept
    as written and looked up case-insensitively downstream.
    """
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict) or not isinstance(obj.get("topics"), list):
        raise ParseError(f"{path}: expected an object with a 'topics' list")
    specs: list[TopicSpec] = []
    seen_names: set[str] = set()
    for i, entry in enumerate(obj["topics"]):
        where = f"{path}: topics[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: expected an object")
        name = entry.get("name")
        if not isinstance(name, str) or not name.strip():
            raise ParseError(f"{where}: 'name' must be a non-empty string")
        folded = name.lower()
        if folded in seen_names:
            raise ValidationError(f"{path}: duplicate topic name {name!r} (case-insensitive)")
        seen_names.add(folded)
        raw_keywords = entry.get("keywords", [])
        if not isinstance(raw_keywords, list) or any(not isinstance(k, str) for k in raw_keywords):
            raise ParseError(f"{where}: 'keywords' must be a list of strings")
        keywords: list[str] = []
        kw_seen: set[str] = set()
        for kw in raw_keywords:
            if kw.lower() not in kw_seen:
                kw_seen.add(kw.lower())
                keywords.append(kw)
        definitions = entry.get("definitions", {})
        if not isinstance(definitions, dict) or any(
            not isinstance(k, str) or not isinstance(v, str) for k, v in definitions.items()
        ):
            raise ParseError(f"{where}: 'definitions' must map term strings to gloss strings")
        specs.append(TopicSpec(name=name, keywords=tuple(keywords), definitions=dict(definitions)))
    return specs


def write_corpus(path: str | Path, articles: Sequence[Article]) -> None:
    """Serialize articles back to corpus JSONL (inverse of load_corpus)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for a in articles:
            row = {"id": a.id, "text": a.text, "topics": sorted(a.gold_topics)}
            fh.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n")


def write_topics(path: str | Path, topics: Sequence[TopicSpec]) -> None:
    """Serialize topic entries to the topics JSON format."""
    payload = {
        "topics": [
            {
                "name": t.name,
                "keywords": list(t.keywords),
                "definitions": dict(t.definitions),
            }
            for t in topics
        ]
    }
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def validate_gold_topics(
    articles: Sequence[Article], topics: Sequence[TopicSpec]
) -> dict[str, frozenset[str]]:
    """Map every article's gold topics onto the canonical topic names.

    Matching is case-insensitive; a gold topic that matches none of the
    defined topics raises ValidationError.  Returns ``{article_id:
    canonical gold set}``.
    """
    canonical = {t.name.lower(): t.name for t in topics}
    gold: dict[str, frozenset[str]] = {}
    for article in articles:
        mapped = set()
        for name in article.gold_topics:
            canon = canonical.get(name.lower())
            if canon is None:
                raise ValidationError(
                    f"article {article.id!r}: gold topic {name!r} is not a defined topic"
                )
            mapped.add(canon)
        gold[article.id] = frozenset(mapped)
    return gold


def corpus_stats(articles: Sequence[Article]) -> CorpusStats:
    """Summary statistics over a non-empty article list."""
    if not articles:
        raise ValidationError("corpus_stats requires a non-empty article list")
    n = len(articles)
    unique: set[str] = set()
    for a in articles:
        unique.update(a.gold_topics)
    return CorpusStats(
        article_count=n,
        unique_topics=len(unique),
        avg_article_length_tokens=sum(len(a.tokens) for a in articles) / n,
        topics_per_article=sum(len(a.gold_topics) for a in articles) / n,
    )
