"""Embedding providers, vector stores, and word-vector tables.

Two vector sources feed the pipeline: a deterministic hash-seeded
generator (no model needed, stable across platforms) and precomputed
stores produced offline by a real encoder.  Both speak the same small
JSONL store format so runs are reproducible byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Iterable, Iterator, Protocol, Sequence

import numpy as np

from .corpus import tokenize
from .errors import FormatError, ProviderError, ValidationError

_MASK64 = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_XS_MULT = 0x2545F4914F6CDD1D


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def pseudo_embed(text: str, dim: int) -> np.ndarray:
    """Deterministic unit vector derived only from the text's UTF-8 bytes.

    Seeds an xorshift64* generator with the FNV-1a hash of the text
    (zero seed falls back to the FNV offset basis), draws ``dim`` values
    in [-1, 1), and L2-normalizes.  Same text, same vector, everywhere.
    """
    if dim < 2:
        raise ValidationError(f"dim must be >= 2, got {dim}")
    state = fnv1a64(text.encode("utf-8"))
    if state == 0:
        state = _FNV_OFFSET
    raw: list[float] = []
    for _ in range(dim):
        state ^= state >> 12
        state = (state ^ (state << 25)) & _MASK64
        state ^= state >> 27
        raw.append(((state * _XS_MULT) & _MASK64) / 2**63 - 1.0)
    # Left-to-right accumulation, pinned so every port of this recipe
    # produces bit-identical vectors.
    acc = 0.0
    for x in raw:
        acc += x * x
    norm = math.sqrt(acc)
    if norm == 0.0:
        raise ProviderError(f"degenerate zero vector for text {text!r}")
    return np.array([x / norm for x in raw], dtype=np.float64)


def article_key(article_id: str) -> str:
    return f"article:{article_id}"


def sentence_key(article_id: str, index: int) -> str:
    """Key for an article's index-th sentence (0-based)."""
    return f"article:{article_id}:sent:{index}"


def text_key(text: str) -> str:
    """Content-addressed key for free-standing texts (topic names etc.)."""
    return "text:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


class EmbeddingStore:
    """In-memory map from string keys to fixed-dimension vectors.

    File format: JSONL, a ``{"dim": d}`` header line followed by one
    ``{"key": ..., "vec": [...]}`` line per vector, insertion-ordered.
    write -> read -> write reproduces the file byte for byte.
    """

    def __init__(self, dim: int, vectors: dict[str, np.ndarray] | None = None):
        if dim < 1:
            raise ValidationError(f"store dim must be >= 1, got {dim}")
        self.dim = dim
        self._vectors: dict[str, np.ndarray] = {}
        for key, vec in (vectors or {}).items():
            self.put(key, vec)

    def put(self, key: str, vec: np.ndarray) -> None:
        arr = np.asarray(vec, dtype=np.float64)
        if arr.shape != (self.dim,):
            raise ValidationError(
                f"vector for {key!r} has shape {arr.shape}, expected ({self.dim},)"
            )
        if not np.all(np.isfinite(arr)):
            raise ValidationError(f"vector for {key!r} has non-finite entries")
        self._vectors[key] = arr

    def get(self, key: str) -> np.ndarray | None:
        return self._vectors.get(key)

    def __contains__(self, key: str) -> bool:
        return key in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def keys(self) -> Iterator[str]:
        return iter(self._vectors)

    def items(self) -> Iterator[tuple[str, np.ndarray]]:
        return iter(self._vectors.items())

    def write(self, path: str | Path) -> None:
        path = Path(path)
        with path.open("w", encoding="utf-8") as fh:
            fh.write(json.dumps({"dim": self.dim}, separators=(",", ":")) + "\n")
            for key, vec in self._vectors.items():
                row = {"key": key, "vec": vec.tolist()}
                fh.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n")

    @classmethod
    def read(cls, path: str | Path) -> "EmbeddingStore":
        path = Path(path)
        with path.open("r", encoding="utf-8") as fh:
            header_line = fh.readline()
            if not header_line.strip():
                raise FormatError(f"{path}: missing header line")
            try:
                header = json.loads(header_line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:1: invalid JSON header: {exc.msg}") from exc
            if (
                not isinstance(header, dict)
                or not isinstance(header.get("dim"), int)
                or isinstance(header.get("dim"), bool)
                or header["dim"] < 1
            ):
                raise FormatError(f"{path}:1: header must be {{\"dim\": positive int}}")
            store = cls(dim=header["dim"])
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise FormatError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
                if not isinstance(row, dict):
                    raise FormatError(f"{path}:{lineno}: expected a JSON object")
                key = row.get("key")
                vec = row.get("vec")
                if not isinstance(key, str) or not key:
                    raise FormatError(f"{path}:{lineno}: 'key' must be a non-empty string")
                if key in store:
                    raise FormatError(f"{path}:{lineno}: duplicate key {key!r}")
                if (
                    not isinstance(vec, list)
                    or len(vec) != store.dim
                    or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in vec)
                ):
                    raise FormatError(
                        f"{path}:{lineno}: 'vec' must be a list of {store.dim} numbers"
                    )
                try:
                    store.put(key, np.asarray(vec, dtype=np.float64))
                except ValidationError as exc:
                    raise FormatError(f"{path}:{lineno}: {exc}") from exc
        return store


def write_manifest(path: str | Path, items: Iterable[tuple[str, str]]) -> None:
    """Write (key, text) pairs as JSONL for an offline encoder to consume."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for key, text in items:
            row = {"key": key, "text": text}
            fh.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n")


def read_manifest(path: str | Path) -> list[tuple[str, str]]:
    path = Path(path)
    items: list[tuple[str, str]] = []
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
                or not isinstance(row.get("key"), str)
                or not isinstance(row.get("text"), str)
            ):
                raise FormatError(f"{path}:{lineno}: expected {{\"key\": str, \"text\": str}}")
            items.append((row["key"], row["text"]))
    return items


class EmbeddingProvider(Protocol):
    """Anything that can turn a keyed text into a fixed-dimension vector."""

    dim: int

    def embed(self, key: str, text: str) -> np.ndarray: ...


class PseudoProvider:
    """Provider backed by the hash-seeded generator; ignores the key."""

    def __init__(self, dim: int):
        if dim < 2:
            raise ValidationError(f"dim must be >= 2, got {dim}")
        self.dim = dim
        self._cache: dict[str, np.ndarray] = {}

    def embed(self, key: str, text: str) -> np.ndarray:
        vec = self._cache.get(text)
        if vec is None:
            vec = pseudo_embed(text, self.dim)
            self._cache[text] = vec
        return vec


class StoreProvider:
    """Provider backed by a precomputed store; texts are never encoded here."""

    def __init__(self, store: EmbeddingStore):
        self.store = store
        self.dim = store.dim

    def embed(self, key: str, text: str) -> np.ndarray:
        vec = self.store.get(key)
        if vec is None:
            raise ProviderError(f"store has no vector for key {key!r}")
        return vec


class WordVectorProvider:
    """Provider that embeds any text as the mean of its word vectors.

    Texts whose tokens are all out of vocabulary cannot be represented;
    that surfaces as a ProviderError for callers to skip or report.
    """

    def __init__(self, table: "WordVectorTable"):
        self.table = table
        self.dim = table.dim

    def embed(self, key: str, text: str) -> np.ndarray:
        vec = average_word_vectors(tokenize(text), self.table)
        if vec is None:
            raise ProviderError(f"no in-vocabulary token in text for key {key!r}")
        return vec


class WordVectorTable:
    """Static per-word vectors loaded from a GloVe-style text file."""

    def __init__(self, dim: int, vectors: dict[str, np.ndarray]):
        self.dim = dim
        self._vectors = vectors

    def get(self, word: str) -> np.ndarray | None:
        return self._vectors.get(word)

    def __contains__(self, word: str) -> bool:
        return word in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)


def load_word_vectors(path: str | Path) -> WordVectorTable:
    """Parse ``word v1 v2 ... vd`` lines; dimension fixed by the first row.

    Duplicate words keep the first occurrence.  Inconsistent row widths
    or non-numeric entries raise FormatError with the offending line.
    """
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            word, values = parts[0], parts[1:]
            if not values:
                raise FormatError(f"{path}:{lineno}: no vector components")
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise FormatError(
                    f"{path}:{lineno}: expected {dim} components, got {len(values)}"
                )
            try:
                arr = np.array([float(v) for v in values], dtype=np.float64)
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: non-numeric component") from exc
            if not np.all(np.isfinite(arr)):
                raise FormatError(f"{path}:{lineno}: non-finite component")
            if word not in vectors:
                vectors[word] = arr
    if dim is None:
        raise FormatError(f"{path}: empty word-vector file")
    return WordVectorTable(dim=dim, vectors=vectors)


def average_word_vectors(
    tokens: Sequence[str], table: WordVectorTable
) -> np.ndarray | None:
    """Mean vector over in-vocabulary tokens; None if none are in vocab.

    Repeated tokens count every time they appear.
    """
    found = [table.get(tok) for tok in tokens]
    found = [v for v in found if v is not None]
    if not found:
        return None
    return np.mean(np.stack(found), axis=0)
