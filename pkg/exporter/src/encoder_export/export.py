"""Manifest-to-store export.

The file formats are the contract with the inference pipeline: the
manifest is JSONL of {"key", "text"}, the store is a {"dim": d} header
line followed by {"key", "vec"} records.  This module speaks those
formats directly and shares no code with the consumer.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .encoders import ENCODERS, load_encoder
from .errors import EncodingFailedError, ManifestError


@dataclass(frozen=True)
class ExportJob:
    manifest_path: str
    encoder: str
    output_path: str
    model_identifier: str = ""
    batch_size: int = 32

    def __post_init__(self):
        if self.encoder not in ENCODERS:
            raise ValueError(
                f"unknown encoder {self.encoder!r}; expected one of {ENCODERS}"
            )
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not self.manifest_path or not self.output_path:
            raise ValueError("manifest_path and output_path are required")


@dataclass(frozen=True)
class ExportResult:
    records: int
    dim: int
    output_path: str


def read_manifest(path: str) -> list[tuple[str, str]]:
    """Parse a key/text manifest, preserving order.

    Duplicate keys are an error here rather than later: the store would
    reject them anyway, but this message points at the right line.
    """
    entries: list[tuple[str, str]] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            if not isinstance(row, dict):
                raise ManifestError(f"{path}:{lineno}: expected an object")
            key = row.get("key")
            text = row.get("text")
            if not isinstance(key, str) or not key:
                raise ManifestError(f"{path}:{lineno}: missing or empty 'key'")
            if not isinstance(text, str):
                raise ManifestError(f"{path}:{lineno}: missing 'text'")
            if key in seen:
                raise ManifestError(f"{path}:{lineno}: duplicate key {key!r}")
            seen.add(key)
            entries.append((key, text))
    return entries


def export_embeddings(job: ExportJob) -> ExportResult:
    """Embed every manifest text and atomically write the store.

    Records land in manifest order, one per line, floats at full single
    precision.  Any failure leaves the output path untouched.
    """
    entries = read_manifest(job.manifest_path)
    encoder = load_encoder(job.encoder, job.model_identifier)

    vectors: list[tuple[str, np.ndarray]] = []
    for start in range(0, len(entries), job.batch_size):
        chunk = entries[start : start + job.batch_size]
        texts = [text for _, text in chunk]
        try:
            batch = np.asarray(encoder.encode(texts), dtype=np.float32)
        except Exception as exc:
            raise EncodingFailedError(
                f"batch starting at key {chunk[0][0]!r} failed: {exc}"
            ) from exc
        if batch.shape != (len(chunk), encoder.dim):
            raise EncodingFailedError(
                f"encoder returned shape {batch.shape}, "
                f"expected ({len(chunk)}, {encoder.dim}) "
                f"for batch starting at key {chunk[0][0]!r}"
            )
        for (key, _), vec in zip(chunk, batch):
            if not np.all(np.isfinite(vec)):
                raise EncodingFailedError(f"non-finite embedding for key {key!r}")
            vectors.append((key, vec))

    out = Path(job.output_path)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(
        dir=str(out.parent) or ".", prefix=out.name + ".", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"dim": encoder.dim}, separators=(",", ":")) + "\n")
            for key, vec in vectors:
                row = {"key": key, "vec": [float(x) for x in vec]}
                fh.write(
                    json.dumps(row, separators=(",", ":"), ensure_ascii=False) + "\n"
                )
        os.replace(tmp_name, out)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return ExportResult(records=len(vectors), dim=encoder.dim, output_path=str(out))
