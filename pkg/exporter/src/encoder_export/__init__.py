"""Offline embedding export: manifest in, vector store out."""

from .errors import (
    EncoderUnavailableError,
    EncodingFailedError,
    ExportError,
    ManifestError,
)
from .export import ExportJob, ExportResult, export_embeddings

__version__ = "0.1.0"

__all__ = [
    "EncoderUnavailableError",
    "EncodingFailedError",
    "ExportError",
    "ExportJob",
    "ExportResult",
    "ManifestError",
    "export_embeddings",
]
