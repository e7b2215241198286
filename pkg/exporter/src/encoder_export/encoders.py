"""Encoder registry.

Heavy backends import lazily, so the tool works wherever at least one
backend is installed.  Every loader returns an object with a ``dim``
attribute and an ``encode(texts) -> float32 array`` method; failures to
obtain a model surface as EncoderUnavailableError with the fix spelled
out.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import EncoderUnavailableError
from .versions import PINNED_MODELS

ENCODERS = ("sbert", "use", "infersent", "laser", "debug-hash")

# families whose output width is fixed regardless of checkpoint
_FIXED_DIMS = {"use": 512, "infersent": 4096, "laser": 1024}

_MASK = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_OUT_MULT = 0x2545F4914F6CDD1D


def native_dim(name: str) -> int | None:
    """Output width fixed by the encoder family; None when the checkpoint
    decides (sbert) or the caller does (debug-hash)."""
    if name not in ENCODERS:
        raise EncoderUnavailableError(
            f"unknown encoder {name!r}; expected one of {ENCODERS}"
        )
    return _FIXED_DIMS.get(name)


class DebugHashEncoder:
    """Deterministic stand-in encoder: no weights, no network.

    A text hashes to a seed, the seed drives a small shift-register
    generator, and the resulting vector is unit length.  Output depends
    only on the text bytes and the dimension, so exports reproduce
    bit-for-bit on any machine.  Semantically meaningless on purpose;
    use it to exercise plumbing.
    """

    def __init__(self, dim: int = 64):
        if dim < 2:
            raise EncoderUnavailableError("debug-hash dim must be >= 2")
        self.dim = dim

    def _vector(self, text: str) -> list[float]:
        state = _FNV_OFFSET
        for byte in text.encode("utf-8"):
            state = ((state ^ byte) * _FNV_PRIME) & _MASK
        if state == 0:  # the generator has a fixed point at zero
            state = _FNV_OFFSET
        raw: list[float] = []
        for _ in range(self.dim):
            state ^= state >> 12
            state = (state ^ (state << 25)) & _MASK
            state ^= state >> 27
            raw.append(((state * _OUT_MULT) & _MASK) / 2**63 - 1.0)
        # left-to-right accumulation, pinned for cross-machine identity
        acc = 0.0
        for x in raw:
            acc += x * x
        norm = math.sqrt(acc)
        return [x / norm for x in raw]

    def encode(self, texts: list[str]) -> np.ndarray:
        return np.array([self._vector(t) for t in texts], dtype=np.float32)


class _SbertEncoder:
    def __init__(self, model_id: str):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise EncoderUnavailableError(
                "sentence-transformers is not installed; "
                "pip install 'encoder-export[sbert]'"
            ) from exc
        try:
            self._model = SentenceTransformer(model_id)
        except Exception as exc:
            raise EncoderUnavailableError(
                f"could not load {model_id!r}: {exc}. Weights download on "
                "first use; check network access or a populated HF cache."
            ) from exc
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode(self, texts: list[str]) -> np.ndarray:
        out = self._model.encode(
            texts,
            batch_size=len(texts),
            convert_to_numpy=True,
            show_progress_bar=False,
        )
        return np.asarray(out, dtype=np.float32)


class _UseEncoder:
    dim = 512

    def __init__(self, model_id: str):
        try:
            import tensorflow_hub as hub
        except ImportError as exc:
            raise EncoderUnavailableError(
                "tensorflow-hub is not installed; pip install 'encoder-export[use]'"
            ) from exc
        try:
            self._module = hub.load(model_id)
        except Exception as exc:
            raise EncoderUnavailableError(
                f"could not fetch {model_id!r}: {exc}. The module downloads "
                "on first use; check network access or TFHUB_CACHE_DIR."
            ) from exc

    def encode(self, texts: list[str]) -> np.ndarray:
        return np.asarray(self._module(texts), dtype=np.float32)


class _InferSentEncoder:
    dim = 4096

    def __init__(self, model_id: str):
        # distributed as a research repo, not a package: INFERSENT_HOME
        # must hold models.py, <model_id>.pkl, and the word vector file
        home = os.environ.get("INFERSENT_HOME", "")
        if not home or not os.path.isdir(home):
            raise EncoderUnavailableError(
                "set INFERSENT_HOME to a checkout containing models.py, "
                f"{model_id}.pkl, and crawl-300d-2M.vec"
            )
        try:
            import sys

            import torch

            if home not in sys.path:
                sys.path.insert(0, home)
            from models import InferSent
        except ImportError as exc:
            raise EncoderUnavailableError(
                f"could not import the BiLSTM implementation from {home}: {exc}"
            ) from exc
        checkpoint = os.path.join(home, f"{model_id}.pkl")
        vectors = os.path.join(home, "crawl-300d-2M.vec")
        for path in (checkpoint, vectors):
            if not os.path.exists(path):
                raise EncoderUnavailableError(f"missing file: {path}")
        params = {
            "bsize": 64,
            "word_emb_dim": 300,
            "enc_lstm_dim": 2048,
            "pool_type": "max",
            "dpout_model": 0.0,
            "version": 2,
        }
        self._model = InferSent(params)
        self._model.load_state_dict(torch.load(checkpoint, map_location="cpu"))
        self._model.set_w2v_path(vectors)
        self._model.build_vocab_k_words(K=100000)

    def encode(self, texts: list[str]) -> np.ndarray:
        out = self._model.encode(texts, bsize=len(texts), tokenize=True)
        return np.asarray(out, dtype=np.float32)


class _LaserEncoder:
    dim = 1024

    def __init__(self, model_id: str):
        try:
            from laserembeddings import Laser
        except ImportError as exc:
            raise EncoderUnavailableError(
                "laserembeddings is not installed; "
                "pip install 'encoder-export[laser]' and run its download step"
            ) from exc
        try:
            self._laser = Laser()
        except Exception as exc:
            raise EncoderUnavailableError(
                f"could not initialize {model_id!r}: {exc}"
            ) from exc

    def encode(self, texts: list[str]) -> np.ndarray:
        out = self._laser.embed_sentences(texts, lang="en")
        return np.asarray(out, dtype=np.float32)


def load_encoder(name: str, model_identifier: str = ""):
    """Instantiate an encoder by family name.

    An empty model_identifier selects the pinned checkpoint for the
    family; see versions.py.
    """
    if name not in ENCODERS:
        raise EncoderUnavailableError(
            f"unknown encoder {name!r}; expected one of {ENCODERS}"
        )
    model_id = model_identifier or PINNED_MODELS[name]
    if name == "debug-hash":
        try:
            dim = int(model_id)
        except ValueError as exc:
            raise EncoderUnavailableError(
                f"debug-hash takes the dimension as its model id, got {model_id!r}"
            ) from exc
        return DebugHashEncoder(dim)
    if name == "sbert":
        return _SbertEncoder(model_id)
    if name == "use":
        return _UseEncoder(model_id)
    if name == "infersent":
        return _InferSentEncoder(model_id)
    return _LaserEncoder(model_id)
