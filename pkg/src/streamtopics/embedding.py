"""Sentence-vector providers and vector math.

Two interchangeable backends produce unit-norm float64 vectors:

* ``HashedEmbedder`` — deterministic signed feature hashing over tokens.
  Bit-exact across runs and platforms, no model weights needed; the
  workhorse for tests and offline runs.
* ``RemoteEmbedder`` — HTTP client for an inference sidecar speaking
  ``POST /embed {"texts": [...]} -> {"dim": D, "vectors": [[...], ...]}``.

The all-zeros vector is the designated "empty text" vector; it never
takes part in similarity computations (callers route empty-token points
through the recency fallback instead).
"""

from __future__ import annotations

import logging
import math
import time
from typing import Iterable, Sequence

import numpy as np
import requests

from streamtopics import kernels

logger = logging.getLogger(__name__)


class RemoteEmbedderError(RuntimeError):
    """Remote backend unreachable after retries (retriable condition)."""


class RemoteProtocolError(ValueError):
    """Remote backend replied with a malformed payload (fatal)."""


def is_empty(vector: np.ndarray) -> bool:
    """True for the designated all-zeros empty-text vector."""
    return not np.any(vector)


def l2_norm(vector: np.ndarray) -> float:
    return math.sqrt(float(np.dot(vector, vector)))


def normalized(vector: np.ndarray) -> np.ndarray:
    """Scale to unit L2 norm; a zero vector stays the empty-text vector."""
    norm = l2_norm(vector)
    if norm == 0.0:
        return np.zeros_like(vector)
    return vector / norm


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; rejects empty-text operands."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = l2_norm(a)
    nb = l2_norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine undefined for the empty-text vector")
    return float(np.dot(a, b) / (na * nb))


def centroid_of(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Component-wise mean, L2-normalized; degenerate mean -> empty vector."""
    if not vectors:
        raise ValueError("centroid of empty list")
    acc = np.zeros_like(vectors[0])
    for v in vectors:
        if is_empty(v):
            raise ValueError("centroid over an empty-text vector")
        acc = acc + v
    return normalized(acc / len(vectors))


class HashedEmbedder:
    """Deterministic signed feature-hash embedder.

    Per token: h = FNV-1a 64 over UTF-8 bytes, index = h mod dim, sign
    from bit 63; occurrences accumulate, then the sum is L2-normalized.
    A pure function of the token multiset (order-invariant).
    """

    backend = "hashed"

    def __init__(self, dim: int = 64):
        if dim <= 0:
            raise ValueError("dim must be positive")
        self.dim = dim

    def embed(self, tokens: list[str], raw_text: str = "") -> np.ndarray:
        if not tokens:
            return np.zeros(self.dim, dtype=np.float64)
        acc = kernels.accumulate_tokens(tokens, self.dim)
        return normalized(acc)

    def embed_many(self, items: Iterable[tuple[list[str], str]]) -> list[np.ndarray]:
        return [self.embed(tokens, raw) for tokens, raw in items]


class RemoteEmbedder:
    """Client for the embedding sidecar; batches requests, retries transport errors.

    Responses are matched to inputs by position, never by arrival time.
    The server pre-normalizes vectors; they are renormalized here to pin
    the unit-norm invariant regardless of the provider.
    """

    backend = "remote"
    batch_size = 32
    max_retries = 3

    def __init__(self, url: str, timeout: float = 30.0, backoff: float = 0.5):
        self.url = url.rstrip("/")
        self.timeout = timeout
        self.backoff = backoff
        self._session = requests.Session()
        self._dim: int | None = None

    @property
    def dim(self) -> int:
        if self._dim is None:
            # an empty batch still reports the dimension
            self._request([])
        assert self._dim is not None
        return self._dim

    def healthy(self) -> bool:
        try:
            resp = self._session.get(f"{self.url}/healthz", timeout=self.timeout)
            return resp.status_code == 200
        except requests.RequestException:
            return False

    def embed(self, tokens: list[str], raw_text: str) -> np.ndarray:
        return self.embed_many([(tokens, raw_text)])[0]

    def embed_many(self, items: Iterable[tuple[list[str], str]]) -> list[np.ndarray]:
        items = list(items)
        texts = [(i, raw) for i, (tokens, raw) in enumerate(items) if tokens]
        vectors: dict[int, np.ndarray] = {}
        for start in range(0, len(texts), self.batch_size):
            chunk = texts[start : start + self.batch_size]
            rows = self._request([raw for _, raw in chunk])
            for (idx, _), row in zip(chunk, rows):
                vectors[idx] = row
        out = []
        for i in range(len(items)):
            if i in vectors:
                out.append(vectors[i])
            else:
                out.append(np.zeros(self.dim, dtype=np.float64))
        return out

    def _request(self, texts: list[str]) -> list[np.ndarray]:
        payload = {"texts": texts}
        last_exc: Exception | None = None
        for attempt in range(1 + self.max_retries):
            try:
                resp = self._session.post(f"{self.url}/embed", json=payload, timeout=self.timeout)
            except requests.RequestException as exc:
                last_exc = exc
                delay = self.backoff * (2**attempt)
                logger.warning("embed request failed (%s); retrying in %.1fs", exc, delay)
                time.sleep(delay)
                continue
            if resp.status_code >= 500:
                last_exc = RemoteEmbedderError(f"server error {resp.status_code}")
                time.sleep(self.backoff * (2**attempt))
                continue
            if resp.status_code != 200:
                raise RemoteProtocolError(f"embed endpoint returned {resp.status_code}: {resp.text[:200]}")
            return self._parse(resp, len(texts))
        raise RemoteEmbedderError(
            f"embedding service unreachable after {self.max_retries} retries: {last_exc}"
        )

    def _parse(self, resp: requests.Response, expected: int) -> list[np.ndarray]:
        try:
            body = resp.json()
            dim = int(body["dim"])
            rows = body["vectors"]
        except (ValueError, KeyError, TypeError) as exc:
            raise RemoteProtocolError(f"malformed embed response: {exc}") from exc
        if dim <= 0 or not isinstance(rows, list) or len(rows) != expected:
            raise RemoteProtocolError(
                f"embed response shape mismatch: dim={dim}, {len(rows) if isinstance(rows, list) else '?'} vectors for {expected} texts"
            )
        if self._dim is None:
            self._dim = dim
        elif self._dim != dim:
            raise RemoteProtocolError(f"embedding dim changed mid-run: {self._dim} -> {dim}")
        out = []
        for row in rows:
            vec = np.asarray(row, dtype=np.float64)
            if vec.shape != (dim,) or not np.all(np.isfinite(vec)):
                raise RemoteProtocolError("embed response contains a non-finite or mis-sized vector")
            out.append(normalized(vec))
        return out


def get_provider(backend: str, dim: int = 64, url: str | None = None):
    if backend == "hashed":
        return HashedEmbedder(dim=dim)
    if backend == "remote":
        if not url:
            raise ValueError("remote embedder requires a service URL")
        return RemoteEmbedder(url)
    raise ValueError(f"unknown embedder backend {backend!r}")
