"""Pure-Python/numpy fallback for the hot kernels in _speedups.pyx.

Both backends must agree: token accumulation is exact integer arithmetic
in float64, so results are bit-identical; the distance kernels may differ
by last-ulp rounding, which never matters outside exact ties (and exact
ties come from identical inputs, which both backends order the same way).
"""

import numpy as np

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash of a byte string."""
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & _MASK64
    return h


def accumulate_tokens(tokens: list[str], dim: int) -> np.ndarray:
    """Signed feature-hash accumulation (unnormalized).

    Each token adds +-1.0 at index fnv1a64(token) % dim; the sign is -1
    when bit 63 of the hash is set.
    """
    acc = np.zeros(dim, dtype=np.float64)
    for token in tokens:
        h = fnv1a64(token.encode("utf-8"))
        acc[h % dim] += -1.0 if (h >> 63) & 1 else 1.0
    return acc


def nearest_centroid(point: np.ndarray, centroids: np.ndarray) -> tuple[int, float]:
    """Index and value of the smallest 1 - dot(point, row); first wins ties."""
    dists = 1.0 - centroids @ point
    idx = int(np.argmin(dists))
    return idx, float(dists[idx])


def distances_to(vectors: np.ndarray, centroid: np.ndarray) -> np.ndarray:
    """Cosine distances 1 - dot(row, centroid) for unit-norm rows."""
    return 1.0 - vectors @ centroid
