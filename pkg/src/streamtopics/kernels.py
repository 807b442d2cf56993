"""Kernel backend selection: compiled extension when built, numpy fallback otherwise.

Set STREAMTOPICS_NO_SPEEDUPS=1 to force the pure backend (used by the
benchmark and the backend-parity tests).
"""

import os

from streamtopics import _purekernels

if os.environ.get("STREAMTOPICS_NO_SPEEDUPS"):
    _impl = _purekernels
    BACKEND = "pure"
else:
    try:
        from streamtopics import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _purekernels
        BACKEND = "pure"

fnv1a64 = _impl.fnv1a64
accumulate_tokens = _impl.accumulate_tokens
nearest_centroid = _impl.nearest_centroid
distances_to = _impl.distances_to
