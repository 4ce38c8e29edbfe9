"""Deterministic, labelled random substreams.

Every stochastic routine in this package draws from a generator obtained via
``substream(seed, label, index)``.  The stream for a given (seed, label,
index) triple is independent of evaluation order, worker count and platform,
which is what makes replaying one coefficient sample set across many basis
systems (and byte-identical experiment outputs) possible.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = ["substream", "stream_key"]


def stream_key(label: str) -> int:
    """Stable 32-bit tag for a stream label (CRC32 of the UTF-8 bytes)."""
    return zlib.crc32(label.encode("utf-8"))


def substream(seed: int, label: str, index: int = 0) -> np.random.Generator:
    """Return a PCG64 generator for the (seed, label, index) substream.

    Substreams with different labels or indices are statistically
    independent; the same triple always yields the same bit stream.
    """
    if index < 0:
        raise ValueError(f"substream index must be >= 0, got {index}")
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, stream_key(label), int(index)])
    return np.random.default_rng(ss)
