"""Deterministic random streams keyed by (seed, scope...).

Every experiment draws from ``stream(seed, *scope)`` where the scope
names the sampling site (family, size, trial index, ...).  Streams for
different scopes are statistically independent, and adding trials or
sizes to a sweep never disturbs the draws of existing scopes.
"""

from __future__ import annotations

import zlib

import numpy as np


def _key(part) -> int:
    if isinstance(part, bool):
        raise TypeError("bool is not a valid stream scope part")
    if isinstance(part, (int, np.integer)):
        return int(part) & 0xFFFFFFFF
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    raise TypeError(f"stream scope parts must be int or str, got {type(part).__name__}")


def stream(seed: int, *scope) -> np.random.Generator:
    """Generator for the given seed and scope, stable across runs."""
    keys = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [_key(p) for p in scope]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(keys)))
