"""Counting epsilon-fluctuations of finite real sequences.

A fluctuation chain for ``x[0..N-1]`` is a sequence of index pairs

    i_1 < j_1 <= i_2 < j_2 <= ... <= i_k < j_k < N

with ``|x[i_l] - x[j_l]| >= eps`` for every pair.  Consecutive pairs may
share an endpoint (``j_l == i_{l+1}`` is admissible).  The fluctuation
count is the largest k over all such chains.

``fluc_count`` computes it with a single left-to-right scan: keep the
running min and max of the current window; whenever the spread first
reaches eps at position j, record one fluctuation and restart the window
at j.  The pair recorded is (earliest index of the opposite extreme, j),
which is valid because the spread can only cross eps when x[j] itself
becomes a new window extreme.  ``fluc_count_oracle`` is an independent
quadratic dynamic program over chain end positions, kept for tests and
capped at short inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetError, InvalidParameterError, WindowRangeError

ORACLE_MAX_LEN = 20


def _check_eps(eps: float):
    if not (isinstance(eps, (int, float, Fraction)) and eps > 0 and math.isfinite(float(eps))):
        raise InvalidParameterError(f"eps must be a positive finite number, got {eps!r}")


def _check_entry(v):
    if isinstance(v, float) and not math.isfinite(v):
        raise InvalidParameterError("sequence entries must be finite")


@dataclass(frozen=True)
class FlucResult:
    """Fluctuation count plus one witnessing chain of index pairs."""

    count: int
    witness: tuple[tuple[int, int], ...]


def fluc_count(x: Sequence, eps) -> FlucResult:
    """Greedy O(N) fluctuation count with a witness chain.

    Accepts floats or exact rationals; comparisons between Fraction
    entries and a float eps are exact in Python.
    """
    _check_eps(eps)
    n = len(x)
    if n <= 1:
        if n == 1:
            _check_entry(x[0])
        return FlucResult(0, ())

    pairs: list[tuple[int, int]] = []
    _check_entry(x[0])
    lo = hi = x[0]
    lo_at = hi_at = 0
    for j in range(1, n):
        v = x[j]
        _check_entry(v)
        if v < lo:
            lo, lo_at = v, j
        elif v > hi:
            hi, hi_at = v, j
        if hi - lo >= eps:
            # v is the new extreme; pair it with the earliest opposite one
            pairs.append((hi_at if lo_at == j else lo_at, j))
            lo = hi = v
            lo_at = hi_at = j
    return FlucResult(len(pairs), tuple(pairs))


def fluc_count_oracle(x: Sequence, eps) -> int:
    """Quadratic DP over chain end positions. Test oracle, length <= 20."""
    _check_eps(eps)
    n = len(x)
    if n > ORACLE_MAX_LEN:
        raise BudgetError(f"oracle accepts at most {ORACLE_MAX_LEN} entries, got {n}")
    for v in x:
        _check_entry(v)
    if n <= 1:
        return 0
    # reachable[i] = best chain count using pairs that end at or before i
    reachable = [0] * n
    best = 0
    for j in range(n):
        end_here = 0
        for i in range(j):
            if abs(x[i] - x[j]) >= eps:
                end_here = max(end_here, 1 + reachable[i])
        reachable[j] = max(reachable[j - 1] if j > 0 else 0, end_here)
        best = max(best, end_here)
    return best


def metastable_window_ok(x: Sequence, n: int, k: int, eps) -> bool:
    """True iff max - min over x[n .. n+k] is at most eps."""
    _check_eps(eps)
    if n < 0 or k < 0 or n + k >= len(x):
        raise WindowRangeError(f"window [{n}; {n}+{k}] does not fit in {len(x)} entries")
    window = x[n : n + k + 1]
    for v in window:
        _check_entry(v)
    return max(window) - min(window) <= eps


def fluc_counts_rows(mat: np.ndarray, eps: float,
                     checkpoints: Optional[Sequence[int]] = None) -> np.ndarray:
    """Greedy fluctuation counts for every row of a float matrix.

    Runs all rows in lockstep, one column at a time, so the hot loop is
    K numpy steps instead of rows*K Python steps.  Agrees exactly with
    fluc_count on each row.  With ``checkpoints`` (ascending prefix
    lengths) returns shape (rows, len(checkpoints)): counts of each
    prefix, which matches running the greedy scan on the truncated row.
    """
    _check_eps(eps)
    mat = np.asarray(mat, dtype=np.float64)
    if mat.ndim != 2:
        raise InvalidParameterError("expected a 2d array of row sequences")
    if not np.all(np.isfinite(mat)):
        raise InvalidParameterError("matrix entries must be finite")
    rows, n = mat.shape

    cps = None
    if checkpoints is not None:
        cps = [int(c) for c in checkpoints]
        if any(c < 0 or c > n for c in cps) or sorted(cps) != cps:
            raise WindowRangeError("checkpoints must be ascending prefix lengths within range")
        out = np.zeros((rows, len(cps)), dtype=np.int64)

    counts = np.zeros(rows, dtype=np.int64)
    if n == 0:
        return out if cps is not None else counts
    lo = mat[:, 0].copy()
    hi = mat[:, 0].copy()
    if cps is not None:
        for ci, c in enumerate(cps):
            if c <= 1:
                out[:, ci] = 0
    for j in range(1, n):
        v = mat[:, j]
        np.minimum(lo, v, out=lo)
        np.maximum(hi, v, out=hi)
        trig = (hi - lo) >= eps
        counts += trig
        lo[trig] = v[trig]
        hi[trig] = v[trig]
        if cps is not None:
            for ci, c in enumerate(cps):
                if c == j + 1:
                    out[:, ci] = counts
    return out if cps is not None else counts
