"""Empirical validators for rate claims on finite permutation systems.

Each validator materialises the ergodic-average sequences of a system
(binary64 fast path), evaluates the claimed rate, and returns a
:class:`Verdict` that is truthy iff the claim held.  Measures are always
exact rational sums of atom weights; only the sequence values are
floats, and every check uses the same float arrays, so the counting
arguments that link fluctuation counts, interval chains, and window
stability apply verbatim to the computed values.

Index convention: positions refer to the 0-indexed average sequence,
entry t meaning A_{t+1} f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .dynamics import PermutationSystem, average_matrix, measure_of_flags
from .errors import BudgetError, InvalidParameterError, WindowRangeError
from .fluctuations import fluc_counts_rows
from .rates import GrowthFunction

DEFAULT_HORIZON = 10_000


@dataclass(frozen=True)
class Verdict:
    """Outcome of a validator; truthiness mirrors ``ok``."""

    ok: bool
    witness: Optional[int]
    horizon: int

    def __bool__(self) -> bool:
        return self.ok


def _check_unit_open(name: str, value: float):
    if not (0.0 < value < 1.0):
        raise InvalidParameterError(f"{name} must lie in (0, 1), got {value}")


def validate_modulus(sys: PermutationSystem, phi_value: float, eps: float, lam: float,
                     n_list: Sequence[int]) -> Verdict:
    """Check that phi_value bounds the fluctuation counts at every N in n_list:
    mu({fluc count of the first N averages < phi_value}) > 1 - lambda."""
    _check_unit_open("eps", eps)
    _check_unit_open("lambda", lam)
    if not n_list:
        raise InvalidParameterError("n_list must be nonempty")
    ns = sorted(int(n) for n in n_list)
    if ns[0] < 0:
        raise InvalidParameterError("prefix lengths must be nonnegative")
    horizon = ns[-1]
    mat = average_matrix(sys, horizon)
    counts = fluc_counts_rows(mat, eps, checkpoints=ns)
    for col in range(len(ns)):
        good = counts[:, col] < phi_value
        if not measure_of_flags(sys.space, good.tolist()) > 1 - lam:
            return Verdict(False, ns[col], horizon)
    return Verdict(True, None, horizon)


def _check_interval_chain(intervals: Sequence[tuple[int, int]]):
    prev_end = None
    for a, b in intervals:
        if not (0 <= a < b):
            raise InvalidParameterError(f"interval ({a}, {b}) must satisfy 0 <= a < b")
        if prev_end is not None and a < prev_end:
            raise InvalidParameterError(
                f"interval ({a}, {b}) starts before the previous one ends at {prev_end}"
            )
        prev_end = b


def validate_learnable_rate(sys: PermutationSystem, psi_value: float, eps: float, lam: float,
                            intervals: Sequence[tuple[int, int]]) -> Verdict:
    """Check that some interval with index n <= psi_value is quiet:
    mu({some pair inside [a_n, b_n] differs by >= eps}) <= lambda."""
    _check_unit_open("eps", eps)
    _check_unit_open("lambda", lam)
    if psi_value < 0 or not math.isfinite(float(psi_value)):
        raise InvalidParameterError("psi_value must be a finite nonnegative real")
    if not intervals:
        raise InvalidParameterError("interval chain must be nonempty")
    _check_interval_chain(intervals)
    last = min(len(intervals) - 1, math.floor(psi_value))
    horizon = max(b for _, b in intervals[: last + 1]) + 1
    mat = average_matrix(sys, horizon)
    for n in range(last + 1):
        a, b = intervals[n]
        window = mat[:, a : b + 1]
        bad = (window.max(axis=1) - window.min(axis=1)) >= eps
        if measure_of_flags(sys.space, bad.tolist()) <= lam:
            return Verdict(True, n, horizon)
    return Verdict(False, None, horizon)


def validate_uniform_metastability(sys: PermutationSystem, phi_value: int, lam: float, eps: float,
                                   g, n_horizon: int = DEFAULT_HORIZON) -> Verdict:
    """Check that some n <= phi_value has a stable window [n, n + g(n)]:
    mu({max - min over the window <= eps}) > 1 - lambda.

    Windows whose end would pass n_horizon are skipped; if no stable
    window is found and any candidate was skipped (or phi_value itself
    exceeds the horizon), the question is undecidable within budget and
    a BudgetError is raised instead of a False verdict.
    """
    _check_unit_open("eps", eps)
    _check_unit_open("lambda", lam)
    if phi_value < 0:
        raise InvalidParameterError("phi_value must be nonnegative")
    if n_horizon < 0:
        raise InvalidParameterError("n_horizon must be nonnegative")

    mat = None
    mat_cols = 0
    skipped = phi_value > n_horizon
    last = min(phi_value, n_horizon)
    for n in range(last + 1):
        end = n + int(g(n))
        if end > n_horizon:
            skipped = True
            continue
        if end + 1 > mat_cols:
            mat_cols = min(max(2 * mat_cols, end + 1, 256), n_horizon + 1)
            mat = average_matrix(sys, mat_cols)
        window = mat[:, n : end + 1]
        good = (window.max(axis=1) - window.min(axis=1)) <= eps
        if measure_of_flags(sys.space, good.tolist()) > 1 - lam:
            return Verdict(True, n, n_horizon)
    if skipped:
        raise BudgetError(
            f"no stable window found with ends <= {n_horizon} and candidates remain; "
            "raise n_horizon to decide"
        )
    return Verdict(False, None, n_horizon)


def least_failing_k(sys: PermutationSystem, n_start: int, eps: float, lam: float,
                    k_budget: int) -> Optional[int]:
    """Least k <= k_budget whose window [n_start, n_start+k] is unstable:
    mu({max - min over the window <= eps}) <= 1 - lambda.  None if every
    window up to the budget is still stable for measure > 1 - lambda."""
    _check_unit_open("eps", eps)
    _check_unit_open("lambda", lam)
    if n_start < 0 or k_budget < 0:
        raise InvalidParameterError("n_start and k_budget must be nonnegative")
    mat = average_matrix(sys, n_start + k_budget + 1)
    return _least_failing_from(mat, sys.space, n_start, eps, lam, k_budget)


def _least_failing_from(mat: np.ndarray, space, n_start: int, eps: float, lam: float,
                        k_budget: int) -> Optional[int]:
    window = mat[:, n_start : n_start + k_budget + 1]
    spreads = np.maximum.accumulate(window, axis=1) - np.minimum.accumulate(window, axis=1)
    unstable = spreads > eps
    # first k at which each atom's window turns unstable (stays unstable after)
    first_bad = np.where(unstable.any(axis=1), unstable.argmax(axis=1), k_budget + 1)
    order = np.argsort(first_bad, kind="stable")
    cum = Fraction(0)
    for atom in order:
        fb = int(first_bad[atom])
        if fb > k_budget:
            break
        cum += space.weights[int(atom)]
        if cum >= lam:
            # mu(stable at k=fb) = 1 - cum <= 1 - lam exactly here or earlier;
            # fb is the least k because first_bad is scanned in order
            return fb
    return None


def adversarial_growth_table(sys: PermutationSystem, eps: float, lam: float, horizon: int,
                             k_budget: int) -> GrowthFunction:
    """Table growth function n -> least failing k at n (0 where none exists),
    for n up to horizon.  Past the table the growth defaults to 0."""
    if horizon < 0:
        raise InvalidParameterError("horizon must be nonnegative")
    mat = average_matrix(sys, horizon + k_budget + 1)
    table = []
    for n in range(horizon + 1):
        k = _least_failing_from(mat, sys.space, n, eps, lam, k_budget)
        table.append(0 if k is None else k)
    return GrowthFunction.from_table(table)
