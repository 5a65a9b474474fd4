"""Asymptotic density of geometric block sets and shift averages over them.

A :class:`BlockSet` is the union of integer blocks [beta^m, gamma*beta^m)
for m >= 0, with integer beta >= 2 and rational 1 < gamma <= beta.  With
the defaults beta=4, gamma=2 the symmetric prefix density

    d_N = |A intersect [-N; N]| / (2N + 1)

equals exactly 1/3 along N = 2*4^m - 1 and drops toward 1/6 along
N = 4^(m+1) - 1, so the density (and with it the shift averages below)
has no limit.

``shift_average(A, omega, n)`` is the mean of the indicator of A over
the integers omega+1 .. omega+n, i.e. the ergodic average of the shift
system on the integers started at omega.  It satisfies

    |shift_average - 2 * d_{n+omega}| <= (2*omega + 1) / n      (omega >= 0)
    shift_average == (2 + (2*omega+1)/n) * d_{n+omega}          (omega <= 0)

and both facts are checked exactly by ``approx_identity_check``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvalidParameterError, WindowRangeError
from .measure import _as_fraction


@dataclass(frozen=True)
class BlockSet:
    """Union of blocks [beta^m, gamma*beta^m) over m >= 0. Members are >= 1."""

    beta: int
    gamma: Fraction

    def __post_init__(self):
        if not isinstance(self.beta, int) or self.beta < 2:
            raise InvalidParameterError("beta must be an integer >= 2")
        if not isinstance(self.gamma, Fraction) or not (1 < self.gamma <= self.beta):
            raise InvalidParameterError("gamma must be a rational with 1 < gamma <= beta")

    @classmethod
    def default(cls) -> "BlockSet":
        return cls(4, Fraction(2))

    @classmethod
    def of(cls, beta: int, gamma) -> "BlockSet":
        return cls(int(beta), _as_fraction(gamma))

    def to_json(self) -> dict:
        g = self.gamma
        return {"beta": self.beta, "gamma": g.numerator if g.denominator == 1 else f"{g}"}

    @classmethod
    def from_json(cls, doc: dict) -> "BlockSet":
        return cls.of(doc["beta"], doc["gamma"])

    def blocks_upto(self, n: int) -> list[tuple[int, int]]:
        """Half-open integer blocks [start, end) with start <= n."""
        out = []
        start = 1
        while start <= n:
            end = math.ceil(self.gamma * start)
            out.append((start, end))
            start *= self.beta
        return out

    def __contains__(self, m: int) -> bool:
        if m < 1:
            return False
        for start, end in self.blocks_upto(m):
            if start <= m < end:
                return True
        return False


def prefix_count(A: BlockSet, n: int) -> int:
    """|A intersect [1; n]|, exact."""
    if n < 1:
        return 0
    total = 0
    for start, end in A.blocks_upto(n):
        total += max(0, min(end, n + 1) - start)
    return total


@dataclass(frozen=True)
class DensityValue:
    count: int
    denominator: int
    value: Fraction


def density_prefix(A: BlockSet, n: int) -> DensityValue:
    """d_n = |A intersect [-n; n]| / (2n + 1). Members are positive, so the
    count is just the positive prefix count."""
    if n < 0:
        raise WindowRangeError("density index must be nonnegative")
    c = prefix_count(A, n)
    return DensityValue(c, 2 * n + 1, Fraction(c, 2 * n + 1))


@dataclass(frozen=True)
class OscillationReport:
    upper: tuple[tuple[int, int, Fraction], ...]  # (m, N, d_N) at block ends
    lower: tuple[tuple[int, int, Fraction], ...]  # (m, N, d_N) before next block
    gap: Fraction


def density_oscillation(A: BlockSet, m_max: int) -> OscillationReport:
    """Densities along the two extreme subsequences and their minimal gap.

    The upper subsequence samples N just below gamma*beta^m (block ends),
    the lower one at N = beta^(m+1) - 1 (just before the next block).
    """
    if m_max < 0:
        raise InvalidParameterError("m_max must be nonnegative")
    upper = []
    lower = []
    gaps = []
    for m in range(m_max + 1):
        n_up = math.ceil(A.gamma * A.beta ** m) - 1
        n_lo = A.beta ** (m + 1) - 1
        d_up = density_prefix(A, n_up).value
        d_lo = density_prefix(A, n_lo).value
        upper.append((m, n_up, d_up))
        lower.append((m, n_lo, d_lo))
        gaps.append(d_up - d_lo)
    return OscillationReport(tuple(upper), tuple(lower), min(gaps))


def shift_average(A: BlockSet, omega: int, n: int) -> Fraction:
    """Mean of the indicator of A over omega+1 .. omega+n (0 if that
    range ends below 1)."""
    if n < 1:
        raise WindowRangeError("n must be at least 1")
    if omega + n < 1:
        return Fraction(0)
    return Fraction(prefix_count(A, omega + n) - prefix_count(A, max(omega, 0)), n)


@dataclass(frozen=True)
class ApproxIdentity:
    lhs: Fraction
    rhs: Fraction
    ok: bool
    branch: str  # "bound" for omega >= 0, "exact" for omega < 0


def approx_identity_check(A: BlockSet, omega: int, n: int) -> ApproxIdentity:
    """Exact check of the shift-average vs density identity at (omega, n).

    For omega >= 0 verifies |shift_average - 2 d_{n+omega}| <= (2 omega+1)/n;
    for omega <= 0 verifies shift_average == (2 + (2 omega+1)/n) * d_{n+omega}.
    At omega == 0 both forms are verified.
    """
    if n < 1 or n + omega < 1:
        raise WindowRangeError(f"need n >= 1 and n + omega >= 1, got omega={omega}, n={n}")
    av = shift_average(A, omega, n)
    d = density_prefix(A, n + omega).value
    lhs = abs(av - 2 * d)
    shift_term = Fraction(2 * omega + 1, n)
    if omega >= 0:
        ok = lhs <= shift_term
        if omega == 0:
            ok = ok and av == (2 + shift_term) * d
        return ApproxIdentity(lhs, shift_term, ok, "bound")
    target = (2 + shift_term) * d
    return ApproxIdentity(av, target, av == target, "exact")


def nonconvergence_witness(A: BlockSet, eps0: float, omega: int, n_from: int,
                           budget: int) -> Optional[tuple[int, int]]:
    """First pair (i, j), lexicographic, with n_from <= i < j <= n_from+budget
    and |avg_i - avg_j| > eps0, where avg_n = shift_average(A, omega, n).

    Returns None when no pair exists in the window; absence is a result,
    not an error.
    """
    if eps0 <= 0 or not math.isfinite(float(eps0)):
        raise InvalidParameterError("eps0 must be a positive finite number")
    if budget < 1:
        raise InvalidParameterError("budget must be at least 1")
    start = max(n_from, 1)
    stop = n_from + budget
    if start > stop:
        return None
    vals = [shift_average(A, omega, n) for n in range(start, stop + 1)]
    m = len(vals)
    # suffix extremes let the first admissible i be found in one pass
    suf_max = list(vals)
    suf_min = list(vals)
    for t in range(m - 2, -1, -1):
        suf_max[t] = max(vals[t], suf_max[t + 1])
        suf_min[t] = min(vals[t], suf_min[t + 1])
    for t in range(m - 1):
        v = vals[t]
        if suf_max[t + 1] - v > eps0 or v - suf_min[t + 1] > eps0:
            for u in range(t + 1, m):
                if abs(v - vals[u]) > eps0:
                    return (start + t, start + u)
    return None
