"""Weak-type bounds on cyclic systems and their transfer to permutation systems.

The discrete side works on a cycle of 2K values: for each start k the
first K running averages are formed, a statistic of the sequence is
taken (max modulus, or eps * sqrt of the fluctuation count), and the
number of starts where the statistic reaches a threshold a is compared
against shape(a) * sum |values|.  The continuous side states the same
inequality on a permutation system with the measure of the level set on
the left.  ``transference_identity_check`` verifies the averaging
identity that carries one into the other, exactly, with rational
weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .dynamics import (CyclicSystem, PermutationSystem, average_matrix,
                       cyclic_average_matrix, family_values, measure_of_flags)
from .errors import InvalidParameterError
from .fluctuations import fluc_count, fluc_counts_rows
from .measure import l1_norm
from .rng import stream

KIND_FLUC = "fluc"
KIND_MAX = "max"

WEAK_TYPE_TOL = 1e-9


@dataclass(frozen=True)
class OscillationOperator:
    """Sequence statistic with a weak-type bound shape c_hat / a."""

    name: str
    kind: str
    eps: float
    c_hat: float

    def apply(self, x: Sequence):
        """Statistic of the sequence x (floats or exact rationals)."""
        if self.kind == KIND_MAX:
            if len(x) == 0:
                raise InvalidParameterError("cannot apply operator to an empty sequence")
            return max(abs(v) for v in x)
        count = fluc_count(x, self.eps).count
        return self.eps * math.sqrt(count)

    def bound_shape(self, a) -> float:
        """Value of c_hat / a; multiplied by the l1 mass it bounds the level set."""
        if not a > 0:
            raise InvalidParameterError(f"threshold a must be positive, got {a!r}")
        return self.c_hat / float(a)

    def with_c_hat(self, c_hat: float) -> "OscillationOperator":
        if not (c_hat > 0 and math.isfinite(c_hat)):
            raise InvalidParameterError(f"c_hat must be positive and finite, got {c_hat!r}")
        return replace(self, c_hat=c_hat)


def fluc_operator(eps: float, c_hat: float = 1.0) -> OscillationOperator:
    if not (eps > 0 and math.isfinite(eps)):
        raise InvalidParameterError(f"eps must be positive and finite, got {eps!r}")
    return OscillationOperator(f"fluc(eps={eps:g})", KIND_FLUC, float(eps), float(c_hat))


def max_operator(c_hat: float = 1.0) -> OscillationOperator:
    return OscillationOperator("max", KIND_MAX, 0.0, float(c_hat))


def row_stats(op: OscillationOperator, mat: np.ndarray) -> np.ndarray:
    """Operator value of every row of a float matrix, vectorised."""
    mat = np.asarray(mat, dtype=np.float64)
    if op.kind == KIND_MAX:
        return np.abs(mat).max(axis=1)
    counts = fluc_counts_rows(mat, op.eps)
    return op.eps * np.sqrt(counts.astype(np.float64))


def default_a_grid(op: OscillationOperator, K: int, values: Sequence[float]) -> list[float]:
    """Geometric threshold grid (ratio 2) covering the operator's range on
    K averages of the given values."""
    if K < 1:
        raise InvalidParameterError("K must be at least 1")
    if op.kind == KIND_MAX:
        hi = max((abs(float(v)) for v in values), default=0.0)
        lo = hi / (2 * K)
    else:
        lo = op.eps / 4.0
        hi = op.eps * math.sqrt(K)
    if not hi > 0:
        return [1.0]
    grid = [lo]
    while grid[-1] < hi:
        grid.append(grid[-1] * 2.0)
    return grid


@dataclass(frozen=True)
class DiscreteCheck:
    operator: str
    K: int
    a: float
    lhs_count: int
    rhs_bound: float
    ok: bool


def discrete_weak_type_check(op: OscillationOperator, csys: CyclicSystem,
                             a: float) -> DiscreteCheck:
    """Count starts whose statistic reaches a, against shape(a) * sum |values|."""
    mat = cyclic_average_matrix(csys.values, csys.size)
    stats = row_stats(op, mat)
    lhs = int(np.count_nonzero(stats >= a))
    rhs = op.bound_shape(a) * float(np.abs(np.asarray(csys.values, dtype=np.float64)).sum())
    return DiscreteCheck(op.name, csys.size, float(a), lhs, rhs, lhs <= rhs + WEAK_TYPE_TOL)


@dataclass(frozen=True)
class WeakTypeSample:
    operator: str
    K: int
    family: str
    trial: int
    a: float
    lhs: int
    rhs: float
    ratio: float
    ok: bool


def weak_type_samples(op: OscillationOperator, K_list: Sequence[int], family: str,
                      trials: int, seed: int) -> Iterator[WeakTypeSample]:
    """Random discrete checks over a sweep of cycle sizes and trials.

    The draw for (family, K, trial) depends only on those keys and the
    seed, so extending the sweep keeps existing rows byte-identical.
    """
    if trials < 1:
        raise InvalidParameterError("trials must be at least 1")
    for K in K_list:
        if K < 1:
            raise InvalidParameterError("cycle sizes must be at least 1")
        for trial in range(trials):
            rng = stream(seed, family, K, trial)
            values = family_values(family, rng, 2 * K)
            csys = CyclicSystem.from_values(values)
            mat = cyclic_average_matrix(csys.values, K)
            stats = row_stats(op, mat)
            mass = float(np.abs(np.asarray(values, dtype=np.float64)).sum())
            for a in default_a_grid(op, K, values):
                lhs = int(np.count_nonzero(stats >= a))
                rhs = op.bound_shape(a) * mass
                ratio = (lhs * a / mass) if (lhs > 0 and mass > 0) else 0.0
                yield WeakTypeSample(op.name, K, family, trial, float(a), lhs, rhs,
                                     ratio, lhs <= rhs + WEAK_TYPE_TOL)


@dataclass(frozen=True)
class ConstantEstimate:
    operator: str
    c_hat: float
    argmax: Optional[WeakTypeSample]
    family: str
    K_list: tuple[int, ...]
    trials: int
    seed: int
    n_samples: int
    samples: tuple[WeakTypeSample, ...] = ()


def estimate_constant(op: OscillationOperator, K_list: Sequence[int], family: str,
                      trials: int, seed: int, keep_samples: bool = False) -> ConstantEstimate:
    """Least constant that makes every sampled check pass: the sup of
    lhs * a / mass over the sweep (argmax sample kept as the witness)."""
    if not K_list:
        raise InvalidParameterError("K_list must be nonempty")
    best = 0.0
    arg = None
    kept = []
    n = 0
    for s in weak_type_samples(op, K_list, family, trials, seed):
        n += 1
        if keep_samples:
            kept.append(s)
        if s.ratio > best:
            best, arg = s.ratio, s
    return ConstantEstimate(op.name, best, arg, family, tuple(int(k) for k in K_list),
                            trials, seed, n, tuple(kept))


@dataclass(frozen=True)
class TransferBound:
    operator: str
    K: int
    a: float
    mu_value: Fraction
    bound: float
    ok: bool


def transfer_bound(psys: PermutationSystem, op: OscillationOperator, K: int,
                   a: float) -> TransferBound:
    """Measure of {statistic of the first K averages >= a} against
    shape(a) times the integral of |f|."""
    if K < 1:
        raise InvalidParameterError("K must be at least 1")
    flags = _level_flags(psys, op, K, a)
    mu = measure_of_flags(psys.space, flags)
    bound = op.bound_shape(a) * float(l1_norm(psys.space, psys.f))
    return TransferBound(op.name, K, float(a), mu, bound, float(mu) <= bound + WEAK_TYPE_TOL)


def _level_flags(psys: PermutationSystem, op: OscillationOperator, K: int,
                 a: float) -> list[bool]:
    mat = average_matrix(psys, K)
    stats = row_stats(op, mat)
    return [bool(v) for v in stats >= a]


@dataclass(frozen=True)
class IdentityReport:
    mus: tuple[Fraction, ...]
    all_equal: bool
    mean_matches: bool

    @property
    def ok(self) -> bool:
        return self.all_equal and self.mean_matches


def transference_identity_report(psys: PermutationSystem, op: OscillationOperator,
                                 K: int, a: float) -> IdentityReport:
    """Exact check of the averaging step behind the transfer.

    With m the level-set membership of each atom, the set at offset j is
    {atom: m[tau^j(atom)]}; its measure must match for j = 0..2K, and
    the j = 0 measure must equal the mean over j = 1..2K.
    """
    if K < 1:
        raise InvalidParameterError("K must be at least 1")
    m = _level_flags(psys, op, K, a)
    w = psys.space.weights
    fwd = psys.tau.forward
    pos = list(range(psys.n_atoms))
    mus = []
    for _ in range(2 * K + 1):
        mus.append(sum((w[atom] for atom in range(psys.n_atoms) if m[pos[atom]]),
                       start=Fraction(0)))
        pos = [fwd[p] for p in pos]
    mean = sum(mus[1:], start=Fraction(0)) / (2 * K)
    return IdentityReport(tuple(mus), len(set(mus)) == 1, mus[0] == mean)


def transference_identity_check(psys: PermutationSystem, op: OscillationOperator,
                                K: int, a: float) -> bool:
    return transference_identity_report(psys, op, K, a).ok


@dataclass(frozen=True)
class FlucWeakTypeRow:
    a: float
    mu_value: Fraction
    bound: float
    ok: bool


def fluc_weak_type_report(sys, eps: float, a_grid: Sequence[float], K: int,
                          c_hat: float = 1.0) -> list[FlucWeakTypeRow]:
    """Measure of {fluctuation count of the first K averages >= a} against
    c_hat * integral of |f| / (eps * sqrt(a)), for each grid threshold a.

    Accepts a PermutationSystem, or a CyclicSystem, read as the uniform
    shift system on its 2K values (each start has weight 1/2K and the
    cyclic window averages are its ergodic averages).
    """
    if K < 1:
        raise InvalidParameterError("K must be at least 1")
    if not (eps > 0 and math.isfinite(eps)):
        raise InvalidParameterError(f"eps must be positive and finite, got {eps!r}")
    if isinstance(sys, CyclicSystem):
        if K > sys.size:
            raise InvalidParameterError(f"K={K} exceeds the cycle half-length {sys.size}")
        mat = cyclic_average_matrix(sys.values, sys.size)[:, :K]
        counts = fluc_counts_rows(mat, eps)
        n_rows = 2 * sys.size
        norm1 = float(np.abs(np.asarray(sys.values, dtype=np.float64)).mean())
        mu_of = lambda flags: Fraction(int(sum(flags)), n_rows)
    else:
        mat = average_matrix(sys, K)
        counts = fluc_counts_rows(mat, eps)
        norm1 = float(l1_norm(sys.space, sys.f))
        mu_of = lambda flags: measure_of_flags(sys.space, flags)
    rows = []
    for a in a_grid:
        if not a > 0:
            raise InvalidParameterError("count thresholds must be positive")
        flags = [bool(v) for v in counts >= a]
        mu = mu_of(flags)
        bound = c_hat * norm1 / (eps * math.sqrt(a))
        rows.append(FlucWeakTypeRow(float(a), mu, bound, float(mu) <= bound + WEAK_TYPE_TOL))
    return rows
