"""Ergodic averages on finite systems.

Two system flavours are supported.  A :class:`CyclicSystem` holds 2K
values indexed by positions 1..2K with cyclic wraparound; its averages

    avg_n(k) = (1/n) * sum_{i=1..n} f(wrap(k + i)),   wrap(m) = ((m-1) mod 2K) + 1

start one step past k.  A :class:`PermutationSystem` pairs a finite
probability space with a weight-preserving permutation tau and a simple
function f; its ergodic averages

    A_n f(omega) = (1/n) * sum_{i=1..n} f(tau^i(omega))

likewise start at tau(omega), never at omega itself.  On the uniform
2K-atom shift system the two notions agree exactly.

``average_sequence`` is 0-indexed: entry t holds A_{t+1} f.  Validators
and interval chains elsewhere index into that array.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DomainMismatchError, InvalidParameterError, WindowRangeError
from .measure import (
    RATIONAL,
    Automorphism,
    FiniteProbSpace,
    Scalar,
    SimpleFunction,
    check_measure_preserving,
)


@dataclass(frozen=True, eq=False)
class CyclicSystem:
    """2K values on a cycle, averaged over forward windows of length <= K."""

    size: int  # K
    values: tuple[float, ...]

    def __post_init__(self):
        if self.size < 1:
            raise InvalidParameterError("K must be at least 1")
        if len(self.values) != 2 * self.size:
            raise InvalidParameterError(
                f"expected {2 * self.size} values for K={self.size}, got {len(self.values)}"
            )

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "CyclicSystem":
        vals = tuple(float(v) for v in values)
        if len(vals) % 2 != 0:
            raise InvalidParameterError("cyclic systems need an even number of values")
        return cls(len(vals) // 2, vals)

    @classmethod
    def from_json(cls, doc: dict) -> "CyclicSystem":
        return cls(int(doc["K"]), tuple(float(v) for v in doc["values"]))

    def wrap(self, m: int) -> int:
        return (m - 1) % (2 * self.size) + 1

    def value_at(self, position: int) -> float:
        """Value at cyclic position (1-indexed)."""
        return self.values[self.wrap(position) - 1]


def cyclic_average(sys: CyclicSystem, n: int, k: int) -> float:
    """Mean of the n values following position k on the cycle."""
    if not 1 <= n <= sys.size:
        raise WindowRangeError(f"n must satisfy 1 <= n <= K={sys.size}, got {n}")
    if not 1 <= k <= 2 * sys.size:
        raise WindowRangeError(f"k must satisfy 1 <= k <= 2K={2 * sys.size}, got {k}")
    return sum(sys.value_at(k + i) for i in range(1, n + 1)) / n


def cyclic_average_matrix(values: np.ndarray, K: int) -> np.ndarray:
    """All window averages at once: entry [k-1, n-1] = avg_n(k).

    Vectorised with a prefix sum over the values extended K steps past
    the cycle, so position k + i never needs an explicit wrap.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (2 * K,):
        raise InvalidParameterError(f"expected {2 * K} values, got shape {values.shape}")
    ext = np.concatenate([values, values[:K]])
    prefix = np.concatenate([[0.0], np.cumsum(ext)])
    k_idx = np.arange(2 * K)[:, None]
    n_idx = np.arange(1, K + 1)[None, :]
    return (prefix[k_idx + n_idx + 1] - prefix[k_idx + 1]) / n_idx


@dataclass(frozen=True)
class PermutationSystem:
    """A weight-preserving permutation acting on a finite space, plus f."""

    space: FiniteProbSpace
    tau: Automorphism
    f: SimpleFunction

    def __post_init__(self):
        if len(self.tau) != self.space.n_atoms or len(self.f) != self.space.n_atoms:
            raise DomainMismatchError("space, permutation, and function sizes differ")
        if not check_measure_preserving(self.space, self.tau):
            raise InvalidParameterError("permutation does not preserve the weights")

    @property
    def n_atoms(self) -> int:
        return self.space.n_atoms


def system_from_json(doc: dict) -> PermutationSystem:
    from .measure import function_from_json, weights_from_json

    space = weights_from_json(doc["weights"])
    tau = Automorphism.from_forward(doc["tau"])
    f = function_from_json(doc["f"])
    return PermutationSystem(space, tau, f)


def shift_system(values: Sequence, mode: str = RATIONAL) -> PermutationSystem:
    """Uniform space on len(values) atoms with the cyclic shift as tau.

    Atom j carries value j+1 of the corresponding cyclic system.
    """
    n = len(values)
    space = FiniteProbSpace.uniform(n)
    tau = Automorphism.cyclic_shift(n)
    f = SimpleFunction.rational(values) if mode == RATIONAL else SimpleFunction.binary64(values)
    return PermutationSystem(space, tau, f)


def ergodic_average(sys: PermutationSystem, n: int, omega: int) -> Scalar:
    """A_n f(omega): mean of f over the n atoms tau(omega)..tau^n(omega)."""
    if n < 1:
        raise WindowRangeError("n must be at least 1")
    if not 0 <= omega < sys.n_atoms:
        raise DomainMismatchError(f"atom {omega} outside space of size {sys.n_atoms}")
    total = Fraction(0) if sys.f.mode == RATIONAL else 0.0
    atom = omega
    for _ in range(n):
        atom = sys.tau.forward[atom]
        total += sys.f.values[atom]
    return total / n


def average_sequence(sys: PermutationSystem, N: int, omega: int) -> list[Scalar]:
    """The first N ergodic averages at omega; entry t is A_{t+1} f(omega)."""
    if N < 0:
        raise WindowRangeError("N must be nonnegative")
    if not 0 <= omega < sys.n_atoms:
        raise DomainMismatchError(f"atom {omega} outside space of size {sys.n_atoms}")
    out: list[Scalar] = []
    total = Fraction(0) if sys.f.mode == RATIONAL else 0.0
    atom = omega
    for n in range(1, N + 1):
        atom = sys.tau.forward[atom]
        total += sys.f.values[atom]
        out.append(total / n)
    return out


def average_matrix(sys: PermutationSystem, N: int) -> np.ndarray:
    """Float averages for every atom at once: entry [omega, t] = A_{t+1} f(omega).

    Binary64 fast path shared by the validators and the experiment
    sweeps; rational-mode values are rounded to float64 here.
    """
    if N < 0:
        raise WindowRangeError("N must be nonnegative")
    m = sys.n_atoms
    fvals = np.array([float(v) for v in sys.f.values], dtype=np.float64)
    fwd = np.array(sys.tau.forward, dtype=np.intp)
    mat = np.empty((m, N), dtype=np.float64)
    pos = np.arange(m, dtype=np.intp)
    acc = np.zeros(m, dtype=np.float64)
    for t in range(N):
        pos = fwd[pos]
        acc += fvals[pos]
        mat[:, t] = acc / (t + 1)
    return mat


def event_measure_over_orbit(sys: PermutationSystem, N: int,
                             predicate: Callable[[Sequence[Scalar]], bool]) -> Fraction:
    """Exact measure of {omega : predicate(first N averages at omega)}."""
    total = Fraction(0)
    for omega in range(sys.n_atoms):
        if predicate(average_sequence(sys, N, omega)):
            total += sys.space.weights[omega]
    return total


def measure_of_flags(space: FiniteProbSpace, flags: Sequence[bool]) -> Fraction:
    """Exact measure of the atom set marked True."""
    if len(flags) != space.n_atoms:
        raise DomainMismatchError("flag vector does not match space size")
    return sum((w for w, ok in zip(space.weights, flags) if ok), Fraction(0))


# Seeded value families for cyclic sweeps. Each generator takes an RNG
# and the number of positions and returns a float array.

def _family_indicator(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.random(n) < 0.5).astype(np.float64)


def _family_spike(rng: np.random.Generator, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.float64)
    out[rng.integers(0, n)] = 1.0
    return out


def _family_gaussian(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n)


def _family_zero(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.zeros(n, dtype=np.float64)


FAMILY_GENERATORS: dict[str, Callable[[np.random.Generator, int], np.ndarray]] = {
    "indicator": _family_indicator,
    "spike": _family_spike,
    "gaussian": _family_gaussian,
    "zero": _family_zero,
}


def family_values(name: str, rng: np.random.Generator, n: int) -> np.ndarray:
    try:
        gen = FAMILY_GENERATORS[name]
    except KeyError:
        raise InvalidParameterError(f"unknown value family {name!r}") from None
    return gen(rng, n)
