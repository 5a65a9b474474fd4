"""Finite probability spaces with exact rational weights.

Atoms are the integers ``0 .. n_atoms-1``.  Every subset of atoms is an
event, so the outer measure coincides with the measure itself and all set
operations stay exact.  Integration of a simple function is the finite
weighted sum of its values.

Two numeric modes exist for function values: exact rationals
(:class:`fractions.Fraction`) and binary64 floats.  A function carries a
mode tag; rational-mode results are exact, float-mode comparisons elsewhere
in the package use an absolute tolerance of ``FLOAT_ABS_TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DomainMismatchError, InvalidParameterError

FLOAT_ABS_TOL = 1e-9

Scalar = Union[Fraction, float]

RATIONAL = "rational"
FLOAT64 = "float64"


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InvalidParameterError(f"cannot read {value!r} as an exact rational")


@dataclass(frozen=True)
class FiniteProbSpace:
    """Atoms ``0..n-1`` with nonnegative rational weights summing to one."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.weights:
            raise InvalidParameterError("a space needs at least one atom")
        for w in self.weights:
            if not isinstance(w, Fraction):
                raise InvalidParameterError("weights must be exact rationals")
            if w < 0:
                raise InvalidParameterError(f"negative weight {w}")
        total = sum(self.weights, Fraction(0))
        if total != 1:
            raise InvalidParameterError(f"weights sum to {total}, expected 1")

    @property
    def n_atoms(self) -> int:
        return len(self.weights)

    @classmethod
    def uniform(cls, n: int) -> "FiniteProbSpace":
        if n <= 0:
            raise InvalidParameterError("atom count must be positive")
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    @classmethod
    def from_weights(cls, raw: Iterable) -> "FiniteProbSpace":
        return cls(tuple(_as_fraction(w) for w in raw))


@dataclass(frozen=True)
class EventSet:
    """A subset of the atoms of some space."""

    members: frozenset[int]

    @classmethod
    def of(cls, atoms: Iterable[int]) -> "EventSet":
        return cls(frozenset(atoms))

    def __contains__(self, atom: int) -> bool:
        return atom in self.members


@dataclass(frozen=True)
class SimpleFunction:
    """A function on the atoms, rational-valued or binary64-valued."""

    values: tuple[Scalar, ...]
    mode: str

    def __post_init__(self):
        if self.mode == RATIONAL:
            if not all(isinstance(v, Fraction) for v in self.values):
                raise InvalidParameterError("rational mode requires Fraction values")
        elif self.mode == FLOAT64:
            for v in self.values:
                if not isinstance(v, float) or not math.isfinite(v):
                    raise InvalidParameterError("float64 mode requires finite floats")
        else:
            raise InvalidParameterError(f"unknown mode {self.mode!r}")

    @classmethod
    def rational(cls, raw: Iterable) -> "SimpleFunction":
        return cls(tuple(_as_fraction(v) for v in raw), RATIONAL)

    @classmethod
    def binary64(cls, raw: Iterable[float]) -> "SimpleFunction":
        return cls(tuple(float(v) for v in raw), FLOAT64)

    @classmethod
    def indicator(cls, n_atoms: int, members: Iterable[int], mode: str = RATIONAL) -> "SimpleFunction":
        hit = set(members)
        if mode == RATIONAL:
            return cls.rational(1 if i in hit else 0 for i in range(n_atoms))
        return cls.binary64(1.0 if i in hit else 0.0 for i in range(n_atoms))

    def __len__(self) -> int:
        return len(self.values)

    def abs(self) -> "SimpleFunction":
        return SimpleFunction(tuple(abs(v) for v in self.values), self.mode)

    def __call__(self, atom: int) -> Scalar:
        return self.values[atom]


@dataclass(frozen=True)
class Automorphism:
    """A permutation of the atoms, stored with its inverse."""

    forward: tuple[int, ...]
    inverse: tuple[int, ...]

    def __post_init__(self):
        n = len(self.forward)
        if sorted(self.forward) != list(range(n)):
            raise InvalidParameterError("forward array is not a permutation")
        if len(self.inverse) != n or any(self.forward[self.inverse[i]] != i for i in range(n)):
            raise InvalidParameterError("inverse array does not invert forward")

    @classmethod
    def from_forward(cls, forward: Sequence[int]) -> "Automorphism":
        fwd = tuple(int(i) for i in forward)
        n = len(fwd)
        if sorted(fwd) != list(range(n)):
            raise InvalidParameterError("forward array is not a permutation")
        inv = [0] * n
        for i, j in enumerate(fwd):
            inv[j] = i
        return cls(fwd, tuple(inv))

    @classmethod
    def identity(cls, n: int) -> "Automorphism":
        idx = tuple(range(n))
        return cls(idx, idx)

    @classmethod
    def cyclic_shift(cls, n: int) -> "Automorphism":
        """The n-cycle 0 -> 1 -> ... -> n-1 -> 0."""
        return cls.from_forward([(i + 1) % n for i in range(n)])

    def __len__(self) -> int:
        return len(self.forward)

    def apply(self, atom: int) -> int:
        return self.forward[atom]

    def apply_inverse(self, atom: int) -> int:
        return self.inverse[atom]


def _check_event(space: FiniteProbSpace, event) -> frozenset[int]:
    members = event.members if isinstance(event, EventSet) else frozenset(event)
    for atom in members:
        if not (0 <= atom < space.n_atoms):
            raise DomainMismatchError(f"atom {atom} outside space of size {space.n_atoms}")
    return members


def measure(space: FiniteProbSpace, event) -> Fraction:
    """Exact measure of an event: the sum of its atom weights."""
    members = _check_event(space, event)
    return sum((space.weights[a] for a in members), Fraction(0))


def _check_length(space: FiniteProbSpace, f: SimpleFunction):
    if len(f) != space.n_atoms:
        raise DomainMismatchError(
            f"function on {len(f)} atoms does not match space of size {space.n_atoms}"
        )


def integrate(space: FiniteProbSpace, f: SimpleFunction) -> Scalar:
    """Weighted sum of f over the atoms. Exact in rational mode."""
    _check_length(space, f)
    if f.mode == RATIONAL:
        return sum((v * w for v, w in zip(f.values, space.weights)), Fraction(0))
    return math.fsum(v * float(w) for v, w in zip(f.values, space.weights))


def l1_norm(space: FiniteProbSpace, f: SimpleFunction) -> Scalar:
    """Integral of |f|."""
    return integrate(space, f.abs())


def check_measure_preserving(space: FiniteProbSpace, tau: Automorphism) -> bool:
    """True iff every atom keeps its weight under tau."""
    if len(tau) != space.n_atoms:
        raise DomainMismatchError("permutation length does not match space")
    return all(space.weights[tau.forward[i]] == space.weights[i] for i in range(space.n_atoms))


def compose(f: SimpleFunction, tau: Automorphism) -> SimpleFunction:
    """The function omega -> f(tau(omega))."""
    if len(f) != len(tau):
        raise DomainMismatchError("function and permutation sizes differ")
    return SimpleFunction(tuple(f.values[tau.forward[i]] for i in range(len(f))), f.mode)


def weights_from_json(raw: Sequence) -> FiniteProbSpace:
    return FiniteProbSpace.from_weights(raw)


def function_from_json(raw: Sequence) -> SimpleFunction:
    """Strings parse as exact rationals, bare numbers as binary64."""
    if all(isinstance(v, str) for v in raw):
        return SimpleFunction.rational(raw)
    if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw):
        return SimpleFunction.binary64(raw)
    raise InvalidParameterError("function values must be all strings or all numbers")


def rational_str(x: Fraction) -> str:
    """Serialize a rational as 'p/q' (or 'p' when q == 1)."""
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
