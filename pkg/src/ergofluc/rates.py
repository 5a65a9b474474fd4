"""Rate constructions: growth-function iteration and the weak-type pipeline.

A growth function g maps naturals to naturals.  Its augmented form is
g~(n) = n + g(n), and ``iterate_growth(g, i, start)`` computes the i-fold
iterate g~^(i)(start) with exact integers.

From a weak-type constant c_hat and an L1 norm the pipeline produces:

    modulus      phi(lambda, eps) = (c_hat * norm1 / (eps * lambda))^2
    learnable    psi(lambda, eps) = 2 * phi(lambda/2, eps) / lambda
    metastable   Phi = g~^(ceil(phi(lambda, eps)))(0)

``delta`` is the learnable rate specialised to the weak-type modulus; it
is computed literally as 2 * phi(lambda/2, eps) / lambda so the identity
delta(lambda, eps) == 2 * modulus(lambda/2, eps) / lambda holds to the
last bit, and it equals (8/lambda) * (c_hat*norm1/(eps*lambda))^2.

Rates are returned as reals; take ceilings at the single point of use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import GrowthOverflowError, InvalidParameterError

# Iterates above this are treated as leaving the natural-number range.
# Python integers never wrap, so the cap just turns runaway growth into
# an explicit error instead of an unbounded computation.
ITERATE_CAP = 10 ** 100_000


@dataclass(frozen=True)
class GrowthFunction:
    """Constant, affine (a*n + b), or finite-table growth function.

    Table lookups past the end default to 0.  Values are naturals.
    """

    kind: str
    a: int = 0
    b: int = 0
    table: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("constant", "affine", "table"):
            raise InvalidParameterError(f"unknown growth kind {self.kind!r}")
        if self.kind == "affine" and (self.a < 0 or self.b < 0):
            raise InvalidParameterError("affine coefficients must be nonnegative")
        if self.kind == "constant" and self.b < 0:
            raise InvalidParameterError("constant value must be nonnegative")
        if self.kind == "table" and any(v < 0 for v in self.table):
            raise InvalidParameterError("table values must be nonnegative")

    def __call__(self, n: int) -> int:
        if n < 0:
            raise InvalidParameterError("growth functions take naturals")
        if self.kind == "constant":
            return self.b
        if self.kind == "affine":
            return self.a * n + self.b
        return self.table[n] if n < len(self.table) else 0

    @classmethod
    def constant(cls, c: int) -> "GrowthFunction":
        return cls("constant", b=int(c))

    @classmethod
    def affine(cls, a: int, b: int) -> "GrowthFunction":
        return cls("affine", a=int(a), b=int(b))

    @classmethod
    def from_table(cls, values: Sequence[int]) -> "GrowthFunction":
        return cls("table", table=tuple(int(v) for v in values))

    def to_json(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "c": self.b}
        if self.kind == "affine":
            return {"kind": "affine", "a": self.a, "b": self.b}
        return {"kind": "table", "values": list(self.table)}

    @classmethod
    def from_json(cls, doc: dict) -> "GrowthFunction":
        kind = doc.get("kind")
        if kind == "constant":
            return cls.constant(doc["c"])
        if kind == "affine":
            return cls.affine(doc["a"], doc["b"])
        if kind == "table":
            return cls.from_table(doc["values"])
        raise InvalidParameterError(f"unknown growth kind {kind!r}")


def decimal_digits(n: int) -> int:
    """Digit count of a nonnegative int without going through str().

    str() is capped at a few thousand digits by the interpreter; iterates
    here routinely have hundreds of thousands.
    """
    if n < 0:
        raise InvalidParameterError("expected a nonnegative integer")
    if n == 0:
        return 1
    # 30102/100000 < log10(2), so d never overshoots and the loop fixes it up
    d = max(1, (n.bit_length() - 1) * 30102 // 100000)
    probe = 10 ** d
    while probe <= n:
        probe *= 10
        d += 1
    return d


def iterate_growth(g: Callable[[int], int], i: int, start: int, cap: int = ITERATE_CAP) -> int:
    """Exact i-fold iterate of g~(n) = n + g(n) from ``start``."""
    if i < 0 or start < 0:
        raise InvalidParameterError("iteration count and start must be naturals")
    n = start
    for _ in range(i):
        step = g(n)
        if step < 0:
            raise InvalidParameterError("growth function returned a negative value")
        n = n + step
        if n > cap:
            raise GrowthOverflowError(
                f"iterate exceeded cap 10^{decimal_digits(cap) - 1}")
    return n


@dataclass(frozen=True)
class RateParams:
    """Weak-type constant and the L1 norm it multiplies."""

    c_hat: float
    norm1: float

    def __post_init__(self):
        if not (self.c_hat > 0 and math.isfinite(self.c_hat)):
            raise InvalidParameterError("c_hat must be positive and finite")
        if not (self.norm1 >= 0 and math.isfinite(self.norm1)):
            raise InvalidParameterError("norm1 must be nonnegative and finite")


def _check_unit_open(name: str, value: float):
    if not (0.0 < value < 1.0):
        raise InvalidParameterError(f"{name} must lie in the open interval (0, 1), got {value}")


def modulus_from_weak_type(params: RateParams, eps: float, lam: float) -> float:
    """(c_hat * norm1 / (eps * lambda))^2."""
    _check_unit_open("eps", eps)
    _check_unit_open("lambda", lam)
    t = params.c_hat * params.norm1 / (eps * lam)
    return t * t


def learnable_from_modulus(phi: Callable[[float, float], float], lam: float, eps: float) -> float:
    """2 * phi(lambda/2, eps) / lambda, for phi taking (lambda, eps)."""
    _check_unit_open("lambda", lam)
    _check_unit_open("eps", eps)
    return 2.0 * phi(lam / 2.0, eps) / lam


def metastability_bound(phi: Callable[[float, float], float], lam: float, eps: float,
                        g: Callable[[int], int], cap: int = ITERATE_CAP) -> int:
    """g~^(ceil(phi(lambda, eps)))(0)."""
    _check_unit_open("lambda", lam)
    _check_unit_open("eps", eps)
    value = phi(lam, eps)
    if not math.isfinite(value) or value < 0:
        raise InvalidParameterError(f"rate value {value!r} is not a finite nonnegative real")
    return iterate_growth(g, math.ceil(value), 0, cap=cap)


def delta(params: RateParams, lam: float, eps: float) -> float:
    """(8/lambda) * (c_hat*norm1/(eps*lambda))^2, built by composition."""

    def phi(lam2: float, eps2: float) -> float:
        return modulus_from_weak_type(params, eps2, lam2)

    return learnable_from_modulus(phi, lam, eps)
