"""Random finite systems with exact rational data.

Weights are drawn as integer units and normalized, so they stay exact;
automorphisms shuffle atoms only within equal-weight classes, which
keeps them measure-preserving by construction.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

import numpy as np

from .dynamics import PermutationSystem
from .errors import BudgetError, InvalidParameterError
from .measure import Automorphism, FiniteProbSpace, SimpleFunction, l1_norm

RESAMPLE_CAP = 10_000


def random_space(rng: np.random.Generator, n_atoms: int, unit_max: int = 16) -> FiniteProbSpace:
    """Space with weights u_i / sum(u), u_i uniform on [1, unit_max]."""
    if n_atoms < 1:
        raise InvalidParameterError("n_atoms must be at least 1")
    if unit_max < 1:
        raise InvalidParameterError("unit_max must be at least 1")
    units = [int(u) for u in rng.integers(1, unit_max + 1, size=n_atoms)]
    total = sum(units)
    return FiniteProbSpace(tuple(Fraction(u, total) for u in units))


def random_automorphism(rng: np.random.Generator, space: FiniteProbSpace) -> Automorphism:
    """Measure-preserving permutation: a uniform shuffle of each weight class."""
    classes: dict[Fraction, list[int]] = defaultdict(list)
    for atom, w in enumerate(space.weights):
        classes[w].append(atom)
    forward = [0] * space.n_atoms
    for members in classes.values():
        images = [members[int(i)] for i in rng.permutation(len(members))]
        for atom, image in zip(members, images):
            forward[atom] = image
    return Automorphism.from_forward(forward)


def random_rational_function(rng: np.random.Generator, n_atoms: int,
                             denom: int = 8) -> SimpleFunction:
    """Values p/denom with p uniform on [-denom, denom], so |f| <= 1."""
    if denom < 1:
        raise InvalidParameterError("denom must be at least 1")
    ps = rng.integers(-denom, denom + 1, size=n_atoms)
    return SimpleFunction.rational([Fraction(int(p), denom) for p in ps])


def random_system(rng: np.random.Generator, n_atoms: int, unit_max: int = 16,
                  denom: int = 8, min_l1: Fraction | None = None) -> PermutationSystem:
    """Random (space, tau, f); with min_l1 set, f is resampled until
    the integral of |f| reaches it."""
    space = random_space(rng, n_atoms, unit_max)
    tau = random_automorphism(rng, space)
    for _ in range(RESAMPLE_CAP):
        f = random_rational_function(rng, n_atoms, denom)
        if min_l1 is None or l1_norm(space, f) >= min_l1:
            return PermutationSystem(space, tau, f)
    raise BudgetError(f"could not reach the l1 floor {min_l1} in {RESAMPLE_CAP} draws")
