import itertools
from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from ergofluc.dynamics import PermutationSystem
from ergofluc.measure import RATIONAL, Automorphism, FiniteProbSpace, SimpleFunction

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


# sequences the greedy/oracle pair can both handle
short_float_lists = st.lists(
    st.floats(min_value=-5, max_value=5, allow_nan=False, allow_infinity=False,
              width=32),
    min_size=0, max_size=12,
)

eps_values = st.sampled_from([0.1, 0.25, 0.3, 0.5, 1.0])


@st.composite
def prob_spaces(draw, max_atoms: int = 10):
    n = draw(st.integers(min_value=1, max_value=max_atoms))
    units = draw(st.lists(st.integers(1, 12), min_size=n, max_size=n))
    total = sum(units)
    return FiniteProbSpace.from_weights([Fraction(u, total) for u in units])


@st.composite
def preserving_maps(draw, space: FiniteProbSpace):
    """A permutation that fixes each weight class setwise, hence preserves mu."""
    by_weight: dict[Fraction, list[int]] = {}
    for i, w in enumerate(space.weights):
        by_weight.setdefault(w, []).append(i)
    forward = [0] * space.n_atoms
    for atoms in by_weight.values():
        image = draw(st.permutations(atoms))
        for src, dst in zip(atoms, image):
            forward[src] = dst
    return Automorphism.from_forward(forward)


@st.composite
def rational_functions(draw, n_atoms: int, denom: int = 8):
    nums = draw(st.lists(st.integers(-denom, denom), min_size=n_atoms,
                         max_size=n_atoms))
    return SimpleFunction(tuple(Fraction(p, denom) for p in nums), RATIONAL)


@st.composite
def permutation_systems(draw, max_atoms: int = 8, denom: int = 8):
    space = draw(prob_spaces(max_atoms))
    tau = draw(preserving_maps(space))
    f = draw(rational_functions(space.n_atoms, denom))
    return PermutationSystem(space, tau, f)


def chain_pairs(x, eps):
    """Reference fluctuation count, independent of both the greedy scan and
    the DP-over-end-positions oracle: recurse on the least admissible start.

    chains are i_1 < j_1 <= i_2 < j_2 <= ... with |x_i - x_j| >= eps
    """
    n = len(x)
    memo: dict[int, int] = {}

    def from_start(start: int) -> int:
        if start in memo:
            return memo[start]
        best = 0
        for i, j in itertools.combinations(range(start, n), 2):
            if abs(x[i] - x[j]) >= eps:
                best = max(best, 1 + from_start(j))
        memo[start] = best
        return best

    return from_start(0)
