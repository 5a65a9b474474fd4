import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergofluc.dynamics import average_matrix, shift_system
from ergofluc.errors import BudgetError, InvalidParameterError
from ergofluc.fluctuations import fluc_counts_rows
from ergofluc.measure import measure
from ergofluc.rates import GrowthFunction, iterate_growth
from ergofluc.rng import stream
from ergofluc.sampling import random_system
from ergofluc.validators import (adversarial_growth_table, least_failing_k,
                                 validate_learnable_rate, validate_modulus,
                                 validate_uniform_metastability)

from conftest import permutation_systems


def swap_system():
    return shift_system([1, 0])


def three_cycle():
    return shift_system([1, 0, 0])


# modulus certificates

def test_modulus_three_cycle_certifies_three():
    v = validate_modulus(three_cycle(), 3, 0.4, 0.5, [3])
    assert v.ok and bool(v)


def test_modulus_three_cycle_rejects_one():
    # two of three starting atoms see a full-size fluctuation
    v = validate_modulus(three_cycle(), 1, 0.4, 0.5, [3])
    assert not v.ok
    assert v.witness == 3


def test_modulus_checks_every_checkpoint():
    v = validate_modulus(three_cycle(), 2, 0.4, 0.5, [1, 2, 3])
    assert v.ok
    assert v.horizon == 3


# learnable rates

def chain_for_swap():
    return [(0, 1), (2, 3), (4, 5)]


def test_learnable_swap_needs_second_interval():
    sys = swap_system()
    assert not validate_learnable_rate(sys, 0.0, 0.3, 0.4, chain_for_swap()).ok
    v = validate_learnable_rate(sys, 1.0, 0.3, 0.4, chain_for_swap())
    # witness is the index into the chain, not the interval start
    assert v.ok and v.witness == 1


def test_learnable_rejects_overlapping_chain():
    with pytest.raises(InvalidParameterError):
        validate_learnable_rate(swap_system(), 2.0, 0.3, 0.4, [(0, 2), (1, 3)])


def test_learnable_rejects_empty_interval():
    with pytest.raises(InvalidParameterError):
        validate_learnable_rate(swap_system(), 2.0, 0.3, 0.4, [(2, 2)])


# uniform metastability

def test_metastability_swap_hand_case():
    v = validate_uniform_metastability(swap_system(), 2, 0.5, 0.3,
                                       GrowthFunction.constant(4), n_horizon=64)
    assert v.ok and v.witness == 1


def test_metastability_respects_phi_cutoff():
    # the only good windows start past Phi = 0
    v = validate_uniform_metastability(swap_system(), 0, 0.5, 0.3,
                                       GrowthFunction.constant(4), n_horizon=64)
    assert not v.ok


def test_metastability_budget_error_when_nothing_fits():
    with pytest.raises(BudgetError):
        validate_uniform_metastability(swap_system(), 5, 0.5, 0.3,
                                       GrowthFunction.constant(100), n_horizon=50)


def test_metastability_bad_fitting_window_is_a_clean_no():
    # eps = 0 means no window with two distinct values is ever good; the
    # windows that fit inside the horizon decide the answer
    sys = swap_system()
    v = validate_uniform_metastability(sys, 3, 0.5, 1e-12,
                                       GrowthFunction.constant(1), n_horizon=50)
    assert not v.ok


# failure search and the adversarial growth function

def test_least_failing_k_swap():
    assert least_failing_k(swap_system(), 1, 0.1, 0.4, 64) == 1


def test_least_failing_k_none_when_settled():
    # far in the tail the swap averages are pinned near 1/2
    assert least_failing_k(swap_system(), 400, 0.1, 0.4, 32) is None


def test_least_failing_k_is_least():
    sys = three_cycle()
    k = least_failing_k(sys, 1, 0.2, 0.5, 64)
    assert k is not None
    mat = average_matrix(sys, 1 + k + 1)
    window = mat[:, 1:1 + k + 1]
    spreads = window.max(axis=1) - window.min(axis=1)
    bad = measure(sys.space, [i for i in range(3) if spreads[i] >= 0.2])
    assert bad >= Fraction(1, 2)
    if k > 0:
        window = mat[:, 1:1 + k]
        spreads = window.max(axis=1) - window.min(axis=1)
        bad = measure(sys.space, [i for i in range(3) if spreads[i] >= 0.2])
        assert bad < Fraction(1, 2)


def test_adversarial_table_defeats_small_phi():
    # with a tiny eps the swap keeps fluctuating past any window start we
    # can certify, so the constructed g has no good window below the horizon
    sys = swap_system()
    horizon = 50
    g = adversarial_growth_table(sys, 0.001, 0.4, horizon, k_budget=128)
    for phi in (1, 10, horizon):
        v = validate_uniform_metastability(sys, phi, 0.4, 0.001, g,
                                           n_horizon=4 * horizon)
        assert not v.ok


# the equivalence arguments, tested as implications on sampled systems

@settings(max_examples=30)
@given(permutation_systems(max_atoms=6), st.integers(1, 12),
       st.sampled_from([0.25, 0.5]), st.sampled_from([0.25, 0.5]),
       st.integers(0, 6))
def test_settled_prefix_gives_metastability(sys, n_star, lam, eps, g_seed):
    """Once every window starting at N* stays eps-flat off mass lam, any
    growth function is satisfied with Phi = N*."""
    horizon = 64
    mat = average_matrix(sys, horizon + 1)
    tail = mat[:, n_star:]
    spreads = tail.max(axis=1) - tail.min(axis=1)
    good = measure(sys.space, [i for i in range(sys.n_atoms) if spreads[i] <= eps])
    if not good > 1 - lam:
        return  # this start is not settled; nothing to conclude
    rng = stream(g_seed, "settled")
    g = GrowthFunction.from_table(list(rng.integers(0, 8, size=8)))
    if n_star + g(n_star) > horizon:
        return
    v = validate_uniform_metastability(sys, n_star, lam, eps, g, n_horizon=horizon)
    assert v.ok


@settings(max_examples=25)
@given(st.integers(0, 10_000), st.sampled_from([0.25, 0.5]),
       st.sampled_from([0.25, 0.5]))
def test_universal_failure_defeats_every_phi(seed, lam, eps):
    """Wherever the failure search succeeds at every start up to the horizon,
    the table it builds admits no good window at all."""
    rng = stream(seed, "defeat")
    sys = random_system(rng, int(rng.integers(2, 7)))
    horizon = 24
    ks = [least_failing_k(sys, n, eps, lam, 64) for n in range(horizon + 1)]
    if any(k is None for k in ks):
        return
    g = GrowthFunction.from_table([int(k) for k in ks])
    for phi in (0, horizon // 2, horizon):
        assert not validate_uniform_metastability(sys, phi, lam, eps, g,
                                                  n_horizon=horizon + 70).ok


@settings(max_examples=30)
@given(st.integers(0, 10_000), st.sampled_from([0.25, 0.5]),
       st.sampled_from([0.25, 0.5]), st.floats(min_value=0.0, max_value=6.0),
       st.integers(0, 3), st.integers(1, 4))
def test_learnable_chain_iterates_to_metastability(seed, lam, eps, psi, a, b):
    """A pass on the canonical iteration chain pushes through to the
    iterated bound."""
    rng = stream(seed, "chain")
    sys = random_system(rng, int(rng.integers(2, 7)))
    g = GrowthFunction.affine(a, b)  # b >= 1, so every interval is nonempty
    steps = math.ceil(psi)
    chain = []
    n = 0
    for _ in range(math.floor(psi) + 1):
        chain.append((n, n + g(n)))
        n = n + g(n)
    if chain[-1][1] > 200:
        return
    lv = validate_learnable_rate(sys, psi, eps, lam, chain)
    if not lv.ok:
        return
    phi_bound = iterate_growth(g, steps, 0)
    if phi_bound > 150:
        return
    v = validate_uniform_metastability(sys, phi_bound, lam, eps, g, n_horizon=400)
    assert v.ok


@settings(max_examples=20)
@given(st.integers(0, 10_000), st.sampled_from([0.25, 0.5]),
       st.sampled_from([0.25, 0.5]))
def test_certified_modulus_feeds_learnable(seed, lam, eps):
    """An empirically certified fluctuation modulus at lam/2 makes
    psi = 2 phi / lam a learnable rate for in-horizon chains."""
    rng = stream(seed, "feeds")
    sys = random_system(rng, int(rng.integers(2, 7)))
    horizon = 256
    mat = average_matrix(sys, horizon)
    counts = fluc_counts_rows(mat, eps)
    # smallest certifiable bound: strictly more than the count on all but
    # a lam/2 mass of atoms
    order = np.argsort(counts, kind="stable")
    acc = Fraction(0)
    phi_star = int(counts[order[-1]]) + 1
    for atom in order:
        acc += sys.space.weights[int(atom)]
        if acc > 1 - lam / 2:
            phi_star = int(counts[int(atom)]) + 1
            break
    assert validate_modulus(sys, phi_star, eps, lam / 2, [horizon]).ok
    psi = 2.0 * phi_star / lam
    n_intervals = math.floor(psi) + 1
    if n_intervals * 2 + 2 > horizon:
        return
    chain = [(2 * t, 2 * t + 1) for t in range(n_intervals)]
    assert validate_learnable_rate(sys, psi, eps, lam, chain).ok
