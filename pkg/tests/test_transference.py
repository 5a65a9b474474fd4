import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergofluc.dynamics import CyclicSystem, shift_system
from ergofluc.errors import InvalidParameterError
from ergofluc.fluctuations import fluc_count
from ergofluc.measure import l1_norm
from ergofluc.rng import stream
from ergofluc.sampling import random_system
from ergofluc.transference import (default_a_grid, discrete_weak_type_check,
                                   estimate_constant, fluc_operator,
                                   fluc_weak_type_report, max_operator,
                                   transfer_bound, transference_identity_check,
                                   transference_identity_report, weak_type_samples)

from conftest import permutation_systems, short_float_lists


def periodization(sys, omega: int, K: int) -> CyclicSystem:
    """f read along the orbit of omega, wrapped at 2K positions."""
    vals, pos = [], omega
    for _ in range(2 * K):
        pos = sys.tau.forward[pos]
        vals.append(float(sys.f.values[pos]))
    return CyclicSystem.from_values(vals)


# operator plumbing

def test_max_operator_apply():
    op = max_operator()
    assert op.apply([-3.0, 1.0]) == 3.0
    assert op.bound_shape(2.0) == 0.5


def test_fluc_operator_apply():
    op = fluc_operator(1.0)
    assert op.apply((0, 1, 0, 1)) == pytest.approx(math.sqrt(3))
    assert op.apply((0.0, 0.1)) == 0.0


def test_apply_rejects_empty():
    with pytest.raises(InvalidParameterError):
        max_operator().apply([])


def test_bound_shape_rejects_nonpositive_level():
    with pytest.raises(InvalidParameterError):
        max_operator().bound_shape(0.0)


@given(short_float_lists, st.integers(0, 6))
def test_fluc_event_equivalence(x, k):
    # eps * sqrt(count) >= eps * sqrt(k) exactly when count >= k
    op = fluc_operator(0.5)
    if not x:
        return
    level = 0.5 * math.sqrt(k) if k else 0.0
    if level > 0:
        assert (op.apply(x) >= level) == (fluc_count(x, 0.5).count >= k)


# discrete side

def test_discrete_spike_hand_count():
    sys = CyclicSystem.from_values([1.0, 0.0, 0.0, 0.0])
    chk = discrete_weak_type_check(max_operator(), sys, 0.4)
    assert chk.lhs_count == 2
    assert chk.rhs_bound == pytest.approx(2.5)
    assert chk.ok


def test_discrete_zero_function():
    sys = CyclicSystem.from_values([0.0] * 8)
    chk = discrete_weak_type_check(max_operator(), sys, 0.3)
    assert chk.lhs_count == 0 and chk.ok


def test_discrete_fluc_level_above_cap():
    # at most K-1 fluctuations among K averages, so eps*sqrt(K) is out of reach
    sys = CyclicSystem.from_values([1.0, 0.0, 1.0, 0.0, 1.0, 0.0])
    op = fluc_operator(0.5)
    a = 0.5 * math.sqrt(3) + 1e-9
    assert discrete_weak_type_check(op, sys, a).lhs_count == 0


def test_estimate_constant_spike_hand_value():
    est = estimate_constant(max_operator(), [2], "spike", 1, seed=0)
    assert est.c_hat == pytest.approx(1.0)


def test_estimate_constant_zero_family():
    est = estimate_constant(max_operator(), [4, 8], "zero", 3, seed=1)
    assert est.c_hat == 0.0


def test_estimate_constant_monotone_in_trials():
    lo = estimate_constant(fluc_operator(0.25), [16], "indicator", 10, seed=9)
    hi = estimate_constant(fluc_operator(0.25), [16], "indicator", 20, seed=9)
    assert hi.c_hat >= lo.c_hat


def test_estimate_constant_rejects_empty_K():
    with pytest.raises(InvalidParameterError):
        estimate_constant(max_operator(), [], "spike", 1, seed=0)


def test_default_grid_geometric():
    grid = default_a_grid(fluc_operator(0.25), 16, [1.0] * 32)
    assert grid[0] == pytest.approx(0.25 / 4)
    assert grid[-1] == pytest.approx(0.25 * 4)
    for lo, hi in zip(grid, grid[1:]):
        assert hi == pytest.approx(2 * lo)


def test_weak_type_samples_are_reproducible():
    a = list(weak_type_samples(max_operator(), [8], "gaussian", 3, seed=4))
    b = list(weak_type_samples(max_operator(), [8], "gaussian", 3, seed=4))
    assert a == b


# permutation side

def test_transfer_three_cycle_hand_value():
    sys = shift_system([1, 0, 0])
    tb = transfer_bound(sys, max_operator(), 2, 0.6)
    assert tb.mu_value == Fraction(1, 3)
    assert tb.ok


def test_transfer_zero_function():
    sys = shift_system([0, 0, 0, 0])
    tb = transfer_bound(sys, max_operator(), 2, 0.5)
    assert tb.mu_value == 0 and tb.ok


def test_transfer_unreachable_level():
    sys = shift_system([1, 0, 0])
    tb = transfer_bound(sys, max_operator(), 2, 5.0)
    assert tb.mu_value == 0


def test_identity_three_cycle():
    sys = shift_system([1, 0, 0])
    rep = transference_identity_report(sys, max_operator(), 2, 0.6)
    assert rep.all_equal and rep.mean_matches
    assert set(rep.mus) == {Fraction(1, 3)}


def test_fluc_report_three_cycle():
    sys = shift_system([1, 0, 0])
    rows = fluc_weak_type_report(sys, 0.4, [1.0], 3)
    assert rows[0].mu_value == Fraction(2, 3)


@given(permutation_systems(max_atoms=8), st.integers(1, 6),
       st.sampled_from([0.2, 0.5, 1.0]), st.booleans())
def test_identity_always_exact(sys, K, a, use_max):
    op = max_operator() if use_max else fluc_operator(0.3)
    assert transference_identity_check(sys, op, K, a)


@settings(max_examples=40)
@given(permutation_systems(max_atoms=8), st.integers(1, 5),
       st.sampled_from([0.2, 0.5, 1.0]), st.booleans())
def test_discrete_bound_transfers_with_factor_two(sys, K, a, use_max):
    """If the start-count inequality holds at c for every orbit wrap of f,
    the level-set bound holds at 2c: positions [1,K] of each wrap see the
    true averages, and they are half of all 2K positions."""
    op = max_operator() if use_max else fluc_operator(0.3)
    c_needed = 0.0
    for omega in range(sys.n_atoms):
        chk = discrete_weak_type_check(op, periodization(sys, omega, K), a)
        mass = chk.rhs_bound  # c_hat = 1, so this is shape(a) * mass
        if chk.lhs_count:
            if mass == 0:
                return  # spike escapes its own wrap; no finite c certifies it
            c_needed = max(c_needed, chk.lhs_count / mass)
    if c_needed == 0.0:
        return
    tb = transfer_bound(sys, op.with_c_hat(2 * c_needed), K, a)
    assert tb.ok


def test_discrete_bound_transfers_at_equal_constant_bulk():
    """The sharper factor-one implication, swept over seeded draws."""
    fails = 0
    for trial in range(120):
        rng = stream(31, "bulk", trial)
        sys = random_system(rng, int(rng.integers(2, 9)))
        K = int(rng.integers(1, 6))
        for op in (fluc_operator(0.3), max_operator()):
            for a in (0.25, 0.75):
                c_needed = 0.0
                for omega in range(sys.n_atoms):
                    chk = discrete_weak_type_check(op, periodization(sys, omega, K), a)
                    if chk.lhs_count:
                        if chk.rhs_bound == 0:
                            c_needed = math.inf
                            break
                        c_needed = max(c_needed, chk.lhs_count / chk.rhs_bound)
                if c_needed in (0.0, math.inf):
                    continue
                if not transfer_bound(sys, op.with_c_hat(c_needed), K, a).ok:
                    fails += 1
    assert fails == 0


@given(permutation_systems(max_atoms=8), st.integers(1, 5))
def test_transfer_bound_with_generous_constant(sys, K):
    # mu <= 1 and a <= bound/l1 makes the inequality structural
    l1 = l1_norm(sys.space, sys.f)
    if l1 == 0:
        return
    a = float(l1)  # C(a) * l1 = l1 / a = 1 >= mu
    assert transfer_bound(sys, max_operator(), K, a).ok
