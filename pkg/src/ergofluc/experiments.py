"""The experiment suite behind the CLI `run` subcommand.

Each experiment is a pure function of (config, seed): it returns rows
for the CSV/TSV reports, a JSON-able summary, and a pass flag.  Row
content never depends on wall clock or scheduling, so reruns are
byte-identical; timestamps are added only when the JSON summary is
written.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Optional

import numpy as np

from .config import RunConfig
from .density import (BlockSet, approx_identity_check, density_oscillation,
                      density_prefix, nonconvergence_witness, shift_average)
from .dynamics import (CyclicSystem, PermutationSystem, average_matrix,
                       cyclic_average_matrix, family_values, measure_of_flags)
from .errors import BudgetError, GrowthOverflowError
from .fluctuations import fluc_counts_rows
from .measure import Automorphism, FiniteProbSpace, SimpleFunction, l1_norm, rational_str
from .rates import (GrowthFunction, RateParams, decimal_digits, delta,
                    iterate_growth, learnable_from_modulus)
from .rng import stream
from .sampling import random_system
from .transference import (OscillationOperator, default_a_grid, discrete_weak_type_check,
                           estimate_constant, fluc_operator, fluc_weak_type_report,
                           max_operator, row_stats, transference_identity_report,
                           transfer_bound, weak_type_samples)
from .validators import (Verdict, adversarial_growth_table, validate_learnable_rate,
                         validate_modulus, validate_uniform_metastability)

HELD_OUT_SEED_OFFSET = 1


@dataclass
class ExperimentResult:
    name: str
    ok: bool
    header: tuple[str, ...]
    rows: list[tuple]
    summary: dict
    failing: Optional[dict]


def _finish(name: str, header: tuple[str, ...], rows: list[tuple],
            summary: dict, ok_col: str = "ok") -> ExperimentResult:
    idx = header.index(ok_col)
    failing = None
    for row in rows:
        if not row[idx]:
            failing = dict(zip(header, [str(v) for v in row]))
            break
    ok = failing is None and summary.get("extra_checks_ok", True)
    summary = dict(summary)
    summary["ok"] = ok
    if failing is not None:
        summary["failing_row"] = failing
    return ExperimentResult(name, ok, header, rows, summary, failing)


def _operators(cfg: RunConfig, c_fluc: float = 1.0, c_max: float = 1.0):
    ops = [fluc_operator(eps, c_fluc) for eps in cfg.eps_list]
    ops.append(max_operator(c_max))
    return ops


# -- E0 ----------------------------------------------------------------

def _three_cycle() -> PermutationSystem:
    space = FiniteProbSpace.uniform(3)
    tau = Automorphism.cyclic_shift(3)
    f = SimpleFunction.rational([1, 0, 0])
    return PermutationSystem(space, tau, f)


def _two_swap() -> PermutationSystem:
    space = FiniteProbSpace.uniform(2)
    tau = Automorphism.from_forward([1, 0])
    f = SimpleFunction.rational([1, 0])
    return PermutationSystem(space, tau, f)


def exp_smoke(cfg: RunConfig, seed: int) -> ExperimentResult:
    """Tiny built-in fixtures exercising one call from every module."""
    rows = []
    cyc = _three_cycle()
    swap = _two_swap()

    rep = transference_identity_report(cyc, max_operator(), 2, 0.6)
    rows.append(("identity_three_cycle", rational_str(rep.mus[0]), rep.ok))

    tb = transfer_bound(cyc, max_operator(), 2, 0.6)
    rows.append(("transfer_three_cycle", rational_str(tb.mu_value),
                 tb.ok and tb.mu_value == Fraction(1, 3)))

    dc = discrete_weak_type_check(max_operator(), CyclicSystem.from_values([1.0, 0, 0, 0]), 0.4)
    rows.append(("discrete_spike", f"lhs={dc.lhs_count}", dc.ok and dc.lhs_count == 2))

    v = validate_uniform_metastability(swap, 2, 0.5, 0.3, GrowthFunction.constant(4),
                                       n_horizon=64)
    rows.append(("metastability_swap", f"witness={v.witness}", v.ok))

    d = density_prefix(BlockSet.default(), 7)
    rows.append(("density_block_peak", rational_str(d.value), d.value == Fraction(1, 3)))

    mod = validate_modulus(cyc, 3, 0.4, 0.5, [3])
    rows.append(("modulus_three_cycle", f"phi=3,N=3", mod.ok))

    return _finish("E0-smoke", ("check", "detail", "ok"), rows, {"n_checks": len(rows)})


# -- E1 ----------------------------------------------------------------

SAMPLE_HEADER = ("operator", "K", "family", "trial", "a", "lhs", "rhs", "ratio", "ok")


def exp_constant(cfg: RunConfig, seed: int) -> ExperimentResult:
    """Estimate the weak-type constant of each operator over the sweep."""
    rows = []
    per_op: dict[str, dict] = {}
    for op in _operators(cfg):
        best = 0.0
        arg = None
        for family in cfg.families:
            est = estimate_constant(op, cfg.K_list, family, cfg.trials, seed,
                                    keep_samples=True)
            for s in est.samples:
                rows.append((s.operator, s.K, s.family, s.trial, s.a, s.lhs, s.rhs,
                             s.ratio, s.ok))
            if est.c_hat >= best:
                take = est.c_hat > best or arg is None
                if take:
                    best, arg = est.c_hat, est.argmax
        per_op[op.name] = {
            "c_hat": best,
            "argmax_config": None if arg is None else {
                "K": arg.K, "family": arg.family, "trial": arg.trial, "a": arg.a,
                "lhs": arg.lhs,
            },
            "grid": "geometric, ratio 2, per operator range",
            "seed": seed,
        }
    summary = {"estimates": per_op, "K_list": list(cfg.K_list),
               "families": list(cfg.families), "trials": cfg.trials}
    return _finish("E1-constant", SAMPLE_HEADER, rows, summary)


# -- E2 ----------------------------------------------------------------

E2_HEADER = ("system", "atoms", "K", "operator", "a", "mu_0", "all_equal",
             "mean_matches", "ok")


def _grid3(op: OscillationOperator, K: int, values) -> list[float]:
    grid = default_a_grid(op, K, values)
    return sorted({grid[0], grid[len(grid) // 2], grid[-1]})


def exp_transference(cfg: RunConfig, seed: int) -> ExperimentResult:
    """Exact equality of the level-set measures along the orbit offsets."""
    rows = []
    cases: list[tuple[str, PermutationSystem, int]] = []
    for i in range(cfg.identity_systems):
        rng = stream(seed, "E2", i)
        n_atoms = int(rng.integers(2, cfg.identity_max_atoms + 1))
        K = int(rng.integers(1, cfg.identity_K_max + 1))
        cases.append((str(i), random_system(rng, n_atoms), K))
    for j, sys in enumerate(cfg.systems):
        cases.append((f"config[{j}]", sys, cfg.identity_K_max))

    for label, sys, K in cases:
        fvals = [float(v) for v in sys.f.values]
        for op in _operators(cfg):
            for a in _grid3(op, K, fvals):
                rep = transference_identity_report(sys, op, K, a)
                rows.append((label, sys.n_atoms, K, op.name, a,
                             rational_str(rep.mus[0]), rep.all_equal, rep.mean_matches,
                             rep.ok))
    summary = {"n_systems": len(cases), "K_max": cfg.identity_K_max,
               "exact": "rational weight sums"}
    return _finish("E2-transference", E2_HEADER, rows, summary)


# -- E3 ----------------------------------------------------------------

E3_HEADER = ("kind",) + SAMPLE_HEADER


def exp_weaktype(cfg: RunConfig, seed: int) -> ExperimentResult:
    """Held-out weak-type validation at the shipped constants with slack.

    Discrete rows check the start-count inequality on fresh cyclic draws;
    measure rows check the fluctuation level-set bound on the same draws
    read as shift systems.  The held-out stream is the run seed plus a
    fixed offset, so it never overlaps the estimation sweep.
    """
    held = seed + HELD_OUT_SEED_OFFSET
    slack = cfg.held_out_slack
    ops = _operators(cfg, c_fluc=cfg.c_hat_fluc * slack, c_max=cfg.c_hat_max * slack)
    rows = []
    envelopes: dict[tuple[str, int], float] = {}
    for family in cfg.families:
        for K in cfg.K_list:
            for trial in range(cfg.trials):
                rng = stream(held, family, K, trial)
                values = family_values(family, rng, 2 * K)
                csys = CyclicSystem.from_values(values)
                mass = float(np.abs(np.asarray(values, dtype=np.float64)).sum())
                mat = cyclic_average_matrix(csys.values, K)
                for op in ops:
                    stats = row_stats(op, mat)
                    for a in default_a_grid(op, K, values):
                        lhs = int(np.count_nonzero(stats >= a))
                        rhs = op.bound_shape(a) * mass
                        ratio = (lhs * a / mass) if (lhs > 0 and mass > 0) else 0.0
                        ok = lhs <= rhs + 1e-9
                        rows.append(("discrete", op.name, K, family, trial, a, lhs,
                                     rhs, ratio, ok))
                        if op.kind == "fluc":
                            key = (op.name, K)
                            envelopes[key] = max(envelopes.get(key, 0.0), ratio)
                    if op.kind != "fluc":
                        continue
                    # the draw read as a uniform 2K-atom shift system; the grid
                    # covers the same level events the constant was fitted on
                    count_grid = [(a / op.eps) ** 2
                                  for a in default_a_grid(op, K, values)]
                    for r in fluc_weak_type_report(csys, op.eps, count_grid, K,
                                                   c_hat=cfg.c_hat_fluc * slack):
                        ratio = (float(r.mu_value) * op.eps * math.sqrt(r.a) * 2 * K
                                 / mass) if (r.mu_value and mass > 0) else 0.0
                        rows.append(("measure", op.name, K, family, trial, r.a,
                                     rational_str(r.mu_value), r.bound, ratio, r.ok))

    env_ok = True
    env_report = {}
    ks = sorted(set(cfg.K_list))
    for op in ops:
        if op.kind != "fluc":
            continue
        seq = [(K, envelopes.get((op.name, K), 0.0)) for K in ks]
        checks = []
        for (k1, e1), (k2, e2) in zip(seq, seq[1:]):
            if k1 < cfg.envelope_min_K:
                continue
            passed = e2 <= cfg.envelope_factor * e1 + 1e-12
            checks.append({"from_K": k1, "to_K": k2, "env_from": e1, "env_to": e2,
                           "ok": passed})
            env_ok = env_ok and passed
        env_report[op.name] = {"envelope": dict((str(k), e) for k, e in seq),
                               "checks": checks}

    summary = {"held_out_seed": held, "slack": slack,
               "c_hat": {"fluc": cfg.c_hat_fluc, "max": cfg.c_hat_max},
               "envelopes": env_report, "extra_checks_ok": env_ok}
    return _finish("E3-weaktype", E3_HEADER, rows, summary)


# -- E4 ----------------------------------------------------------------

E4_HEADER = ("pair", "atoms", "norm1", "growth", "eps", "lam", "delta_ceil",
             "phi_digits", "phi_bound", "witness", "ok")

GROWTH_KINDS = ("constant", "affine", "table", "adversarial")


def _sample_growth(kind: str, rng, cfg: RunConfig, sys: PermutationSystem,
                   eps: float, lam: float) -> GrowthFunction:
    m = cfg.meta
    if kind == "constant":
        return GrowthFunction.constant(int(rng.integers(0, m.constant_max + 1)))
    if kind == "affine":
        return GrowthFunction.affine(int(rng.integers(0, m.affine_a_max + 1)),
                                     int(rng.integers(1, m.affine_b_max + 1)))
    if kind == "table":
        length = int(rng.integers(1, m.table_len_max + 1))
        vals = [int(v) for v in rng.integers(0, m.table_value_max + 1, size=length)]
        return GrowthFunction.from_table(vals)
    return adversarial_growth_table(sys, eps, lam, m.adversarial_horizon, cfg.k_budget)


def exp_metastability(cfg: RunConfig, seed: int) -> ExperimentResult:
    """End-to-end rate validation: delta from the shipped constant, then
    the iterated-growth bound must contain a stable window."""
    rows = []
    for i in range(cfg.meta.n_pairs):
        rng = stream(seed, "E4", i)
        n_atoms = int(rng.integers(2, cfg.meta.max_atoms + 1))
        sys = random_system(rng, n_atoms, denom=cfg.meta.f_denom,
                            min_l1=cfg.meta.l1_floor)
        norm1 = l1_norm(sys.space, sys.f)
        params = RateParams(cfg.c_hat_fluc, float(norm1))
        kind = GROWTH_KINDS[i % len(GROWTH_KINDS)]
        for eps, lam in product(cfg.eps_list, cfg.lam_list):
            g = _sample_growth(kind, rng, cfg, sys, eps, lam)
            dc = math.ceil(delta(params, lam, eps))
            try:
                phi_bound = iterate_growth(g, dc, 0)
            except GrowthOverflowError:
                rows.append((i, n_atoms, rational_str(norm1), kind, eps, lam, dc,
                             "", "", "", False))
                continue
            try:
                v = validate_uniform_metastability(sys, phi_bound, lam, eps, g,
                                                   n_horizon=cfg.horizon)
                ok, witness = v.ok, v.witness
            except BudgetError:
                ok, witness = False, None
            digits = decimal_digits(phi_bound)
            shown = str(phi_bound) if digits <= 18 else ""
            rows.append((i, n_atoms, rational_str(norm1), kind, eps, lam, dc,
                         digits, shown, "" if witness is None else witness, ok))
    summary = {"n_pairs": cfg.meta.n_pairs, "c_hat_fluc": cfg.c_hat_fluc,
               "constant_rule": "8 * c_hat^2 via the modulus-composition identity",
               "horizon": cfg.horizon}
    return _finish("E4-metastability", E4_HEADER, rows, summary)


# -- E5 ----------------------------------------------------------------

E5_HEADER = ("system", "eps", "lam", "phi_star", "psi", "n_intervals", "chain",
             "witness", "ok")


def empirical_modulus(sys: PermutationSystem, counts: np.ndarray, lam: float) -> int:
    """Least integer phi with mu({count < phi}) > 1 - lam, from per-atom
    terminal fluctuation counts.

    The comparison matches validate_modulus: exact rational mass against
    the float 1 - lam.
    """
    order = np.argsort(counts, kind="stable")
    acc = Fraction(0)
    for atom in order:
        acc += sys.space.weights[int(atom)]
        if acc > 1 - lam:
            return int(counts[int(atom)]) + 1
    return int(counts[order[-1]]) + 1


def _random_chain(rng, n_intervals: int, horizon: int) -> list[tuple[int, int]]:
    """Admissible interval chain of the given length with ends < horizon."""
    span = (horizon - 1 - 8) // n_intervals
    a = int(rng.integers(0, 9))
    chain = []
    for _ in range(n_intervals):
        length = int(rng.integers(1, max(2, min(5, span)))) if span >= 2 else 1
        b = a + length
        gap = int(rng.integers(0, max(1, span - length + 1))) if span >= 2 else 0
        chain.append((a, b))
        a = b + gap
    return chain


def exp_learnable(cfg: RunConfig, seed: int) -> ExperimentResult:
    """Certified modulus -> learnable rate -> random interval chains."""
    rows = []
    H = cfg.learnable_horizon
    for s in range(cfg.learnable_systems):
        rng = stream(seed, "E5", s)
        n_atoms = int(rng.integers(2, cfg.identity_max_atoms + 1))
        sys = random_system(rng, n_atoms)
        mat = average_matrix(sys, H)
        for eps in cfg.eps_list:
            counts = fluc_counts_rows(mat, eps)
            for lam in cfg.lam_list:
                phi_star = empirical_modulus(sys, counts, lam / 2)
                cert = validate_modulus(sys, phi_star, eps, lam / 2, [H])
                psi = learnable_from_modulus(lambda l, e: float(phi_star), lam, eps)
                n_int = math.floor(psi) + 1
                if n_int + 9 > H:
                    rows.append((s, eps, lam, phi_star, psi, n_int, -1, "", False))
                    continue
                for t in range(cfg.learnable_chains):
                    crng = stream(seed, "E5", s, "chain", t)
                    chain = _random_chain(crng, n_int, H)
                    v = validate_learnable_rate(sys, psi, eps, lam, chain)
                    rows.append((s, eps, lam, phi_star, psi, n_int, t,
                                 "" if v.witness is None else v.witness,
                                 bool(v) and cert.ok))
    summary = {"systems": cfg.learnable_systems, "chains": cfg.learnable_chains,
               "horizon": H, "rate_rule": "2 * phi(lam/2, eps) / lam"}
    return _finish("E5-learnable", E5_HEADER, rows, summary)


# -- E6 ----------------------------------------------------------------

E6_HEADER = ("omega", "N", "i", "j", "delta", "ok")


def exp_density(cfg: RunConfig, seed: int) -> ExperimentResult:
    """Block-set density oscillation, the exact average identity, and
    explicit nonconvergence witnesses."""
    d = cfg.density
    A = BlockSet.of(d.beta, d.gamma)
    rows = []
    issues = []

    osc = density_oscillation(A, d.m_max)
    if (d.beta, d.gamma) == (4, Fraction(2)):
        for m, n, val in osc.upper:
            if val != Fraction(1, 3):
                issues.append(f"upper density at m={m} is {val}, not 1/3")

    identity_ok = 0
    identity_bad = 0
    for omega in range(-d.check_omega_range, d.check_omega_range + 1):
        for n in range(max(1, 1 - omega), d.check_n_max + 1):
            if approx_identity_check(A, omega, n).ok:
                identity_ok += 1
            else:
                identity_bad += 1
    if identity_bad:
        issues.append(f"{identity_bad} identity checks failed")

    for omega in d.omegas:
        pair = nonconvergence_witness(A, d.eps0, omega, d.n_from, d.budget)
        if pair is None:
            rows.append((omega, d.n_from, "", "", "", False))
            continue
        i, j = pair
        gap = abs(shift_average(A, omega, i) - shift_average(A, omega, j))
        rows.append((omega, d.n_from, i, j, rational_str(gap), float(gap) > d.eps0))

    summary = {
        "beta": d.beta, "gamma": d.gamma, "eps0": d.eps0,
        "oscillation_gap": osc.gap,
        "upper_subsequence": [[m, n, rational_str(v)] for m, n, v in osc.upper],
        "lower_subsequence": [[m, n, rational_str(v)] for m, n, v in osc.lower],
        "identity_checks": {"ok": identity_ok, "bad": identity_bad},
        "issues": issues,
        "extra_checks_ok": not issues,
    }
    return _finish("E6-density", E6_HEADER, rows, summary)


EXPERIMENTS: dict[str, Callable[[RunConfig, int], ExperimentResult]] = {
    "E0-smoke": exp_smoke,
    "E1-constant": exp_constant,
    "E2-transference": exp_transference,
    "E3-weaktype": exp_weaktype,
    "E4-metastability": exp_metastability,
    "E5-learnable": exp_learnable,
    "E6-density": exp_density,
}


def run_experiment(name: str, cfg: RunConfig, seed: Optional[int] = None) -> ExperimentResult:
    fn = EXPERIMENTS[name]
    return fn(cfg, cfg.seed if seed is None else seed)
