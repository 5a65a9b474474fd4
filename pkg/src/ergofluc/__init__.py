"""Quantitative checks for ergodic averages on finite measure-preserving
systems: fluctuation counting, weak-type transference, metastability rates,
and the density counterexample machinery.

Everything here is finite and checkable: spaces are weighted atom sets with
exact rational measures, dynamics are permutations or cyclic shifts, and the
validators either certify a claim over an explicit horizon or hand back a
concrete witness for its failure.
"""

from .density import (ApproxIdentity, BlockSet, DensityValue, OscillationReport,
                      approx_identity_check, density_oscillation, density_prefix,
                      nonconvergence_witness, prefix_count, shift_average)
from .dynamics import (CyclicSystem, PermutationSystem, average_matrix,
                       average_sequence, cyclic_average, cyclic_average_matrix,
                       ergodic_average, family_values, shift_system, system_from_json)
from .errors import (BudgetError, ConfigError, DomainMismatchError, ErgoflucError,
                     GrowthOverflowError, InvalidParameterError, WindowRangeError)
from .fluctuations import (FlucResult, fluc_count, fluc_count_oracle,
                           fluc_counts_rows, metastable_window_ok)
from .measure import (FLOAT64, FLOAT_ABS_TOL, RATIONAL, Automorphism, EventSet,
                      FiniteProbSpace, SimpleFunction, check_measure_preserving,
                      compose, integrate, l1_norm, measure, rational_str)
from .rates import (ITERATE_CAP, GrowthFunction, RateParams, delta, iterate_growth,
                    learnable_from_modulus, metastability_bound, modulus_from_weak_type)
from .transference import (ConstantEstimate, DiscreteCheck, FlucWeakTypeRow,
                           IdentityReport, OscillationOperator, TransferBound,
                           WeakTypeSample, default_a_grid, discrete_weak_type_check,
                           estimate_constant, fluc_operator, fluc_weak_type_report,
                           max_operator, transfer_bound, transference_identity_check,
                           transference_identity_report, weak_type_samples)
from .validators import (DEFAULT_HORIZON, Verdict, adversarial_growth_table,
                         least_failing_k, validate_learnable_rate, validate_modulus,
                         validate_uniform_metastability)

__version__ = "0.1.0"

__all__ = [
    "ApproxIdentity", "Automorphism", "BlockSet", "BudgetError", "ConfigError",
    "ConstantEstimate", "CyclicSystem", "DEFAULT_HORIZON", "DensityValue",
    "DiscreteCheck", "DomainMismatchError", "ErgoflucError", "EventSet",
    "FLOAT64", "FLOAT_ABS_TOL", "FiniteProbSpace", "FlucResult", "FlucWeakTypeRow",
    "GrowthFunction", "GrowthOverflowError", "ITERATE_CAP", "IdentityReport",
    "InvalidParameterError", "OscillationOperator", "RATIONAL",
    "OscillationReport", "PermutationSystem", "RateParams", "SimpleFunction",
    "TransferBound", "Verdict", "WeakTypeSample", "WindowRangeError",
    "approx_identity_check", "average_matrix", "average_sequence",
    "check_measure_preserving", "compose", "cyclic_average",
    "cyclic_average_matrix", "default_a_grid", "delta", "density_oscillation",
    "density_prefix", "discrete_weak_type_check", "ergodic_average",
    "estimate_constant", "family_values", "fluc_count", "fluc_count_oracle",
    "fluc_counts_rows", "fluc_operator", "fluc_weak_type_report", "integrate",
    "iterate_growth", "l1_norm", "learnable_from_modulus", "least_failing_k",
    "max_operator", "measure", "metastability_bound", "metastable_window_ok",
    "modulus_from_weak_type", "nonconvergence_witness", "prefix_count",
    "rational_str", "shift_average", "shift_system", "system_from_json",
    "transfer_bound", "transference_identity_check", "transference_identity_report",
    "validate_learnable_rate", "validate_modulus", "validate_uniform_metastability",
    "weak_type_samples", "adversarial_growth_table",
]
