"""Run configuration: one JSON document drives every experiment.

Every tunable that the library does not fix mathematically (grids,
sample counts, horizons, shipped constant estimates, slack factors)
must appear here so a run is reproducible from its config alone.
Validation errors carry the offending field name.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Any

from .dynamics import PermutationSystem, system_from_json
from .errors import ConfigError, ErgoflucError
from .measure import _as_fraction

EXPERIMENT_NAMES = (
    "E0-smoke",
    "E1-constant",
    "E2-transference",
    "E3-weaktype",
    "E4-metastability",
    "E5-learnable",
    "E6-density",
)


@dataclass(frozen=True)
class DensityConfig:
    beta: int = 4
    gamma: Fraction = Fraction(2)
    eps0: float = 0.1
    omegas: tuple[int, ...] = (0, 5, -3)
    n_from: int = 64
    budget: int = 4 ** 7
    m_max: int = 10
    check_omega_range: int = 10
    check_n_max: int = 512


@dataclass(frozen=True)
class MetastabilityConfig:
    n_pairs: int = 200
    max_atoms: int = 8
    f_denom: int = 4
    l1_floor: Fraction = Fraction(1, 4)
    adversarial_horizon: int = 64
    constant_max: int = 8
    affine_a_max: int = 2
    affine_b_max: int = 8
    table_len_max: int = 16
    table_value_max: int = 32


@dataclass(frozen=True)
class RunConfig:
    seed: int = 20260822
    experiments: tuple[str, ...] = EXPERIMENT_NAMES
    families: tuple[str, ...] = ("indicator", "spike", "gaussian")
    K_list: tuple[int, ...] = (16, 64, 256, 1024)
    trials: int = 200
    eps_list: tuple[float, ...] = (0.25, 0.5)
    lam_list: tuple[float, ...] = (0.25, 0.5)
    c_hat_fluc: float = 1.0
    c_hat_max: float = 1.0
    held_out_slack: float = 1.05
    envelope_factor: float = 1.10
    envelope_min_K: int = 64
    identity_systems: int = 200
    identity_max_atoms: int = 16
    identity_K_max: int = 8
    horizon: int = 10_000
    k_budget: int = 512
    learnable_systems: int = 5
    learnable_chains: int = 100
    learnable_horizon: int = 4096
    meta: MetastabilityConfig = field(default_factory=MetastabilityConfig)
    density: DensityConfig = field(default_factory=DensityConfig)
    systems: tuple[PermutationSystem, ...] = ()


def _require(cond: bool, name: str, message: str):
    if not cond:
        raise ConfigError(name, message)


def _as_int(doc: Any, name: str, lo: int | None = None) -> int:
    _require(isinstance(doc, int) and not isinstance(doc, bool), name, "must be an integer")
    if lo is not None:
        _require(doc >= lo, name, f"must be at least {lo}")
    return doc


def _as_number(doc: Any, name: str, positive: bool = False) -> float:
    _require(isinstance(doc, (int, float)) and not isinstance(doc, bool), name,
             "must be a number")
    if positive:
        _require(doc > 0, name, "must be positive")
    return float(doc)


def _as_fraction_field(doc: Any, name: str) -> Fraction:
    try:
        return _as_fraction(doc)
    except ErgoflucError as e:
        raise ConfigError(name, str(e)) from e


def _int_tuple(doc: Any, name: str, lo: int) -> tuple[int, ...]:
    _require(isinstance(doc, list) and doc, name, "must be a nonempty list")
    return tuple(_as_int(v, f"{name}[{i}]", lo) for i, v in enumerate(doc))


def _number_tuple(doc: Any, name: str) -> tuple[float, ...]:
    _require(isinstance(doc, list) and doc, name, "must be a nonempty list")
    return tuple(_as_number(v, f"{name}[{i}]", positive=True) for i, v in enumerate(doc))


def _check_keys(doc: dict, known: set[str], prefix: str = ""):
    for key in doc:
        if key not in known:
            raise ConfigError(f"{prefix}{key}", "unknown configuration field")


def _density_from(doc: dict) -> DensityConfig:
    _check_keys(doc, {f.name for f in fields(DensityConfig)}, "density.")
    kw = {}
    if "beta" in doc:
        kw["beta"] = _as_int(doc["beta"], "density.beta", 2)
    if "gamma" in doc:
        kw["gamma"] = _as_fraction_field(doc["gamma"], "density.gamma")
    if "eps0" in doc:
        kw["eps0"] = _as_number(doc["eps0"], "density.eps0", positive=True)
    if "omegas" in doc:
        _require(isinstance(doc["omegas"], list) and doc["omegas"], "density.omegas",
                 "must be a nonempty list")
        kw["omegas"] = tuple(_as_int(v, f"density.omegas[{i}]")
                             for i, v in enumerate(doc["omegas"]))
    for name in ("n_from", "budget", "m_max", "check_omega_range", "check_n_max"):
        if name in doc:
            kw[name] = _as_int(doc[name], f"density.{name}", 1)
    out = DensityConfig(**kw)
    _require(1 < out.gamma <= out.beta, "density.gamma", "must satisfy 1 < gamma <= beta")
    return out


def _meta_from(doc: dict) -> MetastabilityConfig:
    _check_keys(doc, {f.name for f in fields(MetastabilityConfig)}, "meta.")
    kw = {}
    for name, lo in (("n_pairs", 1), ("max_atoms", 1), ("f_denom", 1),
                     ("adversarial_horizon", 1), ("constant_max", 0), ("affine_a_max", 0),
                     ("affine_b_max", 0), ("table_len_max", 1), ("table_value_max", 0)):
        if name in doc:
            kw[name] = _as_int(doc[name], f"meta.{name}", lo)
    if "l1_floor" in doc:
        kw["l1_floor"] = _as_fraction_field(doc["l1_floor"], "meta.l1_floor")
        _require(kw["l1_floor"] >= 0, "meta.l1_floor", "must be nonnegative")
    return MetastabilityConfig(**kw)


def _systems_from(doc: Any) -> tuple[PermutationSystem, ...]:
    _require(isinstance(doc, list), "systems", "must be a list of system documents")
    out = []
    for i, sdoc in enumerate(doc):
        _require(isinstance(sdoc, dict), f"systems[{i}]", "must be an object")
        try:
            out.append(system_from_json(sdoc))
        except ErgoflucError as e:
            raise ConfigError(f"systems[{i}]", str(e)) from e
    return tuple(out)


def config_from_dict(doc: dict) -> RunConfig:
    _require(isinstance(doc, dict), "config", "must be a JSON object")
    _check_keys(doc, {f.name for f in fields(RunConfig)})
    kw: dict[str, Any] = {}
    if "seed" in doc:
        kw["seed"] = _as_int(doc["seed"], "seed", 0)
    if "experiments" in doc:
        _require(isinstance(doc["experiments"], list) and doc["experiments"], "experiments",
                 "must be a nonempty list")
        for i, name in enumerate(doc["experiments"]):
            _require(name in EXPERIMENT_NAMES, f"experiments[{i}]",
                     f"unknown experiment (known: {', '.join(EXPERIMENT_NAMES)})")
        kw["experiments"] = tuple(doc["experiments"])
    if "families" in doc:
        _require(isinstance(doc["families"], list) and doc["families"], "families",
                 "must be a nonempty list")
        kw["families"] = tuple(str(v) for v in doc["families"])
    if "K_list" in doc:
        kw["K_list"] = _int_tuple(doc["K_list"], "K_list", 1)
    if "eps_list" in doc:
        kw["eps_list"] = _number_tuple(doc["eps_list"], "eps_list")
        for i, v in enumerate(kw["eps_list"]):
            _require(v < 1, f"eps_list[{i}]", "must lie in (0, 1)")
    if "lam_list" in doc:
        kw["lam_list"] = _number_tuple(doc["lam_list"], "lam_list")
        for i, v in enumerate(kw["lam_list"]):
            _require(v < 1, f"lam_list[{i}]", "must lie in (0, 1)")
    for name in ("trials", "identity_systems", "identity_max_atoms", "identity_K_max",
                 "horizon", "k_budget", "learnable_systems", "learnable_chains",
                 "learnable_horizon", "envelope_min_K"):
        if name in doc:
            kw[name] = _as_int(doc[name], name, 1)
    for name in ("c_hat_fluc", "c_hat_max", "held_out_slack", "envelope_factor"):
        if name in doc:
            kw[name] = _as_number(doc[name], name, positive=True)
    if "meta" in doc:
        _require(isinstance(doc["meta"], dict), "meta", "must be an object")
        kw["meta"] = _meta_from(doc["meta"])
    if "density" in doc:
        _require(isinstance(doc["density"], dict), "density", "must be an object")
        kw["density"] = _density_from(doc["density"])
    if "systems" in doc:
        kw["systems"] = _systems_from(doc["systems"])
    return RunConfig(**kw)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ConfigError("config", f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"invalid JSON in {path}: {e}") from e
    return config_from_dict(doc)
