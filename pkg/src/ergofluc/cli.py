"""Command-line surface: experiment runs and small one-shot queries.

Exit codes: 0 all assertions passed, 1 an assertion failed (the failing
row is printed), 2 configuration or usage error (the message names the
offending field).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

from .config import EXPERIMENT_NAMES, RunConfig, load_config
from .density import BlockSet, density_oscillation, nonconvergence_witness, shift_average
from .errors import ConfigError, ErgoflucError
from .experiments import EXPERIMENTS, ExperimentResult, run_experiment
from .fluctuations import fluc_count
from .measure import rational_str
from .rates import (GrowthFunction, RateParams, decimal_digits, delta,
                    iterate_growth, learnable_from_modulus, modulus_from_weak_type)
from .reports import write_csv, write_json, write_tsv


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ergofluc",
                                description="fluctuation, transference, and rate checks "
                                            "on finite measure-preserving systems")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run configured experiments and write reports")
    run.add_argument("--config", help="JSON config path (defaults shipped in-package)")
    run.add_argument("--out", default="results", help="output directory")
    run.add_argument("--seed", type=int, help="override the config seed")
    run.add_argument("--jobs", type=int, default=1, help="concurrent experiments")
    run.add_argument("--experiment", action="append", metavar="NAME",
                     help=f"run only NAME (repeatable); known: {', '.join(EXPERIMENT_NAMES)}")

    fluc = sub.add_parser("fluc", help="count eps-fluctuations of a sequence file")
    fluc.add_argument("path", help="file with a JSON array or whitespace-separated numbers")
    fluc.add_argument("--eps", type=float, required=True)

    dens = sub.add_parser("density", help="block-set density reports")
    dens.add_argument("--beta", type=int, default=4)
    dens.add_argument("--gamma", default="2", help="rational, e.g. 2 or 5/2")
    dens.add_argument("--m-max", type=int, default=10)
    dens.add_argument("--eps0", type=float, default=0.1)
    dens.add_argument("--omega", type=int, action="append",
                      help="witness start points (repeatable; default 0)")
    dens.add_argument("--n-from", type=int, default=64)
    dens.add_argument("--budget", type=int, default=4 ** 7)

    rates = sub.add_parser("rates", help="print the rate pipeline for given parameters")
    rates.add_argument("--c-hat", type=float, required=True)
    rates.add_argument("--norm1", type=float, required=True)
    rates.add_argument("--eps", type=float, required=True)
    rates.add_argument("--lam", type=float, required=True)
    rates.add_argument("--growth", default='{"kind": "constant", "c": 1}',
                       help='growth rule JSON, e.g. {"kind":"affine","a":1,"b":2}')
    return p


def _write_result(res: ExperimentResult, out_dir: str, seed: int):
    base = os.path.join(out_dir, res.name)
    write_csv(base + ".csv", res.header, res.rows)
    write_tsv(base + ".tsv", res.header, res.rows)
    doc = {
        "experiment": res.name,
        "ok": res.ok,
        "n_rows": len(res.rows),
        "seed": seed,
        "summary": res.summary,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    write_json(base + ".json", doc)


def _cmd_run(args) -> int:
    cfg = load_config(args.config) if args.config else RunConfig()
    seed = cfg.seed if args.seed is None else args.seed
    names = list(cfg.experiments)
    if args.experiment:
        for name in args.experiment:
            if name not in EXPERIMENTS:
                raise ConfigError("experiment", f"unknown experiment {name!r}")
        names = list(args.experiment)

    import numpy as np  # noqa: F401  (fail early, before worker threads)

    results: list[ExperimentResult] = []
    if args.jobs and args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(run_experiment, name, cfg, seed) for name in names]
            results = [f.result() for f in futures]
    else:
        results = [run_experiment(name, cfg, seed) for name in names]

    all_ok = True
    for res in results:
        _write_result(res, args.out, seed)
        status = "pass" if res.ok else "FAIL"
        print(f"{res.name}: {status} ({len(res.rows)} rows)")
        if not res.ok:
            all_ok = False
            if res.failing is not None:
                print(f"  failing row: {res.failing}")
            elif res.summary.get("issues"):
                print(f"  issues: {res.summary['issues']}")
    return 0 if all_ok else 1


def _read_sequence(path: str) -> list[float]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read().strip()
    if not text:
        raise ConfigError("path", "sequence file is empty")
    if text.startswith("["):
        doc = json.loads(text)
        return [float(v) for v in doc]
    return [float(tok) for tok in text.split()]


def _cmd_fluc(args) -> int:
    x = _read_sequence(args.path)
    res = fluc_count(x, args.eps)
    print(json.dumps({
        "n": len(x),
        "eps": args.eps,
        "count": res.count,
        "witness": [list(p) for p in res.witness],
    }, indent=2))
    return 0


def _cmd_density(args) -> int:
    try:
        A = BlockSet.of(args.beta, args.gamma)
    except ErgoflucError as e:
        raise ConfigError("gamma", str(e)) from e
    osc = density_oscillation(A, args.m_max)
    witnesses = []
    for omega in (args.omega or [0]):
        pair = nonconvergence_witness(A, args.eps0, omega, args.n_from, args.budget)
        if pair is None:
            witnesses.append({"omega": omega, "found": False})
        else:
            i, j = pair
            gap = abs(shift_average(A, omega, i) - shift_average(A, omega, j))
            witnesses.append({"omega": omega, "found": True, "i": i, "j": j,
                              "gap": rational_str(gap)})
    print(json.dumps({
        "beta": args.beta,
        "gamma": args.gamma,
        "upper": [[m, n, rational_str(v)] for m, n, v in osc.upper],
        "lower": [[m, n, rational_str(v)] for m, n, v in osc.lower],
        "gap": rational_str(osc.gap),
        "eps0": args.eps0,
        "witnesses": witnesses,
    }, indent=2))
    return 0


def _cmd_rates(args) -> int:
    try:
        g = GrowthFunction.from_json(json.loads(args.growth))
    except (json.JSONDecodeError, KeyError, ErgoflucError) as e:
        raise ConfigError("growth", str(e)) from e
    params = RateParams(args.c_hat, args.norm1)
    phi = modulus_from_weak_type(params, args.eps, args.lam)
    psi = learnable_from_modulus(
        lambda lam, eps: modulus_from_weak_type(params, eps, lam), args.lam, args.eps)
    d = delta(params, args.lam, args.eps)
    bound = iterate_growth(g, math.ceil(d), 0)
    digits = decimal_digits(bound)
    print(json.dumps({
        "phi": phi,
        "psi": psi,
        "delta": d,
        "delta_ceil": math.ceil(d),
        "growth": g.to_json(),
        "Phi": str(bound) if digits <= 40 else None,
        "Phi_digits": digits,
    }, indent=2))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "fluc":
            return _cmd_fluc(args)
        if args.command == "density":
            return _cmd_density(args)
        return _cmd_rates(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except ErgoflucError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
