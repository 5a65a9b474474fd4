#!/usr/bin/env python3
"""Re-estimate the weak-type constants and print config-ready values.

The shipped configs pin c_hat_fluc and c_hat_max; run this after changing
the sampling families, K grid, or trial counts to see whether the pinned
values still dominate the empirical suprema.
"""

import argparse
import json

from ergofluc.config import RunConfig
from ergofluc.transference import estimate_constant, fluc_operator, max_operator


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=RunConfig().seed)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--K", type=int, action="append", help="repeatable; default 16 64 256 1024")
    args = ap.parse_args()

    K_list = args.K or [16, 64, 256, 1024]
    families = ("indicator", "spike", "gaussian")
    out = {}
    for op in (fluc_operator(0.25), fluc_operator(0.5), max_operator()):
        best = 0.0
        for family in families:
            est = estimate_constant(op, K_list, family, args.trials, args.seed)
            best = max(best, est.c_hat)
        out[op.name] = best
    print(json.dumps({
        "seed": args.seed,
        "trials": args.trials,
        "K_list": K_list,
        "c_hat_fluc": max(v for k, v in out.items() if k.startswith("fluc")),
        "c_hat_max": out["max"],
        "per_operator": out,
    }, indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
