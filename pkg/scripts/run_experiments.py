#!/usr/bin/env python3
"""Run the full experiment battery with the shipped default configuration.

Equivalent to `ergofluc run --config configs/default.json --out results`,
with the config and output paths resolved relative to the repo root so it
works from any working directory.
"""

import pathlib
import sys

from ergofluc.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    args = ["run", "--config", str(ROOT / "configs" / "default.json"),
            "--out", str(ROOT / "results")]
    sys.exit(main(args + sys.argv[1:]))
