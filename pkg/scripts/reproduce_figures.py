#!/usr/bin/env python3
"""Write the spectrum, leakage and PAPR tables for a set of alphas.

    python scripts/reproduce_figures.py --outdir results --alpha 1.5,2,3
"""
import argparse
from pathlib import Path

from wavebench.cli import main as wavebench


def run():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--alpha", default="1.5,2,3")
    ap.add_argument("--format", choices=["csv", "json"], default="csv")
    args = ap.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for cmd in ("verify", "spectrum", "leakage", "papr-sweep"):
        path = out / f"{cmd}.{args.format}"
        status = wavebench([cmd, "--alpha", args.alpha, "--format", args.format, "--out", str(path)])
        print(f"{cmd:11s} -> {path} (exit {status})")


if __name__ == "__main__":
    run()
