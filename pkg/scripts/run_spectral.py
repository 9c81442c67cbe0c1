"""Return-probability sweep on closed melonic graphs."""
import argparse
import sys
from pathlib import Path

from colorgraph.cli import main

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--dim", type=int, default=3)
ap.add_argument("--p", type=int, default=10000)
ap.add_argument("--samples", type=int, default=200)
ap.add_argument("--window", default="50,500")
ap.add_argument("--seed", type=int, default=2024)
ap.add_argument("--method", choices=["exact", "mc"], default="exact")
ap.add_argument("--out", default="results/spectral.csv")

if __name__ == "__main__":
    a = ap.parse_args()
    Path(a.out).parent.mkdir(parents=True, exist_ok=True)
    sys.exit(main(["spectral", "--dim", str(a.dim), "--p", str(a.p), "--samples", str(a.samples),
                   "--window", a.window, "--seed", str(a.seed), "--method", a.method,
                   "--format", "csv", "-o", a.out]))
