"""Distance-scaling sweep on uniform melonic trees, written as CSV plus a summary line."""
import argparse
import sys
from pathlib import Path

from colorgraph.cli import main


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--p-list", default=",".join(str(2 ** k) for k in range(8, 15)))
    ap.add_argument("--out", default="results/hausdorff.csv")
    ap.add_argument("--jobs", type=int, default=None)
    return ap.parse_args()


if __name__ == "__main__":
    a = parse_args()
    Path(a.out).parent.mkdir(parents=True, exist_ok=True)
    argv = ["hausdorff", "--dim", str(a.dim), "--samples", str(a.samples), "--seed", str(a.seed),
            "--p-list", a.p_list, "--format", "csv", "-o", a.out]
    if a.jobs:
        argv += ["--jobs", str(a.jobs)]
    sys.exit(main(argv))
