"""Exact-count asymptotics for several dimensions, one CSV per dimension."""
import argparse
import json
from pathlib import Path

from colorgraph.dimensions import susceptibility_check

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--dims", default="2,3,4")
ap.add_argument("--p-min", type=int, default=500)
ap.add_argument("--p-max", type=int, default=1000)
ap.add_argument("--out", default="results")

if __name__ == "__main__":
    a = ap.parse_args()
    Path(a.out).mkdir(parents=True, exist_ok=True)
    for D in (int(d) for d in a.dims.split(",")):
        fit = susceptibility_check(D, a.p_min, a.p_max)
        summary = {"D": D, "slope": fit.exponent, "stderr": fit.stderr, **fit.extra}
        (Path(a.out) / f"susceptibility_D{D}.json").write_text(json.dumps(summary, indent=2) + "\n")
        print(json.dumps(summary, sort_keys=True))
