#!/usr/bin/env python3
"""Generate the three showcase datasets through the CLI.

Outputs (under --outdir, default ./out):
  radial_N{10,30,50,80}_*   exotic-regime radial histograms (alpha=1/3,
                            gamma=2/3, three levels) plus the limit curve
  heatmap_*                 planar histogram at N=70 in the same regime
  scatter_*                 single-level cloud at alpha=23/42, N=20
  convergence_*             windowed-L1 comparison report over N

The frontend renderer (frontend/) turns these CSVs into figures.
"""

import argparse
import sys
from pathlib import Path

from gridpairs.cli import main as cli


def run(args):
    code = cli([str(a) for a in args])
    if code != 0:
        sys.exit(code)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="out")
    ap.add_argument("--quick", action="store_true", help="smaller N values")
    ns = ap.parse_args()
    out = Path(ns.outdir)
    out.mkdir(parents=True, exist_ok=True)

    radial_ns = (10, 30) if ns.quick else (10, 30, 50, 80)
    exotic = ["--alpha", "1/3", "--gamma", "2/3", "--Ns", "3", "--A", "1.5", "--bins", "60"]
    for n in radial_ns:
        run(["simulate", *exotic, "--N", n, "--out", out / f"radial_N{n}"])
    run(["density", *exotic, "--N", radial_ns[-1], "--out", out / "limit"])
    run(
        ["compare", *exotic, "--N", radial_ns[-1],
         "--N-list", ",".join(str(n) for n in radial_ns), "--out", out / "convergence"]
    )

    heat_n = 30 if ns.quick else 70
    run(
        ["simulate", "--alpha", "1/3", "--lambda", "1", "--Ns", "3", "--A", "1.5",
         "--bins", "60", "--res", "120", "--N", heat_n, "--out", out / "heatmap"]
    )

    run(
        ["simulate", "--alpha", "23/42", "--gamma", "19/42", "--Ns", "1", "--A", "1.5",
         "--bins", "60", "--res", "80", "--N", "20", "--out", out / "scatter"]
    )
    print(f"figure data written under {out}/")


if __name__ == "__main__":
    main()
