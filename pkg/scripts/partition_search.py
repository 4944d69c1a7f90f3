"""Monochromatic solutions of x^2 + y^2 = c n^2 under a few colourings."""

import argparse

from multuniform.experiments import coloring_search, parse_coloring
from multuniform.quadforms import QuadraticForm


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=2000)
    ap.add_argument("--cs", default="2,3,5,13")
    ap.add_argument("--colorings", default="trivial,residue:2,residue:3,7adic")
    args = ap.parse_args()
    print("c,coloring,hits,first")
    for c in (int(t) for t in args.cs.split(",")):
        for name in args.colorings.split(","):
            hits = coloring_search(QuadraticForm(1, 1, -c), parse_coloring(name), args.bound)
            first = f"{hits[0].x} {hits[0].y} {hits[0].n}" if hits else ""
            print(f"{c},{name},{len(hits)},{first}")


if __name__ == "__main__":
    main()
