"""Measured constant in |average| <= C min_j ||a_j||_U3^(1/2) with one noisy slot."""

import argparse

from multuniform.experiments import von_neumann_probe


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--N", type=int, default=10)
    args = ap.parse_args()
    print("seed,ntilde,constant,median_ratio")
    for seed in range(args.seeds):
        r = von_neumann_probe(seed, instances=args.instances, N=args.N)
        ratios = sorted(r["ratios"])
        print(f"{seed},{r['ntilde']},{r['constant']:.6e},{ratios[len(ratios) // 2]:.6e}")


if __name__ == "__main__":
    main()
