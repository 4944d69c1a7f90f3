"""Mean and (-1)^n-weighted mean of the chi(2) = -1 example for growing N."""

import argparse

from multuniform.multiplicative import MultiplicativeFunction, alternating_mean, mean


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-exp", type=int, default=7)
    args = ap.parse_args()
    chi = MultiplicativeFunction.minus_at_2()
    print("N,mean,alternating_mean")
    for k in range(2, args.max_exp + 1):
        N = 10**k
        print(f"{N},{mean(chi, N).real!r},{alternating_mean(chi, N).real!r}")


if __name__ == "__main__":
    main()
