"""Self-paired averages over Z_p for single chi and for mixtures with an atom at chi = 1."""

import argparse

from multuniform.experiments import mixture_average
from multuniform.gowers import LinearFormsPattern
from multuniform.multiplicative import MultiplicativeFunction, named_family, random_family


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--Ns", default="100,500,1000")
    ap.add_argument("--ell", default="1,2,3")
    ap.add_argument("--random", type=int, default=20, help="extra seeded random chi")
    ap.add_argument("--atom", type=float, default=0.5, help="weight on chi = 1 in the mixture column")
    args = ap.parse_args()
    pat = LinearFormsPattern.parse(args.ell)
    one = MultiplicativeFunction.one()
    fam = named_family() + random_family(args.random, seed=100)
    print("chi,N,single_re,mixture_re")
    for N in (int(n) for n in args.Ns.split(",")):
        for chi in fam:
            single = mixture_average([(chi, 1.0)], pat, N).real
            mixed = mixture_average([(one, args.atom), (chi, 1 - args.atom)], pat, N).real
            print(f"{chi.label},{N},{single!r},{mixed!r}")


if __name__ == "__main__":
    main()
