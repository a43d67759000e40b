"""Counts on P^n against Schanuel's constant 2^n / zeta(n+1)."""
import argparse

from sympy import zeta

from ratpoints.enumeration import enumerate_projective


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--bound", type=int, default=2000)
    args = ap.parse_args()
    for n in args.n:
        expected = float(2 ** n / zeta(n + 1))
        ratio = enumerate_projective(n, args.bound) / args.bound ** (n + 1)
        print(f"P^{n}: N(B)/B^{n + 1} = {ratio:.6f}, limit {expected:.6f}, rel {ratio / expected - 1:+.2e}")


if __name__ == "__main__":
    main()
