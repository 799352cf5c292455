"""Fractional parts <y_k0 xi^3 / l> over k, with a text histogram on five bins of [0, 1/2]."""
import argparse

from extremal.approximants import cubic_frac, default_ell, histogram
from extremal.sequence import ExtremalSequence


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--a", type=int, default=1)
    parser.add_argument("--b", type=int, default=2)
    parser.add_argument("--k-max", type=int, default=25)
    args = parser.parse_args()
    seq = ExtremalSequence.fibonacci(args.a, args.b)
    ell = default_ell(seq)
    vals = []
    for k in range(2, args.k_max + 1):
        rec = cubic_frac(seq, k, ell)
        vals.append(rec.frac.mid)
        print(f"k={k:3d}  digits={rec.digits:6d}  frac={rec.frac.mid:.6f}  delta={rec.delta.mid:.5f}")
    for i, count in enumerate(histogram(vals)):
        print(f"[{i / 10:.1f}, {(i + 1) / 10:.1f})  {'#' * count} {count}")


if __name__ == "__main__":
    main()
