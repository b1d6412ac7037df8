"""Enumerate the cD4 yzt smoothing combinatorics and spot-check them numerically.

Every sign vector on the six axis points is pushed through ``link_cD4_yzt``.
Quartic perturbations are even, so only the 8 vectors with equal signs at
+-y, +-z, +-t come from x^2 + yzt + a y^4 + b z^4 + c t^4; those are also
sampled with the oracle on weighted spheres.
"""
import argparse
import itertools
from collections import Counter

from realterm.cli import parse_polynomial
from realterm.link_topology import link_cD4_yzt
from realterm.numeric_oracle import GridConfig, sample_link


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--resolution", type=int, default=64)
    args = ap.parse_args()

    counts = Counter(str(link_cD4_yzt(s)) for s in itertools.product((1, -1), repeat=6))
    print("link types over all 64 sign vectors:")
    for name, k in sorted(counts.items(), key=lambda kv: -kv[1]):
        print(f"  {name:10s} {k:3d}")

    print(f"\nquartic witnesses vs oracle (res {args.resolution}, weights (3,2,2,2)):")
    cfg = GridConfig(resolution=args.resolution, weights=(3, 2, 2, 2))
    for a, b, c in itertools.product((1, -1), repeat=3):
        text = f"x^2 + y*z*t + {a}*y^4 + {b}*z^4 + {c}*t^4"
        exact = link_cD4_yzt((a, a, b, b, c, c))
        link = sample_link(parse_polynomial(text), cfg)
        ok = link.chis == exact.euler()
        print(f"  {text:36s} exact {str(exact):8s} oracle chi {link.chis}  {'ok' if ok else 'MISMATCH'}")


if __name__ == "__main__":
    main()
