"""Links of x^2 + y^3 +- z^2 t^2 + y A(z) + y B(t) with 0..4 ovals, exact and sampled."""
import argparse

from realterm.cli import parse_polynomial
from realterm.link_topology import assemble_link
from realterm.normal_form import classify
from realterm.numeric_oracle import GridConfig, sample_link

TERMS = {0: ("+ y*z^4", "+ y*t^4"), 1: ("- y*z^3", "- y*t^3"), 2: ("- y*z^4", "- y*t^4")}
SPLITS = [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--resolution", type=int, default=96)
    args = ap.parse_args()
    cfg = GridConfig(resolution=args.resolution, weights=(6, 4, 3, 3))
    for sign in "+-":
        for a, b in SPLITS:
            text = f"x^2 + y^3 {sign} z^2*t^2 {TERMS[a][0]} {TERMS[b][1]}"
            F = parse_polynomial(text)
            res = assemble_link(classify(F))
            link = sample_link(F, cfg)
            print(f"{text:44s} {str(res.descriptor):6s} oracle {link.n_components} comp, chi {link.chis}")


if __name__ == "__main__":
    main()
