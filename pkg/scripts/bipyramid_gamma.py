"""Gamma-vector of two regular tetrahedra glued along a face.

Prints the closed-form vector next to a Monte Carlo estimate and reports
whether the entries increase.
"""

import argparse

from polyangle.angles import alpha_vector_closed_form, alpha_vector_estimate
from polyangle.constructions import glued_tetra_bipyramid, regular_tetrahedron
from polyangle.vecalg import gamma_from_alpha, mean_of, se_of


def show(label, alpha):
    g = gamma_from_alpha(alpha)
    cells = "  ".join(f"{mean_of(x):.6f}+-{se_of(x):.6f}" for x in g)
    drops = [i for i in range(1, g.d) if mean_of(g[i]) > mean_of(g[i + 1])]
    tag = "non-monotone at " + ",".join(map(str, drops)) if drops else "monotone"
    print(f"{label:<22} {cells}   {tag}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=400_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for p in (regular_tetrahedron(), glued_tetra_bipyramid()):
        show(f"{p.name} closed form", alpha_vector_closed_form(p))
        mc = alpha_vector_estimate(p, args.samples, args.seed, closed_forms=False)
        show(f"{p.name} MC", mc.alpha)


if __name__ == "__main__":
    main()
