"""Standard error against sample count for a few tangent cones."""

import argparse
import math

from polyangle.angles import interior_angle_exact_lowdim, interior_angle_mc
from polyangle.constructions import cube, octahedron, regular_tetrahedron


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-exp", type=int, default=6)
    args = ap.parse_args()
    for p in (regular_tetrahedron(), cube(3), octahedron()):
        v = p.lattice.grade(0)[0]
        ref = interior_angle_exact_lowdim(p, v).mean
        print(f"{p.name}: vertex angle {ref:.6f}")
        for e in range(2, args.max_exp + 1):
            n = 10 ** e
            est = interior_angle_mc(p, v, n, args.seed)
            z = (est.mean - ref) / est.std_error if est.std_error else float("nan")
            print(f"  n=1e{e}  mean {est.mean:.6f}  se {est.std_error:.2e}  "
                  f"se*sqrt(n) {est.std_error * math.sqrt(n):.4f}  z {z:+.2f}")


if __name__ == "__main__":
    main()
