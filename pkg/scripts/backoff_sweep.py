"""Heights chosen by the limit backoff as the tolerance shrinks."""

import argparse

from polyangle.constructions import family_theorem5, family_theorem8, format_expr
from polyangle.spans import lemma4_backoff


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theorem", choices=("5", "8"), default="5")
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.2, 0.1, 0.05, 0.025])
    args = ap.parse_args()

    kind = "alpha" if args.theorem == "5" else "gamma_f"
    fam = (family_theorem5 if args.theorem == "5" else family_theorem8)(args.d)
    for eps in args.eps:
        res = lemma4_backoff(fam, eps, args.samples, args.seed, kind=kind)
        print(f"eps={eps:<6} rank {res.report.affine_dim}/{res.exact_report.affine_dim} "
              f"margin {res.report.margin:.2f} samples/face {res.samples} ok={res.ok}")
        for lim, real in zip(res.limits, res.realized):
            print(f"    {format_expr(lim):<22} -> {format_expr(real)}")


if __name__ == "__main__":
    main()
