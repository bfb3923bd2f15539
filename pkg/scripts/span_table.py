"""Table of span-dimension verdicts, exact and numeric."""

import argparse
import json
import time

from polyangle.spans import verify_theorem5, verify_theorem6, verify_theorem8


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--epsilon", type=float, default=0.05)
    ap.add_argument("--json", help="also write all verdicts to this file")
    args = ap.parse_args()

    runs = [("5", d, "exact") for d in range(1, 9)]
    runs += [("8", d, "exact") for d in range(2, 7)]
    runs += [("5", 3, "numeric"), ("5", 4, "numeric"), ("8", 3, "numeric")]
    runs += [("6", d, "numeric") for d in (2, 3, 4)]

    rows = []
    print(f"{'thm':>3} {'d':>2} {'mode':>7} {'expected':>8} {'computed':>8} {'margin':>8} {'sec':>6}")
    for thm, d, mode in runs:
        t = time.perf_counter()
        opts = dict(samples=args.samples, seed=args.seed)
        if thm == "6":
            v = verify_theorem6(d, **opts)
        else:
            fn = verify_theorem5 if thm == "5" else verify_theorem8
            v = fn(d, mode, epsilon=args.epsilon, **opts)
        dt = time.perf_counter() - t
        m = v.report.margin
        ms = "-" if m is None else f"{m:8.2f}"
        print(f"{thm:>3} {d:>2} {v.mode:>7} {v.expected_dim:>8} {v.computed_dim:>8} {ms:>8} {dt:6.1f}")
        rows.append(v.to_json())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
