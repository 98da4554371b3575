"""Random blowups of a 0-vertex, random connected keep sets, and the fibre
of the kept graph.

    python scripts/null_divisor_pipeline.py --trials 500 --seed 0
"""

import argparse
import random
from collections import Counter

from pmlink.experiments import null_divisor_trial


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--max-length", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    failures = []
    boundary = Counter()
    for _ in range(args.trials):
        t = null_divisor_trial(rng, args.max_length)
        boundary[t.total_arrow_mult] += 1
        if not t.ok:
            failures.append(t)
    print(f"trials: {args.trials}  failures: {len(failures)}")
    print("sum of arrow multiplicities -> trials:", dict(sorted(boundary.items())))
    for t in failures[:10]:
        print("  ", t)


if __name__ == "__main__":
    main()
