"""Compare the embedding-based decisions with the leaf-augmentation oracles
on every small negative definite tree.

    python scripts/corpus_equivalence.py --max-vertices 6
"""

import argparse
import json
import time

from pmlink.corpus import small_trees
from pmlink.experiments import compare_with_oracles


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-vertices", type=int, default=6)
    ap.add_argument("--min-framing", type=int, default=-5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    t0 = time.perf_counter()
    corpus = small_trees(args.max_vertices, framings=range(args.min_framing, 0))
    t1 = time.perf_counter()

    def progress(i, g):
        if i % 2000 == 0 and not args.json:
            print(f"  {i}/{len(corpus)}  {time.perf_counter() - t1:.0f}s", flush=True)

    res = compare_with_oracles(corpus, progress=progress)
    t2 = time.perf_counter()
    summary = {
        "graphs": res.size,
        "sandwiched": res.sandwiched,
        "pm": res.pm,
        "rational": res.rational,
        "mismatches": [[repr(g), what, ours, oracle] for g, what, ours, oracle in res.mismatches],
        "chain_failures": [repr(g) for g in res.chain_failures],
        "inconclusive": len(res.inconclusive),
        "corpus_seconds": round(t1 - t0, 1),
        "compare_seconds": round(t2 - t1, 1),
    }
    if args.json:
        print(json.dumps(summary, indent=2))
        return
    for k, v in summary.items():
        print(f"{k}: {v}")


if __name__ == "__main__":
    main()
