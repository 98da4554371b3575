"""Classify every bundled graph fixture and print one summary line each.

    python scripts/classify_fixtures.py
"""

from pmlink import fixtures
from pmlink.errors import Inconclusive
from pmlink.report import ClassifyOptions, classify


def _fmt(x):
    if isinstance(x, Inconclusive):
        return "?"
    return {True: "yes", False: "no", None: "-"}[x]


def main():
    print(f"{'fixture':14s} {'n':>2s}  {'definite':20s} {'rational':8s} {'sandw.':6s} {'pm':4s}")
    for name in fixtures.names("graph"):
        g = fixtures.graph(name)
        if not g.is_tree():
            print(f"{name:14s} {len(g):2d}  (not a tree)")
            continue
        r = classify(g, ClassifyOptions(embeddings=False))
        print(f"{name:14s} {len(g):2d}  {r.definiteness.kind.value:20s} {_fmt(r.rational):8s} "
              f"{_fmt(r.sandwiched):6s} {_fmt(r.pm):4s}")


if __name__ == "__main__":
    main()
