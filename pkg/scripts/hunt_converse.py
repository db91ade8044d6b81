"""Look for pairs of non-equivalent fixture categories that no homotopic
sentence within the bounds tells apart.

A hit is only a candidate: agreement up to depth k says nothing about
deeper sentences, so nothing is concluded either way.
"""
import argparse
import itertools
import json
import sys
import time

from catmod.fincat import are_equivalent
from catmod.fixtures import corpus
from catmod.homotopic import agreement_test


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--size", type=int, default=9)
    ap.add_argument("--budget", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-morphisms", type=int, default=12, help="skip larger fixtures")
    ap.add_argument("--out", help="write candidates as JSON here")
    args = ap.parse_args(argv)

    cats = [C for C in corpus() if len(C.morphisms) <= args.max_morphisms]
    candidates, separated = [], 0
    t0 = time.time()
    for C, D in itertools.combinations(cats, 2):
        if are_equivalent(C, D):
            continue
        r = agreement_test(C, D, depth=args.depth, budget=args.budget, seed=args.seed, max_size=args.size)
        if r.agree:
            candidates.append({"C": C.name, "D": D.name, "checked": r.checked, "mode": r.mode})
            print(f"agree  {C.name!s:>22} vs {D.name!s:<22} ({r.mode}, {r.checked})")
        else:
            separated += 1
    print(f"{separated} non-equivalent pairs separated, {len(candidates)} undecided "
          f"at depth {args.depth}, size {args.size} ({time.time() - t0:.1f}s)", file=sys.stderr)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(candidates, fh, indent=1)


if __name__ == "__main__":
    main()
