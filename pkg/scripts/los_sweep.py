"""Sweep Łoś over every family of small abelian groups and every ultrafilter."""
import argparse
import itertools
import random
import sys
import time

from catmod.fixtures import abelian_groups
from catmod.logic import GROUP_SIG, count_sentences, sentence_at, to_text
from catmod.ultra import enumerate_ultrafilters, los_sweep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=4)
    ap.add_argument("--index", type=int, nargs="+", default=[2, 3], help="sizes of X")
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--size", type=int, default=9)
    ap.add_argument("--sentences", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    n = count_sentences(GROUP_SIG, args.depth, args.size)
    picks = random.Random(args.seed).sample(range(n), min(args.sentences, n))
    sents = [sentence_at(GROUP_SIG, k, args.depth, args.size) for k in picks]
    groups = abelian_groups(args.max_order)
    t0, runs, failures = time.time(), 0, 0
    for m in args.index:
        Us = enumerate_ultrafilters(tuple(range(m)))
        for fam in itertools.product(groups, repeat=m):
            for U in Us:
                bad = los_sweep([G for _, G in fam], U, sents)
                runs += 1
                for b in bad:
                    failures += 1
                    print(f"FAIL {[l for l, _ in fam]} {U!r}: {to_text(b['sentence'])}")
    print(f"{runs} ultraproducts x {len(sents)} sentences, {failures} failures ({time.time() - t0:.1f}s)",
          file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
