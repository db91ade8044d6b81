"""Write the standard model-category bundles to a directory."""
import argparse
import os

from catmod.fixtures import UNARY_P_SIG, abelian_theory, exactly_n_theory
from catmod.modcat import build_model_category
from catmod.structures import Theory

BUNDLES = {
    "set2": (exactly_n_theory(2), 2, False),
    "ab3": (abelian_theory(), 3, False),
    "ab4": (abelian_theory(), 4, False),
    "unaryp3": (Theory.from_texts(UNARY_P_SIG, []), 3, False),
    "unaryp3-strong": (Theory.from_texts(UNARY_P_SIG, []), 3, True),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir")
    ap.add_argument("--only", nargs="+", choices=sorted(BUNDLES))
    args = ap.parse_args(argv)
    for name in args.only or BUNDLES:
        theory, size, strong = BUNDLES[name]
        mc = build_model_category(theory, size, strong=strong)
        path = os.path.join(args.outdir, name)
        mc.save(path)
        C = mc.category
        print(f"{name}: {len(C.objects)} objects, {len(C.morphisms)} morphisms -> {path}")


if __name__ == "__main__":
    main()
