"""One-variable term algebras and pulled-back structures."""
from __future__ import annotations

import itertools

from catmod.config import get_caps
from catmod.errors import BoundsExceeded, NotAReductHom, TermAlgebraInfinite
from catmod.logic.signature import Signature
from catmod.logic.syntax import App, Const, Var, term_to_text
from catmod.structures.core import FinStructure, Homomorphism, hom_violations

VARIABLE = "x"


def term_algebra(sig: Signature, var_sort: str | None = None, caps=None) -> FinStructure:
    """The structure of all terms in the single variable ``x``.

    Function symbols act formally (total, even if declared partial) and every
    relation is empty. Raises :class:`TermAlgebraInfinite` once the closure
    grows beyond the configured cap.
    """
    caps = caps or get_caps()
    var_sort = var_sort or sig.sorts[0]
    terms = {s: [] for s in sig.sorts}
    text = {}

    def add(t):
        key = term_to_text(t)
        if key in text:
            return False
        text[key] = t
        terms[t.sort].append(t)
        if len(text) > caps.term_algebra_cap:
            raise TermAlgebraInfinite(
                f"term algebra exceeds {caps.term_algebra_cap} elements; the closure is treated as infinite"
            )
        return True

    add(Var(VARIABLE, var_sort))
    for c in sorted(sig.constants):
        add(Const(c, sig.constants[c]))
    changed = True
    while changed:
        changed = False
        for f in sorted(sig.functions):
            fs = sig.functions[f]
            pools = [list(terms[s]) for s in fs.args]
            for args in itertools.product(*pools):
                if add(App(f, tuple(args), fs.result)):
                    changed = True
    carriers = {s: tuple(term_to_text(t) for t in terms[s]) for s in sig.sorts}
    consts = {c: c for c in sig.constants}
    funcs = {}
    for f, fs in sig.functions.items():
        table = {}
        for args in itertools.product(*(terms[s] for s in fs.args)):
            table[tuple(term_to_text(a) for a in args)] = term_to_text(App(f, tuple(args), fs.result))
        funcs[f] = table
    return FinStructure(sig, carriers, consts, funcs, {})


def evaluation_hom(T: FinStructure, M: FinStructure, element, var_sort: str | None = None) -> Homomorphism:
    """The unique homomorphism T -> M sending the variable to ``element``."""
    from catmod.logic.parser import parse_term
    from catmod.logic.semantics import eval_term

    var_sort = var_sort or T.sig.sorts[0]
    maps = {s: {} for s in T.sig.sorts}
    for s in T.sig.sorts:
        for t in T.carriers[s]:
            term = parse_term(t, T.sig, free={VARIABLE: var_sort})
            maps[s][t] = eval_term(M, term, {VARIABLE: element})
    return Homomorphism(T, M, maps)


def pullback_structure(f_maps: dict, M: FinStructure, N: FinStructure) -> FinStructure:
    """The expansion of ``N`` whose relations are preimages under ``f``.

    ``N`` is a structure over the function/constant reduct of ``M``'s
    signature and ``f_maps`` (sort -> element map) must be a homomorphism of
    reducts; the result makes ``f`` a strong homomorphism into ``M``.
    """
    fsig = M.sig.functional_reduct()
    if N.sig != fsig:
        N = N.reduct(fsig) if set(fsig.sorts) <= set(N.sig.sorts) else N
    Mr = M.reduct(fsig)
    problems = hom_violations(N, Mr, f_maps)
    if problems:
        raise NotAReductHom("; ".join(problems[:3]))
    rels = {}
    for r, arg_sorts in M.sig.relations.items():
        target = M.rels[r]
        rels[r] = {
            t for t in N.domain_tuples(arg_sorts)
            if tuple(f_maps[s][a] for a, s in zip(t, arg_sorts)) in target
        }
    return FinStructure(M.sig, N.carriers, N.consts, N.funcs, rels)


def expansions(N: FinStructure, sig: Signature, limit: int | None = None):
    """Every expansion of ``N`` to ``sig`` by relation interpretations."""
    names = sorted(r for r in sig.relations if r not in N.sig.relations)
    spaces = []
    for r in names:
        tuples = list(N.domain_tuples(sig.relations[r]))
        spaces.append([frozenset(itertools.compress(tuples, bits)) for bits in itertools.product((0, 1), repeat=len(tuples))])
    count = 0
    for choice in itertools.product(*spaces):
        count += 1
        if limit is not None and count > limit:
            raise BoundsExceeded(f"more than {limit} expansions")
        yield N.expand(sig, dict(zip(names, choice)))
