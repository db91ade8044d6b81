"""Ehrenfeucht-Fraisse games on finite relational structures."""
from __future__ import annotations

import itertools
from functools import lru_cache

from catmod.config import get_caps
from catmod.errors import BoundsExceeded
from catmod.logic.signature import Signature
from catmod.structures.core import FinStructure, check_same_signature


def graph_name(sig: Signature, f: str) -> str:
    base = f"graph_{f}" if f.isidentifier() else f"graph_{sorted(sig.functions).index(f)}"
    while base in sig.relations or base in sig.constants or base in sig.functions:
        base += "_"
    return base


def relational_signature(sig: Signature) -> Signature:
    rels = dict(sig.relations)
    for f, fs in sig.functions.items():
        rels[graph_name(sig, f)] = (*fs.args, fs.result)
    return Signature(sig.sorts, dict(sig.constants), {}, rels)


def relationalize(M: FinStructure) -> FinStructure:
    """Replace each function symbol by its graph relation."""
    sig = M.sig
    if sig.is_relational:
        return M
    rsig = relational_signature(sig)
    rels = dict(M.rels)
    for f in sig.functions:
        rels[graph_name(sig, f)] = {(*args, v) for args, v in M.funcs[f].items()}
    return FinStructure(rsig, M.carriers, M.consts, {}, rels)


def ef_equivalent(A: FinStructure, B: FinStructure, k: int, caps=None) -> bool:
    """True iff Duplicator wins the k-round game on A and B."""
    caps = caps or get_caps()
    if k < 0 or k > caps.ef_max_rounds:
        raise BoundsExceeded(f"EF rounds {k} outside 0..{caps.ef_max_rounds}")
    check_same_signature(A, B)
    A, B = relationalize(A), relationalize(B)
    sig = A.sig
    for r, args in sig.relations.items():
        if not args and ((() in A.rels[r]) != (() in B.rels[r])):
            return False
    rels = [(r, args) for r, args in sig.relations.items() if args]
    start = tuple((s, A.consts[c], B.consts[c]) for c, s in sorted(sig.constants.items()))

    def consistent(pebbles, new):
        """Is ``pebbles + new`` still a partial isomorphism (given ``pebbles`` is)?"""
        s, a, b = new
        for t, x, y in pebbles:
            if t == s and ((x == a) != (y == b)):
                return False
        full = (*pebbles, new)
        n = len(full)
        for r, arg_sorts in rels:
            ra, rb = A.rels[r], B.rels[r]
            for combo in itertools.product(range(n), repeat=len(arg_sorts)):
                if n - 1 not in combo:
                    continue
                if any(full[i][0] != srt for i, srt in zip(combo, arg_sorts)):
                    continue
                ta = tuple(full[i][1] for i in combo)
                tb = tuple(full[i][2] for i in combo)
                if (ta in ra) != (tb in rb):
                    return False
        return True

    base = ()
    for p in start:
        if not consistent(base, p):
            return False
        base = base + (p,)

    @lru_cache(maxsize=None)
    def duplicator_wins(pebbles, rounds):
        if rounds == 0:
            return True
        for s in sig.sorts:
            for a in A.carriers[s]:
                if not any(
                    consistent(pebbles, (s, a, b)) and duplicator_wins(_norm(pebbles, (s, a, b)), rounds - 1)
                    for b in B.carriers[s]
                ):
                    return False
            for b in B.carriers[s]:
                if not any(
                    consistent(pebbles, (s, a, b)) and duplicator_wins(_norm(pebbles, (s, a, b)), rounds - 1)
                    for a in A.carriers[s]
                ):
                    return False
        return True

    return duplicator_wins(_norm(base), k)


def _norm(pebbles, new=None):
    items = set(pebbles)
    if new is not None:
        items.add(new)
    return tuple(sorted(items, key=repr))
