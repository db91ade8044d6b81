"""Homomorphism and isomorphism search by backtracking."""
from __future__ import annotations

from catmod.structures.core import FinStructure, Homomorphism, check_same_signature


class _Search:
    """Backtracking over element assignments in (sort, carrier) order.

    Constraints are attached to the position at which all their elements are
    assigned. A function fact whose value element comes after all of its
    arguments determines that value, so the position gets a single candidate.
    """

    def __init__(self, A: FinStructure, B: FinStructure, strong: bool, injective: bool):
        self.A, self.B = A, B
        sig = A.sig
        self.vars = [(s, e) for s in sig.sorts for e in A.carriers[s]]
        self.index = {v: i for i, v in enumerate(self.vars)}
        n = len(self.vars)
        self.checks = [[] for _ in range(n)]
        self.determined = [None] * n
        self.injective = injective
        idx = self.index

        for c, s in sig.constants.items():
            self.checks[idx[(s, A.consts[c])]].append(("const", idx[(s, A.consts[c])], B.consts[c]))
        for f, fs in sig.functions.items():
            table_b = B.funcs[f]
            for args, val in A.funcs[f].items():
                arg_idx = tuple(idx[(s, a)] for a, s in zip(args, fs.args))
                val_idx = idx[(fs.result, val)]
                if arg_idx and val_idx > max(arg_idx) and self.determined[val_idx] is None:
                    self.determined[val_idx] = (table_b, arg_idx)
                ready = max((*arg_idx, val_idx))
                self.checks[ready].append(("func", table_b, arg_idx, val_idx))
        for r, arg_sorts in sig.relations.items():
            rel_b = B.rels[r]
            rel_a = A.rels[r]
            if not arg_sorts:
                if (() in rel_a and () not in rel_b) or (strong and () in rel_b and () not in rel_a):
                    self.impossible = True
                continue
            for t in rel_a:
                ids = tuple(idx[(s, a)] for a, s in zip(t, arg_sorts))
                self.checks[max(ids)].append(("rel", rel_b, ids))
            if strong:
                for t in A.domain_tuples(arg_sorts):
                    if t not in rel_a:
                        ids = tuple(idx[(s, a)] for a, s in zip(t, arg_sorts))
                        self.checks[max(ids)].append(("norel", rel_b, ids))
        self.candidates = [B.carriers[s] for s, _ in self.vars]

    impossible = False

    def _ok(self, pos, h):
        for chk in self.checks[pos]:
            kind = chk[0]
            if kind == "const":
                if h[chk[1]] != chk[2]:
                    return False
            elif kind == "func":
                got = chk[1].get(tuple(h[i] for i in chk[2]))
                if got is None or got != h[chk[3]]:
                    return False
            elif kind == "rel":
                if tuple(h[i] for i in chk[2]) not in chk[1]:
                    return False
            else:
                if tuple(h[i] for i in chk[2]) in chk[1]:
                    return False
        return True

    def run(self):
        if self.impossible:
            return
        n = len(self.vars)
        h = [None] * n
        used = {s: set() for s in self.A.sig.sorts}
        vars_ = self.vars

        def rec(pos):
            if pos == n:
                yield list(h)
                return
            det = self.determined[pos]
            if det is not None:
                v = det[0].get(tuple(h[i] for i in det[1]))
                cands = () if v is None else (v,)
            else:
                cands = self.candidates[pos]
            sort = vars_[pos][0]
            for v in cands:
                if self.injective and v in used[sort]:
                    continue
                h[pos] = v
                if self._ok(pos, h):
                    if self.injective:
                        used[sort].add(v)
                        yield from rec(pos + 1)
                        used[sort].discard(v)
                    else:
                        yield from rec(pos + 1)
            h[pos] = None

        yield from rec(0)

    def to_hom(self, h, strong):
        maps = {s: {} for s in self.A.sig.sorts}
        for (s, e), v in zip(self.vars, h):
            maps[s][e] = v
        return Homomorphism(self.A, self.B, maps, strong)


def iter_homomorphisms(A: FinStructure, B: FinStructure, strong: bool = False):
    check_same_signature(A, B)
    search = _Search(A, B, strong, injective=False)
    for h in search.run():
        yield search.to_hom(h, strong)


def enumerate_homomorphisms(A: FinStructure, B: FinStructure, strong: bool = False) -> list[Homomorphism]:
    """All (strong) homomorphisms A -> B, in lexicographic order of the
    image vector listed sort by sort in carrier order."""
    return list(iter_homomorphisms(A, B, strong))


def count_homomorphisms(A, B, strong=False) -> int:
    check_same_signature(A, B)
    return sum(1 for _ in _Search(A, B, strong, injective=False).run())


def _invariants(M: FinStructure):
    return (
        tuple(len(M.carriers[s]) for s in M.sig.sorts),
        tuple(len(M.funcs[f]) for f in sorted(M.sig.functions)),
        tuple(len(M.rels[r]) for r in sorted(M.sig.relations)),
    )


def iter_isomorphisms(A: FinStructure, B: FinStructure):
    check_same_signature(A, B)
    if _invariants(A) != _invariants(B):
        return
    search = _Search(A, B, strong=True, injective=True)
    for h in search.run():
        yield search.to_hom(h, True)


def are_isomorphic(A: FinStructure, B: FinStructure) -> Homomorphism | None:
    """An isomorphism A -> B, or None.

    A bijective strong homomorphism between structures with equally large
    function tables and relations has a homomorphic inverse, so no separate
    inverse check is needed.
    """
    return next(iter_isomorphisms(A, B), None)


def inverse(h: Homomorphism) -> Homomorphism:
    maps = {s: {v: k for k, v in m.items()} for s, m in h.maps.items()}
    return Homomorphism(h.target, h.source, maps, h.strong)


def automorphisms(M: FinStructure) -> list[Homomorphism]:
    return list(iter_isomorphisms(M, M))
