"""Finite model enumeration up to isomorphism.

Interpretation tables are filled cell by cell, cells ordered by the largest
element they mention so that small substructures are completed first.
Universal sentences (a block of universal quantifiers over a quantifier-free
body) are checked on every partial table with three-valued logic; all other
sentences are only checked on complete tables. Each isomorphism class is
returned once, as the permutation of its carriers with the least encoding.
"""
from __future__ import annotations

import itertools

from catmod.config import get_caps
from catmod.errors import BoundsExceeded
from catmod.logic.semantics import Evaluator
from catmod.logic.syntax import (
    And, Atom, Bottom, Const, Equals, Exists, Forall, Iff, Implies, Not, Or, Top, Var,
)
from catmod.structures.core import FinStructure, Theory
from catmod.structures.homs import are_isomorphic

UNDEF = "undef"  # value of a partial function outside its domain
_UNK = object()  # cell not yet assigned


# -- three-valued evaluation of quantifier-free bodies --------------------
def _term3(t, slots):
    if isinstance(t, Var):
        i = slots[t.name]
        return lambda env, st: env[i]
    if isinstance(t, Const):
        name = t.name
        key = ("c", name, ())

        def const(env, st):
            v = st.consts.get(name, _UNK)
            if v is _UNK:
                st.block = key
                st.blocker = const
            return v

        return const
    name = t.func
    parts = [_term3(a, slots) for a in t.args]
    if len(parts) == 1:
        (p,) = parts

        def app1(env, st):
            a = p(env, st)
            if a is UNDEF or a is _UNK:
                return a
            v = st.funcs[name].get((a,), _UNK)
            if v is _UNK:
                st.block = ("f", name, (a,))
                st.blocker = app1
            return v

        return app1
    if len(parts) == 2:
        p, q = parts

        def app2(env, st):
            a = p(env, st)
            if a is UNDEF:
                return a
            b = q(env, st)
            if b is UNDEF:
                return b
            if a is _UNK or b is _UNK:
                return _UNK
            v = st.funcs[name].get((a, b), _UNK)
            if v is _UNK:
                st.block = ("f", name, (a, b))
                st.blocker = app2
            return v

        return app2

    def app(env, st):
        vals = []
        unknown = False
        for p in parts:
            v = p(env, st)
            if v is UNDEF:
                return UNDEF
            if v is _UNK:
                unknown = True
            vals.append(v)
        if unknown:
            return _UNK
        args = tuple(vals)
        v = st.funcs[name].get(args, _UNK)
        if v is _UNK:
            st.block = ("f", name, args)
            st.blocker = app
        return v

    return app


def _args3(parts, env, st):
    vals = []
    unknown = False
    for p in parts:
        v = p(env, st)
        if v is UNDEF:
            return False
        if v is _UNK:
            unknown = True
        vals.append(v)
    return None if unknown else tuple(vals)


def _formula3(phi, slots):
    """Compile to ``fn(env, state) -> True | False | None`` (None = unknown)."""
    if isinstance(phi, Top):
        return lambda env, st: True
    if isinstance(phi, Bottom):
        return lambda env, st: False
    if isinstance(phi, Atom):
        parts = [_term3(a, slots) for a in phi.args]
        name = phi.rel

        def atom(env, st):
            args = _args3(parts, env, st)
            if args is None or args is False:
                return args
            v = st.rels[name].get(args)
            if v is None:
                st.block = ("r", name, args)
            return v

        return atom
    if isinstance(phi, Equals):
        parts = [_term3(phi.left, slots), _term3(phi.right, slots)]

        def eq(env, st):
            args = _args3(parts, env, st)
            if args is None or args is False:
                return args
            return args[0] == args[1]

        return eq
    if isinstance(phi, Not):
        f = _formula3(phi.body, slots)

        def neg(env, st):
            v = f(env, st)
            return None if v is None else not v

        return neg
    f = _formula3(phi.left, slots)
    g = _formula3(phi.right, slots)
    if isinstance(phi, And):
        def conj(env, st):
            a = f(env, st)
            if a is False:
                return False
            b = g(env, st)
            if b is False:
                return False
            return None if a is None or b is None else True

        return conj
    if isinstance(phi, Or):
        def disj(env, st):
            a = f(env, st)
            if a is True:
                return True
            b = g(env, st)
            if b is True:
                return True
            return None if a is None or b is None else False

        return disj
    if isinstance(phi, Implies):
        def imp(env, st):
            a = f(env, st)
            if a is False:
                return True
            b = g(env, st)
            if b is True:
                return True
            return None if a is None or b is None else False

        return imp
    if isinstance(phi, Iff):
        def iff(env, st):
            a = f(env, st)
            if a is None:
                return None
            b = g(env, st)
            return None if b is None else a == b

        return iff
    raise TypeError(f"not quantifier-free: {phi!r}")


def _forcing_equation(eq, slots):
    """Wrap a top-level equation so that an undecided instance whose only
    missing piece is the outermost cell of one side reports the value that
    cell is forced to take (``st.force``)."""
    left, right = _term3(eq.left, slots), _term3(eq.right, slots)

    def fn(env, st):
        st.force = None
        a = left(env, st)
        if a is UNDEF:
            return False
        a_block, a_top = (st.block, st.blocker is left) if a is _UNK else (None, False)
        b = right(env, st)
        if b is UNDEF:
            return False
        if a is not _UNK and b is not _UNK:
            return a == b
        if a is _UNK and b is not _UNK and a_top:
            st.force = (a_block, b)
            st.block = a_block
        elif b is _UNK and a is not _UNK and st.blocker is right:
            st.force = (st.block, a)
        elif a is _UNK:
            st.block = a_block
        return None

    return fn


def _has_quantifier(phi) -> bool:
    if isinstance(phi, (Forall, Exists)):
        return True
    if isinstance(phi, Not):
        return _has_quantifier(phi.body)
    if isinstance(phi, (And, Or, Implies, Iff)):
        return _has_quantifier(phi.left) or _has_quantifier(phi.right)
    return False


def universal_prefix(phi):
    """``(vars, body)`` if phi is a universal block over a quantifier-free body."""
    bound = []
    while isinstance(phi, Forall):
        bound.append((phi.var, phi.sort))
        phi = phi.body
    if _has_quantifier(phi):
        return None
    return bound, phi


class _State:
    __slots__ = ("consts", "funcs", "rels", "block", "blocker", "force")

    def __init__(self, sig):
        self.block = None
        self.blocker = None
        self.force = None
        self.consts = {}
        self.funcs = {f: {} for f in sig.functions}
        self.rels = {r: {} for r in sig.relations}


# -- canonical forms --------------------------------------------------------
def _cells(sig, sizes):
    """Every table cell, in filling order."""
    cells = []
    for c in sorted(sig.constants):
        cells.append(((-1, 0, c, ()), "c", c, ()))
    for f in sorted(sig.functions):
        fs = sig.functions[f]
        for args in itertools.product(*(range(sizes[s]) for s in fs.args)):
            cells.append(((max(args, default=-1), 1, f, args), "f", f, args))
    for r in sorted(sig.relations):
        arg_sorts = sig.relations[r]
        for args in itertools.product(*(range(sizes[s]) for s in arg_sorts)):
            cells.append(((max(args, default=-1), 2, r, args), "r", r, args))
    cells.sort(key=lambda c: c[0])
    return [c[1:] for c in cells]


def encode(M: FinStructure, perm: dict | None = None) -> tuple:
    """Fixed integer encoding of a structure on carriers ``0..k-1``.

    ``perm`` (sort -> list) relabels element ``e`` of sort ``s`` as
    ``perm[s][e]`` before encoding.
    """
    sig = M.sig
    if perm is None:
        perm = {s: list(range(len(M.carriers[s]))) for s in sig.sorts}
    inv = {s: {p: e for e, p in enumerate(perm[s])} for s in sig.sorts}
    out = []
    for c in sorted(sig.constants):
        out.append(perm[sig.constants[c]][M.consts[c]])
    for f in sorted(sig.functions):
        fs = sig.functions[f]
        table = M.funcs[f]
        for new_args in itertools.product(*(range(len(M.carriers[s])) for s in fs.args)):
            old = tuple(inv[s][a] for a, s in zip(new_args, fs.args))
            v = table.get(old)
            out.append(-1 if v is None else perm[fs.result][v])
    for r in sorted(sig.relations):
        arg_sorts = sig.relations[r]
        rel = M.rels[r]
        for new_args in itertools.product(*(range(len(M.carriers[s])) for s in arg_sorts)):
            old = tuple(inv[s][a] for a, s in zip(new_args, arg_sorts))
            out.append(1 if old in rel else 0)
    return tuple(out)


def _relabel(M: FinStructure, perm: dict) -> FinStructure:
    sig = M.sig
    consts = {c: perm[s][M.consts[c]] for c, s in sig.constants.items()}
    funcs = {}
    for f, fs in sig.functions.items():
        funcs[f] = {
            tuple(perm[s][a] for a, s in zip(args, fs.args)): perm[fs.result][v]
            for args, v in M.funcs[f].items()
        }
    rels = {
        r: {tuple(perm[s][a] for a, s in zip(t, arg_sorts)) for t in M.rels[r]}
        for r, arg_sorts in sig.relations.items()
    }
    return FinStructure(sig, M.carriers, consts, funcs, rels)


def canonical_form(M: FinStructure) -> FinStructure:
    """The relabelling of ``M`` (carriers ``0..k-1``) with least encoding."""
    sig = M.sig
    per_sort = [list(itertools.permutations(range(len(M.carriers[s])))) for s in sig.sorts]
    best, best_perm = None, None
    for choice in itertools.product(*per_sort):
        perm = dict(zip(sig.sorts, choice))
        code = encode(M, perm)
        if best is None or code < best:
            best, best_perm = code, perm
    return _relabel(M, best_perm)


def _invariant(M: FinStructure):
    """Cheap isomorphism invariant used to bucket candidates."""
    sig = M.sig
    parts = [tuple(len(M.carriers[s]) for s in sig.sorts)]
    for f in sorted(sig.functions):
        table = M.funcs[f]
        image = {}
        for v in table.values():
            image[v] = image.get(v, 0) + 1
        parts.append((len(table), tuple(sorted(image.values()))))
    for r in sorted(sig.relations):
        parts.append(len(M.rels[r]))
    return tuple(parts)


# -- enumeration -------------------------------------------------------------
def _size_vectors(sig, max_size):
    sorts = sig.sorts
    vecs = [v for v in itertools.product(range(1, max_size + 1), repeat=len(sorts)) if sum(v) <= max_size]
    return sorted(vecs, key=lambda v: (sum(v), v))


def labelled_models(theory: Theory, sizes: dict):
    """Every model of ``theory`` on carriers ``range(sizes[s])`` (not up to iso)."""
    sig = theory.sig
    carriers = {s: tuple(range(sizes[s])) for s in sig.sorts}
    universal, other = [], []
    for phi in theory.sentences:
        split = universal_prefix(phi)
        if split is None:
            other.append(phi)
            continue
        bound, body = split
        slots = {}
        for i, (v, _) in enumerate(bound):
            slots[v] = i
        if isinstance(body, Equals):
            fn, forcing = _forcing_equation(body, slots), True
        else:
            fn, forcing = _formula3(body, slots), False
        for env in itertools.product(*(carriers[s] for _, s in bound)):
            universal.append((fn, env, forcing))
    cells = _cells(sig, sizes)
    domains = []
    for kind, name, _ in cells:
        if kind == "c":
            domains.append(carriers[sig.constants[name]])
        elif kind == "f":
            fs = sig.functions[name]
            dom = carriers[fs.result]
            domains.append(((UNDEF,) + dom) if fs.partial else dom)
        else:
            domains.append((False, True))
    st = _State(sig)
    # An undecided instance watches one unassigned cell it ran into and is
    # re-evaluated once that cell has a value. Equation instances that pin a
    # cell down assign it on the spot (unit propagation).
    watchers = {cell: [] for cell in cells}

    def value(cell):
        kind, name, args = cell
        if kind == "c":
            return st.consts.get(name, _UNK)
        if kind == "f":
            return st.funcs[name].get(args, _UNK)
        v = st.rels[name].get(args)
        return _UNK if v is None else v

    def assign(cell, v):
        kind, name, args = cell
        if kind == "c":
            st.consts[name] = v
        elif kind == "f":
            st.funcs[name][args] = v
        else:
            st.rels[name][args] = v

    def unassign(cell):
        kind, name, args = cell
        if kind == "c":
            del st.consts[name]
        elif kind == "f":
            del st.funcs[name][args]
        else:
            del st.rels[name][args]

    def propagate(queue, trail):
        """Process watchers of newly assigned cells; False on a conflict.

        ``trail`` records undo entries: ("w", cell, old list), ("m", cell)
        for an appended watcher and ("a", cell) for a propagated assignment.
        """
        while queue:
            cell = queue.pop()
            waiting = watchers[cell]
            if not waiting:
                continue
            watchers[cell] = []
            trail.append(("w", cell, waiting))
            for inst in waiting:
                r = inst[0](inst[1], st)
                if r is False:
                    return False
                if r is None:
                    block = st.block
                    if inst[2] and st.force is not None:
                        c, val = st.force
                        assign(c, val)
                        trail.append(("a", c))
                        queue.append(c)
                        # re-check this instance once the forced cell is processed
                        watchers[c].append(inst)
                        trail.append(("m", c))
                    else:
                        watchers[block].append(inst)
                        trail.append(("m", block))
        return True

    def undo(trail):
        for entry in reversed(trail):
            if entry[0] == "m":
                watchers[entry[1]].pop()
            elif entry[0] == "w":
                watchers[entry[1]] = entry[2]
            else:
                unassign(entry[1])

    for inst in universal:
        r = inst[0](inst[1], st)
        if r is False:
            return
        if r is None:
            watchers[st.block].append(inst)

    def rec(i):
        while i < len(cells) and value(cells[i]) is not _UNK:
            i += 1
        if i == len(cells):
            M = _finish(sig, carriers, st)
            if all(Evaluator(M)(phi) for phi in other):
                yield M
            return
        cell = cells[i]
        for v in domains[i]:
            assign(cell, v)
            trail = []
            if propagate([cell], trail):
                yield from rec(i + 1)
            undo(trail)
            unassign(cell)

    yield from rec(0)


def _finish(sig, carriers, st):
    funcs = {f: {a: v for a, v in t.items() if v is not UNDEF} for f, t in st.funcs.items()}
    rels = {r: {a for a, v in t.items() if v} for r, t in st.rels.items()}
    return FinStructure(sig, carriers, dict(st.consts), funcs, rels)


def enumerate_models(theory: Theory, max_size: int, caps=None) -> list[FinStructure]:
    """One canonical model per isomorphism class with total size <= max_size.

    Every sort gets a non-empty carrier; for several sorts the bound applies
    to the sum of carrier sizes. Results are ordered by size, then by
    encoding.
    """
    caps = caps or get_caps()
    if max_size < 0 or max_size > caps.max_model_size:
        raise BoundsExceeded(f"max_size {max_size} outside 0..{caps.max_model_size}")
    sig = theory.sig
    found = []
    for vec in _size_vectors(sig, max_size):
        sizes = dict(zip(sig.sorts, vec))
        buckets: dict = {}
        for M in labelled_models(theory, sizes):
            bucket = buckets.setdefault(_invariant(M), [])
            if any(are_isomorphic(M, R) is not None for R in bucket):
                continue
            bucket.append(M)
        reps = [canonical_form(M) for b in buckets.values() for M in b]
        reps.sort(key=encode)
        found.extend(reps)
    return found
