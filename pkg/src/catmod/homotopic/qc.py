"""Quasi-composition and the L_homo structure of a category.

``QC(f, g, h)`` for ``f: A -> B``, ``g: C -> D``, ``h: P -> Q`` holds when
the i-arrows P => A, B => C, Q => D exist and

    (Q => D) o h  ==  g o (B => C) o f o (P => A).
"""
from __future__ import annotations

from collections import defaultdict

from catmod.errors import EqualityForbidden, SignatureMismatch
from catmod.fincat.core import FinCategory
from catmod.homotopic.isograph import IsoGraph, build_isograph
from catmod.logic.semantics import compile_formula, eval_formula
from catmod.logic.signature import L_HOMO, L_HOMO_ISO
from catmod.logic.syntax import (
    And, Atom, Exists, Forall, Implies, Not, Var, BINARY, QUANTIFIERS, free_vars, has_equality, quantifier_depth,
)
from catmod.structures.core import FinStructure

SORT = "m"


def qc(C: FinCategory, i: IsoGraph, f, g, h) -> bool:
    a1 = i.arrow(C.dom[h], C.dom[f])
    a2 = i.arrow(C.cod[f], C.dom[g])
    a3 = i.arrow(C.cod[h], C.cod[g])
    if a1 is None or a2 is None or a3 is None:
        return False
    return C.compose(a3, h) == C.compose_path(g, a2, f, a1)


def qc_table(C: FinCategory, i: IsoGraph) -> frozenset:
    """Every triple satisfying QC, computed from the definition."""
    by_ends = defaultdict(list)
    for h in C.morphisms:
        by_ends[(C.dom[h], C.cod[h])].append(h)
    out = set()
    for f in C.morphisms:
        A, B = C.dom[f], C.cod[f]
        for g in C.morphisms:
            a2 = i.arrow(B, C.dom[g])
            if a2 is None:
                continue
            k = C.compose_path(g, a2, f)
            D = C.cod[g]
            for (P, Q), hs in by_ends.items():
                a1, a3 = i.arrow(P, A), i.arrow(Q, D)
                if a1 is None or a3 is None:
                    continue
                target = C.compose(k, a1)
                for h in hs:
                    if C.compose(a3, h) == target:
                        out.add((f, g, h))
    return frozenset(out)


# -- the QC-definable abbreviations ------------------------------------------

def _v(name):
    return Var(name, SORT)


def i_definition(a: str, p: str = "p", q: str = "q"):
    """``a`` is an i-morphism: forall p [(exists q) QC(a,p,q) -> QC(a,p,p)]."""
    A, P, Q = _v(a), _v(p), _v(q)
    return Forall(p, SORT, Implies(Exists(q, SORT, Atom("QC", (A, P, Q))), Atom("QC", (A, P, P))))


def iso_definition(p: str, q: str):
    """``p ~ q``: some i-morphism a has QC(a, p, q)."""
    a, s, t = _fresh({p, q}, 3)
    return Exists(a, SORT, And(i_definition(a, s, t), Atom("QC", (_v(a), _v(p), _v(q)))))


def _fresh(taken, n):
    out = []
    k = 0
    while len(out) < n:
        name = f"z{k}"
        if name not in taken:
            out.append(name)
        k += 1
    return out


def _bound_names(phi, acc):
    if isinstance(phi, QUANTIFIERS):
        acc.add(phi.var)
        _bound_names(phi.body, acc)
    elif isinstance(phi, Not):
        _bound_names(phi.body, acc)
    elif isinstance(phi, BINARY):
        _bound_names(phi.left, acc)
        _bound_names(phi.right, acc)
    return acc


def expand_definitions(phi):
    """Replace every ``I`` and ``Iso`` atom by its QC definition."""
    taken = _bound_names(phi, set(free_vars(phi)))

    def go(psi):
        if isinstance(psi, Atom) and psi.rel in ("I", "Iso"):
            names = [a.name for a in psi.args]
            extra = _fresh(taken | set(names), 3)
            if psi.rel == "I":
                return i_definition(names[0], extra[0], extra[1])
            a, s, t = extra
            return Exists(a, SORT, And(i_definition(a, s, t), Atom("QC", (_v(a), psi.args[0], psi.args[1]))))
        if isinstance(psi, Not):
            return Not(go(psi.body))
        if isinstance(psi, BINARY):
            return type(psi)(go(psi.left), go(psi.right))
        if isinstance(psi, QUANTIFIERS):
            return type(psi)(psi.var, psi.sort, go(psi.body))
        return psi

    return go(phi)


# -- structures ---------------------------------------------------------------

def _check_homotopic(phi):
    if has_equality(phi):
        raise EqualityForbidden("homotopic formulas may not use equality")


class HomotopicModel:
    """A category read as an L_homo structure over a fixed iso-graph.

    The carrier is the set of morphisms. ``I`` and ``Iso`` are tabulated
    once by evaluating their QC definitions, which is the same as expanding
    them inline in every formula.
    """

    def __init__(self, C: FinCategory, i: IsoGraph | None = None):
        self.C = C
        self.i = i or build_isograph(C)
        self.qc = qc_table(C, self.i)
        self.base = FinStructure(L_HOMO, {SORT: C.morphisms}, {}, {}, {"QC": set(self.qc)})
        self._full = None

    @property
    def structure(self) -> FinStructure:
        if self._full is None:
            first = defaultdict(set)
            for f, g, h in self.qc:
                first[(f, g)].add(h)
            ok = set()
            for a in self.C.morphisms:
                if all((a, p, p) in self.qc for p in self.C.morphisms if first.get((a, p))):
                    ok.add(a)
            iso = {(p, q) for a, p, q in self.qc if a in ok}
            self._full = self.base.expand(L_HOMO_ISO, {"I": {(a,) for a in ok}, "Iso": iso})
        return self._full

    @property
    def i_morphisms(self) -> frozenset:
        return frozenset(a for (a,) in self.structure.rels["I"])

    def _target(self, phi):
        _check_homotopic(phi)
        used = _relations(phi, set())
        extra = used - set(L_HOMO_ISO.relations)
        if extra:
            raise SignatureMismatch(f"not an L_homo formula: unknown relation(s) {sorted(extra)}")
        return self.base if used <= {"QC"} else self.structure

    def eval(self, phi, env: dict | None = None) -> bool:
        return eval_formula(self._target(phi), phi, env)

    def evaluator(self, phi):
        """Compile once; returns ``fn(env_dict)``."""
        M = self._target(phi)
        names = sorted(free_vars(phi))
        fn, _ = compile_formula(M, phi, names)
        pad = [None] * (quantifier_depth(phi) + 1)
        return lambda env=None: fn([(env or {})[n] for n in names] + pad)


def _relations(phi, acc):
    if isinstance(phi, Atom):
        acc.add(phi.rel)
    elif isinstance(phi, Not):
        _relations(phi.body, acc)
    elif isinstance(phi, BINARY):
        _relations(phi.left, acc)
        _relations(phi.right, acc)
    elif isinstance(phi, QUANTIFIERS):
        _relations(phi.body, acc)
    return acc


def homotopic_structure(C: FinCategory, i: IsoGraph | None = None, defined: bool = False) -> FinStructure:
    m = HomotopicModel(C, i)
    return m.structure if defined else m.base


def eval_homotopic(C: FinCategory, i: IsoGraph | None, phi, env: dict | None = None) -> bool:
    """Truth of an equality-free formula over QC (and I, Iso) in ``C``."""
    _check_homotopic(phi)
    return HomotopicModel(C, i).eval(phi, env)
