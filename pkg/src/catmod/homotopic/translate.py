"""Translating L_cat formulas into homotopic ones (skeletal targets).

Objects become i-morphisms (identities, in a skeletal category), every
function application gets an existential witness pinned down by QC, and
equality becomes ``Iso``:

    dom(f) = w   iff  I(w) & QC(w, f, f)
    rng(f) = w   iff  I(w) & QC(f, w, f)
    g o f  = w   iff  QC(f, g, w)
    Id(X)        is   x itself

Witnesses are unique when they exist and absent when an application is
undefined, so the existential reading matches negative free logic.
"""
from __future__ import annotations

from catmod.errors import SignatureMismatch
from catmod.fincat.core import FinCategory, category_to_structure
from catmod.homotopic.qc import SORT, HomotopicModel
from catmod.logic.semantics import eval_formula
from catmod.logic.syntax import (
    And, App, Atom, Bottom, Const, Equals, Exists, Forall, Implies, Not, Top, Var, BINARY, QUANTIFIERS, formula_terms,
)


def _names(phi, acc):
    if isinstance(phi, QUANTIFIERS):
        acc.add(phi.var)
    acc.update(t.name for t in formula_terms(phi) if isinstance(t, Var))
    for part in ("body", "left", "right"):
        sub = getattr(phi, part, None)
        if sub is not None:
            _names(sub, acc)
    return acc


class _Translator:
    def __init__(self, phi):
        self.taken = _names(phi, set())
        self.k = 0

    def fresh(self):
        while f"w{self.k}" in self.taken:
            self.k += 1
        name = f"w{self.k}"
        self.k += 1
        return name

    def term(self, t, out):
        """Name standing for ``t``; witness conditions are appended to ``out``."""
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Const):
            raise SignatureMismatch("L_cat has no constants")
        if not isinstance(t, App):
            raise TypeError(f"not a term: {t!r}")
        if t.func == "Id":
            return self.term(t.args[0], out)
        args = [self.term(a, out) for a in t.args]
        w = self.fresh()
        v = lambda n: Var(n, SORT)
        if t.func == "dom":
            cond = And(Atom("I", (v(w),)), Atom("QC", (v(w), v(args[0]), v(args[0]))))
        elif t.func == "rng":
            cond = And(Atom("I", (v(w),)), Atom("QC", (v(args[0]), v(w), v(args[0]))))
        elif t.func == "o":
            g, f = args
            cond = Atom("QC", (v(f), v(g), v(w)))
        else:
            raise SignatureMismatch(f"unknown L_cat function {t.func!r}")
        out.append((w, cond))
        return w

    def wrap(self, bindings, core):
        for w, cond in reversed(bindings):
            core = Exists(w, SORT, And(cond, core))
        return core

    def formula(self, phi):
        if isinstance(phi, (Top, Bottom)):
            return phi
        if isinstance(phi, Equals):
            bindings = []
            a = self.term(phi.left, bindings)
            b = self.term(phi.right, bindings)
            return self.wrap(bindings, Atom("Iso", (Var(a, SORT), Var(b, SORT))))
        if isinstance(phi, Atom):
            raise SignatureMismatch(f"L_cat has no relation {phi.rel!r}")
        if isinstance(phi, Not):
            return Not(self.formula(phi.body))
        if isinstance(phi, BINARY):
            return type(phi)(self.formula(phi.left), self.formula(phi.right))
        body = self.formula(phi.body)
        if phi.sort == "o":
            guard = Atom("I", (Var(phi.var, SORT),))
            if isinstance(phi, Forall):
                return Forall(phi.var, SORT, Implies(guard, body))
            return Exists(phi.var, SORT, guard if isinstance(body, Top) else And(guard, body))
        return type(phi)(phi.var, SORT, body)


def translate_lcat(phi):
    """The homotopic formula (over QC, I, Iso) equivalent to ``phi`` on
    skeletal categories."""
    return _Translator(phi).formula(phi)


def compare_translation(C: FinCategory, phi, model: HomotopicModel | None = None) -> tuple[bool, bool]:
    """``(L_cat truth, truth of the translation)`` for a sentence ``phi``."""
    if not C.is_skeletal:
        raise ValueError(f"translation is only sound on skeletal categories; {C.name or C!r} is not")
    model = model or HomotopicModel(C)
    return eval_formula(category_to_structure(C), phi), model.eval(translate_lcat(phi))
