"""Tarskian evaluation over finite structures.

Partial terms follow negative free logic: an atomic formula (equality
included) with an undefined argument is false; connectives and quantifiers
are classical on top of that. Formulas are compiled to closures over a
slot-indexed environment, with quantified subformulas memoised whenever they
do not depend on every enclosing binder.
"""
from __future__ import annotations

from catmod.errors import SignatureMismatch, UnboundVariable
from catmod.logic.syntax import (
    And, Atom, Bottom, Const, Equals, Exists, Forall, Iff, Implies, Not, Or, Top, Var,
    free_vars, quantifier_depth, term_vars,
)


def _compile_term(t, M, slots):
    if isinstance(t, Var):
        i = slots[t.name]
        return lambda env: env[i]
    if isinstance(t, Const):
        if t.name not in M.consts:
            raise SignatureMismatch(f"structure does not interpret constant {t.name!r}")
        v = M.consts[t.name]
        return lambda env: v
    fs = M.sig.functions.get(t.func)
    if fs is None or fs.arity != len(t.args):
        raise SignatureMismatch(f"structure does not interpret function {t.func!r}/{len(t.args)}")
    table = M.funcs[t.func]
    parts = [_compile_term(a, M, slots) for a in t.args]
    if len(parts) == 1:
        (p,) = parts

        def unary(env):
            a = p(env)
            return None if a is None else table.get((a,))

        return unary
    if len(parts) == 2:
        p, q = parts

        def binary(env):
            a = p(env)
            if a is None:
                return None
            b = q(env)
            return None if b is None else table.get((a, b))

        return binary

    def nary(env):
        vals = []
        for p in parts:
            v = p(env)
            if v is None:
                return None
            vals.append(v)
        return table.get(tuple(vals))

    return nary


def _compile(phi, M, slots, depth):
    if isinstance(phi, Top):
        return lambda env: True
    if isinstance(phi, Bottom):
        return lambda env: False
    if isinstance(phi, Atom):
        arg_sorts = M.sig.relations.get(phi.rel)
        if arg_sorts is None or len(arg_sorts) != len(phi.args):
            raise SignatureMismatch(f"structure does not interpret relation {phi.rel!r}/{len(phi.args)}")
        rel = M.rels[phi.rel]
        if not phi.args:
            truth = () in rel
            return lambda env: truth
        if all(isinstance(a, Var) for a in phi.args):
            idx = tuple(slots[a.name] for a in phi.args)
            if len(idx) == 3:
                i, j, k = idx
                return lambda env: (env[i], env[j], env[k]) in rel
            if len(idx) == 2:
                i, j = idx
                return lambda env: (env[i], env[j]) in rel
            if len(idx) == 1:
                (i,) = idx
                return lambda env: (env[i],) in rel
        parts = [_compile_term(a, M, slots) for a in phi.args]

        def atom(env):
            vals = []
            for p in parts:
                v = p(env)
                if v is None:
                    return False
                vals.append(v)
            return tuple(vals) in rel

        return atom
    if isinstance(phi, Equals):
        p = _compile_term(phi.left, M, slots)
        q = _compile_term(phi.right, M, slots)

        def eq(env):
            a = p(env)
            if a is None:
                return False
            b = q(env)
            return b is not None and a == b

        return eq
    if isinstance(phi, Not):
        f = _compile(phi.body, M, slots, depth)
        return lambda env: not f(env)
    if isinstance(phi, And):
        f, g = _compile(phi.left, M, slots, depth), _compile(phi.right, M, slots, depth)
        return lambda env: f(env) and g(env)
    if isinstance(phi, Or):
        f, g = _compile(phi.left, M, slots, depth), _compile(phi.right, M, slots, depth)
        return lambda env: f(env) or g(env)
    if isinstance(phi, Implies):
        f, g = _compile(phi.left, M, slots, depth), _compile(phi.right, M, slots, depth)
        return lambda env: (not f(env)) or g(env)
    if isinstance(phi, Iff):
        f, g = _compile(phi.left, M, slots, depth), _compile(phi.right, M, slots, depth)
        return lambda env: f(env) == g(env)
    if isinstance(phi, (Forall, Exists)):
        if phi.sort not in M.carriers:
            raise SignatureMismatch(f"structure has no sort {phi.sort!r}")
        carrier = M.carriers[phi.sort]
        slot = depth
        inner = dict(slots)
        inner[phi.var] = slot
        body = _compile(phi.body, M, inner, depth + 1)
        if isinstance(phi, Forall):
            def q(env):
                for e in carrier:
                    env[slot] = e
                    if not body(env):
                        return False
                return True
        else:
            def q(env):
                for e in carrier:
                    env[slot] = e
                    if body(env):
                        return True
                return False
        used = tuple(sorted(slots[v] for v in free_vars(phi)))
        if len(used) < len(set(slots.values())):
            cache = {}

            def memo(env):
                key = tuple(env[i] for i in used)
                hit = cache.get(key)
                if hit is None:
                    hit = cache[key] = q(env)
                return hit

            return memo
        return q
    raise TypeError(f"not a formula: {phi!r}")


def compile_formula(M, phi, free_order=None):
    """Compile ``phi`` against ``M``; returns ``(fn, free_names)``.

    ``fn`` takes a list whose first entries are the values of ``free_names``.
    """
    names = list(free_order) if free_order is not None else sorted(free_vars(phi))
    slots = {n: i for i, n in enumerate(names)}
    fn = _compile(phi, M, slots, len(names))
    return fn, names


def _max_depth(phi):
    return quantifier_depth(phi)


def eval_formula(M, phi, env: dict | None = None) -> bool:
    """Truth of ``phi`` in ``M`` under the assignment ``env`` (name -> element)."""
    env = env or {}
    fv = free_vars(phi)
    missing = [v for v in fv if v not in env]
    if missing:
        raise UnboundVariable(f"no value for free variable(s) {sorted(missing)}")
    names = sorted(fv)
    fn, _ = compile_formula(M, phi, names)
    slots = [env[n] for n in names] + [None] * (_max_depth(phi) + 1)
    return fn(slots)


def eval_term(M, t, env: dict | None = None):
    env = env or {}
    names = sorted(term_vars(t))
    for n in names:
        if n not in env:
            raise UnboundVariable(f"no value for variable {n!r}")
    fn = _compile_term(t, M, {n: i for i, n in enumerate(names)})
    return fn([env[n] for n in names])


class Evaluator:
    """Reusable compiled evaluators for many sentences over one structure."""

    def __init__(self, M):
        self.M = M

    def __call__(self, sentence) -> bool:
        fn, names = compile_formula(self.M, sentence)
        if names:
            raise UnboundVariable(f"sentence has free variables {names}")
        return fn([None] * (_max_depth(sentence) + 1))
