"""Deterministic enumeration of sentences by size and quantifier depth.

Bound variables are named canonically by binder level (``x0`` for the
outermost binder, ``x1`` for the next, ...), so each alpha-equivalence class
appears once. Commutative connectives are not deduplicated.

Every sentence has an index in the enumeration; ``sentence_at`` unranks an
index directly, which is what seeded uniform sampling uses.
"""
from __future__ import annotations

import random
from functools import lru_cache

from catmod.config import get_caps
from catmod.errors import BoundsExceeded
from catmod.logic.syntax import (
    And, App, Atom, Const, Equals, Exists, Forall, Iff, Implies, Not, Or, Var,
    BINARY, QUANTIFIERS,
)

_BINOPS = (And, Or, Implies, Iff)
_QUANTS = (Forall, Exists)


def var_name(level: int) -> str:
    return f"x{level}"


def _compositions(n, k):
    """Compositions of n into k positive parts, lexicographic."""
    if k == 0:
        if n == 0:
            yield ()
        return
    if k == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first, *rest)


class SentenceSpace:
    """Index space of sentences over one signature."""

    def __init__(self, sig, homotopic: bool = False):
        self.sig = sig
        self.homotopic = homotopic
        self.rel_names = sorted(sig.relations)
        self.const_names = sorted(sig.constants)
        self.func_names = sorted(sig.functions)
        self.sorts = tuple(sig.sorts)
        self._term_count = lru_cache(maxsize=None)(self._term_count_impl)
        self._formula_count = lru_cache(maxsize=None)(self._formula_count_impl)

    # -- terms -----------------------------------------------------------
    def _leaves(self, sort, scope):
        out = [Var(var_name(i), s) for i, s in enumerate(scope) if s == sort]
        out += [Const(c, sort) for c in self.const_names if self.sig.constants[c] == sort]
        return out

    def _term_count_impl(self, size, sort, scope):
        if size == 1:
            return len(self._leaves(sort, scope))
        total = 0
        for f in self.func_names:
            fs = self.sig.functions[f]
            if fs.result != sort or fs.arity == 0:
                continue
            total += self._tuple_count(size - 1, fs.args, scope)
        return total

    def _tuple_count(self, size, sorts, scope):
        total = 0
        for comp in _compositions(size, len(sorts)):
            prod = 1
            for s, srt in zip(comp, sorts):
                prod *= self._term_count(s, srt, scope)
                if not prod:
                    break
            total += prod
        return total

    def _tuple_at(self, size, sorts, scope, index):
        for comp in _compositions(size, len(sorts)):
            counts = [self._term_count(s, srt, scope) for s, srt in zip(comp, sorts)]
            prod = 1
            for c in counts:
                prod *= c
            if index < prod:
                parts = []
                for s, srt, c in reversed(list(zip(comp, sorts, counts))):
                    index, r = divmod(index, c)
                    parts.append(self._term_at(s, srt, scope, r))
                return tuple(reversed(parts))
            index -= prod
        raise IndexError("tuple index out of range")

    def _term_at(self, size, sort, scope, index):
        if size == 1:
            return self._leaves(sort, scope)[index]
        for f in self.func_names:
            fs = self.sig.functions[f]
            if fs.result != sort or fs.arity == 0:
                continue
            n = self._tuple_count(size - 1, fs.args, scope)
            if index < n:
                return App(f, self._tuple_at(size - 1, fs.args, scope, index), sort)
            index -= n
        raise IndexError("term index out of range")

    # -- formulas --------------------------------------------------------
    def _formula_count_impl(self, size, scope, depth):
        if size < 1:
            return 0
        total = 0
        for r in self.rel_names:
            arg_sorts = self.sig.relations[r]
            if not arg_sorts:
                total += size == 1
            else:
                total += self._tuple_count(size - 1, arg_sorts, scope)
        if not self.homotopic:
            for s in self.sorts:
                total += self._tuple_count(size - 1, (s, s), scope)
        total += self._formula_count(size - 1, scope, depth)
        for _ in _BINOPS:
            for s1 in range(1, size - 1):
                a = self._formula_count(s1, scope, depth)
                if a:
                    total += a * self._formula_count(size - 1 - s1, scope, depth)
        if depth > 0:
            for _ in _QUANTS:
                for s in self.sorts:
                    total += self._formula_count(size - 1, scope + (s,), depth - 1)
        return total

    def _formula_at(self, size, scope, depth, index):
        for r in self.rel_names:
            arg_sorts = self.sig.relations[r]
            if not arg_sorts:
                if size == 1:
                    if index == 0:
                        return Atom(r, ())
                    index -= 1
                continue
            n = self._tuple_count(size - 1, arg_sorts, scope)
            if index < n:
                return Atom(r, self._tuple_at(size - 1, arg_sorts, scope, index))
            index -= n
        if not self.homotopic:
            for s in self.sorts:
                n = self._tuple_count(size - 1, (s, s), scope)
                if index < n:
                    left, right = self._tuple_at(size - 1, (s, s), scope, index)
                    return Equals(left, right)
                index -= n
        n = self._formula_count(size - 1, scope, depth)
        if index < n:
            return Not(self._formula_at(size - 1, scope, depth, index))
        index -= n
        for op in _BINOPS:
            for s1 in range(1, size - 1):
                a = self._formula_count(s1, scope, depth)
                b = self._formula_count(size - 1 - s1, scope, depth)
                if index < a * b:
                    i, j = divmod(index, b)
                    return op(
                        self._formula_at(s1, scope, depth, i),
                        self._formula_at(size - 1 - s1, scope, depth, j),
                    )
                index -= a * b
        if depth > 0:
            for q in _QUANTS:
                for s in self.sorts:
                    n = self._formula_count(size - 1, scope + (s,), depth - 1)
                    if index < n:
                        body = self._formula_at(size - 1, scope + (s,), depth - 1, index)
                        return q(var_name(len(scope)), s, body)
                    index -= n
        raise IndexError("formula index out of range")

    # -- public ----------------------------------------------------------
    def count(self, max_depth: int, max_size: int) -> int:
        return sum(self._formula_count(s, (), max_depth) for s in range(1, max_size + 1))

    def at(self, index: int, max_depth: int, max_size: int):
        if index < 0:
            raise IndexError("negative index")
        for s in range(1, max_size + 1):
            n = self._formula_count(s, (), max_depth)
            if index < n:
                return self._formula_at(s, (), max_depth, index)
            index -= n
        raise IndexError("sentence index out of range")

    def __iter__(self):
        raise TypeError("use enumerate_sentences")


def _check_bounds(max_depth, max_size, caps):
    if max_depth < 0 or max_size < 0:
        raise BoundsExceeded("bounds must be non-negative")
    if max_depth > caps.enum_max_depth or max_size > caps.enum_max_size:
        raise BoundsExceeded(
            f"enumeration bounds depth={max_depth}, size={max_size} exceed "
            f"caps depth<={caps.enum_max_depth}, size<={caps.enum_max_size}"
        )


def enumerate_sentences(sig, max_depth: int, max_size: int, homotopic: bool = False, caps=None):
    """Yield every canonical sentence with depth <= max_depth and size <= max_size."""
    caps = caps or get_caps()
    _check_bounds(max_depth, max_size, caps)
    space = SentenceSpace(sig, homotopic)
    return _iter_space(space, max_depth, max_size)


def _iter_space(space, max_depth, max_size):
    for s in range(1, max_size + 1):
        n = space._formula_count(s, (), max_depth)
        for i in range(n):
            yield space._formula_at(s, (), max_depth, i)


def count_sentences(sig, max_depth, max_size, homotopic=False, caps=None) -> int:
    caps = caps or get_caps()
    _check_bounds(max_depth, max_size, caps)
    return SentenceSpace(sig, homotopic).count(max_depth, max_size)


def sentence_at(sig, index, max_depth, max_size, homotopic=False):
    return SentenceSpace(sig, homotopic).at(index, max_depth, max_size)


def sample_sentences(sig, n, max_depth, max_size, homotopic=False, seed=0, caps=None):
    """``n`` sentences drawn uniformly (with replacement) from the index space."""
    caps = caps or get_caps()
    _check_bounds(max_depth, max_size, caps)
    space = SentenceSpace(sig, homotopic)
    total = space.count(max_depth, max_size)
    if total == 0:
        return []
    rng = random.Random(seed)
    return [space.at(rng.randrange(total), max_depth, max_size) for _ in range(n)]


def canonicalize(phi, level: int = 0, renaming=None):
    """Rename bound variables by binder level; free variables are untouched."""
    renaming = renaming or {}

    def term(t):
        if isinstance(t, Var):
            return Var(renaming.get(t.name, t.name), t.sort)
        if isinstance(t, App):
            return App(t.func, tuple(term(a) for a in t.args), t.sort)
        return t

    if isinstance(phi, Atom):
        return Atom(phi.rel, tuple(term(a) for a in phi.args))
    if isinstance(phi, Equals):
        return Equals(term(phi.left), term(phi.right))
    if isinstance(phi, Not):
        return Not(canonicalize(phi.body, level, renaming))
    if isinstance(phi, BINARY):
        return type(phi)(canonicalize(phi.left, level, renaming), canonicalize(phi.right, level, renaming))
    if isinstance(phi, QUANTIFIERS):
        new = var_name(level)
        inner = dict(renaming)
        inner[phi.var] = new
        return type(phi)(new, phi.sort, canonicalize(phi.body, level + 1, inner))
    return phi
