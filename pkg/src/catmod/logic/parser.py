"""Recursive-descent parser for the formula grammar.

Precedence, tightest first: ``~``, ``&``, ``|``, ``->``, ``<->``. Quantifier
bodies extend as far right as possible. Binary function symbols listed in
``INFIX_SYMBOLS`` may be written infix (``g o f``, ``x + y``).
"""
from __future__ import annotations

import re

from catmod.errors import EqualityForbidden, FormulaSyntaxError, SortError
from catmod.logic.signature import INFIX_SYMBOLS, Signature
from catmod.logic.syntax import (
    And, App, Atom, Bottom, Const, Equals, Exists, Forall, Iff, Implies, Not, Or, Top, Var,
)

_TOKEN = re.compile(
    r"\s*(?:(?P<sym><->|->|[~&|(),.:=+*-])|(?P<ident>[A-Za-z0-9_][A-Za-z0-9_']*))"
)
KEYWORDS = {"forall", "exists", "true", "false"}


def tokenize(text: str):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        value = m.group("sym") or m.group("ident")
        tokens.append((value, m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, sig: Signature, homotopic: bool, free: dict):
        self.tokens = tokenize(text)
        self.i = 0
        self.sig = sig
        self.homotopic = homotopic
        self.scope = [dict(free)]

    # token helpers
    def peek(self, k=0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)][0]

    def pos(self):
        return self.tokens[self.i][1]

    def take(self, *expected):
        tok = self.peek()
        if expected and tok not in expected:
            raise FormulaSyntaxError(f"unexpected token {tok!r}", self.pos(), expected)
        self.i += 1
        return tok

    def ident(self, what="identifier"):
        tok = self.peek()
        if tok == "<eof>" or not re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_']*", tok) or tok in KEYWORDS:
            raise FormulaSyntaxError(f"unexpected token {tok!r}", self.pos(), (what,))
        self.i += 1
        return tok

    def lookup_var(self, name):
        for frame in reversed(self.scope):
            if name in frame:
                return frame[name]
        return None

    # formulas
    def formula(self):
        left = self.implication()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.formula())
        return left

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok in ("forall", "exists"):
            return self.quantified()
        return self.primary()

    def quantified(self):
        kw = self.take()
        var = self.ident("variable")
        if self.sig.symbol_kind(var) is not None:
            raise SortError(f"variable {var!r} clashes with a signature symbol")
        self.take(":")
        sort_pos = self.pos()
        sort = self.ident("sort")
        if sort not in self.sig.sorts:
            raise SortError(f"unknown sort {sort!r} at position {sort_pos}")
        self.take(".")
        self.scope.append({var: sort})
        body = self.formula()
        self.scope.pop()
        return (Forall if kw == "forall" else Exists)(var, sort, body)

    def primary(self):
        tok = self.peek()
        if tok == "true":
            self.take()
            return Top()
        if tok == "false":
            self.take()
            return Bottom()
        if tok == "(":
            saved = self.i
            try:
                return self.equation()
            except (FormulaSyntaxError, SortError):
                self.i = saved
            self.take("(")
            inner = self.formula()
            self.take(")")
            return inner
        if self.sig.symbol_kind(tok) == "relation" and self.lookup_var(tok) is None:
            return self.atom()
        return self.equation()

    def atom(self):
        start = self.pos()
        name = self.take()
        arg_sorts = self.sig.relations[name]
        args = ()
        if self.peek() == "(":
            self.take("(")
            args = self.term_list()
            self.take(")")
        if len(args) != len(arg_sorts):
            raise SortError(
                f"relation {name!r} expects {len(arg_sorts)} argument(s), got {len(args)} "
                f"(position {start})"
            )
        for k, (a, s) in enumerate(zip(args, arg_sorts)):
            if a.sort != s:
                raise SortError(f"argument {k + 1} of {name!r} has sort {a.sort!r}, expected {s!r}")
        return Atom(name, tuple(args))

    def equation(self):
        start = self.pos()
        left = self.term()
        if self.peek() != "=":
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r}", self.pos(), ("=",))
        self.take("=")
        right = self.term()
        if self.homotopic:
            raise EqualityForbidden(f"equality atom at position {start} in a homotopic formula")
        if left.sort != right.sort:
            raise SortError(f"equation at position {start} compares sorts {left.sort!r} and {right.sort!r}")
        return Equals(left, right)

    # terms
    def term_list(self):
        args = [self.term()]
        while self.peek() == ",":
            self.take(",")
            args.append(self.term())
        return args

    def is_infix(self, tok):
        fs = self.sig.functions.get(tok)
        return tok in INFIX_SYMBOLS and fs is not None and fs.arity == 2

    def term(self):
        left = self.simple_term()
        while self.is_infix(self.peek()) and self.lookup_var(self.peek()) is None:
            op = self.take()
            right = self.simple_term()
            left = self.apply(op, [left, right])
        return left

    def simple_term(self):
        tok = self.peek()
        if tok == "(":
            self.take("(")
            t = self.term()
            self.take(")")
            return t
        start = self.pos()
        if tok in ("+", "*", "-"):
            name = self.take()
        else:
            name = self.ident("term")
        var_sort = self.lookup_var(name)
        if var_sort is not None:
            return Var(name, var_sort)
        kind = self.sig.symbol_kind(name)
        if kind == "constant":
            return Const(name, self.sig.constants[name])
        if kind == "function":
            self.take("(")
            args = self.term_list()
            self.take(")")
            return self.apply(name, args)
        if kind == "relation":
            raise SortError(f"relation {name!r} used as a term at position {start}")
        raise SortError(f"unknown symbol or unbound variable {name!r} at position {start}")

    def apply(self, name, args):
        fs = self.sig.functions[name]
        if len(args) != fs.arity:
            raise SortError(f"function {name!r} expects {fs.arity} argument(s), got {len(args)}")
        for k, (a, s) in enumerate(zip(args, fs.args)):
            if a.sort != s:
                raise SortError(f"argument {k + 1} of {name!r} has sort {a.sort!r}, expected {s!r}")
        return App(name, tuple(args), fs.result)


def parse_formula(text: str, sig: Signature, homotopic: bool = False, free: dict | None = None):
    """Parse ``text`` into a well-sorted formula over ``sig``.

    ``free`` declares sorts for free variables; any other unbound identifier
    is a :class:`SortError`. With ``homotopic`` set, equality atoms raise
    :class:`EqualityForbidden`.
    """
    p = _Parser(text, sig, homotopic, free or {})
    phi = p.formula()
    if p.peek() != "<eof>":
        raise FormulaSyntaxError(
            f"unexpected token {p.peek()!r}", p.pos(), ("&", "|", "->", "<->", "<eof>")
        )
    return phi


def parse_term(text: str, sig: Signature, free: dict | None = None):
    p = _Parser(text, sig, False, free or {})
    t = p.term()
    if p.peek() != "<eof>":
        raise FormulaSyntaxError(f"unexpected token {p.peek()!r}", p.pos(), ("<eof>",))
    return t
