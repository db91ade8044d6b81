"""Terms and formulas as immutable trees."""
from __future__ import annotations

from dataclasses import dataclass

from catmod.logic.signature import INFIX_SYMBOLS


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    sort: str


@dataclass(frozen=True)
class Const:
    name: str
    sort: str


@dataclass(frozen=True)
class App:
    func: str
    args: tuple
    sort: str


Term = Var | Const | App


# -- formulas --------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple = ()


@dataclass(frozen=True)
class Equals:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    sort: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    sort: str
    body: "Formula"


Formula = Top | Bottom | Atom | Equals | Not | And | Or | Implies | Iff | Forall | Exists

BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists)


def conj(*parts):
    out = None
    for p in parts:
        out = p if out is None else And(out, p)
    return Top() if out is None else out


def disj(*parts):
    out = None
    for p in parts:
        out = p if out is None else Or(out, p)
    return Bottom() if out is None else out


# -- bookkeeping -----------------------------------------------------------

def term_vars(t) -> dict:
    if isinstance(t, Var):
        return {t.name: t.sort}
    if isinstance(t, App):
        out = {}
        for a in t.args:
            out.update(term_vars(a))
        return out
    return {}


def free_vars(phi) -> dict:
    """Free variables of ``phi`` as a name -> sort mapping."""
    if isinstance(phi, (Top, Bottom)):
        return {}
    if isinstance(phi, Atom):
        out = {}
        for a in phi.args:
            out.update(term_vars(a))
        return out
    if isinstance(phi, Equals):
        return {**term_vars(phi.left), **term_vars(phi.right)}
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, BINARY):
        return {**free_vars(phi.left), **free_vars(phi.right)}
    if isinstance(phi, QUANTIFIERS):
        inner = free_vars(phi.body)
        inner.pop(phi.var, None)
        return inner
    raise TypeError(f"not a formula: {phi!r}")


def is_sentence(phi) -> bool:
    return not free_vars(phi)


def quantifier_depth(phi) -> int:
    if isinstance(phi, Not):
        return quantifier_depth(phi.body)
    if isinstance(phi, BINARY):
        return max(quantifier_depth(phi.left), quantifier_depth(phi.right))
    if isinstance(phi, QUANTIFIERS):
        return 1 + quantifier_depth(phi.body)
    return 0


def term_size(t) -> int:
    if isinstance(t, App):
        return 1 + sum(term_size(a) for a in t.args)
    return 1


def formula_size(phi) -> int:
    """Node count of the tree, term nodes included."""
    if isinstance(phi, (Top, Bottom)):
        return 1
    if isinstance(phi, Atom):
        return 1 + sum(term_size(a) for a in phi.args)
    if isinstance(phi, Equals):
        return 1 + term_size(phi.left) + term_size(phi.right)
    if isinstance(phi, Not):
        return 1 + formula_size(phi.body)
    if isinstance(phi, BINARY):
        return 1 + formula_size(phi.left) + formula_size(phi.right)
    if isinstance(phi, QUANTIFIERS):
        return 1 + formula_size(phi.body)
    raise TypeError(f"not a formula: {phi!r}")


def has_equality(phi) -> bool:
    if isinstance(phi, Equals):
        return True
    if isinstance(phi, Not):
        return has_equality(phi.body)
    if isinstance(phi, BINARY):
        return has_equality(phi.left) or has_equality(phi.right)
    if isinstance(phi, QUANTIFIERS):
        return has_equality(phi.body)
    return False


def subterms(t):
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def formula_terms(phi):
    """Every term occurrence in ``phi`` (outermost first)."""
    if isinstance(phi, Atom):
        for a in phi.args:
            yield from subterms(a)
    elif isinstance(phi, Equals):
        yield from subterms(phi.left)
        yield from subterms(phi.right)
    elif isinstance(phi, Not):
        yield from formula_terms(phi.body)
    elif isinstance(phi, BINARY):
        yield from formula_terms(phi.left)
        yield from formula_terms(phi.right)
    elif isinstance(phi, QUANTIFIERS):
        yield from formula_terms(phi.body)


# -- printing --------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_RIGHT_ASSOC = (Iff, Implies)


def term_to_text(t) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if t.func in INFIX_SYMBOLS and len(t.args) == 2:
        return f"({term_to_text(t.args[0])} {t.func} {term_to_text(t.args[1])})"
    return f"{t.func}({', '.join(term_to_text(a) for a in t.args)})"


def _prec(phi) -> int:
    if isinstance(phi, QUANTIFIERS):
        return 0
    return _PREC.get(type(phi), 6 if not isinstance(phi, Not) else 5)


def to_text(phi, ctx: int = 0) -> str:
    if isinstance(phi, Top):
        s = "true"
    elif isinstance(phi, Bottom):
        s = "false"
    elif isinstance(phi, Atom):
        if not phi.args:
            s = phi.rel
        else:
            s = f"{phi.rel}({', '.join(term_to_text(a) for a in phi.args)})"
    elif isinstance(phi, Equals):
        s = f"{term_to_text(phi.left)} = {term_to_text(phi.right)}"
    elif isinstance(phi, Not):
        s = "~" + to_text(phi.body, 5)
    elif isinstance(phi, BINARY):
        p = _PREC[type(phi)]
        if isinstance(phi, _RIGHT_ASSOC):
            left, right = to_text(phi.left, p + 1), to_text(phi.right, p)
        else:
            left, right = to_text(phi.left, p), to_text(phi.right, p + 1)
        s = f"{left} {_OPS[type(phi)]} {right}"
    elif isinstance(phi, QUANTIFIERS):
        kw = "forall" if isinstance(phi, Forall) else "exists"
        s = f"{kw} {phi.var}:{phi.sort}. {to_text(phi.body, 0)}"
    else:
        raise TypeError(f"not a formula: {phi!r}")
    if _prec(phi) < ctx:
        return f"({s})"
    return s
