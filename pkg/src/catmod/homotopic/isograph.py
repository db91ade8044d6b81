"""Iso-graphs: thin wide subcategories picking one isomorphism per ordered
pair of isomorphic objects."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from catmod.config import get_caps
from catmod.errors import BoundsExceeded
from catmod.fincat.core import FinCategory
from catmod.fincat.skeleton import representatives
from catmod.structures.core import thaw


@dataclass(frozen=True, eq=False)
class IsoGraph:
    """``chosen[(A, B)]`` is the unique i-arrow A => B, for A iso B."""

    host: FinCategory
    chosen: dict

    def arrow(self, a, b):
        return self.chosen.get((a, b))

    @property
    def morphisms(self) -> frozenset:
        return frozenset(self.chosen.values())

    def __contains__(self, m) -> bool:
        return m in self.morphisms

    def violations(self) -> list[str]:
        C = self.host
        out = []
        for (a, b), m in self.chosen.items():
            if m not in C.dom:
                out.append(f"{m!r} is not a morphism of the host")
                continue
            if (C.dom[m], C.cod[m]) != (a, b):
                out.append(f"arrow {m!r} filed under {(a, b)!r} has the wrong ends")
            elif not C.is_iso(m):
                out.append(f"{m!r} is not an isomorphism")
        for a in C.objects:
            if self.chosen.get((a, a)) != C.ids[a]:
                out.append(f"the only automorphism of {a!r} must be its identity")
            for b in C.objects:
                if ((a, b) in self.chosen) != C.isomorphic(a, b):
                    out.append(f"hom-set {(a, b)!r} does not match the isomorphism relation")
        if out:
            return out
        for (a, b), f in self.chosen.items():
            for c in C.objects:
                g = self.chosen.get((b, c))
                if g is not None and C.compose(g, f) != self.chosen[(a, c)]:
                    out.append(f"not closed under composition at {(a, b, c)!r}")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def key(self) -> tuple:
        return tuple(sorted((repr(k), repr(v)) for k, v in self.chosen.items()))

    def to_json(self) -> list:
        return [[thaw(a), thaw(b), thaw(m)] for (a, b), m in self.chosen.items()]


def _from_sigma(C: FinCategory, rep: dict, sigma: dict) -> IsoGraph:
    chosen = {}
    for cls in C.iso_classes:
        for a in cls:
            inv_a = C.inverse(sigma[a])
            for b in cls:
                chosen[(a, b)] = C.compose(sigma[b], inv_a)
    return IsoGraph(C, chosen)


def _sigma_choices(C: FinCategory):
    rep = representatives(C)
    return rep, {a: [C.ids[a]] if rep[a] == a else C.isos(rep[a], a) for a in C.objects}


def build_isograph(C: FinCategory) -> IsoGraph:
    """The iso-graph from sigma_A: rep(A) -> A, the first iso in declared order.

    ``chosen(A, B) = sigma_B o sigma_A^-1``; for a skeletal category this is
    the discrete subcategory.
    """
    rep, choices = _sigma_choices(C)
    return _from_sigma(C, rep, {a: c[0] for a, c in choices.items()})


def count_isographs(C: FinCategory) -> int:
    _, choices = _sigma_choices(C)
    return math.prod(len(c) for c in choices.values())


def enumerate_isographs(C: FinCategory, limit: int | None = None) -> list[IsoGraph]:
    """Every iso-graph of ``C``.

    An iso-graph is determined by its arrows out of each representative,
    and any choice of isos there extends, so this is a plain product.
    """
    limit = get_caps().isograph_enum_cap if limit is None else limit
    n = count_isographs(C)
    if n > limit:
        raise BoundsExceeded(f"{n} iso-graphs exceed the limit {limit}")
    rep, choices = _sigma_choices(C)
    objs = list(C.objects)
    return [_from_sigma(C, rep, dict(zip(objs, pick))) for pick in itertools.product(*(choices[a] for a in objs))]


def _closure(C: FinCategory, d):
    """Close ``d`` plus inverses and identities under composition.

    Returns the (A, B) -> arrow table, or None as soon as two different
    arrows share a hom-set (which covers proper automorphisms).
    """
    table = {(a, a): C.ids[a] for a in C.objects}
    frontier = []
    for m in d:
        inv = C.inverse(m)
        if inv is None:
            return None
        frontier += [m, inv]
    while frontier:
        new = []
        for m in frontier:
            key = (C.dom[m], C.cod[m])
            have = table.get(key)
            if have is None:
                table[key] = m
                new.append(m)
            elif have != m:
                return None
        # compose every new arrow with everything on both sides
        frontier = []
        for m in new:
            a, b = C.dom[m], C.cod[m]
            for (x, y), g in list(table.items()):
                if x == b:
                    frontier.append(C.compose(g, m))
                if y == a:
                    frontier.append(C.compose(m, g))
    return table


def extend_isograph(C: FinCategory, d, max_d: int | None = None) -> IsoGraph | None:
    """An iso-graph containing the morphisms ``d``, or None if none exists."""
    max_d = get_caps().extends_max if max_d is None else max_d
    d = list(dict.fromkeys(d))
    if len(d) > max_d:
        raise BoundsExceeded(f"{len(d)} seed morphisms, at most {max_d} supported")
    table = _closure(C, d)
    if table is None:
        return None
    rep = representatives(C)
    sigma = {}
    for cls in C.iso_classes:
        r = cls[0]
        for a in cls:
            if a in sigma:
                continue
            if (r, a) in table:
                sigma[a] = table[(r, a)]
                continue
            # a fresh component of the word graph: anchor it at ``a``
            base = C.isos(r, a)[0]
            for b in cls:
                if (a, b) in table and b not in sigma:
                    sigma[b] = C.compose(table[(a, b)], base)
    out = _from_sigma(C, rep, sigma)
    if any(out.chosen[(C.dom[m], C.cod[m])] != m for m in d):
        return None
    return out


def extends_to_isograph(C: FinCategory, d, max_d: int | None = None) -> bool:
    return extend_isograph(C, d, max_d) is not None
