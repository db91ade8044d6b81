"""Finite limits and colimits by exhaustive cone search."""
from __future__ import annotations

from dataclasses import dataclass

from catmod.config import get_caps
from catmod.errors import BoundsExceeded
from catmod.fincat.core import Diagram, FinCategory, opposite_diagram
from catmod.structures.core import thaw


@dataclass(frozen=True)
class Cone:
    apex: object
    legs: tuple  # ((shape object, morphism), ...) in shape order

    def leg(self, i):
        return dict(self.legs)[i]

    def to_json(self):
        return {"apex": thaw(self.apex), "legs": [[thaw(i), thaw(m)] for i, m in self.legs]}


def _shape_constraints(D: Diagram):
    shape, J = D.shape, D.J
    out = []
    for u in shape.morphisms:
        if shape.is_identity(u):
            continue
        out.append((shape.dom[u], shape.cod[u], J.mor_map[u]))
    return out


def cones(C: FinCategory, D: Diagram, apex) -> list[Cone]:
    """Every cone over ``D`` with the given apex."""
    shape_objs = list(D.shape.objects)
    J = D.J
    constraints = _shape_constraints(D)
    pos = {i: k for k, i in enumerate(shape_objs)}
    ready = [[] for _ in shape_objs]
    for i, j, Ju in constraints:
        ready[max(pos[i], pos[j])].append((i, j, Ju))
    out = []
    legs = {}

    def rec(k):
        if k == len(shape_objs):
            out.append(Cone(apex, tuple((i, legs[i]) for i in shape_objs)))
            return
        i = shape_objs[k]
        for lam in C.hom(apex, J.obj_map[i]):
            legs[i] = lam
            if all(C.comp[(Ju, legs[a])] == legs[b] for a, b, Ju in ready[k]):
                rec(k + 1)
        legs.pop(i, None)

    rec(0)
    return out


def all_cones(C: FinCategory, D: Diagram) -> list[Cone]:
    return [c for X in C.objects for c in cones(C, D, X)]


def factorizations(C: FinCategory, limit: Cone, other: Cone) -> list:
    """Morphisms u: other.apex -> limit.apex with limit.leg(i) o u == other.leg(i)."""
    mine = dict(limit.legs)
    theirs = dict(other.legs)
    return [
        u for u in C.hom(other.apex, limit.apex)
        if all(C.comp[(mine[i], u)] == theirs[i] for i in mine)
    ]


def is_limit_cone(C: FinCategory, cone: Cone, every: list[Cone]) -> bool:
    for other in every:
        mine = dict(cone.legs)
        theirs = dict(other.legs)
        count = 0
        for u in C.hom(other.apex, cone.apex):
            if all(C.comp[(mine[i], u)] == theirs[i] for i in mine):
                count += 1
                if count > 1:
                    return False
        if count != 1:
            return False
    return True


def limit_of(C: FinCategory, D: Diagram, colimit: bool = False, caps=None) -> Cone | None:
    """A limit (or colimit) cone of ``D`` in ``C``, or None if there is none.

    Candidates are tried in object order, then in leg order, and the first
    cone that factors every cone uniquely is returned. For colimits the
    search runs in the opposite category, so legs go from the diagram into
    the apex.
    """
    caps = caps or get_caps()
    if len(C.morphisms) > caps.max_morphisms:
        raise BoundsExceeded(f"category has {len(C.morphisms)} morphisms, cap is {caps.max_morphisms}")
    if colimit:
        D = opposite_diagram(D)
        C = D.category
    every = all_cones(C, D)
    for cone in every:
        if is_limit_cone(C, cone, every):
            return cone
    return None


def has_limit(C, D, colimit=False, caps=None) -> bool:
    return limit_of(C, D, colimit, caps) is not None
