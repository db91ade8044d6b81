"""Skeletons and equivalence of finite categories."""
from __future__ import annotations

from dataclasses import dataclass

from catmod.fincat.core import (
    FinCategory, Functor, category_to_structure, full_subcategory, inclusion_functor,
)
from catmod.structures.core import thaw
from catmod.structures.homs import are_isomorphic


def representatives(C: FinCategory) -> dict:
    """object -> representative of its iso class (first in declared order)."""
    return {a: cls[0] for cls in C.iso_classes for a in cls}


def chosen_isos(C: FinCategory) -> dict:
    """object A -> the first isomorphism A -> rep(A) in declared order
    (the identity on representatives)."""
    rep = representatives(C)
    out = {}
    for a in C.objects:
        r = rep[a]
        out[a] = C.ids[a] if a == r else C.isos(a, r)[0]
    return out


def skeleton(C: FinCategory) -> tuple[FinCategory, Functor]:
    """The full subcategory on representatives plus the functor G: C -> it.

    ``G(f) = i_B o f o i_A^-1`` for ``f: A -> B``, where ``i_X`` are the
    chosen isomorphisms, so G is the identity on the skeleton itself.
    """
    rep = representatives(C)
    reps = [o for o in C.objects if rep[o] == o]
    S = full_subcategory(C, reps, f"sk({C.name})" if C.name else "")
    iso = chosen_isos(C)
    mor_map = {}
    for f in C.morphisms:
        a, b = C.dom[f], C.cod[f]
        mor_map[f] = C.compose_path(iso[b], f, C.inverse(iso[a]))
    G = Functor(C, S, dict(rep), mor_map)
    return S, G


@dataclass(frozen=True, eq=False)
class Equivalence:
    """Functors F: C -> D, H: D -> C with natural isomorphisms
    ``eta_A: A -> H F A`` and ``eps_B: B -> F H B``."""

    F: Functor
    H: Functor
    eta: dict
    eps: dict

    def violations(self) -> list[str]:
        out = []
        for name, fun in (("F", self.F), ("H", self.H)):
            out += [f"{name}: {v}" for v in fun.violations()]
        for name, first, second, nat in (("eta", self.F, self.H, self.eta), ("eps", self.H, self.F, self.eps)):
            C = first.source
            for a in C.objects:
                m = nat[a]
                target = second.obj_map[first.obj_map[a]]
                if C.dom[m] != a or C.cod[m] != target or not C.is_iso(m):
                    out.append(f"{name}_{a!r} is not an iso {a!r} -> {target!r}")
            for f in C.morphisms:
                a, b = C.dom[f], C.cod[f]
                lhs = C.compose(second.mor_map[first.mor_map[f]], nat[a])
                rhs = C.compose(nat[b], f)
                if lhs != rhs:
                    out.append(f"{name} is not natural at {f!r}")
        return out

    def to_json(self) -> dict:
        return {
            "F": self.F.to_json(),
            "H": self.H.to_json(),
            "eta": [[thaw(k), thaw(v)] for k, v in self.eta.items()],
            "eps": [[thaw(k), thaw(v)] for k, v in self.eps.items()],
        }


def are_equivalent(C: FinCategory, D: FinCategory) -> Equivalence | None:
    """An equivalence witness, present iff the skeletons are isomorphic."""
    SC, GC = skeleton(C)
    SD, GD = skeleton(D)
    h = are_isomorphic(category_to_structure(SC), category_to_structure(SD))
    if h is None:
        return None
    phi = Functor(SC, SD, dict(h.maps["o"]), dict(h.maps["m"]))
    phi_inv = Functor(SD, SC, {v: k for k, v in h.maps["o"].items()}, {v: k for k, v in h.maps["m"].items()})
    F = GC.then(phi).then(inclusion_functor(SD, D))
    H = GD.then(phi_inv).then(inclusion_functor(SC, C))
    # H F A = rep(A) and F H B = rep(B), reached by the chosen isos
    return Equivalence(F, H, chosen_isos(C), chosen_isos(D))
