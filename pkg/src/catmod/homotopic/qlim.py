"""The quasi-limit condition, evaluated directly on QC.

With ``x: C => C'`` an i-morphism:

* ``QC(x, p, p)`` says dom p is isomorphic to C, and ``QC(p, x, p)`` says
  cod p is isomorphic to C; together they make ``p`` a quasi-morphism.
* ``qcone(x, psi)``: each psi_A has domain iso to C, and
  ``QC(psi_A, J(s), psi_B)`` for every shape morphism ``s: A -> B``
  (identities included, which pins cod psi_A to J(A)).
* ``qlim(x)``: some qcone ``lambda`` at ``x`` such that for every qcone
  ``(alpha, psi)`` there is a quasi-morphism ``u: dom alpha ~> dom x`` with
  ``QC(u, lambda_A, psi_A)`` for all A, and any other such ``v`` has
  ``u ~ v``.
"""
from __future__ import annotations

from collections import defaultdict

from catmod.config import get_caps
from catmod.errors import BoundsExceeded
from catmod.fincat.core import Diagram, FinCategory, opposite_diagram
from catmod.homotopic.isograph import IsoGraph, build_isograph
from catmod.homotopic.qc import HomotopicModel


class _QLim:
    def __init__(self, model: HomotopicModel, D: Diagram):
        self.m = model
        C = model.C
        self.QC = model.qc
        self.I = sorted(model.i_morphisms, key=C.morphism_index.get)
        self.iso = model.structure.rels["Iso"]
        self.shape_objs = list(D.shape.objects)
        self.constraints = [
            (D.shape.dom[s], D.shape.cod[s], D.J.mor_map[s]) for s in D.shape.morphisms
        ]
        self.morphs = C.morphisms
        self._cones = {}

    def qcones(self, x):
        """Every psi (tuple in shape order) with qcone(x, psi)."""
        hit = self._cones.get(x)
        if hit is not None:
            return hit
        QC = self.QC
        starts = [p for p in self.morphs if (x, p, p) in QC]
        pos = {a: k for k, a in enumerate(self.shape_objs)}
        ready = defaultdict(list)
        for a, b, Js in self.constraints:
            ready[max(pos[a], pos[b])].append((pos[a], pos[b], Js))
        out = []
        legs = [None] * len(self.shape_objs)

        def rec(k):
            if k == len(legs):
                out.append(tuple(legs))
                return
            for p in starts:
                legs[k] = p
                if all((legs[a], Js, legs[b]) in QC for a, b, Js in ready[k]):
                    rec(k + 1)
            legs[k] = None

        rec(0)
        self._cones[x] = out
        return out

    def quasi_morphisms(self, alpha, x):
        QC = self.QC
        return [u for u in self.morphs if (alpha, u, u) in QC and (u, x, u) in QC]

    def universal(self, x, lam) -> bool:
        QC = self.QC
        n = len(lam)
        for alpha in self.I:
            for psi in self.qcones(alpha):
                good = [
                    u for u in self.quasi_morphisms(alpha, x)
                    if all((u, lam[k], psi[k]) in QC for k in range(n))
                ]
                if not good:
                    return False
                u = good[0]
                if any((u, v) not in self.iso for v in good[1:]):
                    return False
        return True

    def holds(self) -> bool:
        for x in self.I:
            for lam in self.qcones(x):
                if self.universal(x, lam):
                    return True
        return False


def qlim_holds(C: FinCategory, i: IsoGraph | None, D: Diagram, colimit: bool = False,
               model: HomotopicModel | None = None) -> bool:
    """Whether (exists x) qlim_J(x) holds in ``C``; colimits via the opposite."""
    caps = get_caps()
    if len(D.shape.objects) > caps.qlim_max_shape_objects or len(D.shape.morphisms) > caps.qlim_max_shape_morphisms:
        raise BoundsExceeded(
            f"qlim supports shapes with at most {caps.qlim_max_shape_objects} objects "
            f"and {caps.qlim_max_shape_morphisms} morphisms"
        )
    if colimit:
        D = opposite_diagram(D)
        C = D.category
        i = None if i is None else IsoGraph(C, {(b, a): m for (a, b), m in i.chosen.items()})
        model = None
    model = model or HomotopicModel(C, i or build_isograph(C))
    return _QLim(model, D).holds()


def quasi_limit_witness(C: FinCategory, i: IsoGraph | None, D: Diagram):
    """``(x, lambda)`` witnessing qlim, or None."""
    q = _QLim(HomotopicModel(C, i or build_isograph(C)), D)
    for x in q.I:
        for lam in q.qcones(x):
            if q.universal(x, lam):
                return x, dict(zip(q.shape_objs, lam))
    return None

