"""Group arrows and the AB axioms on finite categories."""
from __future__ import annotations

from dataclasses import dataclass, field

from catmod.config import Caps
from catmod.errors import AxiomFailure, MissingTripleProduct, NoNullObject, NoProductCone, NotAGroup
from catmod.fincat.core import FinCategory, discrete_diagram
from catmod.fincat.generators import find_generators, is_generator
from catmod.fincat.limits import Cone, all_cones, is_limit_cone, limit_of
from catmod.logic.semantics import eval_formula
from catmod.logic.signature import GROUP_SIG
from catmod.structures.core import FinStructure, Homomorphism, Theory, hom_violations, thaw
from catmod.structures.homs import enumerate_homomorphisms

SCOPE_NOTE = (
    "A finite category with a null object and all binary products models AB only "
    "when every object is trivial (|G x G| = |G|^2), so Ab1 and Ab2 are checked per "
    "object on the objects whose square exists; Prod lists the missing products."
)

ABELIAN_AXIOMS = (
    "forall x:s. forall y:s. forall z:s. ((x + y) + z) = (x + (y + z))",
    "forall x:s. forall y:s. (x + y) = (y + x)",
    "forall x:s. (x + 0) = x",
    "forall x:s. (x + -(x)) = 0",
)


def _abelian_theory():
    return Theory.from_texts(GROUP_SIG, ABELIAN_AXIOMS)


def is_abelian_group(G: FinStructure) -> bool:
    return all(eval_formula(G, ax) for ax in _abelian_theory().sentences)


# -- category plumbing --------------------------------------------------------

def null_object(C: FinCategory):
    """The first object with exactly one arrow to and from every object."""
    for z in C.objects:
        if all(len(C.hom(z, x)) == 1 and len(C.hom(x, z)) == 1 for x in C.objects):
            return z
    return None


def zero_map(C: FinCategory, a, b, z=None):
    z = null_object(C) if z is None else z
    if z is None:
        raise NoNullObject("category has no null object")
    return C.compose(C.hom(z, b)[0], C.hom(a, z)[0])


def product_cone(C: FinCategory, *factors) -> Cone | None:
    return limit_of(C, discrete_diagram(C, list(factors)), caps=Caps(max_morphisms=max(40, len(C.morphisms))))


def is_product_cone(C: FinCategory, cone: Cone, factors) -> bool:
    D = discrete_diagram(C, list(factors))
    if [C.cod[m] for _, m in cone.legs] != list(factors):
        return False
    return is_limit_cone(C, cone, all_cones(C, D))


def pairing(C: FinCategory, cone: Cone, *maps):
    """The unique u with leg_k o u = maps[k]."""
    legs = [m for _, m in cone.legs]
    src = C.dom[maps[0]]
    hits = [u for u in C.hom(src, cone.apex) if all(C.compose(l, u) == f for l, f in zip(legs, maps))]
    if len(hits) != 1:
        raise NoProductCone(f"cone at {cone.apex!r} does not factor {maps!r} uniquely")
    return hits[0]


@dataclass
class ProductData:
    """G x G with its projections, the diagonal and the twist."""
    G: object
    cone: Cone
    p1: object
    p2: object
    diagonal: object
    twist: object

    @classmethod
    def build(cls, C: FinCategory, G, cone: Cone | None = None) -> "ProductData":
        if cone is None:
            cone = product_cone(C, G, G)
            if cone is None:
                raise NoProductCone(f"no product {G!r} x {G!r}")
        elif not is_product_cone(C, cone, [G, G]):
            raise NoProductCone(f"supplied cone is not a product of {G!r} with itself")
        p1, p2 = (m for _, m in cone.legs)
        one = C.ids[G]
        return cls(G, cone, p1, p2, pairing(C, cone, one, one), pairing(C, cone, p2, p1))


# -- group arrows ----------------------------------------------------------------

def _associative(C, mu, pd: ProductData, mode: str) -> bool:
    G = pd.G
    if mode in ("auto", "triple"):
        triple = product_cone(C, G, G, G)
        if triple is not None:
            q1, q2, q3 = (m for _, m in triple.legs)
            right = pairing(C, pd.cone, q1, C.compose(mu, pairing(C, pd.cone, q2, q3)))
            left = pairing(C, pd.cone, C.compose(mu, pairing(C, pd.cone, q1, q2)), q3)
            return C.compose(mu, right) == C.compose(mu, left)
        if mode == "triple":
            raise MissingTripleProduct(f"no product {G!r} x {G!r} x {G!r}")
    # generalized elements a, b, c: X -> G
    for X in C.objects:
        elems = C.hom(X, G)
        for a in elems:
            for b in elems:
                ab = C.compose(mu, pairing(C, pd.cone, a, b))
                for c in elems:
                    bc = C.compose(mu, pairing(C, pd.cone, b, c))
                    if C.compose(mu, pairing(C, pd.cone, a, bc)) != C.compose(mu, pairing(C, pd.cone, ab, c)):
                        return False
    return True


def arrow_axioms(C: FinCategory, mu, pd: ProductData, z, associativity: str = "auto") -> dict:
    """Truth of associativity, unit, inverse and commutativity for ``mu``."""
    G, P = pd.G, pd.cone.apex
    zero_pg = zero_map(C, P, G, z)
    zero_gg = zero_map(C, G, G, z)
    unit = C.compose(mu, pairing(C, pd.cone, zero_pg, pd.p2)) == pd.p2
    inverse = any(
        C.compose(mu, pairing(C, pd.cone, C.ids[G], lam)) == zero_gg for lam in C.hom(G, G)
    )
    comm = C.compose(mu, pd.twist) == mu
    out = {"unit": unit, "inverse": inverse, "commutativity": comm}
    out["associativity"] = _associative(C, mu, pd, associativity) if all(out.values()) else None
    return out


def group_arrows(C: FinCategory, G, cone: Cone | None = None, associativity: str = "auto") -> list:
    """Every mu: G x G -> G satisfying the four group-arrow axioms.

    ``associativity`` is ``"triple"`` (needs G x G x G, else
    MissingTripleProduct), ``"elements"`` (quantify over generalized elements
    X -> G) or ``"auto"`` (triple product when present, elements otherwise).
    """
    z = null_object(C)
    if z is None:
        raise NoNullObject("category has no null object")
    pd = ProductData.build(C, G, cone)
    out = []
    for mu in C.hom(pd.cone.apex, G):
        if all(arrow_axioms(C, mu, pd, z, associativity).values()):
            out.append(mu)
    return out


# -- AB report -------------------------------------------------------------------

@dataclass
class ABReport:
    axioms: dict = field(default_factory=dict)
    note: str = SCOPE_NOTE

    @property
    def ok(self) -> bool:
        return all(v["pass"] for v in self.axioms.values())

    def to_json(self) -> dict:
        return {"note": self.note, "ok": self.ok, "axioms": self.axioms}


def check_ab(C: FinCategory) -> ABReport:
    rep = ABReport()
    missing = []
    for i, a in enumerate(C.objects):
        for b in C.objects[i:]:
            if product_cone(C, a, b) is None:
                missing.append([thaw(a), thaw(b)])
    rep.axioms["Prod"] = {"pass": not missing, "missing": missing}
    z = null_object(C)
    rep.axioms["Null"] = {"pass": z is not None, "object": thaw(z) if z is not None else None}
    gens = find_generators(C)
    rep.axioms["Gen"] = {"pass": bool(gens), "generators": [thaw(g) for g in gens]}
    mus, per_obj = {}, {}
    pds = {}
    for G in C.objects:
        if z is None:
            per_obj[str(G)] = {"status": "no null object"}
            continue
        try:
            pd = ProductData.build(C, G)
        except NoProductCone:
            per_obj[str(G)] = {"status": "skipped", "reason": "no product G x G"}
            continue
        pds[G] = pd
        found = [mu for mu in C.hom(pd.cone.apex, G) if all(arrow_axioms(C, mu, pd, z).values())]
        per_obj[str(G)] = {"status": "ok" if len(found) == 1 else "fail", "group_arrows": [thaw(m) for m in found]}
        if len(found) == 1:
            mus[G] = found[0]
    rep.axioms["Ab1"] = {"pass": z is not None and all(v["status"] in ("ok", "skipped") for v in per_obj.values()),
                         "objects": per_obj}
    bad = []
    checked = 0
    for f in C.morphisms:
        G, H = C.dom[f], C.cod[f]
        if G not in mus or H not in mus:
            continue
        checked += 1
        pg, ph = pds[G], pds[H]
        fxf = pairing(C, ph.cone, C.compose(f, pg.p1), C.compose(f, pg.p2))
        if C.compose(mus[H], fxf) != C.compose(f, mus[G]):
            bad.append(thaw(f))
    rep.axioms["Ab2"] = {"pass": not bad and rep.axioms["Ab1"]["pass"], "checked": checked, "nonlinear": bad}
    return rep


# -- extraction into actual groups -------------------------------------------------

@dataclass
class Extraction:
    generator: object
    groups: dict
    maps: dict

    def violations(self) -> list[str]:
        out = []
        for G, grp in self.groups.items():
            if not is_abelian_group(grp):
                out.append(f"|{G}| is not an abelian group")
        for f, h in self.maps.items():
            if hom_violations(h.source, h.target, h.maps):
                out.append(f"|{f}| is not a group homomorphism")
        return out

    def is_faithful(self) -> bool:
        seen = set()
        for f, h in self.maps.items():
            key = (id(h.source), id(h.target), tuple(sorted(h.maps["s"].items(), key=repr)))
            if key in seen:
                return False
            seen.add(key)
        return True

    def is_injective_on_objects(self) -> bool:
        return len({id(g) for g in self.groups.values()}) == len(self.groups)


def _addition(C, I, G, pd, mu, z):
    elems = C.hom(I, G)
    return {(a, b): C.compose(mu, pairing(C, pd.cone, a, b)) for a in elems for b in elems}


def _componentwise(C, I, G, table, z):
    """Addition on Hom(I, G) for G = A x B, via the projections.

    Linearity of the projections forces p_k(a + b) = p_k(a) + p_k(b), so
    this is the only candidate for the sum even without G x G.
    """
    for i, A in enumerate(C.objects):
        for B in C.objects:
            if A not in table or B not in table or G in (A, B):
                continue
            cone = product_cone(C, A, B)
            if cone is None or cone.apex != G:
                continue
            p, q = (m for _, m in cone.legs)
            out = {}
            for a in C.hom(I, G):
                for b in C.hom(I, G):
                    left = table[A][(C.compose(p, a), C.compose(p, b))]
                    right = table[B][(C.compose(q, a), C.compose(q, b))]
                    out[(a, b)] = pairing(C, cone, left, right)
            return out
    return None


def extract_groups(C: FinCategory, I) -> Extraction:
    """|G| = Hom(I, G) with a + b = mu_G o (a, b); morphisms act by composition."""
    if not is_generator(C, I):
        raise AxiomFailure(f"Gen: {I!r} is not a generator")
    z = null_object(C)
    if z is None:
        raise AxiomFailure("Null: no null object")
    table = {}
    pending = []
    for G in C.objects:
        try:
            pd = ProductData.build(C, G)
        except NoProductCone:
            pending.append(G)
            continue
        mus = group_arrows(C, G, pd.cone)
        if len(mus) != 1:
            raise AxiomFailure(f"Ab1: {G!r} has {len(mus)} group arrows")
        table[G] = _addition(C, I, G, pd, mus[0], z)
    for G in pending:
        add = _componentwise(C, I, G, table, z)
        if add is None:
            raise AxiomFailure(f"Prod: no G x G and no product decomposition for {G!r}")
        table[G] = add
    groups = {}
    for G in C.objects:
        elems = C.hom(I, G)
        zero = zero_map(C, I, G, z)
        add = table[G]
        neg = {}
        for a in elems:
            inv = [b for b in elems if add[(a, b)] == zero]
            if len(inv) != 1:
                raise AxiomFailure(f"Ab1: element {a!r} of |{G}| has {len(inv)} inverses")
            neg[(a,)] = inv[0]
        grp = FinStructure(GROUP_SIG, {"s": elems}, {"0": zero}, {"+": add, "-": neg}, {})
        if not is_abelian_group(grp):
            raise AxiomFailure(f"Ab1: |{G}| is not an abelian group")
        groups[G] = grp
    maps = {}
    for f in C.morphisms:
        G, H = C.dom[f], C.cod[f]
        h = Homomorphism(groups[G], groups[H], {"s": {a: C.compose(f, a) for a in C.hom(I, G)}})
        if hom_violations(h.source, h.target, h.maps):
            raise AxiomFailure(f"Ab2: {f!r} does not induce a group homomorphism")
        maps[f] = h
    return Extraction(I, groups, maps)


# -- group arrows on concrete groups ---------------------------------------------------

def concrete_group_arrows(G: FinStructure) -> list[dict]:
    """Additive monoidal operations on ``G`` sharing its neutral element.

    Additive maps G x G -> G are exactly (a, b) -> phi(a) + psi(b) with
    phi, psi endomorphisms; the unit laws then pin phi and psi down.
    """
    if G.sig != GROUP_SIG or not is_abelian_group(G):
        raise NotAGroup("expected a finite abelian group over (0, +, -)")
    els = G.carriers["s"]
    if len(els) > 32:
        raise NotAGroup("groups above order 32 are not supported")
    add, zero = G.funcs["+"], G.consts["0"]
    ends = [h.maps["s"] for h in enumerate_homomorphisms(G, G)]
    # endomorphisms fix 0, so mu(a, 0) = phi(a) and mu(0, b) = psi(b): the
    # unit laws split into one condition on each factor
    lefts = [phi for phi in ends if all(add[(phi[a], zero)] == a for a in els)]
    rights = [psi for psi in ends if all(add[(zero, psi[b])] == b for b in els)]
    out = []
    for phi in lefts:
        for psi in rights:
            mu = {(a, b): add[(phi[a], psi[b])] for a in els for b in els}
            if not all(mu[(a, b)] == mu[(b, a)] for a in els for b in els):
                continue
            if mu not in out:
                out.append(mu)
    return out
