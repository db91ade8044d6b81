"""Finite truncations of model categories, plus the explicit coequalizer,
unary coproduct and Theta-family constructions."""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import asdict, dataclass, field

from catmod.config import get_caps
from catmod.errors import NotParallel, SignatureNotUnary
from catmod.fincat.core import FinCategory
from catmod.logic.signature import Signature
from catmod.structures.core import FinStructure, Homomorphism, Theory, freeze, thaw
from catmod.structures.homs import enumerate_homomorphisms
from catmod.structures.models import enumerate_models
from catmod.structures.termalg import VARIABLE, expansions, term_algebra


@dataclass(eq=False)
class ModelCategory:
    """A category whose objects are named structures and whose morphisms
    are homomorphisms between them."""

    category: FinCategory
    models: dict  # object name -> FinStructure
    homs: dict  # morphism id -> Homomorphism
    strong: bool = False
    theory: Theory | None = None
    meta: dict = field(default_factory=dict)

    def hom_of(self, m) -> Homomorphism:
        return self.homs[m]

    def morphism_for(self, h: Homomorphism):
        """Id of the morphism carrying the homomorphism ``h`` (or None)."""
        return self._by_key.get(h.key())

    @property
    def _by_key(self):
        cache = self.__dict__.get("_key_cache")
        if cache is None:
            cache = {h.key(): m for m, h in self.homs.items()}
            self.__dict__["_key_cache"] = cache
        return cache

    # -- bundle IO -----------------------------------------------------------
    def save(self, path: str) -> None:
        os.makedirs(os.path.join(path, "models"), exist_ok=True)
        extra = {m: {"map": h.maps_json()} for m, h in self.homs.items()}
        with open(os.path.join(path, "category.json"), "w") as fh:
            json.dump(self.category.to_json(extra), fh, indent=1)
        index = {}
        for name, M in self.models.items():
            rel = f"models/{name}.json"
            with open(os.path.join(path, rel), "w") as fh:
                json.dump(M.to_json(), fh, indent=1)
            index[str(name)] = rel
        meta = dict(self.meta)
        meta.update({"strong": self.strong, "index": index})
        if self.theory is not None:
            meta["theory"] = self.theory.to_json()
            meta["theory_sha256"] = self.theory.digest()
        with open(os.path.join(path, "meta.json"), "w") as fh:
            json.dump(meta, fh, indent=1, sort_keys=True)

    @classmethod
    def load(cls, path: str) -> "ModelCategory":
        with open(os.path.join(path, "meta.json")) as fh:
            meta = json.load(fh)
        with open(os.path.join(path, "category.json")) as fh:
            data = json.load(fh)
        C = FinCategory.from_json(data)
        models = {}
        by_text = {str(thaw(o)): o for o in C.objects}
        for name, rel in meta["index"].items():
            with open(os.path.join(path, rel)) as fh:
                models[by_text.get(name, name)] = FinStructure.from_json(json.load(fh))
        homs = {}
        strong = bool(meta.get("strong", False))
        for rec in data["morphisms"]:
            m = freeze(rec["id"])
            A, B = models[C.dom[m]], models[C.cod[m]]
            maps = {s: {freeze(k): freeze(v) for k, v in pairs} for s, pairs in rec["map"].items()}
            homs[m] = Homomorphism(A, B, maps, strong)
        theory = Theory.from_json(meta["theory"]) if "theory" in meta else None
        return cls(C, models, homs, strong, theory, {k: v for k, v in meta.items() if k not in ("index", "theory")})


def category_of_structures(structs, names=None, strong: bool = False, name: str = "") -> ModelCategory:
    """The full subcategory of (strong) L-structures on the given list."""
    structs = list(structs)
    names = list(names) if names is not None else [f"M{i}" for i in range(len(structs))]
    models = dict(zip(names, structs))
    morphisms, dom, cod, homs = [], {}, {}, {}
    by_key = {}
    ids = {}
    for (i, a), (j, b) in itertools.product(enumerate(names), repeat=2):
        for k, h in enumerate(enumerate_homomorphisms(models[a], models[b], strong)):
            m = f"{a}>{b}:{k}"
            morphisms.append(m)
            dom[m], cod[m] = a, b
            homs[m] = h
            by_key[(i, j, h.key())] = m
            if i == j and all(h.maps[s].get(e) == e for s in h.maps for e in h.maps[s]):
                ids[a] = m
    index = {n: i for i, n in enumerate(names)}
    comp = {}
    for f in morphisms:
        for g in morphisms:
            if cod[f] != dom[g]:
                continue
            h = homs[g].compose(homs[f])
            comp[(g, f)] = by_key[(index[dom[f]], index[cod[g]], h.key())]
    C = FinCategory(tuple(names), tuple(morphisms), dom, cod, comp, ids, name)
    return ModelCategory(C, models, homs, strong)


def build_model_category(theory: Theory, max_size: int, strong: bool = False, caps=None) -> ModelCategory:
    """Objects: enumerate_models(theory, max_size) named M0, M1, ...;
    morphisms: all (strong) homomorphisms."""
    caps = caps or get_caps()
    models = enumerate_models(theory, max_size, caps)
    mc = category_of_structures(models, strong=strong, name=f"Mod<={max_size}")
    mc.theory = theory
    mc.meta = {"max_size": max_size, "caps": asdict(caps)}
    return mc


# -- coequalizers ---------------------------------------------------------------
class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.order = {x: i for i, x in enumerate(items)}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        # keep the element listed first as the root
        if self.order[ry] < self.order[rx]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


def coequalizer(f: Homomorphism, g: Homomorphism):
    """Quotient ``p: B -> B/E`` by the least congruence containing
    ``{(f(a), g(a))}``.

    Classes are represented by their first element in carrier order;
    relations are pushed forward along ``p``.
    """
    if f.source != g.source or f.target != g.target:
        raise NotParallel("coequalizer needs two homomorphisms with the same source and target")
    A, B = f.source, f.target
    sig = B.sig
    uf = {s: _UnionFind(B.carriers[s]) for s in sig.sorts}
    for s in sig.sorts:
        for a in A.carriers[s]:
            uf[s].union(f.maps[s][a], g.maps[s][a])
    changed = True
    while changed:
        changed = False
        for name, fs in sig.functions.items():
            seen = {}
            for args, v in B.funcs[name].items():
                key = tuple(uf[s].find(x) for x, s in zip(args, fs.args))
                if key in seen:
                    if uf[fs.result].union(seen[key], v):
                        changed = True
                else:
                    seen[key] = v
    p_maps = {s: {e: uf[s].find(e) for e in B.carriers[s]} for s in sig.sorts}
    carriers = {s: tuple(e for e in B.carriers[s] if p_maps[s][e] == e) for s in sig.sorts}
    consts = {c: p_maps[s][B.consts[c]] for c, s in sig.constants.items()}
    funcs = {}
    for name, fs in sig.functions.items():
        table = {}
        for args, v in B.funcs[name].items():
            table[tuple(p_maps[s][x] for x, s in zip(args, fs.args))] = p_maps[fs.result][v]
        funcs[name] = table
    rels = {
        r: {tuple(p_maps[s][x] for x, s in zip(t, arg_sorts)) for t in B.rels[r]}
        for r, arg_sorts in sig.relations.items()
    }
    C = FinStructure(sig, carriers, consts, funcs, rels)
    p = Homomorphism(B, C, p_maps, False)
    return C, p


def _equal_maps(h1: Homomorphism, h2: Homomorphism) -> bool:
    return h1.maps == h2.maps


def verify_coequalizer(f, g, C, p, targets) -> list[str]:
    """Check ``p o f = p o g`` and that every ``q: B -> Y`` (Y in targets) with
    ``q o f = q o g`` factors uniquely through ``p``. Returns problems."""
    problems = []
    if not _equal_maps(p.compose(f), p.compose(g)):
        problems.append("p o f != p o g")
    B = f.target
    for k, Y in enumerate(targets):
        us = enumerate_homomorphisms(C, Y)
        for q in enumerate_homomorphisms(B, Y):
            if not _equal_maps(q.compose(f), q.compose(g)):
                continue
            n = sum(1 for u in us if _equal_maps(u.compose(p), q))
            if n != 1:
                problems.append(f"target {k}: {n} factorisations of a coequalising map")
    return problems


def naive_coequalizer_classes(f: Homomorphism, g: Homomorphism) -> dict:
    """Classes of the plain equivalence closure of ``f(a) ~ g(a)`` (no
    closure under operations), sort -> list of blocks."""
    B = f.target
    out = {}
    for s in B.sig.sorts:
        uf = _UnionFind(B.carriers[s])
        for a in f.source.carriers[s]:
            uf.union(f.maps[s][a], g.maps[s][a])
        blocks = {}
        for e in B.carriers[s]:
            blocks.setdefault(uf.find(e), []).append(e)
        out[s] = list(blocks.values())
    return out


def is_well_defined_quotient(B: FinStructure, blocks: dict) -> bool:
    """Do the operations of ``B`` respect the given partition?"""
    cls = {s: {e: i for i, blk in enumerate(bs) for e in blk} for s, bs in blocks.items()}
    for name, fs in B.sig.functions.items():
        seen = {}
        for args, v in B.funcs[name].items():
            key = tuple(cls[s][x] for x, s in zip(args, fs.args))
            if key in seen and seen[key] != cls[fs.result][v]:
                return False
            seen[key] = cls[fs.result][v]
    return True


# -- coproducts for unary signatures ---------------------------------------------
def check_unary(sig: Signature) -> None:
    if sig.constants:
        raise SignatureNotUnary(f"signature has constants {sorted(sig.constants)}")
    bad = [f for f, fs in sig.functions.items() if fs.arity != 1]
    if bad:
        raise SignatureNotUnary(f"function symbols of arity != 1: {sorted(bad)}")


def coproduct_unary(Ms, sig: Signature | None = None):
    """Disjoint union of structures over a unary signature.

    Elements are tagged ``(k, e)``; returns the union and the injections.
    """
    Ms = list(Ms)
    if sig is None:
        if not Ms:
            raise ValueError("need a signature for the empty coproduct")
        sig = Ms[0].sig
    check_unary(sig)
    carriers = {s: tuple((k, e) for k, M in enumerate(Ms) for e in M.carriers[s]) for s in sig.sorts}
    funcs = {
        f: {((k, a[0]),): (k, v) for k, M in enumerate(Ms) for a, v in M.funcs[f].items()}
        for f in sig.functions
    }
    rels = {}
    for r, arg_sorts in sig.relations.items():
        if not arg_sorts:
            rels[r] = {()} if any(() in M.rels[r] for M in Ms) else set()
        else:
            rels[r] = {tuple((k, e) for e in t) for k, M in enumerate(Ms) for t in M.rels[r]}
    S = FinStructure(sig, carriers, {}, funcs, rels)
    injections = [
        Homomorphism(M, S, {s: {e: (k, e) for e in M.carriers[s]} for s in sig.sorts})
        for k, M in enumerate(Ms)
    ]
    return S, injections


def verify_coproduct(Ms, S, injections, targets) -> list[str]:
    """Every family ``q_k: M_k -> Y`` factors uniquely through the injections."""
    problems = []
    for t, Y in enumerate(targets):
        us = enumerate_homomorphisms(S, Y)
        per = [enumerate_homomorphisms(M, Y) for M in Ms]
        for family in itertools.product(*per):
            n = sum(
                1 for u in us
                if all(_equal_maps(u.compose(i), q) for i, q in zip(injections, family))
            )
            if n != 1:
                problems.append(f"target {t}: {n} mediating maps")
    return problems


# -- the Theta family -------------------------------------------------------------
def theta_family(sig: Signature, caps=None) -> list[FinStructure]:
    """All expansions of the one-variable term algebra of the function
    reduct to ``sig``."""
    caps = caps or get_caps()
    T = term_algebra(sig.functional_reduct(), caps=caps)
    return list(expansions(T, sig, limit=caps.theta_max_expansions))


def theta_points(theta, M: FinStructure, var_sort: str | None = None) -> list:
    """For each strong hom from a member of Theta into M, the pair
    (member index, image of the variable)."""
    out = []
    for k, J in enumerate(theta):
        vs = var_sort or J.sig.sorts[0]
        for h in enumerate_homomorphisms(J, M, strong=True):
            out.append((k, h.maps[vs][VARIABLE]))
    return out


def theta_locally_unique(theta, M: FinStructure, var_sort: str | None = None) -> bool:
    """Each element of M is the image of the variable under exactly one
    strong hom out of exactly one member of Theta."""
    vs = var_sort or M.sig.sorts[0]
    images = [e for _, e in theta_points(theta, M, vs)]
    return sorted(images, key=repr) == sorted(M.carriers[vs], key=repr)


def theta_separates(theta, f: Homomorphism, g: Homomorphism) -> bool:
    """Some strong ``a: J -> dom f`` (J in Theta) has ``f o a != g o a``."""
    for J in theta:
        for a in enumerate_homomorphisms(J, f.source, strong=True):
            if not _equal_maps(f.compose(a), g.compose(a)):
                return True
    return False

