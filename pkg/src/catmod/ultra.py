"""Filters on finite index sets, reduced products, ultraproducts and the
ultrapower of a model category.

On a finite set every filter F is generated by its kernel K (the
intersection of all members), so two families are F-equivalent exactly when
they agree on K. Classes are represented by their least member family in
carrier order: the family itself on K and the first carrier element
elsewhere.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from catmod.config import get_caps
from catmod.errors import BoundsExceeded, ImproperFilter, SignatureMismatch
from catmod.fincat.core import FinCategory, category_from_structure, category_to_structure
from catmod.logic.semantics import Evaluator
from catmod.structures.core import FinStructure, Homomorphism, freeze, hom_violations, thaw


def _subsets(X):
    for r in range(len(X) + 1):
        for c in itertools.combinations(X, r):
            yield frozenset(c)


@dataclass(frozen=True)
class FilterOnX:
    X: tuple
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "X", tuple(self.X))
        object.__setattr__(self, "members", frozenset(frozenset(m) for m in self.members))
        problems = filter_violations(self.X, self.members)
        if problems:
            raise ImproperFilter("; ".join(problems))

    @property
    def kernel(self) -> frozenset:
        return frozenset.intersection(*self.members)

    @property
    def ultra(self) -> bool:
        return len(self.kernel) == 1

    def __contains__(self, S) -> bool:
        return frozenset(S) in self.members

    def to_json(self) -> dict:
        return {
            "X": [thaw(x) for x in self.X],
            "members": sorted(([thaw(x) for x in self.X if x in m] for m in self.members), key=lambda m: (len(m), repr(m))),
            "ultra": self.ultra,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FilterOnX":
        return cls(tuple(freeze(x) for x in data["X"]), frozenset(frozenset(freeze(x) for x in m) for m in data["members"]))

    def __repr__(self):
        return f"FilterOnX(X={list(self.X)}, kernel={sorted(self.kernel, key=repr)})"


def filter_violations(X, members) -> list[str]:
    """Why ``members`` is not a proper filter on X (empty list if it is)."""
    Xs = frozenset(X)
    members = {frozenset(m) for m in members}
    out = []
    if not members:
        return ["a filter must contain X"]
    if frozenset() in members:
        out.append("the empty set is a member (filter is improper)")
    for m in members:
        if not m <= Xs:
            out.append(f"member {sorted(m, key=repr)} is not a subset of X")
    if out:
        return out
    for a, b in itertools.combinations(members, 2):
        if a & b not in members:
            out.append(f"not closed under intersection: {sorted(a, key=repr)} & {sorted(b, key=repr)}")
            break
    for m in members:
        for extra in _subsets(sorted(Xs - m, key=repr)):
            if m | extra not in members:
                out.append(f"not upward closed above {sorted(m, key=repr)}")
                break
        else:
            continue
        break
    return out


def generated_filter(X, S) -> FilterOnX:
    """All supersets of S (proper iff S is non-empty)."""
    X = tuple(X)
    S = frozenset(S)
    rest = [x for x in X if x not in S]
    return FilterOnX(X, frozenset(S | e for e in _subsets(rest)))


def principal(X, x) -> FilterOnX:
    return generated_filter(X, {x})


def trivial_filter(X) -> FilterOnX:
    return generated_filter(X, X)


def enumerate_ultrafilters(X, caps=None) -> list[FilterOnX]:
    """The ultrafilters on a finite X: the principal ones, in X order."""
    caps = caps or get_caps()
    X = tuple(X)
    if len(X) > caps.ultra_max_index:
        raise BoundsExceeded(f"|X| = {len(X)} exceeds the cap {caps.ultra_max_index}")
    return [principal(X, x) for x in X]


def is_ultrafilter_family(X, members) -> bool:
    """Brute-force definition check: a proper filter deciding every subset."""
    if filter_violations(X, members):
        return False
    members = {frozenset(m) for m in members}
    Xs = frozenset(X)
    return all((S in members) != ((Xs - S) in members) for S in _subsets(list(X)))


# -- reduced products -----------------------------------------------------------
@dataclass(eq=False)
class ReducedProduct:
    """The reduced product with the data to move between families and classes."""

    structure: FinStructure
    factors: list
    filter: FilterOnX
    kernel_positions: tuple = field(default=())

    def class_of(self, sort, family) -> tuple:
        """Representative of the class of ``family`` (a tuple indexed like X)."""
        return _representative(self.factors, self.kernel_positions, sort, tuple(family))

    def agree(self, family_a, family_b) -> bool:
        same = frozenset(x for x, a, b in zip(self.filter.X, family_a, family_b) if a == b)
        return same in self.filter


def _representative(factors, kpos, sort, family):
    return tuple(family[i] if i in kpos else factors[i].carriers[sort][0] for i in range(len(factors)))


def reduced_product(Ms, F: FilterOnX) -> ReducedProduct:
    """Product of ``Ms`` (listed in the order of ``F.X``) modulo F-agreement.

    A relation holds of a tuple of classes iff it holds on a member of F;
    a partial function is defined iff it is defined on a member of F.
    """
    Ms = list(Ms)
    if len(Ms) != len(F.X):
        raise ValueError(f"{len(Ms)} factors for an index set of size {len(F.X)}")
    if not Ms:
        raise ValueError("empty index set")
    sig = Ms[0].sig
    for M in Ms[1:]:
        if M.sig != sig:
            raise SignatureMismatch("factors of a reduced product must share a signature")
    K = F.kernel
    kpos = tuple(i for i, x in enumerate(F.X) if x in K)
    n = len(Ms)

    def rep(sort, values_on_k):
        fam = [None] * n
        for i in range(n):
            fam[i] = Ms[i].carriers[sort][0]
        for i, v in zip(kpos, values_on_k):
            fam[i] = v
        return tuple(fam)

    carriers = {}
    for s in sig.sorts:
        carriers[s] = tuple(rep(s, vals) for vals in itertools.product(*(Ms[i].carriers[s] for i in kpos)))
        if any(not M.carriers[s] for M in Ms):
            carriers[s] = ()
    consts = {c: rep(s, [Ms[i].consts[c] for i in kpos]) for c, s in sig.constants.items()}
    funcs = {}
    for f, fs in sig.functions.items():
        table = {}
        for args in itertools.product(*(carriers[s] for s in fs.args)):
            vals = []
            for i in kpos:
                v = Ms[i].funcs[f].get(tuple(a[i] for a in args))
                if v is None:
                    break
                vals.append(v)
            else:
                table[args] = rep(fs.result, vals)
        funcs[f] = table
    rels = {}
    for r, arg_sorts in sig.relations.items():
        rels[r] = {
            args for args in itertools.product(*(carriers[s] for s in arg_sorts))
            if all(tuple(a[i] for a in args) in Ms[i].rels[r] for i in kpos)
        }
    P = FinStructure(sig, carriers, consts, funcs, rels)
    return ReducedProduct(P, Ms, F, kpos)


def reduced_product_by_agreement(Ms, F: FilterOnX) -> FinStructure:
    """Reference construction straight from the definition: all families,
    grouped by pairwise agreement on a member of F (for testing)."""
    Ms = list(Ms)
    sig = Ms[0].sig
    X = F.X

    def agree(a, b):
        return frozenset(x for x, u, v in zip(X, a, b) if u == v) in F

    def holds_on(pred):
        return frozenset(x for i, x in enumerate(X) if pred(i)) in F

    classes, cls_of = {}, {}
    for s in sig.sorts:
        reps = []
        for fam in itertools.product(*(M.carriers[s] for M in Ms)):
            for r in reps:
                if agree(fam, r):
                    cls_of[(s, fam)] = r
                    break
            else:
                reps.append(fam)
                cls_of[(s, fam)] = fam
        classes[s] = tuple(reps)
    consts = {c: cls_of[(s, tuple(M.consts[c] for M in Ms))] for c, s in sig.constants.items()}
    funcs = {}
    for f, fs in sig.functions.items():
        table = {}
        for args in itertools.product(*(classes[s] for s in fs.args)):
            vals = [M.funcs[f].get(tuple(a[i] for a in args)) for i, M in enumerate(Ms)]
            if holds_on(lambda i: vals[i] is not None):
                fam = tuple(v if v is not None else M.carriers[fs.result][0] for v, M in zip(vals, Ms))
                table[args] = cls_of[(fs.result, fam)]
        funcs[f] = table
    rels = {
        r: {
            args for args in itertools.product(*(classes[s] for s in arg_sorts))
            if holds_on(lambda i: tuple(a[i] for a in args) in Ms[i].rels[r])
        }
        for r, arg_sorts in sig.relations.items()
    }
    return FinStructure(sig, classes, consts, funcs, rels)


def ultraproduct(Ms, U: FilterOnX) -> ReducedProduct:
    if not U.ultra:
        raise ImproperFilter("ultraproduct needs an ultrafilter")
    return reduced_product(Ms, U)


def ultrapower(M: FinStructure, U: FilterOnX) -> ReducedProduct:
    return ultraproduct([M] * len(U.X), U)


def canonical_iso(rp: ReducedProduct) -> Homomorphism:
    """For a principal ultrafilter at x0: the isomorphism to the factor M_x0,
    reading off the x0 coordinate."""
    if not rp.filter.ultra:
        raise ImproperFilter("canonical iso needs an ultrafilter")
    (i,) = rp.kernel_positions
    P = rp.structure
    M = rp.factors[i]
    maps = {s: {a: a[i] for a in P.carriers[s]} for s in P.sig.sorts}
    return Homomorphism(P, M, maps, True)


def is_isomorphism(h: Homomorphism) -> bool:
    return (
        not hom_violations(h.source, h.target, h.maps, strong=True)
        and h.is_injective()
        and h.is_surjective()
    )


def reduced_product_hom(homs, rp_source: ReducedProduct, rp_target: ReducedProduct) -> Homomorphism:
    """The map induced by a family of homomorphisms ``h_x: M_x -> N_x``."""
    sig = rp_source.structure.sig
    maps = {}
    for s in sig.sorts:
        maps[s] = {
            a: rp_target.class_of(s, tuple(h.maps[s][a[i]] for i, h in enumerate(homs)))
            for a in rp_source.structure.carriers[s]
        }
    return Homomorphism(rp_source.structure, rp_target.structure, maps)


# -- Los ---------------------------------------------------------------------------
def los_verify(Ms, U: FilterOnX, sentence, rp: ReducedProduct | None = None) -> dict:
    """Compare truth in the ultraproduct with almost-everywhere truth."""
    rp = rp or ultraproduct(Ms, U)
    upstairs = Evaluator(rp.structure)(sentence)
    truths = [Evaluator(M)(sentence) for M in rp.factors]
    where = frozenset(x for x, t in zip(U.X, truths) if t)
    downstairs = where in U
    return {
        "ultraproduct": upstairs,
        "factors": truths,
        "almost_everywhere": downstairs,
        "ok": upstairs == downstairs,
    }


def los_sweep(Ms, U: FilterOnX, sentences) -> list[dict]:
    """Łoś check for many sentences; returns the failures only."""
    rp = ultraproduct(Ms, U)
    up = Evaluator(rp.structure)
    downs = [Evaluator(M) for M in rp.factors]
    bad = []
    for phi in sentences:
        truths = [d(phi) for d in downs]
        where = frozenset(x for x, t in zip(U.X, truths) if t)
        if up(phi) != (where in U):
            bad.append({"sentence": phi, "factors": truths})
    return bad


def diagonal_embedding(M: FinStructure, U: FilterOnX, rp: ReducedProduct | None = None) -> Homomorphism:
    rp = rp or ultrapower(M, U)
    n = len(U.X)
    maps = {s: {e: rp.class_of(s, (e,) * n) for e in M.carriers[s]} for s in M.sig.sorts}
    return Homomorphism(M, rp.structure, maps, True)


# -- ultrapower of a model category ---------------------------------------------------
@dataclass(eq=False)
class UltrapowerEmbedding:
    """The ultrapower of a bundle's category together with i into structures.

    ``i_objects[B]`` is the structure i(B) on the tagged set |B|, whose
    elements ``(B, e)`` pair the object with an element e of the
    ultraproduct of the models representing B. ``i_morphisms[f]`` is i(f).
    """

    ultra_category: FinCategory
    rp: ReducedProduct
    i_objects: dict
    i_morphisms: dict
    underlying: dict  # object B -> |B| computed from the sets D(M_{B_x})
    underlying_maps: dict  # morphism f -> |f| by post-composition on families

    def functor_data(self) -> dict:
        return {"objects": len(self.i_objects), "morphisms": len(self.i_morphisms)}

    def is_injective_on_objects(self) -> bool:
        seen = set()
        for B, S in self.i_objects.items():
            key = (tuple(S.carriers.items()),)
            if key in seen:
                return False
            seen.add(key)
        return True

    def is_faithful(self) -> bool:
        C = self.ultra_category
        for a in C.objects:
            for b in C.objects:
                imgs = [tuple(sorted(self.i_morphisms[m].maps[self._sort].items(), key=repr)) for m in C.hom(a, b)]
                if len(set(imgs)) != len(imgs):
                    return False
        return True

    def is_functor(self) -> bool:
        C = self.ultra_category
        for a in C.objects:
            h = self.i_morphisms[C.ids[a]]
            if any(h.maps[s][e] != e for s in h.maps for e in h.maps[s]):
                return False
        for (g, f), h in C.comp.items():
            if self.i_morphisms[g].compose(self.i_morphisms[f]).maps != self.i_morphisms[h].maps:
                return False
        return all(
            not hom_violations(self.i_objects[C.dom[m]], self.i_objects[C.cod[m]], hm.maps)
            for m, hm in self.i_morphisms.items()
        )

    def triangle_commutes(self) -> bool:
        """D o i = |-| on objects and morphisms, elementwise."""
        s = self._sort
        for B, S in self.i_objects.items():
            if set(S.carriers[s]) != set(self.underlying[B]):
                return False
        for f, h in self.i_morphisms.items():
            if h.maps[s] != self.underlying_maps[f]:
                return False
        return True

    @property
    def _sort(self):
        S = next(iter(self.i_objects.values()))
        return S.sig.sorts[0]


def ultrapower_embedding(bundle, U: FilterOnX, caps=None) -> UltrapowerEmbedding:
    """Ultrapower of the bundle's category (as an L_cat structure) and the
    embedding i into structures built from ultraproducts of the models."""
    caps = caps or get_caps()
    if len(U.X) > caps.ultra_max_index:
        raise BoundsExceeded(f"|X| = {len(U.X)} exceeds the cap {caps.ultra_max_index}")
    if not U.ultra:
        raise ImproperFilter("ultrapower embedding needs an ultrafilter")
    C = bundle.category
    S = category_to_structure(C)
    rp = ultrapower(S, U)
    ulC = category_from_structure(rp.structure, f"ul({C.name})" if C.name else "")
    n = len(U.X)

    obj_rp = {}
    i_objects = {}
    underlying = {}
    for B in ulC.objects:
        models = [bundle.models[B[k]] for k in range(n)]
        rB = ultraproduct(models, U)
        obj_rp[B] = rB
        M = rB.structure
        tag = {s: {e: (B, e) for e in M.carriers[s]} for s in M.sig.sorts}
        i_objects[B] = _relabel_structure(M, tag)
        d_sort = M.sig.sorts[0]
        sets = [_bare(m, d_sort) for m in models]
        rset = reduced_product(sets, U)
        underlying[B] = [(B, e) for e in rset.structure.carriers[d_sort]]
    i_morphisms = {}
    underlying_maps = {}
    for f in ulC.morphisms:
        A, B = ulC.dom[f], ulC.cod[f]
        homs = [bundle.homs[f[k]] for k in range(n)]
        h = reduced_product_hom(homs, obj_rp[A], obj_rp[B])
        maps = {s: {(A, a): (B, b) for a, b in m.items()} for s, m in h.maps.items()}
        i_morphisms[f] = Homomorphism(i_objects[A], i_objects[B], maps)
        d_sort = h.source.sig.sorts[0]
        # |f|: post-composition, i.e. apply f_x to each coordinate
        underlying_maps[f] = {
            (A, a): (B, obj_rp[B].class_of(d_sort, tuple(homs[k].maps[d_sort][a[k]] for k in range(n))))
            for (_, a) in underlying[A]
        }
    return UltrapowerEmbedding(ulC, rp, i_objects, i_morphisms, underlying, underlying_maps)


def _bare(M: FinStructure, sort) -> FinStructure:
    from catmod.logic.signature import Signature

    return FinStructure(Signature((sort,)), {sort: M.carriers[sort]})


def _relabel_structure(M: FinStructure, tag: dict) -> FinStructure:
    sig = M.sig
    return FinStructure(
        sig,
        {s: tuple(tag[s][e] for e in M.carriers[s]) for s in sig.sorts},
        {c: tag[s][M.consts[c]] for c, s in sig.constants.items()},
        {
            f: {tuple(tag[s][a] for a, s in zip(args, fs.args)): tag[fs.result][v] for args, v in M.funcs[f].items()}
            for f, fs in sig.functions.items()
        },
        {r: {tuple(tag[s][a] for a, s in zip(t, ars)) for t in M.rels[r]} for r, ars in sig.relations.items()},
    )


def hom_set_ultraproduct_check(C: FinCategory, I, U: FilterOnX) -> list[str]:
    """|Hom_ul(ul I, B)| equals the size of the ultraproduct of the sets
    Hom(I, B_x), for every object B of the ultrapower."""
    rp = ultrapower(category_to_structure(C), U)
    ulC = category_from_structure(rp.structure)
    n = len(U.X)
    ulI = rp.class_of("o", (I,) * n)
    out = []
    for B in ulC.objects:
        expected = 1
        for k in rp.kernel_positions:
            expected *= len(C.hom(I, B[k]))
        got = len(ulC.hom(ulI, B))
        if got != expected:
            out.append(f"object {B!r}: {got} morphisms from ul I, expected {expected}")
    return out
