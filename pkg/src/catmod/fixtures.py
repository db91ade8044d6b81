"""A corpus of small categories and structures used by tests, scripts and the CLI."""
from __future__ import annotations

import itertools
from functools import lru_cache

from catmod.abcheck import ABELIAN_AXIOMS
from catmod.fincat.core import FinCategory, make_category, opposite
from catmod.logic.signature import GROUP_SIG, one_sorted
from catmod.structures.core import FinStructure, Theory

EMPTY_SIG = one_sorted("s")
UNARY_P_SIG = one_sorted("s", relations={"P": 1})


def abelian_theory() -> Theory:
    return Theory.from_texts(GROUP_SIG, ABELIAN_AXIOMS)


def exactly_n_theory(n: int) -> Theory:
    """Sets with exactly n elements (empty signature)."""
    xs = [f"y{i}" for i in range(n)]
    distinct = " & ".join(f"~({a} = {b})" for a, b in itertools.combinations(xs, 2)) or "true"
    cover = " | ".join(f"z = {a}" for a in xs)
    body = f"{distinct} & forall z:s. ({cover})"
    text = "".join(f"exists {a}:s. " for a in xs) + f"({body})"
    return Theory.from_texts(EMPTY_SIG, [text])


# -- structures ----------------------------------------------------------------
def cyclic_product(orders) -> FinStructure:
    """Z/n1 x ... x Z/nk as a (+, -, 0)-structure on tuples."""
    orders = tuple(orders)
    elems = list(itertools.product(*(range(n) for n in orders)))

    def add(a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, orders))

    def neg(a):
        return tuple((-x) % n for x, n in zip(a, orders))

    if len(orders) == 1:
        key = lambda t: t[0]  # noqa: E731
        elems_out = [key(e) for e in elems]
        return FinStructure(
            GROUP_SIG, {"s": elems_out}, {"0": 0},
            {"+": {(key(a), key(b)): key(add(a, b)) for a in elems for b in elems},
             "-": {(key(a),): key(neg(a)) for a in elems}},
        )
    zero = tuple(0 for _ in orders)
    return FinStructure(
        GROUP_SIG, {"s": elems}, {"0": zero},
        {"+": {(a, b): add(a, b) for a in elems for b in elems}, "-": {(a,): neg(a) for a in elems}},
    )


def zmod(n: int) -> FinStructure:
    return cyclic_product((n,))


def _prime_power_decomps(n):
    """Invariant-factor-free listing: products of cyclic groups of
    prime-power order, one per isomorphism type."""
    primes = []
    m, p = n, 2
    while m > 1:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            primes.append((p, e))
        p += 1

    def int_partitions(e, largest=None):
        largest = largest or e
        if e == 0:
            yield ()
            return
        for k in range(min(e, largest), 0, -1):
            for rest in int_partitions(e - k, k):
                yield (k, *rest)

    per_prime = [[tuple(p ** k for k in part) for part in int_partitions(e)] for p, e in primes]
    for choice in itertools.product(*per_prime):
        yield tuple(itertools.chain.from_iterable(choice))


def abelian_groups(max_order: int):
    """One abelian group per isomorphism type with order <= max_order,
    as (label, structure)."""
    out = [("Z1", zmod(1))]
    for n in range(2, max_order + 1):
        for orders in _prime_power_decomps(n):
            label = "x".join(f"Z{k}" for k in orders)
            out.append((label, cyclic_product(orders) if len(orders) > 1 else zmod(orders[0])))
    return out


def bare_set(n: int) -> FinStructure:
    return FinStructure(EMPTY_SIG, {"s": tuple(range(n))})


def unary_p(n: int, marked) -> FinStructure:
    return FinStructure(UNARY_P_SIG, {"s": tuple(range(n))}, rels={"P": {(e,) for e in marked}})


def unary_p_structures(max_size: int):
    """All one-unary-predicate structures up to iso (P determined by its size)."""
    return [unary_p(n, range(k)) for n in range(1, max_size + 1) for k in range(n + 1)]


# -- categories ------------------------------------------------------------------
def _unit_closed(objs, morphs, extra, ids, name):
    comp = dict(extra)
    for m, d, c in morphs:
        comp[(m, ids[d])] = m
        comp[(ids[c], m)] = m
    return make_category(objs, morphs, comp, ids, name)


def terminal() -> FinCategory:
    return make_category(["*"], [("1", "*", "*")], {("1", "1"): "1"}, {"*": "1"}, "terminal")


def discrete(n: int) -> FinCategory:
    objs = [f"d{i}" for i in range(n)]
    return make_category(objs, [(f"1_{o}", o, o) for o in objs], {(f"1_{o}", f"1_{o}"): f"1_{o}" for o in objs}, {o: f"1_{o}" for o in objs}, f"discrete({n})")


def arrow() -> FinCategory:
    """The free-living arrow 0 -> 1."""
    morphs = [("1_0", "0", "0"), ("1_1", "1", "1"), ("a", "0", "1")]
    return _unit_closed(["0", "1"], morphs, {}, {"0": "1_0", "1": "1_1"}, "arrow")


def codiscrete(n: int) -> FinCategory:
    """n objects, exactly one morphism between any two (all isomorphic)."""
    objs = [f"c{i}" for i in range(n)]
    morphs = [(f"{a}{b}", a, b) for a in objs for b in objs]
    comp = {(f"{b}{c}", f"{a}{b}"): f"{a}{c}" for a in objs for b in objs for c in objs}
    return make_category(objs, morphs, comp, {o: f"{o}{o}" for o in objs}, f"codiscrete({n})")


def monoid_category(elements, mult, unit, name="") -> FinCategory:
    """One object ``*``; ``mult(g, f)`` is the composite ``g o f``."""
    morphs = [(e, "*", "*") for e in elements]
    comp = {(g, f): mult(g, f) for g in elements for f in elements}
    return make_category(["*"], morphs, comp, {"*": unit}, name)


def group_category(G: FinStructure, name="") -> FinCategory:
    els = [str(e) for e in G.carriers["s"]]
    back = {str(e): e for e in G.carriers["s"]}
    return monoid_category(els, lambda g, f: str(G.funcs["+"][(back[g], back[f])]), str(G.consts["0"]), name)


def poset_category(elements, leq, name="") -> FinCategory:
    objs = list(elements)
    morphs = [(f"{a}<={b}", a, b) for a in objs for b in objs if leq(a, b)]
    have = {(a, b) for _, a, b in morphs}
    comp = {(f"{b}<={c}", f"{a}<={b}"): f"{a}<={c}" for a, b in have for b2, c in have if b2 == b}
    return make_category(objs, morphs, comp, {o: f"{o}<={o}" for o in objs}, name)


def parallel_pair() -> FinCategory:
    morphs = [("1_0", "0", "0"), ("1_1", "1", "1"), ("u", "0", "1"), ("v", "0", "1")]
    return _unit_closed(["0", "1"], morphs, {}, {"0": "1_0", "1": "1_1"}, "parallel pair")


def cospan() -> FinCategory:
    return poset_category(["a", "b", "c"], lambda x, y: x == y or y == "c", "cospan")


def functions_category(sets: dict, name="") -> FinCategory:
    """Objects named finite sets; morphisms all functions, tagged by their value vectors."""
    objs = list(sets)
    morphs = []
    fn = {}
    for a in objs:
        for b in objs:
            for vals in itertools.product(range(len(sets[b])), repeat=len(sets[a])):
                m = f"{a}>{b}:" + "".join(map(str, vals))
                morphs.append((m, a, b))
                fn[m] = (a, b, vals)
    lookup = {v: k for k, v in fn.items()}
    comp = {}
    for g, (b, c, gv) in fn.items():
        for f, (a, b2, fv) in fn.items():
            if b2 == b:
                comp[(g, f)] = lookup[(a, c, tuple(gv[i] for i in fv))]
    ids = {a: lookup[(a, a, tuple(range(len(sets[a]))))] for a in objs}
    return make_category(objs, morphs, comp, ids, name)


def sets_upto(n: int, with_empty: bool = False) -> FinCategory:
    sets = {}
    if with_empty:
        sets["S0"] = ()
    for k in range(1, n + 1):
        sets[f"S{k}"] = tuple(range(k))
    return functions_category(sets, f"sets<={n}" + (" with empty" if with_empty else ""))


def labeled_two_sets() -> FinCategory:
    """All maps between two differently labelled 2-element sets."""
    return functions_category({"ab": ("a", "b"), "uv": ("u", "v")}, "labeled 2-sets")


def inflate(C: FinCategory, copies: int, name: str = "") -> FinCategory:
    """C x codiscrete(copies): every object replaced by ``copies`` isomorphic clones."""
    objs = [f"{o}#{k}" for o in C.objects for k in range(copies)]
    morphs = []
    for f in C.morphisms:
        for k in range(copies):
            for l in range(copies):
                morphs.append((f"{f}#{k}{l}", f"{C.dom[f]}#{k}", f"{C.cod[f]}#{l}"))
    comp = {}
    for (g, f), h in C.comp.items():
        for k in range(copies):
            for l in range(copies):
                for m in range(copies):
                    comp[(f"{g}#{l}{m}", f"{f}#{k}{l}")] = f"{h}#{k}{m}"
    ids = {f"{o}#{k}": f"{C.ids[o]}#{k}{k}" for o in C.objects for k in range(copies)}
    return make_category(objs, morphs, comp, ids, name or f"{C.name} x{copies}")


def model_category(structs, names=None, strong=False, name=""):
    from catmod.modcat import category_of_structures

    return category_of_structures(structs, names, strong, name)


@lru_cache(maxsize=None)
def abelian_le3() -> FinCategory:
    return model_category([zmod(1), zmod(2), zmod(3)], ["0", "Z2", "Z3"], name="Ab<=3").category


@lru_cache(maxsize=None)
def zero_z2_v4():
    """The full subcategory of abelian groups on {0, Z/2, V4}; returns the
    ModelCategory so the concrete groups stay attached."""
    return model_category([zmod(1), zmod(2), cyclic_product((2, 2))], ["0", "Z2", "V4"], name="{0,Z2,V4}")


def set_squared() -> FinCategory:
    """Mod of 'exactly two elements': one object with its 4 endomaps."""
    return functions_category({"2": (0, 1)}, "SET^2")


def unary_p_category(max_size: int = 2, strong: bool = False) -> FinCategory:
    return model_category(unary_p_structures(max_size), strong=strong, name=f"P-structures<={max_size}" + (" strong" if strong else "")).category


def _monoid_from_table(elements, table, unit, name):
    return monoid_category(elements, lambda g, f: table[(g, f)], unit, name)


def idempotent_monoid() -> FinCategory:
    table = {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"}
    return _monoid_from_table(["1", "e"], table, "1", "idempotent monoid")


def left_zero_monoid() -> FinCategory:
    els = ["1", "a", "b"]
    table = {(g, f): (f if g == "1" else g) for g in els for f in els}
    return _monoid_from_table(els, table, "1", "left-zero band + 1")


def truncated_naturals(cap: int = 2) -> FinCategory:
    els = [str(i) for i in range(cap + 1)]
    table = {(g, f): str(min(cap, int(g) + int(f))) for g in els for f in els}
    return _monoid_from_table(els, table, "0", f"N truncated at {cap}")


def chain(n: int) -> FinCategory:
    return poset_category([f"p{i}" for i in range(n)], lambda a, b: int(a[1:]) <= int(b[1:]), f"chain({n})")


def diamond() -> FinCategory:
    order = {("b", "x"), ("b", "y"), ("b", "t"), ("x", "t"), ("y", "t")}
    return poset_category(["b", "x", "y", "t"], lambda a, b: a == b or (a, b) in order, "diamond")


def vee() -> FinCategory:
    return poset_category(["r", "a", "b"], lambda x, y: x == y or x == "r", "vee")


def corpus() -> list[FinCategory]:
    """The fixture categories (all with at most 40 morphisms)."""
    cats = [
        terminal(),
        discrete(2),
        discrete(3),
        arrow(),
        codiscrete(2),
        codiscrete(3),
        group_category(zmod(2), "Z2"),
        group_category(zmod(3), "Z3"),
        group_category(zmod(4), "Z4"),
        group_category(cyclic_product((2, 2)), "V4"),
        idempotent_monoid(),
        left_zero_monoid(),
        truncated_naturals(2),
        chain(3),
        vee(),
        diamond(),
        cospan(),
        parallel_pair(),
        labeled_two_sets(),
        sets_upto(2),
        sets_upto(2, with_empty=True),
        abelian_le3(),
        zero_z2_v4().category,
        set_squared(),
        unary_p_category(2),
        unary_p_category(2, strong=True),
        opposite(arrow()),
        opposite(sets_upto(2, with_empty=True)),
        inflate(group_category(zmod(2), "Z2"), 2),
        inflate(arrow(), 2),
    ]
    return cats


def agreement_pairs() -> list[FinCategory]:
    """Small non-skeletal categories (at most 16 morphisms) for comparison
    with their skeletons."""
    return [
        codiscrete(2),
        codiscrete(3),
        labeled_two_sets(),
        inflate(terminal(), 2),
        inflate(group_category(zmod(2), "Z2"), 2),
        inflate(arrow(), 2),
        inflate(discrete(2), 2),
        inflate(idempotent_monoid(), 2),
        inflate(parallel_pair(), 2),
        inflate(vee(), 2),
        inflate(chain(2), 2),
        inflate(group_category(zmod(3), "Z3"), 2),
    ]
