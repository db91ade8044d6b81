import copy
import itertools

import pytest

from catmod.config import Caps
from catmod.errors import AxiomViolation
from catmod.fincat import (
    FinCategory, are_equivalent, category_from_structure, category_to_structure, discrete_diagram,
    empty_diagram, enumerate_functors, find_generators, generating_families, has_limit, limit_of,
    parallel_diagram, primary_axiom, skeleton, validate_category,
)
from catmod.fincat.generators import HomFunctor
from catmod.fixtures import (
    abelian_groups, arrow, codiscrete, cyclic_product, discrete, group_category, idempotent_monoid, inflate,
    labeled_two_sets, model_category, sets_upto, terminal, truncated_naturals, zmod,
)
from catmod.structures import FinStructure, are_isomorphic, enumerate_homomorphisms


# -- validator ------------------------------------------------------------------

def test_corpus_is_valid(corpus):
    assert len(corpus) >= 25
    for C in corpus:
        assert validate_category(C.to_json()) == [], C.name


def test_arrow_and_group_valid():
    assert validate_category(arrow().to_json()) == []
    assert validate_category(group_category(zmod(2)).to_json()) == []


def _mutants(C: FinCategory):
    """(axiom, raw) pairs, one per mutation class that applies to C."""
    raw = C.to_json()
    out = []
    # axiom 1: retarget a composite so its domain is wrong
    for i, (g, f, h) in enumerate(raw["comp"]):
        wrong = [m["id"] for m in raw["morphisms"] if m["dom"] != C.dom[f]]
        if wrong:
            r = copy.deepcopy(raw)
            r["comp"][i] = [g, f, wrong[0]]
            out.append((1, r))
            break
    # axiom 3: a non-unit identity
    for o in C.objects:
        others = [m for m in C.hom(o, o) if m != C.ids[o]]
        if others:
            r = copy.deepcopy(raw)
            r["ids"][str(o)] = others[0]
            out.append((3, r))
            break
    # axiom 2: swap the value of one non-identity composite within its hom-set
    idset = set(C.ids.values())
    for i, (g, f, h) in enumerate(raw["comp"]):
        if g in idset or f in idset:
            continue
        alt = [m for m in C.hom(C.dom[h], C.cod[h]) if m != h]
        if alt:
            r = copy.deepcopy(raw)
            r["comp"][i] = [g, f, alt[0]]
            if validate_category(r) and primary_axiom(validate_category(r)) == 2:
                out.append((2, r))
                break
    return out


def test_mutations_cite_correct_axiom(corpus):
    seen = set()
    for C in corpus:
        for axiom, raw in _mutants(C):
            report = validate_category(raw)
            assert report, (C.name, axiom)
            assert primary_axiom(report) == axiom, (C.name, axiom, report[0].message)
            seen.add(axiom)
    assert seen == {1, 2, 3}


def test_missing_composite_is_axiom1():
    raw = arrow().to_json()
    raw["comp"] = raw["comp"][1:]
    assert primary_axiom(validate_category(raw)) == 1


def test_broken_associativity_in_monoid():
    # a magma that is not associative: table a*b = b, except a*a = 1
    els = ["1", "a", "b"]
    table = {(g, f): (f if g == "1" else g if f == "1" else f) for g in els for f in els}
    table[("a", "a")] = "1"
    raw = {
        "objects": ["*"],
        "morphisms": [{"id": e, "dom": "*", "cod": "*"} for e in els],
        "comp": [[g, f, h] for (g, f), h in table.items()],
        "ids": {"*": "1"},
    }
    report = validate_category(raw)
    assert report and primary_axiom(report) == 2


def test_malformed_data():
    report = validate_category({"objects": ["a"]})
    assert report and report[0].axiom is None


# -- structure round trip -----------------------------------------------------------

def test_terminal_structure():
    C = category_from_structure(category_to_structure(terminal()))
    assert len(C.objects) == 1 and len(C.morphisms) == 1


def test_invalid_structure_rejected():
    S = category_to_structure(arrow())
    funcs = {k: dict(v) for k, v in S.funcs.items()}
    ms = list(S.carriers["m"])
    key = next(k for k in funcs["o"])
    funcs["o"][key] = next(m for m in ms if m != funcs["o"][key])
    bad = FinStructure(S.sig, S.carriers, S.consts, funcs, S.rels)
    with pytest.raises(AxiomViolation):
        category_from_structure(bad)


@pytest.mark.parametrize("C", [arrow(), group_category(zmod(3)), sets_upto(2)], ids=lambda c: c.name)
def test_round_trip_isomorphic(C):
    S = category_to_structure(C)
    assert are_isomorphic(S, category_to_structure(category_from_structure(S))) is not None


def test_monoid_functors_are_endomorphisms():
    M = truncated_naturals(2)
    S = category_to_structure(M)
    assert len(enumerate_functors(M, M)) == len(enumerate_homomorphisms(S, S))


# -- limits ---------------------------------------------------------------------

def test_product_z2_z3_is_z6():
    gs = abelian_groups(6)
    mc = model_category([g for _, g in gs], [l for l, _ in gs])
    C = mc.category
    cone = limit_of(C, discrete_diagram(C, ["Z2", "Z3"]), caps=Caps(max_morphisms=len(C.morphisms)))
    assert cone is not None
    assert are_isomorphic(mc.models[cone.apex], zmod(6)) is not None


def test_terminal_category_limits():
    C = terminal()
    for D in (empty_diagram(C), discrete_diagram(C, ["*", "*"]), parallel_diagram(C, "1", "1")):
        assert limit_of(C, D).apex == "*"
        assert limit_of(C, D, colimit=True).apex == "*"


def test_discrete_has_no_product():
    C = discrete(2)
    assert limit_of(C, discrete_diagram(C, ["d0", "d1"])) is None


def test_limits_unique_up_to_iso(corpus):
    for C in corpus[:20]:
        D = empty_diagram(C)
        for colim in (False, True):
            cone = limit_of(C, D, colimit=colim)
            if cone is None:
                continue
            from catmod.fincat import all_cones, is_limit_cone
            from catmod.fincat.core import opposite_diagram

            DD = opposite_diagram(D) if colim else D
            CC = DD.category
            every = all_cones(CC, DD)
            for other in every:
                if is_limit_cone(CC, other, every):
                    assert CC.isomorphic(other.apex, cone.apex)


def _small_diagrams(C):
    yield empty_diagram(C)
    for a, b in itertools.product(C.objects, repeat=2):
        yield discrete_diagram(C, [a, b])
    for f, g in itertools.product(C.morphisms, repeat=2):
        if (C.dom[f], C.cod[f]) == (C.dom[g], C.cod[g]):
            yield parallel_diagram(C, f, g)


@pytest.mark.parametrize("C", [codiscrete(2), inflate(arrow(), 2), labeled_two_sets(), inflate(idempotent_monoid(), 2)],
                         ids=lambda c: c.name)
def test_equivalent_categories_share_limits(C):
    S, G = skeleton(C)
    for D in _small_diagrams(C):
        SD = type(D)(D.shape, D.J.then(G))
        for colim in (False, True):
            assert has_limit(C, D, colim) == has_limit(S, SD, colim)


# -- skeleton and equivalence ----------------------------------------------------------

def test_skeleton_of_skeletal_is_identity():
    S, G = skeleton(arrow())
    assert len(S.objects) == 2 and all(G.obj_map[o] == o for o in arrow().objects)


def test_skeleton_two_isomorphic_objects():
    S, G = skeleton(codiscrete(2))
    assert len(S.objects) == 1 and len(S.morphisms) == 1


def test_skeleton_labelled_sets():
    S, _ = skeleton(labeled_two_sets())
    assert len(S.objects) == 1 and len(S.morphisms) == 4


def test_skeleton_functor_flags(corpus):
    for C in corpus:
        S, G = skeleton(C)
        assert S.is_skeletal
        f = G.flags()
        assert f["full"] and f["faithful"] and G.is_surjective_on_objects(), C.name
        S2, _ = skeleton(S)
        a, b = S2.to_json(), S.to_json()
        a.pop("name", None), b.pop("name", None)
        assert a == b


def test_equivalence_examples():
    C = inflate(arrow(), 2)
    assert are_equivalent(C, skeleton(C)[0]) is not None
    assert are_equivalent(terminal(), discrete(2)) is None
    assert are_equivalent(group_category(zmod(4)), group_category(cyclic_product((2, 2)))) is None


def test_equivalence_reflexive_symmetric(corpus):
    small = [C for C in corpus if len(C.morphisms) <= 16]
    for C in small:
        assert are_equivalent(C, C) is not None
    for C, D in itertools.combinations(small, 2):
        assert (are_equivalent(C, D) is None) == (are_equivalent(D, C) is None)


# -- generators -------------------------------------------------------------------

def test_singleton_generates_sets():
    assert "S1" in find_generators(sets_upto(3))


def test_group_object_generates():
    assert find_generators(group_category(zmod(3))) == ["*"]


def test_discrete_generators_are_vacuous():
    # no distinct parallel pairs, so the separation condition is empty
    C = discrete(2)
    assert find_generators(C) == ["d0", "d1"]
    from catmod.fincat import is_generating_family, is_locally_unique

    assert is_generating_family(C, ["d0", "d1"]) and is_locally_unique(C, ["d0", "d1"])
    assert [f["family"] for f in generating_families(C, 2)] == [["d0"], ["d1"]]


def test_generators_brute_force(corpus):
    for C in corpus:
        brute = []
        for I in C.objects:
            ok = True
            for f, g in itertools.product(C.morphisms, repeat=2):
                if f == g or (C.dom[f], C.cod[f]) != (C.dom[g], C.cod[g]):
                    continue
                if all(C.compose(f, a) == C.compose(g, a) for a in C.hom(I, C.dom[f])):
                    ok = False
                    break
            if ok:
                brute.append(I)
        assert find_generators(C) == brute, C.name


def test_hom_functor_embedding(corpus):
    for C in corpus:
        for I in find_generators(C):
            H = HomFunctor(C, I)
            assert H.is_faithful()
