import itertools

import pytest
from hypothesis import given, strategies as st

from catmod.errors import BoundsExceeded, NotAReductHom, SignatureMismatch, TermAlgebraInfinite
from catmod.fixtures import EMPTY_SIG, UNARY_P_SIG, abelian_theory, bare_set, cyclic_product, exactly_n_theory, unary_p, zmod
from catmod.logic import GROUP_SIG, enumerate_sentences, eval_formula, one_sorted
from catmod.structures import (
    FinStructure, Theory, are_isomorphic, enumerate_homomorphisms, evaluation_hom, expansions, is_homomorphism,
    pullback_structure, term_algebra, validate_structure,
)
from catmod.structures.ef import ef_equivalent
from catmod.structures.models import enumerate_models

UNARY_F = one_sorted("s", functions={"f": 1}, relations={"P": 1})


def brute_homs(A, B, strong=False):
    """All carrier functions that pass the homomorphism check."""
    sorts = A.sig.sorts
    spaces = [list(itertools.product(B.carriers[s], repeat=len(A.carriers[s]))) for s in sorts]
    out = []
    for pick in itertools.product(*spaces):
        maps = {s: dict(zip(A.carriers[s], img)) for s, img in zip(sorts, pick)}
        if is_homomorphism(A, B, maps, strong):
            out.append(maps)
    return out


def _key(maps):
    return tuple(sorted((s, tuple(sorted(m.items(), key=repr))) for s, m in maps.items()))


# -- validation ----------------------------------------------------------------

def test_valid_group():
    assert validate_structure(zmod(2)) == []


def test_value_outside_carrier():
    G = zmod(2)
    funcs = {k: dict(v) for k, v in G.funcs.items()}
    funcs["+"][(1, 1)] = 7
    bad = FinStructure(GROUP_SIG, G.carriers, G.consts, funcs)
    assert len(validate_structure(bad)) == 1


def test_total_function_missing_entry():
    G = zmod(2)
    funcs = {k: dict(v) for k, v in G.funcs.items()}
    del funcs["-"][(1,)]
    bad = FinStructure(GROUP_SIG, G.carriers, G.consts, funcs)
    assert len(validate_structure(bad)) == 1


# -- homomorphisms ---------------------------------------------------------------

def test_set_endomaps():
    assert len(enumerate_homomorphisms(bare_set(2), bare_set(2))) == 4


def test_z2_to_z3_only_zero():
    hs = enumerate_homomorphisms(zmod(2), zmod(3))
    assert len(hs) == 1 and set(hs[0].maps["s"].values()) == {0}


def test_z2_endomorphisms():
    assert len(enumerate_homomorphisms(zmod(2), zmod(2))) == 2


def test_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        enumerate_homomorphisms(zmod(2), bare_set(2))


@st.composite
def unary_structures(draw, max_size=3):
    n = draw(st.integers(1, max_size))
    xs = tuple(range(n))
    f = {(a,): draw(st.sampled_from(xs)) for a in xs}
    P = draw(st.sets(st.sampled_from(xs)))
    return FinStructure(UNARY_F, {"s": xs}, funcs={"f": f}, rels={"P": {(a,) for a in P}})


@given(unary_structures(), unary_structures(), st.booleans())
def test_backtracking_matches_brute_force(A, B, strong):
    fast = {_key(h.maps) for h in enumerate_homomorphisms(A, B, strong)}
    slow = {_key(m) for m in brute_homs(A, B, strong)}
    assert fast == slow


@given(unary_structures(), unary_structures())
def test_strong_subset_of_all(A, B):
    strong = {_key(h.maps) for h in enumerate_homomorphisms(A, B, True)}
    weak = {_key(h.maps) for h in enumerate_homomorphisms(A, B)}
    assert strong <= weak


def test_strong_equals_weak_without_relations():
    for A, B in itertools.product([zmod(2), zmod(4), cyclic_product((2, 2))], repeat=2):
        assert len(enumerate_homomorphisms(A, B, True)) == len(enumerate_homomorphisms(A, B))


def test_group_homs_match_brute_force():
    for A, B in [(zmod(2), zmod(4)), (zmod(4), cyclic_product((2, 2))), (zmod(3), zmod(3))]:
        assert len(enumerate_homomorphisms(A, B)) == len(brute_homs(A, B))


# -- isomorphism --------------------------------------------------------------------

def test_z4_not_v4():
    assert are_isomorphic(zmod(4), cyclic_product((2, 2))) is None


def test_self_iso():
    h = are_isomorphic(zmod(3), zmod(3))
    assert h is not None and h.is_injective() and h.is_surjective()


def test_cardinality():
    assert are_isomorphic(bare_set(2), bare_set(3)) is None


# -- EF games ------------------------------------------------------------------------

def test_ef_large_sets():
    assert ef_equivalent(bare_set(5), bare_set(7), 3)


def test_ef_small_sets():
    assert not ef_equivalent(bare_set(2), bare_set(3), 3)


def test_ef_reflexive():
    for k in range(4):
        assert ef_equivalent(zmod(3), zmod(3), k)


def test_ef_round_cap():
    with pytest.raises(BoundsExceeded):
        ef_equivalent(bare_set(1), bare_set(1), 6)


P_SIG = one_sorted("s", relations={"P": 1, "E": 2})


@st.composite
def small_graphs(draw):
    n = draw(st.integers(1, 3))
    xs = tuple(range(n))
    P = draw(st.sets(st.sampled_from(xs)))
    E = draw(st.sets(st.tuples(st.sampled_from(xs), st.sampled_from(xs)), max_size=3))
    return FinStructure(P_SIG, {"s": xs}, rels={"P": {(a,) for a in P}, "E": set(E)})


SENTENCES_D1 = list(enumerate_sentences(P_SIG, 1, 6))


@given(small_graphs(), small_graphs())
def test_ef_one_round_matches_sentences(A, B):
    agree = all(eval_formula(A, s) == eval_formula(B, s) for s in SENTENCES_D1)
    assert ef_equivalent(A, B, 1) == agree


# -- term algebra and pullbacks -----------------------------------------------------------

def test_term_algebra_empty_signature():
    assert term_algebra(EMPTY_SIG).carriers["s"] == ("x",)


def test_term_algebra_constants():
    sig = one_sorted("s", constants=("c1", "c2"))
    assert set(term_algebra(sig).carriers["s"]) == {"x", "c1", "c2"}


def test_term_algebra_group_infinite():
    with pytest.raises(TermAlgebraInfinite):
        term_algebra(GROUP_SIG)


def test_term_algebra_relations_empty():
    T = term_algebra(UNARY_P_SIG)
    assert T.rels["P"] == frozenset() or not T.rels["P"]


@pytest.mark.parametrize("M", [bare_set(1), bare_set(3), unary_p(2, [1]), unary_p(3, [0, 2])])
def test_term_algebra_represents_underlying_set(M):
    T = term_algebra(M.sig.functional_reduct())
    Tm = T if not M.sig.relations else T.expand(M.sig, {r: set() for r in M.sig.relations})
    hs = enumerate_homomorphisms(Tm, M)
    assert len(hs) == len(M.carriers["s"])
    assert sorted(h.maps["s"]["x"] for h in hs) == sorted(M.carriers["s"])


def test_evaluation_hom_naturality():
    A, B = unary_p(2, [1]), unary_p(3, [0, 1])
    T = term_algebra(A.sig.functional_reduct()).expand(A.sig, {"P": set()})
    for g in enumerate_homomorphisms(A, B):
        for a in A.carriers["s"]:
            left = g.compose(evaluation_hom(T, A, a))
            right = evaluation_hom(T, B, g.maps["s"][a])
            assert left.maps == right.maps


def test_pullback_preimage():
    M = unary_p(2, [1])
    N = FinStructure(EMPTY_SIG, {"s": ("a", "b")})
    f = {"s": {"a": 1, "b": 0}}
    P = pullback_structure(f, M, N)
    assert P.rels["P"] == {("a",)}
    assert is_homomorphism(P, M, f, strong=True)


def test_pullback_identity():
    M = unary_p(3, [0, 2])
    N = M.reduct(M.sig.functional_reduct())
    P = pullback_structure({"s": {e: e for e in M.carriers["s"]}}, M, N)
    assert P.rels == M.rels


def test_pullback_is_unique_strong_expansion():
    M = unary_p(2, [1])
    N = FinStructure(EMPTY_SIG, {"s": ("a", "b")})
    f = {"s": {"a": 1, "b": 0}}
    P = pullback_structure(f, M, N)
    strong = [E for E in expansions(N, M.sig) if is_homomorphism(E, M, f, strong=True)]
    assert len(list(expansions(N, M.sig))) == 4
    assert [E.rels for E in strong] == [P.rels]


def test_pullback_needs_reduct_hom():
    M = FinStructure(UNARY_F, {"s": (0, 1)}, funcs={"f": {(0,): 1, (1,): 0}}, rels={"P": set()})
    N = FinStructure(M.sig.functional_reduct(), {"s": ("a",)}, funcs={"f": {("a",): "a"}})
    with pytest.raises(NotAReductHom):
        pullback_structure({"s": {"a": 0}}, M, N)


# -- model enumeration ---------------------------------------------------------------

def test_abelian_models_to_four():
    ms = enumerate_models(abelian_theory(), 4)
    assert sorted(len(M.carriers["s"]) for M in ms) == [1, 2, 3, 4, 4]


def test_exactly_two():
    assert len(enumerate_models(exactly_n_theory(2), 4)) == 1


def test_inconsistent():
    T = Theory.from_texts(EMPTY_SIG, ["exists x:s. ~(x = x)"])
    assert enumerate_models(T, 3) == []


def test_models_satisfy_theory_and_are_pairwise_non_isomorphic():
    T = Theory.from_texts(UNARY_F, ["forall x:s. f(f(x)) = x"])
    ms = enumerate_models(T, 3)
    for M in ms:
        assert all(eval_formula(M, s) for s in T.sentences)
        assert M.carriers["s"] == tuple(range(len(M.carriers["s"])))
    for A, B in itertools.combinations(ms, 2):
        assert are_isomorphic(A, B) is None


def test_models_cover_every_iso_type():
    # brute oracle: all involutions with a predicate on {0,1,2}
    T = Theory.from_texts(UNARY_F, ["forall x:s. f(f(x)) = x"])
    ms = enumerate_models(T, 3)
    found = []
    for n in range(1, 4):
        xs = tuple(range(n))
        for img in itertools.product(xs, repeat=n):
            if any(img[img[a]] != a for a in xs):
                continue
            for bits in itertools.product((0, 1), repeat=n):
                S = FinStructure(UNARY_F, {"s": xs}, funcs={"f": {(a,): img[a] for a in xs}},
                                 rels={"P": {(a,) for a in xs if bits[a]}})
                if all(are_isomorphic(S, F) is None for F in found):
                    found.append(S)
    assert len(found) == len(ms)


def test_model_size_cap():
    with pytest.raises(BoundsExceeded):
        enumerate_models(exactly_n_theory(2), 7)
