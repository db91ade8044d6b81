import itertools

import pytest
from hypothesis import given, strategies as st

from catmod.errors import BoundsExceeded, ImproperFilter
from catmod.fixtures import abelian_groups, abelian_theory, cyclic_product, exactly_n_theory, unary_p, zmod
from catmod.logic import GROUP_SIG, count_sentences, parse_formula, sentence_at
from catmod.modcat import build_model_category
from catmod.structures import are_isomorphic, enumerate_homomorphisms
from catmod.structures.ef import ef_equivalent
from catmod.ultra import (
    FilterOnX, canonical_iso, diagonal_embedding, enumerate_ultrafilters, filter_violations, generated_filter,
    hom_set_ultraproduct_check, is_isomorphism, is_ultrafilter_family, los_verify, principal, reduced_product,
    reduced_product_by_agreement, reduced_product_hom, trivial_filter, ultrapower, ultrapower_embedding,
)

GROUPS = [G for _, G in abelian_groups(4)]


def _subsets(X):
    return [frozenset(c) for r in range(len(X) + 1) for c in itertools.combinations(X, r)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ultrafilters_brute_force(n):
    X = tuple(range(n))
    subs = _subsets(X)
    brute = set()
    for bits in itertools.product((0, 1), repeat=len(subs)):
        fam = frozenset(s for s, b in zip(subs, bits) if b)
        if is_ultrafilter_family(X, fam):
            brute.add(fam)
    got = {U.members for U in enumerate_ultrafilters(X)}
    assert got == brute and len(got) == n


def test_principal_contains_singleton():
    for U in enumerate_ultrafilters((0, 1)):
        assert any(len(m) == 1 for m in U.members)
        assert U.ultra


def test_improper_filter_rejected():
    with pytest.raises(ImproperFilter):
        FilterOnX((0, 1), frozenset({frozenset(), frozenset({0}), frozenset({0, 1})}))
    assert filter_violations((0, 1), [{0}]) != []


def test_index_cap():
    with pytest.raises(BoundsExceeded):
        enumerate_ultrafilters(range(7))


@st.composite
def families(draw, max_index=3):
    n = draw(st.integers(1, max_index))
    Ms = [draw(st.sampled_from(GROUPS[:4])) for _ in range(n)]
    K = draw(st.sets(st.integers(0, n - 1), min_size=1))
    return Ms, generated_filter(tuple(range(n)), K)


@given(families())
def test_reduced_product_matches_definition(data):
    Ms, F = data
    fast = reduced_product(Ms, F).structure
    slow = reduced_product_by_agreement(Ms, F)
    assert are_isomorphic(fast, slow) is not None


def test_trivial_filter_is_direct_product():
    Ms = [zmod(2), zmod(3)]
    P = reduced_product(Ms, trivial_filter((0, 1))).structure
    assert len(P.carriers["s"]) == 6
    assert are_isomorphic(P, zmod(6)) is not None


def test_single_factor():
    P = reduced_product([zmod(3)], principal((0,), 0)).structure
    assert are_isomorphic(P, zmod(3)) is not None


@pytest.mark.parametrize("x0", [0, 1, 2])
def test_principal_collapse(x0):
    Ms = [zmod(2), cyclic_product((2, 2)), zmod(3)]
    rp = reduced_product(Ms, principal((0, 1, 2), x0))
    h = canonical_iso(rp)
    assert h.target is Ms[x0] and is_isomorphism(h)


def test_los_factor_truth():
    phi = parse_formula("forall x:s. x + x = 0", GROUP_SIG)
    res = los_verify([zmod(2), zmod(3)], principal((0, 1), 0), phi)
    assert res["ultraproduct"] and res["ok"]


def test_los_tautology():
    phi = parse_formula("forall x:s. x = x", GROUP_SIG)
    assert los_verify([zmod(2), zmod(3)], principal((0, 1), 1), phi)["ultraproduct"]


def test_los_needs_ultra():
    with pytest.raises(ImproperFilter):
        los_verify([zmod(2), zmod(3)], trivial_filter((0, 1)), parse_formula("forall x:s. x = x", GROUP_SIG))


N3 = count_sentences(GROUP_SIG, 3, 9)


@given(families(), st.integers(0, N3 - 1))
def test_los_random(data, k):
    Ms, F = data
    U = principal(F.X, sorted(F.kernel)[0])
    assert los_verify(Ms, U, sentence_at(GROUP_SIG, k, 3, 9))["ok"]


def test_diagonal_single_index_is_identity():
    M = zmod(3)
    U = principal((0,), 0)
    h = diagonal_embedding(M, U)
    assert [h.maps["s"][e] for e in M.carriers["s"]] == [(e,) for e in M.carriers["s"]]


@pytest.mark.parametrize("x0", [0, 1])
def test_diagonal_then_canonical_is_identity(x0):
    M = cyclic_product((2, 2))
    U = principal((0, 1), x0)
    rp = ultrapower(M, U)
    back = canonical_iso(rp).compose(diagonal_embedding(M, U, rp))
    assert all(back.maps["s"][e] == e for e in M.carriers["s"])


def test_diagonal_z2_image():
    M = zmod(2)
    U = principal((0, 1, 2), 1)
    rp = ultrapower(M, U)
    h = diagonal_embedding(M, U, rp)
    assert set(h.maps["s"].values()) == {rp.class_of("s", (0, 0, 0)), rp.class_of("s", (1, 1, 1))}


@pytest.mark.parametrize("M", [zmod(2), zmod(3), unary_p(2, [0])], ids=["Z2", "Z3", "P"])
def test_diagonal_elementary_surrogate(M):
    U = principal((0, 1), 1)
    h = diagonal_embedding(M, U)
    assert h.is_injective()
    for k in range(4):
        assert ef_equivalent(M, h.target, k)


def test_functoriality():
    U = principal((0, 1), 1)
    A, B, C = zmod(2), cyclic_product((2, 2)), zmod(4)
    ra, rb, rc = ultrapower(A, U), ultrapower(B, U), ultrapower(C, U)
    for f in enumerate_homomorphisms(A, B):
        for g in enumerate_homomorphisms(B, C):
            gf = reduced_product_hom([g.compose(f)] * 2, ra, rc)
            stepwise = reduced_product_hom([g] * 2, rb, rc).compose(reduced_product_hom([f] * 2, ra, rb))
            assert gf.maps == stepwise.maps


def test_hom_set_ultraproduct():
    mc = build_model_category(abelian_theory(), 3)
    C = mc.category
    for U in enumerate_ultrafilters((0, 1)):
        for I in C.objects:
            assert hom_set_ultraproduct_check(C, I, U) == []


@pytest.mark.parametrize("theory,size", [(exactly_n_theory(2), 2), (abelian_theory(), 3), (exactly_n_theory(1), 1)],
                         ids=["SET2", "Ab<=3", "terminal"])
def test_embedding(theory, size):
    mc = build_model_category(theory, size)
    for U in enumerate_ultrafilters((0, 1)):
        E = ultrapower_embedding(mc, U)
        assert E.is_injective_on_objects() and E.is_faithful() and E.is_functor() and E.triangle_commutes()
        assert E.functor_data() == {"objects": len(mc.category.objects), "morphisms": len(mc.category.morphisms)}


def test_embedding_principal_lands_on_bundle():
    mc = build_model_category(abelian_theory(), 3)
    U = principal((0, 1), 0)
    E = ultrapower_embedding(mc, U)
    for B, S in E.i_objects.items():
        assert are_isomorphic(S, mc.models[B[0]]) is not None
