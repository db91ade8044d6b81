import itertools

import pytest
from hypothesis import given, strategies as st

from catmod.errors import NotParallel, SignatureNotUnary
from catmod.fincat import validate_category
from catmod.fixtures import (
    EMPTY_SIG, UNARY_P_SIG, abelian_theory, bare_set, exactly_n_theory, unary_p, unary_p_structures, zmod,
)
from catmod.logic import one_sorted
from catmod.modcat import (
    ModelCategory, build_model_category, coequalizer, coproduct_unary, is_well_defined_quotient,
    naive_coequalizer_classes, theta_family, theta_locally_unique, theta_points, theta_separates,
    verify_coequalizer, verify_coproduct,
)
from catmod.structures import FinStructure, Homomorphism, Theory, enumerate_homomorphisms, hom_violations, identity_hom


def test_set2_bundle():
    mc = build_model_category(exactly_n_theory(2), 2)
    assert len(mc.category.objects) == 1 and len(mc.category.morphisms) == 4


def test_exactly_one_is_terminal():
    C = build_model_category(exactly_n_theory(1), 3).category
    assert len(C.objects) == 1 and len(C.morphisms) == 1


def test_abelian_le4():
    mc = build_model_category(abelian_theory(), 4)
    C = mc.category
    assert len(C.objects) == 5
    z2 = next(o for o, M in mc.models.items() if len(M.carriers["s"]) == 2)
    assert len(C.hom(z2, z2)) == 2
    assert validate_category(C.to_json()) == []


def test_bundle_round_trip(tmp_path):
    mc = build_model_category(abelian_theory(), 3)
    mc.save(tmp_path / "b")
    back = ModelCategory.load(str(tmp_path / "b"))
    assert back.category.to_json() == mc.category.to_json()
    for m, h in mc.homs.items():
        assert back.homs[m].maps == h.maps


def test_strong_build_is_strong_and_coincides_without_relations():
    mc = build_model_category(Theory.from_texts(UNARY_P_SIG, []), 2, strong=True)
    for m, h in mc.homs.items():
        assert not hom_violations(h.source, h.target, h.maps, strong=True)
    a = build_model_category(abelian_theory(), 3)
    b = build_model_category(abelian_theory(), 3, strong=True)
    assert len(a.category.morphisms) == len(b.category.morphisms)


# -- coequalizers ----------------------------------------------------------------

def _hom(A, B, fn):
    return Homomorphism(A, B, {"s": {a: fn(a) for a in A.carriers["s"]}})


def test_identity_pair_on_z4():
    Z4 = zmod(4)
    ident = identity_hom(Z4)
    Q, p = coequalizer(ident, ident)
    assert len(Q.carriers["s"]) == 4 and all(p.maps["s"][e] == e for e in Z4.carriers["s"])


def test_negation_on_z3_collapses():
    Z3 = zmod(3)
    Q, p = coequalizer(identity_hom(Z3), _hom(Z3, Z3, lambda a: (-a) % 3))
    assert len(Q.carriers["s"]) == 1
    models = build_model_category(abelian_theory(), 3).models.values()
    assert verify_coequalizer(identity_hom(Z3), _hom(Z3, Z3, lambda a: (-a) % 3), Q, p, list(models)) == []


def test_plain_transitive_closure_is_not_a_congruence():
    Z3 = zmod(3)
    blocks = naive_coequalizer_classes(identity_hom(Z3), _hom(Z3, Z3, lambda a: (-a) % 3))
    assert sorted(map(sorted, blocks["s"])) == [[0], [1, 2]]
    assert not is_well_defined_quotient(Z3, blocks)


def test_sets_two_points_identified():
    A, B = bare_set(1), bare_set(2)
    Q, p = coequalizer(_hom(A, B, lambda a: 0), _hom(A, B, lambda a: 1))
    assert len(Q.carriers["s"]) == 1


def test_not_parallel():
    with pytest.raises(NotParallel):
        coequalizer(identity_hom(zmod(2)), identity_hom(zmod(3)))


def test_projection_not_strong():
    A = unary_p(1, [])
    B = unary_p(2, [0])
    Q, p = coequalizer(_hom(A, B, lambda a: 0), _hom(A, B, lambda a: 1))
    assert hom_violations(B, Q, p.maps) == []
    assert hom_violations(B, Q, p.maps, strong=True) != []


@st.composite
def p_pairs(draw):
    Ms = unary_p_structures(3)
    A = draw(st.sampled_from(Ms))
    B = draw(st.sampled_from(Ms))
    hs = enumerate_homomorphisms(A, B)
    if not hs:
        return None
    return draw(st.sampled_from(hs)), draw(st.sampled_from(hs))


@given(p_pairs())
def test_coequalizer_universal_property_unary(pair):
    if pair is None:
        return
    f, g = pair
    Q, p = coequalizer(f, g)
    targets = [M for M in unary_p_structures(3) if len(M.carriers["s"]) <= len(f.target.carriers["s"])]
    assert verify_coequalizer(f, g, Q, p, targets) == []
    assert p.is_surjective()


# -- coproducts --------------------------------------------------------------------

def test_empty_coproduct():
    S, inj = coproduct_unary([], EMPTY_SIG)
    assert S.carriers["s"] == () and inj == []


def test_sets_2_and_3():
    Ms = [bare_set(2), bare_set(3)]
    S, inj = coproduct_unary(Ms)
    assert len(S.carriers["s"]) == 5
    targets = [bare_set(n) for n in range(1, 4)]
    assert verify_coproduct(Ms, S, inj, targets) == []


def test_loops():
    sig = one_sorted("s", functions={"f": 1})
    loop = FinStructure(sig, {"s": (0,)}, funcs={"f": {(0,): 0}})
    S, inj = coproduct_unary([loop, loop])
    assert len(S.carriers["s"]) == 2
    assert all(not hom_violations(h.source, h.target, h.maps) for h in inj)


def test_coproduct_unary_predicates():
    Ms = [unary_p(1, [0]), unary_p(2, [])]
    S, inj = coproduct_unary(Ms)
    assert verify_coproduct(Ms, S, inj, unary_p_structures(3)) == []


def test_non_unary_rejected():
    with pytest.raises(SignatureNotUnary):
        coproduct_unary([zmod(2)])


# -- Theta ------------------------------------------------------------------------

def test_theta_empty_signature():
    theta = theta_family(EMPTY_SIG)
    assert len(theta) == 1 and theta[0].carriers["s"] == ("x",)
    M = bare_set(3)
    assert sorted(e for _, e in theta_points(theta, M)) == [0, 1, 2]


def test_theta_unary_predicate():
    theta = theta_family(UNARY_P_SIG)
    assert sorted(len(J.rels["P"]) for J in theta) == [0, 1]
    M = unary_p(2, [1])
    pts = theta_points(theta, M)
    by_member = {}
    for k, e in pts:
        by_member.setdefault(len(theta[k].rels["P"]), []).append(e)
    assert by_member == {0: [0], 1: [1]}
    assert theta_locally_unique(theta, M)


def test_theta_separates_strong_maps():
    theta = theta_family(UNARY_P_SIG)
    mc = build_model_category(Theory.from_texts(UNARY_P_SIG, []), 2, strong=True)
    C = mc.category
    for a, b in itertools.product(C.objects, repeat=2):
        for f, g in itertools.combinations(C.hom(a, b), 2):
            assert theta_separates(theta, mc.homs[f], mc.homs[g])


@pytest.mark.parametrize("M", unary_p_structures(3), ids=lambda M: f"n{len(M.carriers['s'])}p{len(M.rels['P'])}")
def test_theta_bijection(M):
    theta = theta_family(UNARY_P_SIG)
    assert theta_locally_unique(theta, M)
