import itertools

import pytest
from hypothesis import given, strategies as st

from catmod.errors import BoundsExceeded, EqualityForbidden
from catmod.fincat import (
    FinCategory, category_to_structure, discrete_diagram, empty_diagram, has_limit, parallel_diagram, skeleton,
)
from catmod.fixtures import (
    agreement_pairs, arrow, chain, codiscrete, diamond, discrete, group_category, inflate, labeled_two_sets,
    terminal, vee, zmod,
)
from catmod.homotopic import (
    HomotopicModel, IsoGraph, agreement_test, build_isograph, compare_translation, count_isographs,
    enumerate_isographs, eval_homotopic, expand_definitions, extend_isograph, extends_to_isograph, qc, qc_table,
    qlim_holds, sentence_agreement, translate_lcat,
)
from catmod.logic import (
    L_CAT, L_HOMO, L_HOMO_ISO, Forall, count_sentences, enumerate_sentences, eval_formula,
    parse_formula, sentence_at, to_text,
)


# -- iso-graphs -----------------------------------------------------------------

def brute_isographs(C: FinCategory):
    """Every assignment of one iso per isomorphic ordered pair that passes
    the iso-graph invariants."""
    pairs = [(a, b) for a in C.objects for b in C.objects if C.isomorphic(a, b)]
    found = []
    for pick in itertools.product(*(C.isos(a, b) for a, b in pairs)):
        i = IsoGraph(C, dict(zip(pairs, pick)))
        if i.is_valid():
            found.append(i)
    return found


SMALL = [terminal(), arrow(), codiscrete(2), codiscrete(3), inflate(group_category(zmod(2), "Z2"), 2),
         labeled_two_sets(), inflate(arrow(), 2), group_category(zmod(3), "Z3")]


@pytest.mark.parametrize("C", SMALL, ids=lambda c: c.name)
def test_enumeration_matches_brute_force(C):
    fast = {i.key() for i in enumerate_isographs(C)}
    slow = {i.key() for i in brute_isographs(C)}
    assert fast == slow and len(fast) == count_isographs(C)


def test_built_isographs_valid(corpus):
    for C in corpus:
        assert build_isograph(C).is_valid(), C.name


def test_skeletal_isograph_is_discrete(corpus):
    for C in corpus:
        if C.is_skeletal:
            assert build_isograph(C).morphisms == frozenset(C.ids.values())


def test_two_isomorphic_objects_unique_isograph():
    C = codiscrete(2)
    gs = enumerate_isographs(C)
    assert len(gs) == 1
    assert len(gs[0].morphisms - set(C.ids.values())) == 2


def test_terminal_isograph():
    assert build_isograph(terminal()).morphisms == {"1"}


def test_enumeration_cap():
    C = inflate(group_category(zmod(3), "Z3"), 3)
    with pytest.raises(BoundsExceeded):
        enumerate_isographs(C, limit=count_isographs(C) - 1)


def test_extends_identities():
    C = inflate(arrow(), 2)
    assert extends_to_isograph(C, list(C.ids.values()))


def test_extends_rejects_automorphism():
    C = group_category(zmod(2), "Z2")
    assert not extends_to_isograph(C, ["1"])


def test_extends_one_iso():
    C = codiscrete(2)
    i = extend_isograph(C, ["c0c1"])
    assert i is not None and i.arrow("c0", "c1") == "c0c1"


def test_extends_cap():
    C = inflate(arrow(), 3)
    with pytest.raises(BoundsExceeded):
        extends_to_isograph(C, list(C.morphisms)[:9])


@pytest.mark.parametrize("C", [inflate(group_category(zmod(2), "Z2"), 2), inflate(group_category(zmod(3), "Z3"), 2),
                               inflate(arrow(), 2), labeled_two_sets(), codiscrete(3)], ids=lambda c: c.name)
def test_extends_matches_brute_force(C):
    every = brute_isographs(C)
    ms = list(C.morphisms)
    for r in range(0, 4):
        for d in itertools.combinations(ms, r):
            want = any(all(m in i.morphisms for m in d) for i in every)
            got = extend_isograph(C, d)
            assert (got is not None) == want, d
            if got is not None:
                assert got.is_valid() and all(m in got.morphisms for m in d)


# -- QC ------------------------------------------------------------------------

def test_qc_is_composition(corpus):
    for C in corpus:
        i = build_isograph(C)
        table = qc_table(C, i)
        for f, g in itertools.product(C.morphisms, repeat=2):
            if C.cod[f] != C.dom[g]:
                continue
            for h in C.hom(C.dom[f], C.cod[g]):
                assert ((f, g, h) in table) == (C.compose(g, f) == h)


def test_qc_table_matches_pointwise():
    for C in SMALL:
        i = build_isograph(C)
        table = qc_table(C, i)
        for t in itertools.product(C.morphisms, repeat=3):
            assert (t in table) == qc(C, i, *t)


def test_qc_example():
    C = chain(3)
    i = build_isograph(C)
    assert qc(C, i, "p0<=p1", "p1<=p2", "p0<=p2")


def test_terminal_qc():
    phi = parse_formula("forall x:m. QC(x,x,x)", L_HOMO, homotopic=True)
    assert eval_homotopic(terminal(), build_isograph(terminal()), phi)


def test_i_definition_picks_isograph(corpus):
    for C in corpus:
        i = build_isograph(C)
        assert HomotopicModel(C, i).i_morphisms == i.morphisms, C.name


def test_parallel_collapse(corpus):
    for C in corpus:
        m = HomotopicModel(C)
        iso = m.structure.rels["Iso"]
        for p, q in itertools.product(C.morphisms, repeat=2):
            if (C.dom[p], C.cod[p]) == (C.dom[q], C.cod[q]):
                assert ((p, q) in iso) == (p == q)


def test_iso_relation_means_conjugate():
    C = inflate(arrow(), 2)
    i = build_isograph(C)
    m = HomotopicModel(C, i)
    for p, q in itertools.product(C.morphisms, repeat=2):
        a, b = i.arrow(C.dom[p], C.dom[q]), i.arrow(C.cod[p], C.cod[q])
        conj = a is not None and b is not None and C.compose(b, p) == C.compose(q, a)
        assert ((p, q) in m.structure.rels["Iso"]) == conj


def test_equality_forbidden():
    C = terminal()
    phi = parse_formula("forall x:m. x = x", L_HOMO)
    with pytest.raises(EqualityForbidden):
        HomotopicModel(C).eval(phi)


NISO = count_sentences(L_HOMO_ISO, 2, 7, homotopic=True)


@given(st.sampled_from(SMALL + [vee(), diamond()]), st.integers(0, NISO - 1))
def test_abbreviations_match_their_definitions(C, k):
    phi = sentence_at(L_HOMO_ISO, k, 2, 7, homotopic=True)
    m = HomotopicModel(C)
    assert m.eval(phi) == m.eval(expand_definitions(phi))


def test_skeleton_functor_transfers_qc(corpus):
    for C in corpus:
        S, G = skeleton(C)
        i, j = build_isograph(C), build_isograph(S)
        tc, ts = qc_table(C, i), qc_table(S, j)
        mm = G.mor_map
        for t in itertools.product(C.morphisms, repeat=3):
            assert (t in tc) == ((mm[t[0]], mm[t[1]], mm[t[2]]) in ts), (C.name, t)


DEPTH2 = list(enumerate_sentences(L_HOMO, 2, 9, homotopic=True))


def test_isograph_independence(corpus):
    checked = 0
    for C in corpus:
        n = count_isographs(C)
        if n < 2 or n > 100:
            continue
        models = [HomotopicModel(C, i) for i in enumerate_isographs(C)]
        for phi in DEPTH2:
            vals = {m.eval(phi) for m in models}
            assert len(vals) == 1, (C.name, to_text(phi))
        checked += 1
    assert checked >= 1


# -- qlim -------------------------------------------------------------------------

def test_meet_semilattice_product():
    C = diamond()
    i = build_isograph(C)
    D = discrete_diagram(C, ["x", "y"])
    assert qlim_holds(C, i, D) and has_limit(C, D)


def test_discrete_no_product():
    C = discrete(2)
    assert not qlim_holds(C, build_isograph(C), discrete_diagram(C, ["d0", "d1"]))


def test_empty_diagram_terminal():
    C = chain(3)
    assert qlim_holds(C, build_isograph(C), empty_diagram(C))
    assert not qlim_holds(vee(), build_isograph(vee()), empty_diagram(vee()))


@pytest.mark.parametrize("C", SMALL + [vee(), diamond(), chain(3)], ids=lambda c: c.name)
def test_qlim_matches_limits(C):
    i = build_isograph(C)
    diagrams = [empty_diagram(C)]
    diagrams += [discrete_diagram(C, [a, b]) for a, b in itertools.product(C.objects, repeat=2)]
    diagrams += [parallel_diagram(C, f, g) for f, g in itertools.product(C.morphisms, repeat=2)
                 if (C.dom[f], C.cod[f]) == (C.dom[g], C.cod[g])]
    for D in diagrams:
        for colim in (False, True):
            assert qlim_holds(C, i, D, colimit=colim) == has_limit(C, D, colimit=colim)


# -- translation ------------------------------------------------------------------

def test_translate_identity_law():
    phi = parse_formula("forall X:o. Id(X) o Id(X) = Id(X)", L_CAT)
    psi = translate_lcat(phi)
    assert isinstance(psi, Forall) and psi.sort == "m"
    assert to_text(psi).startswith("forall X:m. I(X) ->")


def test_translate_exists_object():
    psi = translate_lcat(parse_formula("exists X:o. true", L_CAT))
    assert to_text(psi) == "exists X:m. I(X)"


def test_associativity_translated_holds():
    ax = parse_formula(
        "forall f:m. forall g:m. forall h:m. dom(g) = rng(f) & dom(h) = rng(g) -> h o (g o f) = (h o g) o f", L_CAT
    )
    for C in [arrow(), chain(3), vee(), group_category(zmod(3)), diamond()]:
        assert compare_translation(C, ax) == (True, True)


def test_translation_needs_skeletal():
    with pytest.raises(ValueError):
        compare_translation(codiscrete(2), parse_formula("exists X:o. true", L_CAT))


LCAT2 = list(enumerate_sentences(L_CAT, 2, 6))


def test_translation_agrees_on_skeletal(corpus):
    for C in corpus:
        if not C.is_skeletal:
            continue
        m = HomotopicModel(C)
        for phi in LCAT2:
            a, b = compare_translation(C, phi, m)
            assert a == b, (C.name, to_text(phi))


# -- agreement ----------------------------------------------------------------------

def test_identical_inputs_agree():
    C = vee()
    assert agreement_test(C, C, depth=2, max_size=7).agree


def test_skeleton_pair_agrees():
    C = inflate(arrow(), 2)
    r = agreement_test(C, skeleton(C)[0], depth=2, max_size=9)
    assert r.mode == "exhaustive" and r.checked == 670 and r.agree


def test_sampling_is_reproducible():
    C = codiscrete(2)
    a = agreement_test(C, terminal(), depth=3, budget=50, seed=4, max_size=10)
    b = agreement_test(C, terminal(), depth=3, budget=50, seed=4, max_size=10)
    assert a.mode == "sampled" and a.to_json() == b.to_json()


def test_certificate_for_inequivalent_pair():
    r = agreement_test(terminal(), discrete(2), depth=2, max_size=7)
    assert not r.agree
    cert = r.disagreements[0]
    assert set(cert) == {"sentence", "valueC", "valueD", "isographs"}
    phi = parse_formula(cert["sentence"], L_HOMO, homotopic=True)
    assert eval_homotopic(terminal(), build_isograph(terminal()), phi) == cert["valueC"]


def test_equality_sentence_separates_skeleton():
    """With equality the pair is told apart, which is why homotopic formulas ban it."""
    sigma = parse_formula(
        "forall X:o. forall Y:o. (exists f:m. exists g:m. dom(f) = X & rng(f) = Y & g o f = Id(X) & f o g = Id(Y))"
        " -> X = Y",
        L_CAT,
    )
    for C in agreement_pairs():
        S = skeleton(C)[0]
        assert not eval_formula(category_to_structure(C), sigma)
        assert eval_formula(category_to_structure(S), sigma)
        # and the homotopic reading of the same sentence does not separate them
        assert not sentence_agreement(C, S, [translate_lcat(sigma)])
