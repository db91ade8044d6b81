"""Finite structures, homomorphisms, EF games, term algebras and model enumeration."""
from catmod.structures.core import (
    FinStructure, Homomorphism, Theory, check_same_signature, freeze, hom_violations, identity_hom,
    is_homomorphism, thaw, validate_structure,
)
from catmod.structures.homs import (
    are_isomorphic, automorphisms, count_homomorphisms, enumerate_homomorphisms, inverse,
    iter_homomorphisms, iter_isomorphisms,
)
from catmod.structures.ef import ef_equivalent, relationalize
from catmod.structures.termalg import evaluation_hom, expansions, pullback_structure, term_algebra
from catmod.structures.models import canonical_form, encode, enumerate_models, labelled_models
