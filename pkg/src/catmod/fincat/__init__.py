"""Finite categories: validation, functors, limits, skeletons, generators."""
from catmod.fincat.core import (
    Diagram, FinCategory, Functor, Violation, category_from_structure, category_to_structure,
    discrete_category, discrete_diagram, empty_diagram, enumerate_functors, full_subcategory,
    functor_from_hom, identity_functor, inclusion_functor, make_category, opposite, opposite_diagram,
    parallel_diagram, parallel_pair_category, primary_axiom, relabel, validate_category,
)
from catmod.fincat.limits import Cone, all_cones, cones, has_limit, is_limit_cone, limit_of
from catmod.fincat.skeleton import Equivalence, are_equivalent, chosen_isos, representatives, skeleton
from catmod.fincat.generators import (
    HomFunctor, find_generators, generating_families, is_generating_family, is_generator,
    is_locally_unique, parallel_pairs, separates,
)
