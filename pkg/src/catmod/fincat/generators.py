"""Generators, generating families and hom functors."""
from __future__ import annotations

import itertools

from catmod.fincat.core import FinCategory


def parallel_pairs(C: FinCategory):
    """Unordered pairs of distinct parallel morphisms."""
    for a in C.objects:
        for b in C.objects:
            yield from itertools.combinations(C.hom(a, b), 2)


def separates(C: FinCategory, I, f, g) -> bool:
    """Is there ``x: I -> dom f`` with ``f o x != g o x``?"""
    return any(C.comp[(f, x)] != C.comp[(g, x)] for x in C.hom(I, C.dom[f]))


def is_generator(C: FinCategory, I) -> bool:
    return all(separates(C, I, f, g) for f, g in parallel_pairs(C))


def find_generators(C: FinCategory) -> list:
    """Objects I with Hom(I, -) faithful, in declared order."""
    pairs = list(parallel_pairs(C))
    return [I for I in C.objects if all(separates(C, I, f, g) for f, g in pairs)]


def is_generating_family(C: FinCategory, family) -> bool:
    return all(any(separates(C, I, f, g) for I in family) for f, g in parallel_pairs(C))


def is_locally_unique(C: FinCategory, family) -> bool:
    """Each object receives morphisms from exactly one member of the family."""
    return all(sum(1 for I in family if C.hom(I, A)) == 1 for A in C.objects)


def generating_families(C: FinCategory, max_size: int | None = None) -> list[dict]:
    """Minimal generating families (no proper subfamily generates), by size
    and then declared order, each tagged with its local-uniqueness flag."""
    pairs = list(parallel_pairs(C))
    sep = {I: frozenset(k for k, (f, g) in enumerate(pairs) if separates(C, I, f, g)) for I in C.objects}
    everything = frozenset(range(len(pairs)))
    limit = len(C.objects) if max_size is None else max_size
    found = []
    for size in range(1, limit + 1):
        for family in itertools.combinations(C.objects, size):
            if any(set(prev) <= set(family) for prev in found):
                continue
            covered = frozenset().union(*(sep[I] for I in family))
            if covered == everything:
                found.append(family)
    return [{"family": list(f), "locally_unique": is_locally_unique(C, f)} for f in found]


class HomFunctor:
    """Hom(I, -): objects go to their hom-set from I, morphisms act by
    post-composition (recorded as sets of input/output pairs)."""

    def __init__(self, C: FinCategory, I):
        self.C, self.I = C, I

    def on_object(self, A) -> frozenset:
        return frozenset(self.C.hom(self.I, A))

    def on_morphism(self, f) -> tuple:
        C = self.C
        src = self.on_object(C.dom[f])
        pairs = frozenset((x, C.comp[(f, x)]) for x in src)
        return (src, self.on_object(C.cod[f]), pairs)

    def is_injective_on_objects(self) -> bool:
        images = [self.on_object(A) for A in self.C.objects]
        return len(set(images)) == len(images)

    def is_faithful(self) -> bool:
        C = self.C
        return all(self.on_morphism(f) != self.on_morphism(g) for f, g in parallel_pairs(C))
