"""Finite categories, functors and diagrams."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from catmod.errors import AxiomViolation
from catmod.logic.signature import L_CAT
from catmod.structures.core import FinStructure, freeze, thaw


@dataclass(frozen=True)
class Violation:
    """One failed condition; ``axiom`` is 1, 2 or 3, or None for malformed data."""

    axiom: int | None
    message: str
    witnesses: tuple = ()

    def __str__(self):
        tag = f"axiom {self.axiom}" if self.axiom else "structure"
        return f"[{tag}] {self.message}"

    def to_json(self):
        return {"axiom": self.axiom, "message": self.message, "witnesses": [thaw(w) for w in self.witnesses]}


@dataclass(frozen=True, eq=False)
class FinCategory:
    """A finite category with explicit composition table.

    ``comp[(g, f)]`` is ``g o f`` and is present exactly for composable pairs
    (``cod(f) == dom(g)``). Objects and morphisms keep their declared order,
    which every deterministic choice below relies on.
    """

    objects: tuple
    morphisms: tuple
    dom: dict
    cod: dict
    comp: dict
    ids: dict
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "morphisms", tuple(self.morphisms))

    # -- basic queries ---------------------------------------------------
    @cached_property
    def _homs(self):
        table = {(a, b): [] for a in self.objects for b in self.objects}
        for m in self.morphisms:
            table[(self.dom[m], self.cod[m])].append(m)
        return {k: tuple(v) for k, v in table.items()}

    @cached_property
    def morphism_index(self):
        return {m: i for i, m in enumerate(self.morphisms)}

    @cached_property
    def object_index(self):
        return {o: i for i, o in enumerate(self.objects)}

    @cached_property
    def identity_set(self):
        return frozenset(self.ids.values())

    def hom(self, a, b) -> tuple:
        return self._homs[(a, b)]

    def compose(self, g, f):
        """``g o f``; None when not composable."""
        return self.comp.get((g, f))

    def compose_path(self, *ms):
        """``ms[0] o ms[1] o ... o ms[-1]``."""
        out = ms[-1]
        for g in reversed(ms[:-1]):
            out = self.comp.get((g, out))
            if out is None:
                return None
        return out

    def is_identity(self, m) -> bool:
        return m in self.identity_set

    def inverse(self, f):
        """The two-sided inverse of ``f`` or None."""
        a, b = self.dom[f], self.cod[f]
        for g in self.hom(b, a):
            if self.comp[(g, f)] == self.ids[a] and self.comp[(f, g)] == self.ids[b]:
                return g
        return None

    def is_iso(self, f) -> bool:
        return self.inverse(f) is not None

    def isos(self, a, b) -> list:
        return [f for f in self.hom(a, b) if self.inverse(f) is not None]

    @cached_property
    def iso_classes(self) -> tuple:
        """Isomorphism classes of objects, each in declared order."""
        seen = set()
        out = []
        for a in self.objects:
            if a in seen:
                continue
            cls = [b for b in self.objects if b == a or (b not in seen and self.isos(a, b))]
            seen.update(cls)
            out.append(tuple(cls))
        return tuple(out)

    def isomorphic(self, a, b) -> bool:
        return a == b or bool(self.isos(a, b))

    @property
    def is_skeletal(self) -> bool:
        return all(len(c) == 1 for c in self.iso_classes)

    def __len__(self):
        return len(self.morphisms)

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"FinCategory({label}{len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    # -- JSON ------------------------------------------------------------
    def to_json(self, extra: dict | None = None) -> dict:
        records = []
        for m in self.morphisms:
            rec = {"id": thaw(m), "dom": thaw(self.dom[m]), "cod": thaw(self.cod[m])}
            if extra and m in extra:
                rec.update(extra[m])
            records.append(rec)
        out = {
            "objects": [thaw(o) for o in self.objects],
            "morphisms": records,
            "comp": [[thaw(g), thaw(f), thaw(h)] for (g, f), h in self.comp.items()],
            "ids": {str(thaw(o)): thaw(m) for o, m in self.ids.items()},
        }
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: dict, check: bool = True) -> "FinCategory":
        if check:
            report = validate_category(data)
            if report:
                raise AxiomViolation(report)
        return _from_raw(data)


def _from_raw(data: dict) -> FinCategory:
    objects = tuple(freeze(o) for o in data["objects"])
    by_text = {str(thaw(o)): o for o in objects}
    morphisms, dom, cod = [], {}, {}
    for rec in data["morphisms"]:
        m = freeze(rec["id"])
        morphisms.append(m)
        dom[m] = freeze(rec["dom"])
        cod[m] = freeze(rec["cod"])
    comp = {(freeze(g), freeze(f)): freeze(h) for g, f, h in data.get("comp", [])}
    ids = {}
    for k, v in data.get("ids", {}).items():
        ids[by_text.get(k, freeze(k))] = freeze(v)
    return FinCategory(objects, tuple(morphisms), dom, cod, comp, ids, data.get("name", ""))


def make_category(objects, morphisms, comp, ids, name="") -> FinCategory:
    """Build from ``morphisms = [(id, dom, cod), ...]`` and ``comp = {(g, f): h}``."""
    dom = {m: d for m, d, _ in morphisms}
    cod = {m: c for m, _, c in morphisms}
    return FinCategory(tuple(objects), tuple(m for m, _, _ in morphisms), dom, cod, dict(comp), dict(ids), name)


# -- validation -------------------------------------------------------------
def validate_category(raw) -> list[Violation]:
    """Check the three category axioms; an empty list means valid.

    Axiom 1: a composite exists exactly for composable pairs and has the
    domain of the first and codomain of the second factor. Axiom 2:
    associativity on composable triples. Axiom 3: identities have the right
    ends and are two-sided units. Triples containing an identity are left
    to axiom 3, since once the unit laws hold they are automatically
    associative.
    """
    report: list[Violation] = []
    if isinstance(raw, FinCategory):
        objects, morphisms = list(raw.objects), list(raw.morphisms)
        dom, cod, comp, ids = raw.dom, raw.cod, raw.comp, raw.ids
        comp_rows = [(g, f, h) for (g, f), h in comp.items()]
    else:
        try:
            objects = [freeze(o) for o in raw["objects"]]
            morphisms, dom, cod = [], {}, {}
            for rec in raw["morphisms"]:
                m = freeze(rec["id"])
                if m in dom:
                    report.append(Violation(None, f"duplicate morphism id {thaw(m)!r}", (m,)))
                morphisms.append(m)
                dom[m] = freeze(rec["dom"])
                cod[m] = freeze(rec["cod"])
            comp_rows = [tuple(freeze(x) for x in row) for row in raw.get("comp", [])]
            by_text = {str(thaw(o)): o for o in objects}
            ids = {by_text.get(k, freeze(k)): freeze(v) for k, v in raw.get("ids", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            return [Violation(None, f"malformed category data: {exc}")]
        comp = {}
        for row in comp_rows:
            if len(row) != 3:
                report.append(Violation(None, f"composition row {thaw(row)!r} is not [g, f, h]", (row,)))
                continue
            g, f, h = row
            if (g, f) in comp and comp[(g, f)] != h:
                report.append(Violation(None, f"two composites listed for ({thaw(g)!r}, {thaw(f)!r})", (g, f)))
            comp[(g, f)] = h

    obj_set = set(objects)
    if len(obj_set) != len(objects):
        report.append(Violation(None, "duplicate object names"))
    for m in morphisms:
        for end, o in (("dom", dom[m]), ("cod", cod[m])):
            if o not in obj_set:
                report.append(Violation(None, f"{end} of {thaw(m)!r} is the unknown object {thaw(o)!r}", (m,)))
    for (g, f), h in comp.items():
        for x in (g, f, h):
            if x not in dom:
                report.append(Violation(None, f"composition mentions unknown morphism {thaw(x)!r}", (g, f, h)))
    for o in objects:
        if o not in ids:
            report.append(Violation(None, f"object {thaw(o)!r} has no identity", (o,)))
    for o, m in ids.items():
        if o not in obj_set or m not in dom:
            report.append(Violation(None, f"identity entry {thaw(o)!r} -> {thaw(m)!r} is dangling", (o, m)))
    if report:
        return report

    # axiom 1
    for g in morphisms:
        for f in morphisms:
            composable = cod[f] == dom[g]
            h = comp.get((g, f))
            if composable and h is None:
                report.append(Violation(1, f"composite {thaw(g)!r} o {thaw(f)!r} is missing", (g, f)))
            elif not composable and h is not None:
                report.append(Violation(1, f"composite {thaw(g)!r} o {thaw(f)!r} given for a non-composable pair", (g, f)))
            elif h is not None and (dom[h] != dom[f] or cod[h] != cod[g]):
                report.append(
                    Violation(1, f"{thaw(g)!r} o {thaw(f)!r} = {thaw(h)!r} has ends ({thaw(dom[h])!r}, {thaw(cod[h])!r})", (g, f, h))
                )
    # axiom 3
    id_set = set(ids.values())
    for o, i in ids.items():
        if dom[i] != o or cod[i] != o:
            report.append(Violation(3, f"identity of {thaw(o)!r} is not an endomorphism of it", (o, i)))
            continue
        for f in morphisms:
            if dom[f] == o and comp.get((f, i)) != f:
                report.append(Violation(3, f"{thaw(f)!r} o 1_{thaw(o)} != {thaw(f)!r}", (f, i)))
            if cod[f] == o and comp.get((i, f)) != f:
                report.append(Violation(3, f"1_{thaw(o)} o {thaw(f)!r} != {thaw(f)!r}", (i, f)))
    # axiom 2
    out_of = {}
    for m in morphisms:
        out_of.setdefault(dom[m], []).append(m)
    for f in morphisms:
        if f in id_set:
            continue
        for g in out_of.get(cod[f], ()):
            if g in id_set:
                continue
            gf = comp.get((g, f))
            for h in out_of.get(cod[g], ()):
                if h in id_set:
                    continue
                hg = comp.get((h, g))
                left = comp.get((h, gf)) if gf is not None else None
                right = comp.get((hg, f)) if hg is not None else None
                if left != right:
                    report.append(
                        Violation(2, f"({thaw(h)!r} o {thaw(g)!r}) o {thaw(f)!r} != {thaw(h)!r} o ({thaw(g)!r} o {thaw(f)!r})", (h, g, f))
                    )
    report.sort(key=lambda v: (v.axiom or 0))
    return report


def primary_axiom(report) -> int | None:
    """The lowest-numbered axiom that fails (None for structural defects)."""
    if not report:
        return None
    return report[0].axiom


# -- conversions -------------------------------------------------------------
def category_to_structure(C: FinCategory) -> FinStructure:
    funcs = {
        "o": dict(C.comp),
        "dom": {(m,): C.dom[m] for m in C.morphisms},
        "rng": {(m,): C.cod[m] for m in C.morphisms},
        "Id": {(o,): C.ids[o] for o in C.objects},
    }
    return FinStructure(L_CAT, {"o": C.objects, "m": C.morphisms}, {}, {k: {tuple(a): v for a, v in t.items()} for k, t in funcs.items()}, {})


def category_from_structure(S: FinStructure, name: str = "") -> FinCategory:
    """Read an L_cat structure as a category (AxiomViolation if it is not one)."""
    objects = S.carriers["o"]
    morphisms = S.carriers["m"]
    dom = {m: S.funcs["dom"].get((m,)) for m in morphisms}
    cod = {m: S.funcs["rng"].get((m,)) for m in morphisms}
    ids = {o: S.funcs["Id"].get((o,)) for o in objects}
    comp = {k: v for k, v in S.funcs["o"].items()}
    report = []
    if any(v is None for v in (*dom.values(), *cod.values(), *ids.values())):
        report.append(Violation(None, "dom, rng and Id must be total"))
    else:
        report = validate_category(FinCategory(objects, morphisms, dom, cod, comp, ids))
    if report:
        raise AxiomViolation(report)
    return FinCategory(objects, morphisms, dom, cod, comp, ids, name)


# -- constructions -------------------------------------------------------------
def opposite(C: FinCategory) -> FinCategory:
    comp = {(f, g): h for (g, f), h in C.comp.items()}
    name = f"{C.name}^op" if C.name else ""
    return FinCategory(C.objects, C.morphisms, dict(C.cod), dict(C.dom), comp, dict(C.ids), name)


def full_subcategory(C: FinCategory, objects, name: str = "") -> FinCategory:
    keep = set(objects)
    objs = tuple(o for o in C.objects if o in keep)
    morphs = tuple(m for m in C.morphisms if C.dom[m] in keep and C.cod[m] in keep)
    ms = set(morphs)
    comp = {(g, f): h for (g, f), h in C.comp.items() if g in ms and f in ms}
    return FinCategory(
        objs, morphs, {m: C.dom[m] for m in morphs}, {m: C.cod[m] for m in morphs}, comp,
        {o: C.ids[o] for o in objs}, name,
    )


def relabel(C: FinCategory, obj_map: dict, mor_map: dict, name: str = "") -> FinCategory:
    """Rename objects and morphisms bijectively."""
    return FinCategory(
        tuple(obj_map[o] for o in C.objects),
        tuple(mor_map[m] for m in C.morphisms),
        {mor_map[m]: obj_map[C.dom[m]] for m in C.morphisms},
        {mor_map[m]: obj_map[C.cod[m]] for m in C.morphisms},
        {(mor_map[g], mor_map[f]): mor_map[h] for (g, f), h in C.comp.items()},
        {obj_map[o]: mor_map[m] for o, m in C.ids.items()},
        name or C.name,
    )


# -- functors -------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class Functor:
    source: FinCategory
    target: FinCategory
    obj_map: dict
    mor_map: dict

    def __call__(self, x):
        """Apply to a morphism (or an object if it is one)."""
        if x in self.mor_map:
            return self.mor_map[x]
        return self.obj_map[x]

    def violations(self) -> list[str]:
        C, D = self.source, self.target
        out = []
        for o in C.objects:
            if self.obj_map.get(o) not in D.object_index:
                out.append(f"object {o!r} not mapped to an object")
        for m in C.morphisms:
            fm = self.mor_map.get(m)
            if fm not in D.morphism_index:
                out.append(f"morphism {m!r} not mapped to a morphism")
                continue
            if D.dom[fm] != self.obj_map.get(C.dom[m]) or D.cod[fm] != self.obj_map.get(C.cod[m]):
                out.append(f"F({m!r}) has the wrong ends")
        if out:
            return out
        for o in C.objects:
            if self.mor_map[C.ids[o]] != D.ids[self.obj_map[o]]:
                out.append(f"F(1_{o!r}) is not an identity")
        for (g, f), h in C.comp.items():
            if D.comp.get((self.mor_map[g], self.mor_map[f])) != self.mor_map[h]:
                out.append(f"F({g!r} o {f!r}) != F({g!r}) o F({f!r})")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def is_faithful(self) -> bool:
        C = self.source
        for a in C.objects:
            for b in C.objects:
                images = [self.mor_map[m] for m in C.hom(a, b)]
                if len(set(images)) != len(images):
                    return False
        return True

    def is_full(self) -> bool:
        C, D = self.source, self.target
        for a in C.objects:
            for b in C.objects:
                images = {self.mor_map[m] for m in C.hom(a, b)}
                if images != set(D.hom(self.obj_map[a], self.obj_map[b])):
                    return False
        return True

    def is_injective_on_objects(self) -> bool:
        return len(set(self.obj_map.values())) == len(self.obj_map)

    def is_surjective_on_objects(self) -> bool:
        return set(self.obj_map.values()) == set(self.target.objects)

    def is_essentially_surjective(self) -> bool:
        image = set(self.obj_map.values())
        return all(any(self.target.isomorphic(b, x) for x in image) for b in self.target.objects)

    def flags(self) -> dict:
        return {
            "faithful": self.is_faithful(),
            "full": self.is_full(),
            "injective_on_objects": self.is_injective_on_objects(),
            "essentially_surjective": self.is_essentially_surjective(),
        }

    def then(self, G: "Functor") -> "Functor":
        """``G o self``."""
        return Functor(
            self.source, G.target,
            {o: G.obj_map[v] for o, v in self.obj_map.items()},
            {m: G.mor_map[v] for m, v in self.mor_map.items()},
        )

    def to_json(self) -> dict:
        return {
            "objects": [[thaw(k), thaw(v)] for k, v in self.obj_map.items()],
            "morphisms": [[thaw(k), thaw(v)] for k, v in self.mor_map.items()],
        }


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, {o: o for o in C.objects}, {m: m for m in C.morphisms})


def inclusion_functor(S: FinCategory, C: FinCategory) -> Functor:
    return Functor(S, C, {o: o for o in S.objects}, {m: m for m in S.morphisms})


def functor_from_hom(h, C: FinCategory, D: FinCategory) -> Functor:
    """Read an L_cat homomorphism between category structures as a functor."""
    return Functor(C, D, dict(h.maps["o"]), dict(h.maps["m"]))


def enumerate_functors(C: FinCategory, D: FinCategory) -> list[Functor]:
    """All functors C -> D, found as L_cat homomorphisms."""
    from catmod.structures.homs import iter_homomorphisms

    A, B = category_to_structure(C), category_to_structure(D)
    return [functor_from_hom(h, C, D) for h in iter_homomorphisms(A, B)]


# -- diagrams -------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class Diagram:
    shape: FinCategory
    J: Functor

    def __post_init__(self):
        if self.J.source is not self.shape:
            raise ValueError("diagram functor must start at the shape")
        bad = self.J.violations()
        if bad:
            raise ValueError("diagram is not a functor: " + "; ".join(bad[:3]))

    @property
    def category(self) -> FinCategory:
        return self.J.target

    def to_json(self) -> dict:
        return {"shape": self.shape.to_json(), **self.J.to_json()}

    @classmethod
    def from_json(cls, data: dict, C: FinCategory) -> "Diagram":
        shape = FinCategory.from_json(data["shape"])
        J = Functor(
            shape, C,
            {freeze(k): freeze(v) for k, v in data["objects"]},
            {freeze(k): freeze(v) for k, v in data["morphisms"]},
        )
        return cls(shape, J)


def discrete_category(n: int | list, name: str = "") -> FinCategory:
    objs = list(range(n)) if isinstance(n, int) else list(n)
    morphs = [(f"1_{o}", o, o) for o in objs]
    comp = {(f"1_{o}", f"1_{o}"): f"1_{o}" for o in objs}
    return make_category(objs, morphs, comp, {o: f"1_{o}" for o in objs}, name or f"discrete({len(objs)})")


def parallel_pair_category(name: str = "parallel pair") -> FinCategory:
    objs = [0, 1]
    morphs = [("1_0", 0, 0), ("1_1", 1, 1), ("u", 0, 1), ("v", 0, 1)]
    ids = {0: "1_0", 1: "1_1"}
    return make_category(objs, morphs, _unit_comp(morphs, ids), ids, name)


def _unit_comp(morphs, ids, extra=None):
    """Composition table generated by the unit laws plus ``extra``."""
    comp = dict(extra or {})
    for m, d, c in morphs:
        comp[(m, ids[d])] = m
        comp[(ids[c], m)] = m
    return comp


def discrete_diagram(C: FinCategory, objs) -> Diagram:
    shape = discrete_category(len(objs))
    J = Functor(shape, C, {i: o for i, o in enumerate(objs)}, {f"1_{i}": C.ids[o] for i, o in enumerate(objs)})
    return Diagram(shape, J)


def parallel_diagram(C: FinCategory, f, g) -> Diagram:
    shape = parallel_pair_category()
    a, b = C.dom[f], C.cod[f]
    J = Functor(shape, C, {0: a, 1: b}, {"1_0": C.ids[a], "1_1": C.ids[b], "u": f, "v": g})
    return Diagram(shape, J)


def empty_diagram(C: FinCategory) -> Diagram:
    shape = discrete_category(0, "empty")
    return Diagram(shape, Functor(shape, C, {}, {}))


def opposite_diagram(D: Diagram) -> Diagram:
    shape = opposite(D.shape)
    C = opposite(D.category)
    return Diagram(shape, Functor(shape, C, dict(D.J.obj_map), dict(D.J.mor_map)))
