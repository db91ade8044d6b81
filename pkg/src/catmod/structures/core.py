"""Finite multi-sorted structures, homomorphisms and theories."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

from catmod.errors import SignatureMismatch
from catmod.logic.signature import Signature


def freeze(x):
    """Turn JSON lists into (nested) tuples so element ids are hashable."""
    if isinstance(x, list):
        return tuple(freeze(v) for v in x)
    return x


def thaw(x):
    if isinstance(x, tuple):
        return [thaw(v) for v in x]
    return x


@dataclass(frozen=True, eq=False)
class FinStructure:
    """A finite structure: carriers per sort plus interpretations.

    Functions are dicts from argument tuples to values; a partial function
    simply lacks entries. Relations are frozensets of tuples (0-ary relations
    are either ``{()}`` or empty).
    """

    sig: Signature
    carriers: dict
    consts: dict = field(default_factory=dict)
    funcs: dict = field(default_factory=dict)
    rels: dict = field(default_factory=dict)

    def __post_init__(self):
        carriers = {s: tuple(self.carriers.get(s, ())) for s in self.sig.sorts}
        for s in self.carriers:
            if s not in carriers:
                carriers[s] = tuple(self.carriers[s])
        funcs = {name: {} for name in self.sig.functions}
        for name, table in self.funcs.items():
            funcs[name] = {tuple(k): v for k, v in table.items()}
        rels = {name: frozenset() for name in self.sig.relations}
        for name, tuples in self.rels.items():
            rels[name] = frozenset(tuple(t) for t in tuples)
        object.__setattr__(self, "carriers", carriers)
        object.__setattr__(self, "consts", dict(self.consts))
        object.__setattr__(self, "funcs", funcs)
        object.__setattr__(self, "rels", rels)

    def __eq__(self, other):
        if not isinstance(other, FinStructure):
            return NotImplemented
        return (
            self.sig == other.sig
            and self.carriers == other.carriers
            and self.consts == other.consts
            and self.funcs == other.funcs
            and self.rels == other.rels
        )

    def __hash__(self):
        return hash((self.sig, tuple(self.carriers.items()), len(self.funcs), len(self.rels)))

    def __repr__(self):
        sizes = ", ".join(f"{s}:{len(c)}" for s, c in self.carriers.items())
        return f"FinStructure({sizes})"

    @cached_property
    def positions(self) -> dict:
        """sort -> {element: index in carrier}."""
        return {s: {e: i for i, e in enumerate(c)} for s, c in self.carriers.items()}

    def size(self, sort=None) -> int:
        if sort is not None:
            return len(self.carriers[sort])
        return sum(len(c) for c in self.carriers.values())

    def apply(self, name, args):
        """Value of a function application, or None when undefined."""
        return self.funcs[name].get(tuple(args))

    def domain_tuples(self, arg_sorts):
        return itertools.product(*(self.carriers[s] for s in arg_sorts))

    def reduct(self, sig: Signature) -> "FinStructure":
        return FinStructure(
            sig,
            {s: self.carriers[s] for s in sig.sorts},
            {c: self.consts[c] for c in sig.constants},
            {f: self.funcs[f] for f in sig.functions},
            {r: self.rels[r] for r in sig.relations},
        )

    def expand(self, sig: Signature, rels: dict) -> "FinStructure":
        merged = dict(self.rels)
        merged.update(rels)
        return FinStructure(sig, self.carriers, self.consts, self.funcs, merged)

    # -- JSON ------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "sig": self.sig.to_json(),
            "carriers": {s: [thaw(e) for e in c] for s, c in self.carriers.items()},
            "consts": {k: thaw(v) for k, v in self.consts.items()},
            "funcs": {
                name: {"map": [[*map(thaw, k), thaw(v)] for k, v in table.items()]}
                for name, table in self.funcs.items()
            },
            "rels": {name: sorted([list(map(thaw, t)) for t in tuples], key=repr) for name, tuples in self.rels.items()},
        }

    @classmethod
    def from_json(cls, data: dict, sig: Signature | None = None) -> "FinStructure":
        sig = sig or Signature.from_json(data["sig"])
        funcs = {}
        for name, spec in data.get("funcs", {}).items():
            rows = spec["map"] if isinstance(spec, dict) else spec
            funcs[name] = {tuple(freeze(v) for v in row[:-1]): freeze(row[-1]) for row in rows}
        return cls(
            sig,
            {s: tuple(freeze(e) for e in c) for s, c in data["carriers"].items()},
            {k: freeze(v) for k, v in data.get("consts", {}).items()},
            funcs,
            {name: [tuple(freeze(v) for v in t) for t in rows] for name, rows in data.get("rels", {}).items()},
        )


def validate_structure(M: FinStructure) -> list[str]:
    """Every violated closure condition; empty iff ``M`` is a valid structure."""
    report = []
    sig = M.sig
    for s, c in M.carriers.items():
        if s not in sig.sorts:
            report.append(f"carrier for undeclared sort {s!r}")
        if len(set(c)) != len(c):
            report.append(f"carrier of sort {s!r} repeats elements")
    members = {s: set(c) for s, c in M.carriers.items()}
    for name, sort in sig.constants.items():
        if name not in M.consts:
            report.append(f"constant {name!r} is not interpreted")
        elif M.consts[name] not in members[sort]:
            report.append(f"constant {name!r} = {M.consts[name]!r} lies outside carrier {sort!r}")
    for name in M.consts:
        if name not in sig.constants:
            report.append(f"interpretation of undeclared constant {name!r}")
    for name, table in M.funcs.items():
        fs = sig.functions.get(name)
        if fs is None:
            report.append(f"interpretation of undeclared function {name!r}")
            continue
        for args, val in table.items():
            if len(args) != fs.arity or any(a not in members[s] for a, s in zip(args, fs.args)):
                report.append(f"function {name!r} has an entry outside its domain: {args!r}")
            if val not in members[fs.result]:
                report.append(f"function {name!r} maps {args!r} to {val!r} outside carrier {fs.result!r}")
        if not fs.partial:
            for args in M.domain_tuples(fs.args):
                if args not in table:
                    report.append(f"total function {name!r} is undefined on {args!r}")
    for name, tuples in M.rels.items():
        arg_sorts = sig.relations.get(name)
        if arg_sorts is None:
            report.append(f"interpretation of undeclared relation {name!r}")
            continue
        for t in tuples:
            if len(t) != len(arg_sorts) or any(a not in members[s] for a, s in zip(t, arg_sorts)):
                report.append(f"relation {name!r} contains {t!r} outside its carriers")
    return report


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: FinStructure
    target: FinStructure
    maps: dict  # sort -> {element: element}
    strong: bool = False

    def __call__(self, sort, element):
        return self.maps[sort][element]

    def key(self):
        """Hashable identity of the underlying map (carrier order)."""
        return tuple(
            tuple(self.maps[s][e] for e in self.source.carriers[s]) for s in self.source.sig.sorts
        )

    def __eq__(self, other):
        if not isinstance(other, Homomorphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Homomorphism({self.key()!r})"

    def compose(self, first: "Homomorphism") -> "Homomorphism":
        """``self ∘ first``."""
        maps = {s: {e: self.maps[s][first.maps[s][e]] for e in first.source.carriers[s]} for s in first.source.sig.sorts}
        return Homomorphism(first.source, self.target, maps, self.strong and first.strong)

    def is_injective(self) -> bool:
        return all(len(set(m.values())) == len(m) for m in self.maps.values())

    def is_surjective(self) -> bool:
        return all(set(self.maps[s].values()) == set(self.target.carriers[s]) for s in self.target.sig.sorts)

    def maps_json(self) -> dict:
        return {s: [[thaw(a), thaw(b)] for a, b in m.items()] for s, m in self.maps.items()}


def identity_hom(M: FinStructure) -> Homomorphism:
    return Homomorphism(M, M, {s: {e: e for e in c} for s, c in M.carriers.items()}, True)


def check_same_signature(A: FinStructure, B: FinStructure):
    if A.sig != B.sig:
        raise SignatureMismatch("structures are over different signatures")


def hom_violations(A: FinStructure, B: FinStructure, maps: dict, strong: bool = False) -> list[str]:
    """Reasons why ``maps`` is not a (strong) homomorphism A -> B."""
    out = []
    sig = A.sig
    for s in sig.sorts:
        m = maps.get(s, {})
        for e in A.carriers[s]:
            if e not in m:
                out.append(f"{s}-element {e!r} is not mapped")
            elif m[e] not in B.positions[s]:
                out.append(f"{s}-element {e!r} maps outside the target")
    if out:
        return out
    for c in sig.constants:
        s = sig.constants[c]
        if maps[s][A.consts[c]] != B.consts[c]:
            out.append(f"constant {c!r} not preserved")
    for f, fs in sig.functions.items():
        table_b = B.funcs[f]
        for args, val in A.funcs[f].items():
            image = tuple(maps[s][a] for a, s in zip(args, fs.args))
            got = table_b.get(image)
            if got is None or got != maps[fs.result][val]:
                out.append(f"function {f!r} not preserved at {args!r}")
    for r, arg_sorts in sig.relations.items():
        rel_b = B.rels[r]
        rel_a = A.rels[r]
        for t in rel_a:
            if tuple(maps[s][a] for a, s in zip(t, arg_sorts)) not in rel_b:
                out.append(f"relation {r!r} not preserved at {t!r}")
        if strong:
            for t in A.domain_tuples(arg_sorts):
                if t not in rel_a and tuple(maps[s][a] for a, s in zip(t, arg_sorts)) in rel_b:
                    out.append(f"relation {r!r} not reflected at {t!r}")
    return out


def is_homomorphism(A, B, maps, strong=False) -> bool:
    return not hom_violations(A, B, maps, strong)


@dataclass(frozen=True)
class Theory:
    sig: Signature
    sentences: tuple

    def __post_init__(self):
        from catmod.logic.syntax import is_sentence

        object.__setattr__(self, "sentences", tuple(self.sentences))
        for s in self.sentences:
            if not is_sentence(s):
                raise ValueError(f"theory member is not closed: {s!r}")

    @classmethod
    def from_json(cls, data: dict) -> "Theory":
        from catmod.logic.parser import parse_formula

        sig = Signature.from_json(data["sig"])
        return cls(sig, tuple(parse_formula(t, sig) for t in data.get("sentences", [])))

    @classmethod
    def from_texts(cls, sig, texts) -> "Theory":
        from catmod.logic.parser import parse_formula

        return cls(sig, tuple(parse_formula(t, sig) for t in texts))

    def to_json(self) -> dict:
        from catmod.logic.syntax import to_text

        return {"sig": self.sig.to_json(), "sentences": [to_text(s) for s in self.sentences]}

    def digest(self) -> str:
        import hashlib

        return hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()
