from __future__ import annotations

from dataclasses import dataclass, field

from catmod.errors import SortError

# Binary function symbols that may be written infix.
INFIX_SYMBOLS = frozenset({"o", "+", "*"})


@dataclass(frozen=True)
class FuncSym:
    args: tuple[str, ...]
    result: str
    partial: bool = False

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class Signature:
    """A multi-sorted first-order signature.

    ``functions`` maps names to :class:`FuncSym`; ``relations`` maps names to
    argument-sort tuples (arity 0 allowed). Symbol names are unique across
    constants, functions and relations; sort names live in their own namespace.
    """

    sorts: tuple[str, ...]
    constants: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "sorts", tuple(self.sorts))
        object.__setattr__(
            self,
            "functions",
            {
                k: v if isinstance(v, FuncSym) else FuncSym(tuple(v[0]), v[1], *v[2:])
                for k, v in self.functions.items()
            },
        )
        object.__setattr__(self, "relations", {k: tuple(v) for k, v in self.relations.items()})
        if len(set(self.sorts)) != len(self.sorts):
            raise SortError(f"duplicate sort in {self.sorts}")
        seen = set()
        for kind in (self.constants, self.functions, self.relations):
            for name in kind:
                if name in seen:
                    raise SortError(f"symbol {name!r} declared twice")
                seen.add(name)
        declared = set(self.sorts)
        for name, sort in self.constants.items():
            if sort not in declared:
                raise SortError(f"constant {name!r} has undeclared sort {sort!r}")
        for name, fs in self.functions.items():
            for s in (*fs.args, fs.result):
                if s not in declared:
                    raise SortError(f"function {name!r} mentions undeclared sort {s!r}")
        for name, args in self.relations.items():
            for s in args:
                if s not in declared:
                    raise SortError(f"relation {name!r} mentions undeclared sort {s!r}")

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return (
            self.sorts,
            tuple(sorted(self.constants.items())),
            tuple(sorted((k, (v.args, v.result, v.partial)) for k, v in self.functions.items())),
            tuple(sorted(self.relations.items())),
        )

    def symbol_kind(self, name: str) -> str | None:
        if name in self.constants:
            return "constant"
        if name in self.functions:
            return "function"
        if name in self.relations:
            return "relation"
        return None

    @property
    def is_relational(self) -> bool:
        return not self.functions

    def functional_reduct(self) -> "Signature":
        """Drop every relation symbol (the language of terms only)."""
        return Signature(self.sorts, dict(self.constants), dict(self.functions), {})

    def with_relations(self, extra: dict) -> "Signature":
        rels = dict(self.relations)
        rels.update(extra)
        return Signature(self.sorts, dict(self.constants), dict(self.functions), rels)

    def to_json(self) -> dict:
        return {
            "sorts": list(self.sorts),
            "constants": dict(self.constants),
            "functions": {
                k: {"args": list(v.args), "result": v.result, "partial": v.partial}
                for k, v in self.functions.items()
            },
            "relations": {k: list(v) for k, v in self.relations.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Signature":
        return cls(
            sorts=tuple(data["sorts"]),
            constants=dict(data.get("constants", {})),
            functions={
                k: FuncSym(tuple(v["args"]), v["result"], bool(v.get("partial", False)))
                for k, v in data.get("functions", {}).items()
            },
            relations={k: tuple(v) for k, v in data.get("relations", {}).items()},
        )


def one_sorted(sort="s", constants=(), functions=None, relations=None) -> Signature:
    """Shorthand for single-sorted signatures: functions given as name -> arity."""
    funcs = {name: FuncSym((sort,) * ar, sort) for name, ar in (functions or {}).items()}
    rels = {name: (sort,) * ar for name, ar in (relations or {}).items()}
    return Signature((sort,), {c: sort for c in constants}, funcs, rels)


L_CAT = Signature(
    sorts=("o", "m"),
    functions={
        "o": FuncSym(("m", "m"), "m", True),
        "dom": FuncSym(("m",), "o"),
        "rng": FuncSym(("m",), "o"),
        "Id": FuncSym(("o",), "m"),
    },
)

L_HOMO = Signature(sorts=("m",), relations={"QC": ("m", "m", "m")})

# L_homo plus the two QC-definable abbreviations: I (membership in the
# iso-graph) and Iso (the quasi-isomorphism relation). Neither adds
# expressive power; see catmod.homotopic.qc.expand_definitions.
L_HOMO_ISO = Signature(sorts=("m",), relations={"QC": ("m", "m", "m"), "Iso": ("m", "m"), "I": ("m",)})

GROUP_SIG = one_sorted("s", constants=("0",), functions={"+": 2, "-": 1})
