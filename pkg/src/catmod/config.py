"""Search caps and seeds.

Defaults can be overridden by a JSON file whose path is given in the
``CATMOD_CONFIG`` environment variable; keyword overrides win over the file.
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

ENV_VAR = "CATMOD_CONFIG"


@dataclass(frozen=True)
class Caps:
    max_model_size: int = 6
    ef_max_rounds: int = 5
    term_algebra_cap: int = 10_000
    max_morphisms: int = 40
    enum_max_depth: int = 4
    enum_max_size: int = 12
    ultra_max_index: int = 6
    isograph_enum_cap: int = 100
    extends_max: int = 8
    qlim_max_shape_objects: int = 3
    qlim_max_shape_morphisms: int = 6
    theta_max_expansions: int = 4096
    seed: int = 0


def load_caps(path: str | None = None, **overrides) -> Caps:
    path = path or os.environ.get(ENV_VAR)
    values = {}
    if path:
        with open(path) as fh:
            values.update(json.load(fh))
    values.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in dataclasses.fields(Caps)}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return Caps(**values)


_default: Caps | None = None


def get_caps() -> Caps:
    global _default
    if _default is None:
        _default = load_caps()
    return _default


def set_caps(caps: Caps | None) -> None:
    global _default
    _default = caps
