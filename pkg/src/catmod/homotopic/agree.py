"""Do two categories agree on homotopic sentences?"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from catmod.config import get_caps
from catmod.fincat.core import FinCategory
from catmod.homotopic.isograph import IsoGraph, build_isograph
from catmod.homotopic.qc import HomotopicModel
from catmod.logic.enumerate import SentenceSpace, _check_bounds
from catmod.logic.signature import L_HOMO
from catmod.logic.syntax import to_text


@dataclass
class AgreementReport:
    left: str
    right: str
    depth: int
    max_size: int
    mode: str
    checked: int
    seed: int | None = None
    disagreements: list = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {
            "left": self.left, "right": self.right, "depth": self.depth, "max_size": self.max_size,
            "mode": self.mode, "checked": self.checked, "seed": self.seed, "agree": self.agree,
            "disagreements": self.disagreements,
        }


def certificate(phi, value_c: bool, value_d: bool, i: IsoGraph, j: IsoGraph) -> dict:
    return {
        "sentence": to_text(phi), "valueC": value_c, "valueD": value_d,
        "isographs": {"C": i.to_json(), "D": j.to_json()},
    }


def agreement_test(C: FinCategory, D: FinCategory, depth: int = 2, budget: int = 5000, seed: int = 0,
                   max_size: int = 9, i: IsoGraph | None = None, j: IsoGraph | None = None,
                   caps=None) -> AgreementReport:
    """Compare ``C`` and ``D`` on every sentence over QC up to the bounds.

    When more than ``budget`` sentences exist, ``budget`` of them are drawn
    uniformly from the enumeration index space with the given seed.
    """
    caps = caps or get_caps()
    _check_bounds(depth, max_size, caps)
    i = i or build_isograph(C)
    j = j or build_isograph(D)
    mc, md = HomotopicModel(C, i), HomotopicModel(D, j)
    space = SentenceSpace(L_HOMO, homotopic=True)
    total = space.count(depth, max_size)
    if total <= budget:
        mode, indices, used_seed = "exhaustive", range(total), None
    else:
        rng = random.Random(seed)
        mode, used_seed = "sampled", seed
        indices = [rng.randrange(total) for _ in range(budget)]
    report = AgreementReport(C.name, D.name, depth, max_size, mode, 0, used_seed)
    for k in indices:
        phi = space.at(k, depth, max_size)
        a, b = mc.eval(phi), md.eval(phi)
        report.checked += 1
        if a != b:
            report.disagreements.append(certificate(phi, a, b, i, j))
    return report


def sentence_agreement(C: FinCategory, D: FinCategory, sentences, i=None, j=None) -> list[dict]:
    """Certificates for the given sentences on which C and D differ."""
    i = i or build_isograph(C)
    j = j or build_isograph(D)
    mc, md = HomotopicModel(C, i), HomotopicModel(D, j)
    out = []
    for phi in sentences:
        a, b = mc.eval(phi), md.eval(phi)
        if a != b:
            out.append(certificate(phi, a, b, i, j))
    return out
