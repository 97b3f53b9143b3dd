"""Bundled reference tables and the parameter sets of the two reference GCASs."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .constructions import GcasOutput, Th1Params, Th2Params, th1_construct, th2_construct
from .gbf import ZqArray

# (N, L1, L2)-GCAS over Z_2 from the z-path construction: f = z1 z2 + ... + z6 z7,
# cosets z8 and z1, L2 = 2^5 + 2^0.
PARAMS_4X4X33 = Th1Params(q=2, n=2, m=6, k=1, v=0, pi=(1, 2, 3, 4, 5, 6, 7), d=(1,))
# f = x1 x2 + x2 x4 + y1 y2 + x5 y1, L2 = 2^4 + 2^(pi1(4)-1) + 2^0.
PARAMS_8X4X21 = Th2Params(q=2, n=2, m=5, k=2, v=0, pi1=(1, 2, 4, 3, 5), pi2=(1, 2), d=(1, 1))

TABLES = {"4x4x33": (4, PARAMS_4X4X33), "8x4x21": (8, PARAMS_8X4X21)}


def load_table(name: str) -> list[ZqArray]:
    """The printed arrays of table ``name`` as binary ZqArrays, in printed order."""
    if name not in TABLES:
        raise KeyError(f"unknown table {name!r}; choose from {sorted(TABLES)}")
    N, _ = TABLES[name]
    pkg = resources.files("gcas") / "data"
    out = []
    for j in range(N):
        text = (pkg / f"table_{name}_c{j}.csv").read_text()
        rows = [[int(t) for t in line.split(",")] for line in text.splitlines() if line.strip()]
        out.append(ZqArray(np.array(rows, dtype=np.int64), 2))
    return out


def example(name: str) -> GcasOutput:
    _, params = TABLES[name]
    return th1_construct(params) if isinstance(params, Th1Params) else th2_construct(params)


@dataclass
class TableComparison:
    name: str
    member_match: list[bool]           # constructed member j == printed member j
    matched_as_set: int                # printed members found anywhere in the constructed set
    entries_differing: list[int]       # per member, entries that differ from the printed array
    printed_is_gcas: bool
    printed_peak: float
    printed_offside: float

    @property
    def exact(self) -> bool:
        return all(self.member_match)

    def to_dict(self) -> dict:
        return {"name": self.name, "exact": self.exact, "member_match": self.member_match,
                "matched_as_set": self.matched_as_set, "entries_differing": self.entries_differing,
                "printed_is_gcas": self.printed_is_gcas, "printed_peak": self.printed_peak,
                "printed_offside": self.printed_offside}


def compare_table(name: str) -> TableComparison:
    printed = load_table(name)
    built = example(name).arrays
    rep = GcasOutput(printed, TABLES[name][1], example(name).base).verify()
    return TableComparison(
        name,
        [a == b for a, b in zip(built, printed)],
        sum(any(p == b for b in built) for p in printed),
        [int(np.sum(a.values != b.values)) for a, b in zip(built, printed)],
        rep.is_gcas, float(np.real(rep.peak)), rep.max_offside,
    )
