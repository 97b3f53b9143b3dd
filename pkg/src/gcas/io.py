"""Plain-text array files and run manifests.

Z_q arrays are written as integer CSV rows.  Complex arrays are written with
interleaved ``re,im`` columns, so an L1 x L2 array becomes L1 rows of 2*L2
numbers.  Floats use ``repr`` and therefore round-trip exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .gbf import ZqArray

MANIFEST = "manifest.json"


def fmt(x: float) -> str:
    return repr(float(x))


def write_zq_csv(path: Path, a: ZqArray | np.ndarray) -> None:
    v = a.values if isinstance(a, ZqArray) else np.asarray(a)
    Path(path).write_text("".join(",".join(str(int(e)) for e in row) + "\n" for row in v))


def write_complex_csv(path: Path, a: np.ndarray) -> None:
    a = np.asarray(a, complex)
    lines = []
    for row in a:
        lines.append(",".join(f"{fmt(z.real)},{fmt(z.imag)}" for z in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv_numbers(path: Path) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        try:
            rows.append([float(t) for t in line.split(",")])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise ValueError(f"{path}: empty or ragged CSV")
    return np.array(rows)


def read_zq_csv(path: Path, q: int) -> ZqArray:
    v = read_csv_numbers(path)
    if not np.all(v == np.round(v)):
        raise ValueError(f"{path}: non-integer entry in a Z_q array file")
    return ZqArray(v.astype(np.int64), q)


def read_complex_csv(path: Path) -> np.ndarray:
    v = read_csv_numbers(path)
    if v.shape[1] % 2:
        raise ValueError(f"{path}: odd column count for interleaved re,im data")
    return v[:, 0::2] + 1j * v[:, 1::2]


def write_rows(path: Path, header: Sequence[str], rows) -> None:
    out = [",".join(header)]
    for r in rows:
        out.append(",".join(fmt(x) if isinstance(x, float) else str(x) for x in r))
    Path(path).write_text("\n".join(out) + "\n")


@dataclass
class RunManifest:
    subcommand: str
    params: dict[str, Any]
    argv: list[str]
    prng: str | None = None
    seed: int | None = None
    artifacts: list[str] = field(default_factory=list)
    version: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand, "params": self.params, "argv": self.argv,
            "prng": self.prng, "seed": self.seed, "artifacts": sorted(self.artifacts),
            "version": self.version, **self.extra,
        }

    def write(self, directory: Path) -> Path:
        path = Path(directory) / MANIFEST
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
        return path


def read_manifest(directory: Path) -> dict:
    path = Path(directory) / MANIFEST
    if not path.exists():
        raise FileNotFoundError(f"no {MANIFEST} in {directory}")
    return json.loads(path.read_text())
