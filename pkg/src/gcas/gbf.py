"""2D generalized Boolean functions and the Z_q arrays they generate.

A GBF maps ``(y_1..y_n, x_1..x_m) in Z_2^n x Z_2^m`` to ``Z_q``.  Internally
every variable is addressed by its *z-index*::

    z_l = y_l          for 1 <= l <= n
    z_l = x_{l-n}      for n < l <= n + m

Bit order
---------
Row index ``g`` and column index ``i`` are expanded **least significant bit
first**: ``g = sum_h g_h 2^(h-1)`` so ``y_1`` is bit 0 of ``g`` and ``x_1`` is
bit 0 of ``i``.  Flipping this convention silently changes every materialized
array, so all array code in the package goes through :func:`variable_arrays`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GbfPoly",
    "ZqArray",
    "eval_gbf",
    "build_array",
    "truncate",
    "to_unimodular",
    "parse_gbf",
    "format_gbf",
    "variable_arrays",
]

Monomial = tuple[int, tuple[int, ...]]


def _canonical(q: int, nvars: int, terms: Iterable[tuple[int, Iterable[int]]]) -> tuple[Monomial, ...]:
    acc: dict[tuple[int, ...], int] = {}
    for coeff, idx in terms:
        idx = tuple(idx)
        if len(set(idx)) != len(idx):
            raise ValueError(f"repeated variable in monomial {idx}")
        for l in idx:
            if not 1 <= l <= nvars:
                raise ValueError(f"variable index z{l} outside [1, {nvars}]")
        key = tuple(sorted(idx))
        acc[key] = (acc.get(key, 0) + int(coeff)) % q
    return tuple(sorted(((c, k) for k, c in acc.items() if c), key=lambda t: (len(t[1]), t[1])))


@dataclass(frozen=True)
class GbfPoly:
    """Z_q-valued multilinear polynomial in ``n`` row and ``m`` column variables.

    ``monomials`` holds ``(coefficient, z-index tuple)`` pairs.  Non-constant
    terms only; the constant lives in ``constant``.  Instances are always in
    canonical form (merged, reduced mod q, zero terms dropped, sorted), so
    ``==`` is polynomial equality.
    """

    q: int
    n: int
    m: int
    monomials: tuple[Monomial, ...] = ()
    constant: int = 0

    def __post_init__(self):
        if self.q < 2 or self.q % 2:
            raise ValueError(f"q must be an even integer >= 2, got {self.q}")
        if self.n < 0 or self.m < 0:
            raise ValueError("variable counts must be nonnegative")
        terms = [(c, idx) for c, idx in self.monomials]
        const = self.constant
        # an empty index set is a constant term
        const += sum(c for c, idx in terms if len(tuple(idx)) == 0)
        terms = [(c, idx) for c, idx in terms if len(tuple(idx))]
        object.__setattr__(self, "monomials", _canonical(self.q, self.n + self.m, terms))
        object.__setattr__(self, "constant", int(const) % self.q)

    @property
    def nvars(self) -> int:
        return self.n + self.m

    @property
    def shape(self) -> tuple[int, int]:
        return 2**self.n, 2**self.m

    def __add__(self, other: "GbfPoly") -> "GbfPoly":
        if (self.q, self.n, self.m) != (other.q, other.n, other.m):
            raise ValueError("cannot add GBFs with different (q, n, m)")
        return GbfPoly(self.q, self.n, self.m, self.monomials + other.monomials,
                       self.constant + other.constant)

    def plus(self, terms: Iterable[tuple[int, Iterable[int]]], constant: int = 0) -> "GbfPoly":
        """Return ``self`` with extra ``(coeff, z-indices)`` terms added."""
        return GbfPoly(self.q, self.n, self.m, self.monomials + tuple((c, tuple(i)) for c, i in terms),
                       self.constant + constant)


@dataclass(frozen=True)
class ZqArray:
    """An ``L1 x L2`` array of phase exponents in ``Z_q``."""

    values: np.ndarray = field(repr=False)
    q: int

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 2 or 0 in v.shape:
            raise ValueError(f"ZqArray needs a nonempty 2D array, got shape {v.shape}")
        if not np.issubdtype(v.dtype, np.integer):
            raise TypeError("ZqArray entries must be integers")
        if v.min() < 0 or v.max() >= self.q:
            raise ValueError(f"entries must lie in [0, {self.q})")
        v = v.astype(np.int64, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def __eq__(self, other):
        if not isinstance(other, ZqArray):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.q, self.values.shape, self.values.tobytes()))


def variable_arrays(n: int, m: int, cols: int | None = None) -> np.ndarray:
    """Indicator arrays of z_1..z_{n+m}, shape ``(n+m, 2**n, cols)``.

    Entry ``[l-1, g, i]`` is the value of ``z_l`` at row ``g``, column ``i``.
    """
    cols = 2**m if cols is None else cols
    g = np.arange(2**n, dtype=np.int64)[:, None]
    i = np.arange(cols, dtype=np.int64)[None, :]
    out = np.empty((n + m, 2**n, cols), dtype=np.int64)
    for h in range(n):
        out[h] = (g >> h) & 1
    for j in range(m):
        out[n + j] = (i >> j) & 1
    return out


def eval_gbf(f: GbfPoly, g: int, i: int) -> int:
    """Evaluate ``f`` at row ``g``, column ``i`` (LSB-first bit expansion)."""
    if not 0 <= g < 2**f.n:
        raise IndexError(f"row index {g} outside [0, {2**f.n})")
    if not 0 <= i < 2**f.m:
        raise IndexError(f"column index {i} outside [0, {2**f.m})")
    bits = [(g >> h) & 1 for h in range(f.n)] + [(i >> j) & 1 for j in range(f.m)]
    total = f.constant
    for coeff, idx in f.monomials:
        if all(bits[l - 1] for l in idx):
            total += coeff
    return total % f.q


def build_array(f: GbfPoly, cols: int | None = None) -> ZqArray:
    """Materialize ``f`` as its ``2**n x 2**m`` array.

    ``cols`` evaluates only the first ``cols`` columns; the result equals
    ``truncate(build_array(f), cols)``.
    """
    cols = 2**f.m if cols is None else cols
    if not 0 < cols <= 2**f.m:
        raise ValueError(f"cols must be in (0, {2**f.m}]")
    z = variable_arrays(f.n, f.m, cols)
    acc = np.full((2**f.n, cols), f.constant, dtype=np.int64)
    for coeff, idx in f.monomials:
        term = np.ones_like(acc)
        for l in idx:
            term &= z[l - 1]
        acc += coeff * term
    return ZqArray(acc % f.q, f.q)


def truncate(a: ZqArray, length: int) -> ZqArray:
    """Keep the first ``length`` columns."""
    if not 0 < length <= a.shape[1]:
        raise ValueError(f"truncation length {length} outside (0, {a.shape[1]}]")
    return ZqArray(a.values[:, :length], a.q)


def root_table(q: int) -> np.ndarray:
    """``xi**a`` for ``a in Z_q`` with ``xi = exp(2j*pi/q)``; quarter turns are exact."""
    a = np.arange(q)
    roots = np.exp(2j * np.pi * a / q)
    exact = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}
    for k in range(q):
        if (4 * k) % q == 0:
            roots[k] = exact[(4 * k) // q]
    return roots


def to_unimodular(a: ZqArray | np.ndarray, q: int | None = None) -> np.ndarray:
    """Map exponents to unit-modulus complex entries ``xi**a``."""
    if isinstance(a, ZqArray):
        values, q = a.values, a.q
    else:
        if q is None:
            raise ValueError("q is required for a bare exponent array")
        values = np.asarray(a, dtype=np.int64) % q
    return root_table(q)[values]


# --- text format -----------------------------------------------------------

_VAR = re.compile(r"^([xyz])(\d+)$")


def parse_gbf(text: str, q: int, n: int, m: int) -> GbfPoly:
    """Parse ``"3*z5*z4 + z2*z3 + 2*z2"`` or the x/y spelling into a GbfPoly.

    Terms are joined by ``+``; each is an optional integer coefficient followed
    by ``*``-separated variables (``z<l>``, ``x<j>``, ``y<h>``).  A bare integer
    is a constant.  Coefficients are reduced mod ``q``.
    """
    terms = []
    const = 0
    for raw in text.replace(" ", "").split("+"):
        if not raw:
            raise ValueError(f"empty term in {text!r}")
        coeff = 1
        idx = []
        for factor in raw.split("*"):
            if re.fullmatch(r"-?\d+", factor):
                coeff *= int(factor)
                continue
            mt = _VAR.match(factor)
            if not mt:
                raise ValueError(f"cannot parse factor {factor!r}")
            kind, num = mt.group(1), int(mt.group(2))
            if kind == "z":
                l = num
            elif kind == "y":
                if not 1 <= num <= n:
                    raise ValueError(f"y{num} outside y1..y{n}")
                l = num
            else:
                if not 1 <= num <= m:
                    raise ValueError(f"x{num} outside x1..x{m}")
                l = n + num
            idx.append(l)
        if idx:
            terms.append((coeff, tuple(idx)))
        else:
            const += coeff
    return GbfPoly(q, n, m, tuple(terms), const)


def format_gbf(f: GbfPoly, style: str = "z") -> str:
    def name(l: int) -> str:
        if style == "z":
            return f"z{l}"
        return f"y{l}" if l <= f.n else f"x{l - f.n}"

    parts = [f"{c}*" + "*".join(name(l) for l in idx) for c, idx in f.monomials]
    if f.constant or not parts:
        parts.append(str(f.constant))
    return " + ".join(parts)


def stack(arrays: Sequence[ZqArray]) -> np.ndarray:
    return np.stack([a.values for a in arrays])
