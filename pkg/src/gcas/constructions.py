"""GCAS constructions from 2D generalized Boolean functions.

Three constructions are provided, each returning a :class:`GcasOutput`:

* :func:`th1_construct` - quadratic path over z_{pi(1)}..z_{pi(m+n-k)}, cosets on
  z_{m+n-k+1}..z_{m+n} and z_{pi(1)}.
* :func:`th2_construct` - separate x and y chains bridged by x_{pi1(m)} y_{pi2(n)},
  plus mu-weighted x_{pi1(l)} x_{pi1(m)} terms, under conditions C1-C3.
* :func:`lemma3_construct` - the four-member special case of the second
  construction with length 2^(m-1) + 2^v.

Member ordering: member ``j`` uses ``lambda_alpha = (j >> (alpha-1)) & 1``, i.e.
``lambda_1`` is the least significant bit and member 0 is the base array.
Permutations are 1-based tuples (``pi[0]`` is pi(1)).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .correlation import GcasReport, verify_gcas
from .gbf import GbfPoly, ZqArray, build_array, to_unimodular

__all__ = [
    "Th1Params",
    "Th2Params",
    "Lemma3Params",
    "Violation",
    "ParameterError",
    "GcasOutput",
    "validate_params",
    "th1_length",
    "th2_length",
    "th1_gbf",
    "th2_gbf",
    "lemma3_gbf",
    "th1_construct",
    "th2_construct",
    "lemma3_construct",
    "lemma3_as_th2",
    "decompose_length",
    "th1_for_length",
    "random_th1_params",
    "random_th2_params",
    "random_lemma3_params",
]


@dataclass(frozen=True)
class Violation:
    name: str
    detail: str

    def __str__(self):
        sep = " " if self.detail.startswith("at ") else ": "
        return f"{self.name} violated{sep}{self.detail}"


class ParameterError(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class Th1Params:
    """Parameters of the z-path construction.

    ``p`` holds p_0..p_{m+n} (length m+n+1; zeros when omitted) and ``d`` holds
    d_0..d_{k-1} (all ones when omitted, the longest truncation).
    """

    q: int
    n: int
    m: int
    k: int
    v: int
    pi: tuple[int, ...]
    p: tuple[int, ...] = ()
    d: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pi", tuple(int(x) for x in self.pi))
        object.__setattr__(self, "p", tuple(int(x) for x in self.p) or (0,) * (self.m + self.n + 1))
        object.__setattr__(self, "d", tuple(int(x) for x in self.d) or (1,) * self.k)


@dataclass(frozen=True)
class Th2Params:
    """Parameters of the x/y-chain construction.

    ``mu`` is mu_1..mu_{m-k}; ``p`` is p_0..p_m (p_0 is the constant);
    ``kappa`` is kappa_1..kappa_n; ``d`` is d_0..d_{k-1} (all ones when omitted).
    """

    q: int
    n: int
    m: int
    k: int
    v: int
    pi1: tuple[int, ...]
    pi2: tuple[int, ...]
    mu: tuple[int, ...] = ()
    p: tuple[int, ...] = ()
    kappa: tuple[int, ...] = ()
    d: tuple[int, ...] = ()

    def __post_init__(self):
        fix = lambda name, default: object.__setattr__(
            self, name, tuple(int(x) for x in getattr(self, name)) or default)
        fix("pi1", ())
        fix("pi2", ())
        fix("mu", (0,) * max(self.m - self.k, 0))
        fix("p", (0,) * (self.m + 1))
        fix("kappa", (0,) * self.n)
        fix("d", (1,) * self.k)


@dataclass(frozen=True)
class Lemma3Params:
    """Four-member construction; ``pi1`` permutes 1..m-1."""

    q: int
    n: int
    m: int
    v: int
    pi1: tuple[int, ...]
    pi2: tuple[int, ...]
    p: tuple[int, ...] = ()
    kappa: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pi1", tuple(int(x) for x in self.pi1))
        object.__setattr__(self, "pi2", tuple(int(x) for x in self.pi2))
        object.__setattr__(self, "p", tuple(int(x) for x in self.p) or (0,) * (self.m + 1))
        object.__setattr__(self, "kappa", tuple(int(x) for x in self.kappa) or (0,) * self.n)


@dataclass
class GcasOutput:
    arrays: list[ZqArray]
    params: Th1Params | Th2Params | Lemma3Params
    base: GbfPoly = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.arrays)

    @property
    def L1(self) -> int:
        return self.arrays[0].shape[0]

    @property
    def L2(self) -> int:
        return self.arrays[0].shape[1]

    @property
    def q(self) -> int:
        return self.arrays[0].q

    def unimodular(self) -> list[np.ndarray]:
        return [to_unimodular(a) for a in self.arrays]

    def verify(self, **kw) -> GcasReport:
        return verify_gcas(self.unimodular(), **kw)

    def manifest(self) -> dict:
        kind = {Th1Params: "th1", Th2Params: "th2", Lemma3Params: "lemma3"}[type(self.params)]
        return {"construction": kind, "params": asdict(self.params), "q": self.q,
                "N": self.N, "L1": self.L1, "L2": self.L2}


# --- validation ------------------------------------------------------------

def _check_common(q, n, m) -> list[Violation]:
    out = []
    if q < 2 or q % 2:
        out.append(Violation("q", f"q={q} must be even and >= 2"))
    if n < 2:
        out.append(Violation("n-bound", f"n={n} < 2"))
    if m < 2:
        out.append(Violation("m-bound", f"m={m} < 2"))
    return out


def _check_perm(name: str, perm, size: int) -> list[Violation]:
    if sorted(perm) != list(range(1, size + 1)):
        return [Violation(name, f"{tuple(perm)} is not a permutation of 1..{size}")]
    return []


def _check_len(name, seq, size) -> list[Violation]:
    if len(seq) != size:
        return [Violation(name, f"expected {size} values, got {len(seq)}")]
    return []


def _check_flags(d) -> list[Violation]:
    bad = [a for a, x in enumerate(d) if x not in (0, 1)]
    return [Violation("d-flags", f"d_{a}={d[a]} not in {{0,1}}") for a in bad]


def _validate_th1(P: Th1Params) -> list[Violation]:
    out = _check_common(P.q, P.n, P.m)
    if not 1 <= P.k < P.m:
        out.append(Violation("k-bound", f"k={P.k} must satisfy 1 <= k < m={P.m}"))
    if not 0 <= P.v <= P.m - P.k:
        out.append(Violation("v-bound", f"v={P.v} must satisfy 0 <= v <= m-k={P.m - P.k}"))
    if out:
        return out
    size = P.m + P.n - P.k
    out += _check_perm("pi", P.pi, size)
    out += _check_len("p", P.p, P.m + P.n + 1)
    out += _check_len("d-flags", P.d, P.k)
    out += _check_flags(P.d)
    if not out:
        head = set(P.pi[: P.v + P.n])
        want = set(range(1, P.v + P.n + 1))
        if head != want:
            out.append(Violation("pi-prefix", f"{{pi(1..{P.v + P.n})}}={sorted(head)} != {sorted(want)}"))
    return out


def _conditions_th2(m: int, k: int, v: int, pi1: Sequence[int]) -> list[Violation]:
    P = lambda l: pi1[l - 1]
    out = []
    if v > 0 and set(pi1[:v]) != set(range(1, v + 1)):
        out.append(Violation("C1", f"{{pi1(1..{v})}}={sorted(pi1[:v])} != 1..{v}"))
    if P(m) != m:
        out.append(Violation("C2", f"pi1(m)={P(m)} but must equal m={m}"))
    for a in range(1, k):
        if not P(m - k + a) < P(m - k + a + 1):
            out.append(Violation("C2", f"at alpha={a}: pi1({m-k+a})={P(m-k+a)} >= pi1({m-k+a+1})={P(m-k+a+1)}"))
    for a in range(1, k):
        for b in range(2, m - k + 1):
            if P(b) < P(m - k + a) and not P(b - 1) < P(m - k + a):
                out.append(Violation("C3", f"at alpha={a}, beta={b}: pi1({b})={P(b)} < pi1({m-k+a})={P(m-k+a)} "
                                           f"but pi1({b-1})={P(b-1)} is not"))
    return out


def _validate_th2(P: Th2Params) -> list[Violation]:
    out = _check_common(P.q, P.n, P.m)
    if not 1 <= P.k < P.m:
        out.append(Violation("k-bound", f"k={P.k} must satisfy 1 <= k < m={P.m}"))
    if not 0 <= P.v <= P.m - P.k:
        out.append(Violation("v-bound", f"v={P.v} must satisfy 0 <= v <= m-k={P.m - P.k}"))
    if out:
        return out
    out += _check_perm("pi1", P.pi1, P.m)
    out += _check_perm("pi2", P.pi2, P.n)
    out += _check_len("mu", P.mu, P.m - P.k)
    out += _check_len("p", P.p, P.m + 1)
    out += _check_len("kappa", P.kappa, P.n)
    out += _check_len("d-flags", P.d, P.k)
    out += _check_flags(P.d)
    if not out:
        out += _conditions_th2(P.m, P.k, P.v, P.pi1)
    return out


def _validate_lemma3(P: Lemma3Params) -> list[Violation]:
    out = _check_common(P.q, P.n, P.m)
    if not 0 <= P.v < P.m - 1:
        out.append(Violation("v-bound", f"v={P.v} must satisfy 0 <= v < m-1={P.m - 1}"))
    if out:
        return out
    out += _check_perm("pi1", P.pi1, P.m - 1)
    out += _check_perm("pi2", P.pi2, P.n)
    out += _check_len("p", P.p, P.m + 1)
    out += _check_len("kappa", P.kappa, P.n)
    # without C1 the truncated set is generally not complementary
    if not out and P.v > 0 and set(P.pi1[: P.v]) != set(range(1, P.v + 1)):
        out.append(Violation("C1", f"{{pi1(1..{P.v})}}={sorted(P.pi1[:P.v])} != 1..{P.v}"))
    return out


def validate_params(params) -> list[Violation]:
    """Every violated constraint, with the indices witnessing it.  Empty means ok."""
    if isinstance(params, Th1Params):
        return _validate_th1(params)
    if isinstance(params, Th2Params):
        return _validate_th2(params)
    if isinstance(params, Lemma3Params):
        return _validate_lemma3(params)
    raise TypeError(f"unsupported parameter type {type(params).__name__}")


def _require_valid(params):
    bad = validate_params(params)
    if bad:
        raise ParameterError(bad)


# --- lengths ---------------------------------------------------------------

def th1_length(params: Th1Params) -> int:
    m, k, v, d = params.m, params.k, params.v, params.d
    return 2 ** (m - 1) + sum(d[a] * 2 ** (m - k + a - 1) for a in range(1, k)) + d[0] * 2**v


def th2_length(params: Th2Params) -> int:
    m, k, v, d, pi1 = params.m, params.k, params.v, params.d, params.pi1
    return 2 ** (m - 1) + sum(d[a] * 2 ** (pi1[m - k + a - 1] - 1) for a in range(1, k)) + d[0] * 2**v


# --- generating functions --------------------------------------------------

def th1_gbf(params: Th1Params) -> tuple[GbfPoly, list[tuple[int, ...]]]:
    """Base GBF and the coset variables (as z-index tuples) in lambda order."""
    q, n, m, k, pi = params.q, params.n, params.m, params.k, params.pi
    h = q // 2
    terms = [(h, (pi[l], pi[l + 1])) for l in range(len(pi) - 1)]
    terms += [(params.p[s], (s,)) for s in range(1, m + n + 1)]
    f = GbfPoly(q, n, m, tuple(terms), params.p[0])
    cosets = [(m + n - k + a,) for a in range(1, k + 1)] + [(pi[0],)]
    return f, cosets


def th2_gbf(params: Th2Params) -> tuple[GbfPoly, list[tuple[int, ...]]]:
    q, n, m, k = params.q, params.n, params.m, params.k
    h = q // 2
    x = lambda l: n + l
    y = lambda s: s
    P1 = lambda l: params.pi1[l - 1]
    P2 = lambda s: params.pi2[s - 1]
    terms = [(h, (x(P1(l)), x(P1(l + 1)))) for l in range(1, m - k)]
    terms += [(h, (y(P2(s)), y(P2(s + 1)))) for s in range(1, n)]
    terms.append((h, (x(P1(m)), y(P2(n)))))
    terms += [(params.mu[l - 1], (x(P1(l)), x(P1(m)))) for l in range(1, m - k + 1)]
    terms += [(params.p[l], (x(l),)) for l in range(1, m + 1)]
    terms += [(params.kappa[s - 1], (y(s),)) for s in range(1, n + 1)]
    f = GbfPoly(q, n, m, tuple(terms), params.p[0])
    cosets = [(x(P1(m - k + a)),) for a in range(1, k)] + [(y(P2(1)),), (x(P1(1)),)]
    return f, cosets


def lemma3_gbf(params: Lemma3Params) -> tuple[GbfPoly, list[tuple[int, ...]]]:
    q, n, m = params.q, params.n, params.m
    h = q // 2
    x = lambda l: n + l
    P1 = lambda l: params.pi1[l - 1]
    P2 = lambda s: params.pi2[s - 1]
    terms = [(h, (x(P1(a)), x(P1(a + 1)))) for a in range(1, m - 1)]
    terms += [(h, (P2(a), P2(a + 1))) for a in range(1, n)]
    terms += [(h, (x(P1(m - 1)), x(m))), (h, (x(m), P2(1)))]
    terms += [(params.p[l], (x(l),)) for l in range(1, m + 1)]
    terms += [(params.kappa[s - 1], (s,)) for s in range(1, n + 1)]
    f = GbfPoly(q, n, m, tuple(terms), params.p[0])
    # same lambda convention as th2 with k=1: lambda_1 -> y_{pi2(n)}, lambda_2 -> x_{pi1(1)}
    return f, [(P2(n),), (x(P1(1)),)]


def _cosets(f: GbfPoly, coset_vars: list[tuple[int, ...]], length: int) -> list[ZqArray]:
    h = f.q // 2
    members = []
    for j in range(2 ** len(coset_vars)):
        extra = [(h, var) for a, var in enumerate(coset_vars) if (j >> a) & 1]
        members.append(build_array(f.plus(extra), cols=length))
    return members


def th1_construct(params: Th1Params) -> GcasOutput:
    """``2**(k+1)`` arrays of size ``2**n x th1_length(params)``."""
    _require_valid(params)
    f, cos = th1_gbf(params)
    return GcasOutput(_cosets(f, cos, th1_length(params)), params, f)


def th2_construct(params: Th2Params) -> GcasOutput:
    _require_valid(params)
    f, cos = th2_gbf(params)
    return GcasOutput(_cosets(f, cos, th2_length(params)), params, f)


def lemma3_construct(params: Lemma3Params) -> GcasOutput:
    """Four arrays of size ``2**n x (2**(m-1) + 2**v)``."""
    _require_valid(params)
    f, cos = lemma3_gbf(params)
    return GcasOutput(_cosets(f, cos, 2 ** (params.m - 1) + 2**params.v), params, f)


def lemma3_as_th2(params: Lemma3Params) -> Th2Params:
    """The Th2Params whose output coincides with ``lemma3_construct(params)``.

    k = 1, pi1 extended with pi1(m) = m, pi2 reversed, mu_{m-1} = q/2, d_0 = 1.
    """
    m, n = params.m, params.n
    mu = [0] * (m - 1)
    mu[m - 2] = params.q // 2
    return Th2Params(params.q, n, m, 1, params.v, tuple(params.pi1) + (m,),
                     tuple(reversed(params.pi2)), tuple(mu), params.p, params.kappa, (1,))


# --- arbitrary lengths -----------------------------------------------------

def decompose_length(L: int, k: int | None = None) -> tuple[int, int, int, tuple[int, ...]]:
    """Split a target length into ``(m, k, v, d)`` for the z-path construction.

    ``m`` is the smallest integer with ``L <= 2**m``.  The excess
    ``r = L - 2**(m-1)`` is read most significant bit first: every set bit but
    the lowest becomes a d_alpha flag, the lowest becomes ``d_0 * 2**v``.  With
    ``k=None`` the smallest feasible ``k`` is chosen.  This is one valid
    decomposition; others may exist.
    """
    if L < 3:
        raise ValueError(f"length {L} too short: need m >= 2 and L > 2**(m-1)")
    m = int(L - 1).bit_length()
    r = L - 2 ** (m - 1)
    bits = [b for b in range(m) if (r >> b) & 1]
    v, upper = bits[0], bits[1:]
    k_min = 1 if not upper else m - upper[0]
    if k is None:
        k = k_min
    if not k_min <= k < m or v > m - k:
        raise ValueError(f"length {L} has no decomposition with k={k} (m={m}, v={v})")
    d = [1] + [0] * (k - 1)
    for b in upper:
        d[b - (m - k) + 1] = 1
    return m, k, v, tuple(d)


def th1_for_length(q: int, n: int, L: int, k: int | None = None, p=()) -> Th1Params:
    """Z-path parameters with identity permutation producing length ``L``."""
    m, k, v, d = decompose_length(L, k)
    return Th1Params(q, n, m, k, v, tuple(range(1, m + n - k + 1)), p, d)


# --- random parameter tuples (property tests, sweeps) ----------------------

def _shuffled(rng: random.Random, xs) -> list[int]:
    xs = list(xs)
    rng.shuffle(xs)
    return xs


def random_th1_params(rng: random.Random, q: int = 2, n_range=(2, 5), m_range=(2, 5)) -> Th1Params:
    n, m = rng.randint(*n_range), rng.randint(*m_range)
    k = rng.randint(1, m - 1)
    v = rng.randint(0, m - k)
    pi = _shuffled(rng, range(1, v + n + 1)) + _shuffled(rng, range(v + n + 1, m + n - k + 1))
    p = [rng.randrange(q) for _ in range(m + n + 1)]
    d = [rng.randint(0, 1) for _ in range(k)]
    return Th1Params(q, n, m, k, v, tuple(pi), tuple(p), tuple(d))


def random_th2_params(rng: random.Random, q: int = 2, n_range=(2, 5), m_range=(2, 5)) -> Th2Params:
    while True:
        n, m = rng.randint(*n_range), rng.randint(*m_range)
        k = rng.randint(1, m - 1)
        v = rng.randint(0, m - k)
        pi1 = _shuffled(rng, range(1, m)) + [m]
        if not _conditions_th2(m, k, v, pi1):
            break
    return Th2Params(q, n, m, k, v, tuple(pi1), tuple(_shuffled(rng, range(1, n + 1))),
                     tuple(rng.randrange(q) for _ in range(m - k)),
                     tuple(rng.randrange(q) for _ in range(m + 1)),
                     tuple(rng.randrange(q) for _ in range(n)),
                     tuple(rng.randint(0, 1) for _ in range(k)))


def random_lemma3_params(rng: random.Random, q: int = 2, n_range=(2, 5), m_range=(3, 5)) -> Lemma3Params:
    n, m = rng.randint(*n_range), rng.randint(*m_range)
    v = rng.randint(0, m - 2)
    pi1 = _shuffled(rng, range(1, v + 1)) + _shuffled(rng, range(v + 1, m))
    return Lemma3Params(q, n, m, v, tuple(pi1), tuple(_shuffled(rng, range(1, n + 1))),
                        tuple(rng.randrange(q) for _ in range(m + 1)),
                        tuple(rng.randrange(q) for _ in range(n)))


def all_th1_pi(n: int, m: int, k: int, v: int):
    """Every admissible permutation for the z-path construction (small sizes only)."""
    for head in itertools.permutations(range(1, v + n + 1)):
        for tail in itertools.permutations(range(v + n + 1, m + n - k + 1)):
            yield head + tail
