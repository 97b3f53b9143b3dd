"""Non-omnidirectional comparison precoders: Zadoff-Chu outer products and random +-1."""
from __future__ import annotations

from math import gcd

import numpy as np

PRNG_NAME = "numpy.random.PCG64"


def zc_sequence(L: int, r: int = 1) -> np.ndarray:
    """Zadoff-Chu sequence of length ``L`` and root ``r``.

    ``exp(-1j*pi*r*u*(u+1)/L)`` for odd ``L``, ``exp(-1j*pi*r*u**2/L)`` for even ``L``.
    """
    if L < 1:
        raise ValueError("length must be positive")
    if gcd(r, L) != 1:
        raise ValueError(f"root {r} is not coprime to length {L}")
    u = np.arange(L, dtype=np.int64)
    # reduce the phase numerator mod 2L before the float multiply
    num = (r * (u * (u + 1) if L % 2 else u * u)) % (2 * L)
    return np.exp(-1j * np.pi * num / L)


def periodic_autocorrelation(x: np.ndarray, u: int) -> complex:
    x = np.asarray(x)
    return complex(np.sum(np.roll(x, -u) * np.conj(x)))


def zc_precoders(L1: int, L2: int, N: int, row_root: int = 1, col_root: int = 1) -> list[np.ndarray]:
    """Outer products of cyclically shifted ZC sequences.

    ``W_n = roll(c, n % L1) (x) roll(r, n // L1)`` with ``c`` the length-``L1``
    column sequence and ``r`` the length-``L2`` row sequence.  For ``N <= L1``
    only the column sequence is shifted.
    """
    if not 1 <= N <= L1 * L2:
        raise ValueError(f"N={N} must be in [1, L1*L2={L1 * L2}]")
    c = zc_sequence(L1, row_root)
    r = zc_sequence(L2, col_root)
    return [np.outer(np.roll(c, n % L1), np.roll(r, n // L1)) for n in range(N)]


def random_precoders(L1: int, L2: int, N: int, seed: int) -> list[np.ndarray]:
    """I.i.d. equiprobable +-1 matrices drawn from PCG64 seeded with ``seed``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    signs = 1 - 2 * rng.integers(0, 2, size=(N, L1, L2))
    return [s.astype(complex) for s in signs]
