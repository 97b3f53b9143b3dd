"""Aperiodic auto/cross-correlation and complementary-set checks.

Shift convention: ``rho(X, Y; u1, u2) = sum_{g,i} Y[g+u1, i+u2] * conj(X[g, i])``
over all index pairs that land inside both arrays.

Arrays whose real and imaginary parts are all integers (binary +-1, quaternary
{+-1, +-j}, or raw integer input) go through an int64 path, so their
correlation values are exact.  Everything else is summed in complex128.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "GcasReport",
    "aacf_2d",
    "aacf_1d",
    "correlation_surface",
    "correlation_surface_fft",
    "autocorrelation_sum",
    "verify_gcas",
    "verify_gcs",
    "gcp_mate_check",
]

DEFAULT_RTOL = 1e-9


def _as_2d(x) -> np.ndarray:
    a = np.asarray(x)
    if a.ndim == 1:
        a = a[None, :]
    if a.ndim != 2 or 0 in a.shape:
        raise ValueError(f"expected a nonempty 1D or 2D array, got shape {a.shape}")
    return a


def _integer_parts(a: np.ndarray):
    """(re, im) int64 arrays if every entry is a Gaussian integer, else None."""
    if np.issubdtype(a.dtype, np.integer):
        return a.astype(np.int64), np.zeros(a.shape, np.int64)
    if np.iscomplexobj(a):
        re, im = a.real, a.imag
    else:
        re, im = a.astype(float), np.zeros(a.shape)
    if np.all(np.isfinite(re)) and np.all(re == np.round(re)) and np.all(im == np.round(im)):
        if max(np.abs(re).max(), np.abs(im).max()) < 2**20:
            return re.astype(np.int64), im.astype(np.int64)
    return None


def _slices(L: int, u: int):
    # index ranges (for Y, for X) of the overlap at shift u
    if u >= 0:
        return slice(u, L), slice(0, L - u)
    return slice(0, L + u), slice(-u, L)


def aacf_2d(X, Y, u1: int, u2: int) -> complex:
    """2D aperiodic cross-correlation at a single shift, by direct summation.

    The four sign quadrants of (u1, u2) are written out separately.  With
    ``Y is X`` this is the autocorrelation.
    """
    X, Y = _as_2d(X), _as_2d(Y)
    if X.shape != Y.shape:
        raise ValueError(f"shape mismatch {X.shape} vs {Y.shape}")
    L1, L2 = X.shape
    if not (-L1 < u1 < L1 and -L2 < u2 < L2):
        raise ValueError(f"shift ({u1}, {u2}) outside ({-L1+1}..{L1-1}, {-L2+1}..{L2-1})")
    total = 0j
    if u1 >= 0 and u2 >= 0:
        for g in range(L1 - u1):
            for i in range(L2 - u2):
                total += Y[g + u1, i + u2] * np.conj(X[g, i])
    elif u1 >= 0 and u2 < 0:
        for g in range(L1 - u1):
            for i in range(-u2, L2):
                total += Y[g + u1, i + u2] * np.conj(X[g, i])
    elif u1 < 0 and u2 < 0:
        for g in range(-u1, L1):
            for i in range(-u2, L2):
                total += Y[g + u1, i + u2] * np.conj(X[g, i])
    else:
        for g in range(-u1, L1):
            for i in range(L2 - u2):
                total += Y[g + u1, i + u2] * np.conj(X[g, i])
    return complex(total)


def aacf_1d(x, u: int, y=None) -> complex:
    """1D aperiodic correlation ``sum_i y[i+u] conj(x[i])`` (auto when ``y`` is None)."""
    x = np.asarray(x).ravel()
    y = x if y is None else np.asarray(y).ravel()
    if x.shape != y.shape:
        raise ValueError("sequence length mismatch")
    L = len(x)
    if not -L < u < L:
        raise ValueError(f"shift {u} outside ({-L}, {L})")
    sy, sx = _slices(L, u)
    return complex(np.sum(y[sy] * np.conj(x[sx])))


def correlation_surface(X, Y=None) -> np.ndarray:
    """All shifts of ``rho(X, Y; .)`` by direct summation.

    Returns a ``(2*L1-1, 2*L2-1)`` array indexed ``[u1 + L1 - 1, u2 + L2 - 1]``.
    Integer dtype when the inputs are Gaussian integers with zero imaginary part,
    complex otherwise.  Leading axes are summed: passing ``(N, L1, L2)`` stacks
    gives the sum of the N correlation surfaces.
    """
    X = np.asarray(X)
    Y = X if Y is None else np.asarray(Y)
    if X.ndim == 1:
        X, Y = X[None, :], Y[None, :]
    if X.shape != Y.shape:
        raise ValueError(f"shape mismatch {X.shape} vs {Y.shape}")
    if X.ndim == 2:
        X, Y = X[None], Y[None]
    L1, L2 = X.shape[-2:]
    px, py = _integer_parts(X), _integer_parts(Y)
    exact = px is not None and py is not None
    if exact:
        xr, xi = px
        yr, yi = py
        real_only = not xi.any() and not yi.any()
        out = np.zeros((2 * L1 - 1, 2 * L2 - 1), dtype=np.int64 if real_only else complex)
    else:
        Xc, Yc = np.conj(X.astype(complex)), Y.astype(complex)
        out = np.zeros((2 * L1 - 1, 2 * L2 - 1), dtype=complex)
    for u1 in range(-L1 + 1, L1):
        sy1, sx1 = _slices(L1, u1)
        for u2 in range(-L2 + 1, L2):
            sy2, sx2 = _slices(L2, u2)
            if exact:
                a_r, a_i = yr[:, sy1, sy2], yi[:, sy1, sy2]
                b_r, b_i = xr[:, sx1, sx2], xi[:, sx1, sx2]
                re = int(np.sum(a_r * b_r) + np.sum(a_i * b_i))
                if real_only:
                    out[u1 + L1 - 1, u2 + L2 - 1] = re
                else:
                    im = int(np.sum(a_i * b_r) - np.sum(a_r * b_i))
                    out[u1 + L1 - 1, u2 + L2 - 1] = complex(re, im)
            else:
                out[u1 + L1 - 1, u2 + L2 - 1] = np.sum(Yc[:, sy1, sy2] * Xc[:, sx1, sx2])
    return out


def correlation_surface_fft(X, Y=None) -> np.ndarray:
    """Same layout as :func:`correlation_surface`, via zero-padded 2D FFTs."""
    X = np.asarray(X, dtype=complex)
    Y = X if Y is None else np.asarray(Y, dtype=complex)
    if X.ndim == 1:
        X, Y = X[None, :], Y[None, :]
    if X.shape != Y.shape:
        raise ValueError(f"shape mismatch {X.shape} vs {Y.shape}")
    if X.ndim == 2:
        X, Y = X[None], Y[None]
    L1, L2 = X.shape[-2:]
    P = (2 * L1 - 1, 2 * L2 - 1)
    prod = np.fft.fft2(Y, s=P) * np.conj(np.fft.fft2(X, s=P))
    circ = np.fft.ifft2(prod.sum(axis=0))
    # lag u sits at index u mod P; move lag -(L-1) to index 0
    return np.roll(circ, (L1 - 1, L2 - 1), axis=(0, 1))


def autocorrelation_sum(arrays: Sequence, method: str = "direct") -> np.ndarray:
    stacked = np.stack([_as_2d(a) for a in arrays])
    if method == "direct":
        return correlation_surface(stacked)
    if method == "fft":
        return correlation_surface_fft(stacked)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class GcasReport:
    is_gcas: bool
    peak: complex
    max_offside: float
    offending_shift: tuple[int, int] | None
    n_arrays: int
    shape: tuple[int, int]
    exact: bool
    tolerance: float

    def to_dict(self) -> dict:
        d = asdict(self)
        p = complex(self.peak)
        d["peak"] = p.real if p.imag == 0 else [p.real, p.imag]
        d["offending_shift"] = list(self.offending_shift) if self.offending_shift else None
        d["shape"] = list(self.shape)
        return d


def verify_gcas(arrays: Sequence, tolerance: float | None = None, method: str = "direct") -> GcasReport:
    """Check the zero autocorrelation-sum property of an array set.

    ``tolerance`` bounds both ``max |sum rho|`` over nonzero shifts and
    ``|peak - N*L1*L2|``.  Defaults: 0 on the exact integer path, otherwise
    ``1e-9 * N * L1 * L2``.
    """
    if len(arrays) == 0:
        raise ValueError("empty array set")
    mats = [_as_2d(a) for a in arrays]
    shape = mats[0].shape
    if any(a.shape != shape for a in mats):
        raise ValueError("all arrays in the set must share dimensions")
    N = len(mats)
    L1, L2 = shape
    stacked = np.stack(mats)
    exact = method == "direct" and _integer_parts(stacked) is not None
    surf = autocorrelation_sum(mats, method=method)
    target = N * L1 * L2
    if tolerance is None:
        tolerance = 0.0 if exact else DEFAULT_RTOL * target
    centre = (L1 - 1, L2 - 1)
    peak = surf[centre]
    mag = np.abs(surf).astype(float)
    mag[centre] = -1.0
    flat = int(np.argmax(mag))
    worst = float(mag.flat[flat])
    if worst < 0:  # 1x1 arrays have no off-peak shifts
        worst, shift = 0.0, None
    else:
        r, c = np.unravel_index(flat, mag.shape)
        shift = (int(r) - L1 + 1, int(c) - L2 + 1)
    ok = worst <= tolerance and abs(peak - target) <= tolerance
    peak_val = complex(peak)
    return GcasReport(bool(ok), peak_val if peak_val.imag else peak_val.real, worst,
                      shift if worst > 0 else None,
                      N, (L1, L2), bool(exact), float(tolerance))


def verify_gcs(seqs: Sequence, tolerance: float | None = None, method: str = "direct") -> GcasReport:
    """1D version of :func:`verify_gcas` (sequences are 1 x L arrays)."""
    return verify_gcas([np.asarray(s).reshape(1, -1) for s in seqs], tolerance, method)


def gcp_mate_check(pair_a: Sequence, pair_b: Sequence, tolerance: float | None = None) -> bool:
    """True iff ``rho(A0, B0; u) + rho(A1, B1; u) = 0`` for every shift ``u``.

    Both inputs must themselves be Golay complementary pairs.
    """
    if len(pair_a) != 2 or len(pair_b) != 2:
        raise ValueError("each argument must be a pair of sequences")
    seqs = [np.asarray(s).ravel() for s in (*pair_a, *pair_b)]
    if len({len(s) for s in seqs}) != 1:
        raise ValueError("all four sequences must have equal length")
    for name, pair in (("first", pair_a), ("second", pair_b)):
        if not verify_gcs(pair, tolerance).is_gcas:
            raise ValueError(f"{name} pair is not a Golay complementary pair")
    a0, a1, b0, b1 = seqs
    s = correlation_surface(a0, b0) + correlation_surface(a1, b1)
    exact = all(_integer_parts(x[None, :]) is not None for x in seqs)
    if tolerance is None:
        tolerance = 0.0 if exact else DEFAULT_RTOL * 2 * len(a0)
    return bool(np.abs(s).max() <= tolerance)
