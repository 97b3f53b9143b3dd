"""Orthogonal real STBCs, ML decoding and Monte-Carlo BER over a LOS URA channel.

SNR convention
--------------
Precoders are scaled by ``1/sqrt(L1*L2)`` so every unimodular set radiates
the same total power and a GCAS gives ``sum_n |h_n|^2 = N`` in every
direction.  One block carries N BPSK bits over N slots with received energy
``|s|^2 * sum|h|^2``; the reference energy per bit is therefore ``Eb = N`` and
complex noise has variance ``N0 = N / (Eb/N0)``.  Under this convention a GCAS
link reduces to BPSK over AWGN: ``BER = Q(sqrt(2 Eb/N0))``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import erfc

from .baselines import PRNG_NAME
from .mimo import UraGeometry, gains_batch


def stbc4(s: Sequence[float]) -> np.ndarray:
    s0, s1, s2, s3 = s
    return np.array([
        [s0, -s1, -s2, -s3],
        [s1, s0, s3, -s2],
        [s2, -s3, s0, s1],
        [s3, s2, -s1, s0],
    ], dtype=float)


def stbc8(s: Sequence[float]) -> np.ndarray:
    s0, s1, s2, s3, s4, s5, s6, s7 = s
    return np.array([
        [s0, s1, s2, s3, s4, s5, s6, s7],
        [-s1, s0, s3, -s2, s5, -s4, -s7, s6],
        [-s2, -s3, s0, s1, s6, s7, -s4, -s5],
        [-s3, s2, -s1, s0, s7, -s6, s5, -s4],
        [-s4, -s5, -s6, -s7, s0, s1, s2, s3],
        [-s5, s4, -s7, s6, -s1, s0, -s3, s2],
        [-s6, s7, s4, -s5, -s2, s3, s0, -s1],
        # the only sign pattern on this row that keeps S^T S = (sum s^2) I
        [-s7, -s6, s5, s4, -s3, -s2, s1, s0],
    ], dtype=float)


STBCS = {4: stbc4, 8: stbc8}


@dataclass(frozen=True)
class Stbc:
    N: int
    M: int
    basis: np.ndarray  # (N symbols, N streams, M slots); S(s) = sum_i s_i basis[i]

    def encode(self, s) -> np.ndarray:
        return np.tensordot(np.asarray(s, float), self.basis, axes=1)


def get_stbc(N: int) -> Stbc:
    if N not in STBCS:
        raise ValueError(f"no built-in real orthogonal STBC for N={N}")
    gen = STBCS[N]
    basis = np.stack([gen(np.eye(N)[i]) for i in range(N)])
    return Stbc(N, basis.shape[2], basis)


def bits_to_symbols(bits):
    return 1.0 - 2.0 * np.asarray(bits)


def hypotheses(stbc: Stbc) -> tuple[np.ndarray, np.ndarray]:
    """All 2**N bit vectors (row j has bit n = (j >> n) & 1) and their codewords."""
    j = np.arange(2**stbc.N)
    bits = (j[:, None] >> np.arange(stbc.N)) & 1
    code = np.einsum("ki,inm->knm", bits_to_symbols(bits), stbc.basis)
    return bits, code


def received(h: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Noiseless ``y(t) = sum_n h_n S[n, t]``."""
    return np.asarray(h) @ S


def ml_decode(y: np.ndarray, h: np.ndarray, stbc: Stbc, _hyp=None) -> np.ndarray:
    """Exhaustive ML over all BPSK symbol vectors; ties go to the lowest index.

    ``y`` and ``h`` may carry a leading batch axis.
    """
    bits, code = _hyp if _hyp is not None else hypotheses(stbc)
    y = np.asarray(y)
    h = np.asarray(h)
    single = y.ndim == 1
    y, h = np.atleast_2d(y), np.atleast_2d(h)
    cand = np.einsum("bn,knm->bkm", h, code)
    dist = np.sum(np.abs(y[:, None, :] - cand) ** 2, axis=2)
    # argmin returns the first minimum, i.e. the lowest hypothesis index
    best = np.argmin(dist, axis=1)
    out = bits[best]
    return out[0] if single else out


def linear_decode(y: np.ndarray, h: np.ndarray, stbc: Stbc) -> np.ndarray:
    """Per-symbol decision ``sign(Re((B_i^T h)^H y))``; ML-equivalent for orthogonal codes."""
    y, h = np.atleast_2d(y), np.atleast_2d(h)
    c = np.einsum("inm,bn->bim", stbc.basis, h)
    stat = np.real(np.einsum("bim,bm->bi", c.conj(), y))
    return (stat < 0).astype(int)


def ber_awgn_bpsk(ebn0_db) -> np.ndarray:
    g = 10 ** (np.asarray(ebn0_db, float) / 10)
    return 0.5 * erfc(np.sqrt(g))


# --- Monte Carlo -----------------------------------------------------------

@dataclass
class SimConfig:
    geometry: UraGeometry
    schemes: dict[str, list[np.ndarray]]
    ebn0_db: list[float]
    max_bits: int = 10**5
    max_errors: int = 200
    seed: int = 0
    angles: list[tuple[float, float]] | None = None  # None: phi~U[0,pi/2], theta~U[0,2pi]
    trials_per_chunk: int = 2048
    threads: int = 1

    def __post_init__(self):
        if self.max_bits <= 0 or self.max_errors <= 0 or self.trials_per_chunk <= 0:
            raise ValueError("counts must be positive")
        sizes = {len(p) for p in self.schemes.values()}
        if len(sizes) != 1:
            raise ValueError("all schemes must have the same number of precoders")
        (N,) = sizes
        get_stbc(N)
        for name, pre in self.schemes.items():
            for w in pre:
                if np.shape(w) != (self.geometry.L1, self.geometry.L2):
                    raise ValueError(f"scheme {name!r}: precoder shape {np.shape(w)} != URA shape")

    @property
    def N(self) -> int:
        return len(next(iter(self.schemes.values())))

    def describe(self) -> dict:
        g = self.geometry
        return {
            "geometry": {"L1": g.L1, "L2": g.L2, "dx": g.dx, "dy": g.dy, "wavelength": g.wavelength},
            "schemes": sorted(self.schemes), "N": self.N, "ebn0_db": list(self.ebn0_db),
            "max_bits": self.max_bits, "max_errors": self.max_errors, "seed": self.seed,
            "prng": PRNG_NAME, "angles": "uniform" if self.angles is None else [list(a) for a in self.angles],
            "trials_per_chunk": self.trials_per_chunk,
            "snr_convention": "Eb/N0 with precoders scaled by 1/sqrt(L1*L2); Eb = N (GCAS received energy per bit)",
        }


@dataclass
class BerCurve:
    ebn0_db: list[float]
    errors: list[int] = field(default_factory=list)
    bits: list[int] = field(default_factory=list)

    @property
    def ber(self) -> list[float]:
        return [e / b for e, b in zip(self.errors, self.bits)]

    @property
    def ci95(self) -> list[float]:
        return [1.96 * np.sqrt(max(p * (1 - p), 0.0) / b) for p, b in zip(self.ber, self.bits)]


def _chunk_rng(seed: int, key: tuple[int, ...]) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def _run_chunk(cfg: SimConfig, stbc: Stbc, hyp, precoders, snr_idx: int, key: tuple[int, ...],
               angle: tuple[float, float] | None) -> tuple[int, int]:
    rng = _chunk_rng(cfg.seed, key)
    T, N = cfg.trials_per_chunk, stbc.N
    if angle is None:
        phi = rng.uniform(0, np.pi / 2, T)
        theta = rng.uniform(0, 2 * np.pi, T)
    else:
        phi = np.full(T, angle[0])
        theta = np.full(T, angle[1])
    bits = rng.integers(0, 2, size=(T, N))
    noise = rng.standard_normal((T, stbc.M)) + 1j * rng.standard_normal((T, stbc.M))
    g = cfg.geometry
    h = gains_batch(precoders, g, phi, theta) / np.sqrt(g.L1 * g.L2)
    S = np.einsum("ti,inm->tnm", bits_to_symbols(bits), stbc.basis)
    n0 = N / 10 ** (cfg.ebn0_db[snr_idx] / 10)
    y = np.einsum("tn,tnm->tm", h, S) + np.sqrt(n0 / 2) * noise
    dec = ml_decode(y, h, stbc, hyp)
    return int(np.sum(dec != bits)), T * N


def _simulate_point(cfg, stbc, hyp, precoders, snr_idx, pool, angle=None, angle_idx=None) -> tuple[int, int]:
    errors = bits = 0
    chunk = 0
    width = max(cfg.threads, 1)

    def key(c):
        return (snr_idx, c) if angle_idx is None else (snr_idx, c, angle_idx + 1)

    while bits < cfg.max_bits and errors < cfg.max_errors:
        ids = range(chunk, chunk + width)
        job = lambda c: _run_chunk(cfg, stbc, hyp, precoders, snr_idx, key(c), angle)
        results = [job(c) for c in ids] if pool is None else list(pool.map(job, ids))
        # accumulate in chunk order so the stopping point is independent of `threads`
        for e, b in results:
            if bits >= cfg.max_bits or errors >= cfg.max_errors:
                break
            errors += e
            bits += b
        chunk += width
    return errors, bits


def simulate_ber(cfg: SimConfig) -> dict[str, BerCurve]:
    """BER curve per scheme.

    Every (SNR index, chunk index) pair owns a PCG64 substream, shared by all
    schemes (common random numbers), so results depend only on the config and
    not on ``threads``.  Each point stops once ``max_bits`` bits or
    ``max_errors`` errors are reached.  With ``cfg.angles`` set, every listed
    direction is simulated under its own budget and the counts are pooled.
    """
    stbc = get_stbc(cfg.N)
    hyp = hypotheses(stbc)
    out = {}
    pool = ThreadPoolExecutor(cfg.threads) if cfg.threads > 1 else None
    try:
        for name, pre in cfg.schemes.items():
            curve = BerCurve(list(cfg.ebn0_db))
            for si in range(len(cfg.ebn0_db)):
                if cfg.angles is None:
                    e, b = _simulate_point(cfg, stbc, hyp, pre, si, pool)
                else:
                    counts = [_simulate_point(cfg, stbc, hyp, pre, si, pool, a, ai)
                              for ai, a in enumerate(cfg.angles)]
                    e, b = map(sum, zip(*counts))
                curve.errors.append(int(e))
                curve.bits.append(int(b))
            out[name] = curve
    finally:
        if pool is not None:
            pool.shutdown()
    return out


def conditional_ber(cfg: SimConfig, precoders, angles, snr_idx: int = 0) -> list[tuple[int, int]]:
    """(errors, bits) at each fixed direction for one SNR point, independent streams per direction."""
    stbc = get_stbc(len(precoders))
    hyp = hypotheses(stbc)
    return [_simulate_point(cfg, stbc, hyp, precoders, snr_idx, None, a, ai) for ai, a in enumerate(angles)]


def snr_at_ber(ebn0_db: Sequence[float], ber: Sequence[float], target: float) -> float:
    """Eb/N0 where the curve crosses ``target`` (log-linear interpolation)."""
    x = np.asarray(ebn0_db, float)
    y = np.log10(np.clip(np.asarray(ber, float), 1e-300, None))
    t = np.log10(target)
    for a in range(len(x) - 1):
        if (y[a] - t) * (y[a + 1] - t) <= 0 and y[a] != y[a + 1]:
            return float(x[a] + (t - y[a]) * (x[a + 1] - x[a]) / (y[a + 1] - y[a]))
    return float("nan")
