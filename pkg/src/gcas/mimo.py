"""URA steering matrices and radiated-power patterns."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class UraGeometry:
    """``L1`` rows x ``L2`` columns; spacings are in the same unit as ``wavelength``."""

    L1: int
    L2: int
    dx: float = 0.5
    dy: float = 0.5
    wavelength: float = 1.0

    def __post_init__(self):
        if self.L1 < 1 or self.L2 < 1:
            raise ValueError("array dimensions must be positive")
        if self.dx <= 0 or self.dy <= 0 or self.wavelength <= 0:
            raise ValueError("spacings and wavelength must be positive")


@dataclass
class PatternGrid:
    phi: np.ndarray    # elevation samples
    theta: np.ndarray  # azimuth samples
    power: np.ndarray  # shape (len(phi), len(theta))


def _check_angles(phi, theta):
    phi, theta = np.asarray(phi, float), np.asarray(theta, float)
    eps = 1e-12
    if np.any(phi < -eps) or np.any(phi > np.pi / 2 + eps):
        raise ValueError("elevation must lie in [0, pi/2]")
    if np.any(theta < -eps) or np.any(theta > 2 * np.pi + eps):
        raise ValueError("azimuth must lie in [0, 2*pi]")
    return phi, theta


def steering_matrix(geom: UraGeometry, phi: float, theta: float) -> np.ndarray:
    """``A[g, i] = exp(-j 2 pi/lambda (g dy sin(phi) sin(theta) + i dx sin(phi) cos(theta)))``."""
    _check_angles(phi, theta)
    k = 2 * np.pi / geom.wavelength
    g = np.arange(geom.L1)[:, None]
    i = np.arange(geom.L2)[None, :]
    s = np.sin(phi)
    return np.exp(-1j * k * (g * geom.dy * s * np.sin(theta) + i * geom.dx * s * np.cos(theta)))


def _vec(a: np.ndarray) -> np.ndarray:
    # column stacking
    return np.asarray(a).reshape(-1, order="F")


def _check_dims(precoders, geom):
    for w in precoders:
        if np.shape(w) != (geom.L1, geom.L2):
            raise ValueError(f"precoder shape {np.shape(w)} does not match URA {geom.L1}x{geom.L2}")


def channel_gains(precoders: Sequence[np.ndarray], geom: UraGeometry, phi: float, theta: float) -> np.ndarray:
    """``h_n = vec(A)^T vec(W_n)`` (plain transpose, no conjugate)."""
    _check_dims(precoders, geom)
    a = _vec(steering_matrix(geom, phi, theta))
    return np.array([a @ _vec(w) for w in precoders])


def radiated_power(precoders: Sequence[np.ndarray], geom: UraGeometry, phi: float, theta: float) -> float:
    return float(np.sum(np.abs(channel_gains(precoders, geom, phi, theta)) ** 2))


def gains_batch(precoders: Sequence[np.ndarray], geom: UraGeometry, phi, theta) -> np.ndarray:
    """Channel gains for many directions at once, shape ``(len(phi), N)``.

    Uses the separable form ``A = a_row a_col^T`` so ``h_n = a_row^T W_n a_col``.
    """
    _check_dims(precoders, geom)
    phi, theta = _check_angles(np.atleast_1d(phi), np.atleast_1d(theta))
    k = 2 * np.pi / geom.wavelength
    s = np.sin(phi)
    a_row = np.exp(-1j * k * geom.dy * np.outer(s * np.sin(theta), np.arange(geom.L1)))
    a_col = np.exp(-1j * k * geom.dx * np.outer(s * np.cos(theta), np.arange(geom.L2)))
    W = np.stack([np.asarray(w, complex) for w in precoders])
    return np.einsum("pg,ngi,pi->pn", a_row, W, a_col)


def pattern_grid(precoders: Sequence[np.ndarray], geom: UraGeometry,
                 n_phi: int = 64, n_theta: int = 128) -> PatternGrid:
    """Radiated power on a uniform grid over phi in [0, pi/2] and theta in [0, 2 pi]."""
    if n_phi < 1 or n_theta < 1:
        raise ValueError("empty grid")
    phi = np.linspace(0, np.pi / 2, n_phi)
    theta = np.linspace(0, 2 * np.pi, n_theta)
    P, T = np.meshgrid(phi, theta, indexing="ij")
    h = gains_batch(precoders, geom, P.ravel(), T.ravel())
    power = np.sum(np.abs(h) ** 2, axis=1).reshape(P.shape)
    return PatternGrid(phi, theta, power)


def flatness(grid: PatternGrid) -> tuple[float, float]:
    """(max/min ratio, std/mean) of the pattern values."""
    E = np.asarray(grid.power, float)
    if E.size == 0:
        raise ValueError("empty grid")
    if E.min() <= 0:
        raise ValueError("pattern has a zero-power point; ratio undefined")
    return float(E.max() / E.min()), float(E.std() / E.mean())


def stacked_precoder(precoders: Sequence[np.ndarray]) -> np.ndarray:
    """``W = [vec(W_0), ..., vec(W_{N-1})]``, shape ``(L1*L2, N)``."""
    return np.stack([_vec(w) for w in precoders], axis=1)


def antenna_powers(precoders: Sequence[np.ndarray]) -> np.ndarray:
    """``diag(W W^H)``: average power per antenna for unit-power symbols."""
    W = stacked_precoder(precoders)
    return np.real(np.diag(W @ W.conj().T))
