"""Band-limited random fields for property checks and seeded experiments."""
from __future__ import annotations

import numpy as np

from .geometry import TorusGeometry
from .matfield import HermitianMetric, hermitize, mat_exp_selfadjoint


def smooth_scalar(geom: TorusGeometry, rng: np.random.Generator, amplitude: float = 1.0,
                  modes: int = 2) -> np.ndarray:
    """Real trigonometric polynomial with wavenumbers ``|k|, |l| <= modes``."""
    x, y = geom.coords
    u = np.zeros_like(x)
    for k in range(-modes, modes + 1):
        for l in range(-modes, modes + 1):
            if k == l == 0:
                continue
            a, b = rng.normal(size=2) / (1 + k * k + l * l)
            u += a * np.cos(k * x + l * y) + b * np.sin(k * x + l * y)
    return amplitude * u / max(np.max(np.abs(u)), 1e-300)


def smooth_matrix(geom: TorusGeometry, rank: int, rng: np.random.Generator,
                  amplitude: float = 1.0, modes: int = 2) -> np.ndarray:
    """Complex matrix field with band-limited entries of sup-norm ``amplitude``."""
    out = np.empty((geom.grid_size, geom.grid_size, rank, rank), dtype=complex)
    for i in range(rank):
        for j in range(rank):
            out[..., i, j] = (smooth_scalar(geom, rng, 1.0, modes)
                              + 1j * smooth_scalar(geom, rng, 1.0, modes))
    return amplitude * out


def smooth_hermitian(geom: TorusGeometry, rank: int, rng: np.random.Generator,
                     amplitude: float = 1.0, modes: int = 2) -> np.ndarray:
    return hermitize(smooth_matrix(geom, rank, rng, amplitude, modes))


def random_metric(geom: TorusGeometry, rank: int, rng: np.random.Generator,
                  amplitude: float = 0.3, modes: int = 1,
                  base: HermitianMetric | None = None) -> HermitianMetric:
    """``base exp(X)`` for a smooth base-selfadjoint ``X``."""
    base = base or HermitianMetric.identity(geom, rank)
    X = np.linalg.solve(base.H, smooth_hermitian(geom, rank, rng, amplitude, modes))
    return mat_exp_selfadjoint(X, base, tol=1e-8)


def random_selfadjoint(h: HermitianMetric, geom: TorusGeometry, rng: np.random.Generator,
                       amplitude: float = 1.0, modes: int = 2) -> np.ndarray:
    """Smooth h-selfadjoint endomorphism field ``H^{-1} X`` with ``X`` Hermitian."""
    return np.linalg.solve(h.H, smooth_hermitian(geom, h.rank, rng, amplitude, modes))
