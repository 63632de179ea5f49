"""Flat square torus of period 2*pi with spectral operators.

Conventions (fixed throughout the package):

* ``z = x + i y`` and the Kaehler form is ``omega = dx ^ dy``, i.e. the flat
  metric ``g_{1 1bar} = 1/2`` with ``omega = (i/2) dz ^ dzbar``.
* Forms are stored by coefficient in the global frame: a (1,0)-form by its
  ``dz`` coefficient, a (0,1)-form by its ``dzbar`` coefficient and a
  (1,1)-form by its ``dz ^ dzbar`` coefficient, so ``dz ^ dzbar = -2i dx ^ dy``.
* Fields are numpy arrays whose two leading axes are the grid axes
  ``(x, y)``; any trailing axes (matrix indices) are carried along.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridMismatch, QuadratureWarning, SolvabilityViolation

logger = logging.getLogger(__name__)

PERIOD = 2.0 * np.pi
VOLUME = PERIOD**2


@dataclass(frozen=True)
class TorusGeometry:
    """Uniform ``N x N`` grid on the square torus ``[0, 2pi)^2``."""

    grid_size: int

    def __post_init__(self):
        n = self.grid_size
        if not isinstance(n, (int, np.integer)) or n < 8 or n % 2:
            raise ValueError(f"grid_size must be an even integer >= 8, got {n!r}")

    @property
    def period(self) -> float:
        return PERIOD

    @property
    def volume(self) -> float:
        return VOLUME

    @property
    def spacing(self) -> float:
        return PERIOD / self.grid_size

    @cached_property
    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Grid coordinates ``(x, y)`` with ``indexing='ij'``."""
        t = np.arange(self.grid_size) * self.spacing
        return np.meshgrid(t, t, indexing="ij")

    @cached_property
    def _wavenumbers(self) -> tuple[np.ndarray, np.ndarray]:
        k = np.fft.fftfreq(self.grid_size, d=1.0 / self.grid_size)
        return k[:, None], k[None, :]

    @cached_property
    def _first_symbols(self) -> tuple[np.ndarray, np.ndarray]:
        # Nyquist mode dropped so derivatives of real data stay real.
        kx, ky = self._wavenumbers
        nyq = self.grid_size // 2
        kx = np.where(np.abs(kx) == nyq, 0.0, kx)
        ky = np.where(np.abs(ky) == nyq, 0.0, ky)
        dz = 0.5 * (1j * kx - 1j * (1j * ky))
        dzbar = 0.5 * (1j * kx + 1j * (1j * ky))
        return dz, dzbar

    @cached_property
    def _box0_symbol(self) -> np.ndarray:
        kx, ky = self._wavenumbers
        return 0.5 * (kx**2 + ky**2)

    def check(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f)
        if f.ndim < 2 or f.shape[:2] != (self.grid_size, self.grid_size):
            raise GridMismatch(
                f"field of shape {f.shape} does not live on a "
                f"{self.grid_size}x{self.grid_size} grid"
            )
        return f

    def zeros(self, *trailing: int) -> np.ndarray:
        return np.zeros((self.grid_size, self.grid_size) + trailing, dtype=complex)


def _apply_symbol(f: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    extra = (1,) * (f.ndim - 2)
    fh = np.fft.fft2(f, axes=(0, 1))
    return np.fft.ifft2(fh * symbol.reshape(symbol.shape + extra), axes=(0, 1))


def d_prime(f, geom: TorusGeometry) -> np.ndarray:
    """``dz`` coefficient of ``d'f``, i.e. ``(1/2)(d/dx - i d/dy) f``."""
    f = geom.check(f)
    return _apply_symbol(f, geom._first_symbols[0])


def d_double_prime(f, geom: TorusGeometry) -> np.ndarray:
    """``dzbar`` coefficient of ``d''f``, i.e. ``(1/2)(d/dx + i d/dy) f``."""
    f = geom.check(f)
    return _apply_symbol(f, geom._first_symbols[1])


def lambda_contract(eta, geom: TorusGeometry) -> np.ndarray:
    """Contraction with omega of a (1,1)-form given by its ``dz ^ dzbar`` coefficient.

    Returns ``Lambda eta = -2i * eta``; the mean-curvature contraction
    ``i Lambda eta`` is therefore ``2 * eta``.
    """
    eta = geom.check(eta)
    return -2j * eta


def integrate(f, geom: TorusGeometry):
    """Integral of ``f`` against the volume form ``dx dy`` (trapezoid rule).

    Trailing axes are preserved, so a matrix field integrates entrywise.
    """
    f = geom.check(f)
    return f.sum(axis=(0, 1)) * (VOLUME / geom.grid_size**2)


def box0(u, geom: TorusGeometry) -> np.ndarray:
    """The Laplacian ``i Lambda d'' d'`` on functions, ``-2 d_z d_zbar u``.

    On the Fourier mode ``exp(i(kx + ly))`` it acts as multiplication by
    ``(k^2 + l^2) / 2``; it is nonnegative and annihilates constants.
    """
    u = geom.check(u)
    return _apply_symbol(u, geom._box0_symbol)


def solve_poisson(rhs, geom: TorusGeometry, solvability_tol: float = 1e-8) -> np.ndarray:
    """Mean-zero solution of ``box0(u) = rhs``.

    Raises
    ------
    SolvabilityViolation
        If ``|mean(rhs)|`` exceeds ``solvability_tol * max|rhs|``; such a
        right-hand side is not orthogonal to the constants.
    """
    rhs = geom.check(rhs)
    mean = rhs.mean(axis=(0, 1))
    scale = np.max(np.abs(rhs)) if rhs.size else 0.0
    if np.any(np.abs(mean) > solvability_tol * scale):
        raise SolvabilityViolation(
            f"right-hand side has mean {np.max(np.abs(mean)):.3e} "
            f"(tolerance {solvability_tol * scale:.3e})"
        )
    if scale:
        logger.debug("solve_poisson: removed mean %.3e", np.max(np.abs(mean)))
    symbol = geom._box0_symbol
    inverse = np.zeros_like(symbol)
    np.divide(1.0, symbol, out=inverse, where=symbol != 0)
    return _apply_symbol(rhs - mean, inverse)


def p1_gamma1_integral(radial_cutoff: float = 1e4, radial_nodes: int = 4096) -> float:
    """First Chern form of the tautological line bundle integrated over a disc chart of P^1.

    With the metric ``1 + |z|^2`` in the chart ``z = r exp(2 pi i t)``,
    ``gamma_1 = -2r dr ^ dt / (1 + r^2)^2``.

    This integrates it over ``0 <= r <= R``, ``0 <= t <= 1``.
    The radial integral is done by composite Simpson after the substitution
    ``r = tan(theta)``, which turns the integrand into ``-sin(2 theta)``.
    The exact value is ``-R^2 / (1 + R^2)``, tending to -1.
    """
    if radial_cutoff <= 0:
        raise ValueError("radial_cutoff must be positive")
    nodes = int(radial_nodes)
    if nodes < 2:
        raise ValueError("radial_nodes must be at least 2")
    nodes += nodes % 2

    def simpson(m):
        theta = np.linspace(0.0, np.arctan(radial_cutoff), m + 1)
        f = -np.sin(2.0 * theta)
        h = theta[1] - theta[0]
        return h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum())

    value = simpson(nodes)
    if nodes < 64 or abs(value - simpson(max(2, nodes // 2 + (nodes // 2) % 2))) > 1e-6:
        warnings.warn(
            f"P^1 quadrature with {nodes} nodes is not converged", QuadratureWarning
        )
    return float(value)
