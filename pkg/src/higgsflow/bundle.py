"""Holomorphic structures on the trivial smooth bundle over the torus.

A holomorphic structure is ``dbar_E = dbar + alpha dzbar`` with ``alpha`` an
``(N, N, r, r)`` field.  On a curve there are no (0,2)-forms, so every such
operator is integrable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .geometry import TorusGeometry, d_double_prime, d_prime, integrate
from .matfield import HermitianMetric, dagger, trace


@dataclass(frozen=True, eq=False)
class HolomorphicStructure:
    alpha: np.ndarray

    @property
    def rank(self) -> int:
        return self.alpha.shape[-1]

    @cached_property
    def is_trivial(self) -> bool:
        return not np.any(self.alpha)

    @classmethod
    def trivial(cls, geom: TorusGeometry, rank: int) -> "HolomorphicStructure":
        return cls(geom.zeros(rank, rank))

    def is_integrable(self) -> bool:
        # dbar_E^2 is a (0,2)-form, which vanishes on a Riemann surface.
        return True


def chern_connection(hol: HolomorphicStructure, h: HermitianMetric, geom: TorusGeometry,
                     H_inv: np.ndarray | None = None) -> np.ndarray:
    """``dz`` coefficient ``B`` of the Chern connection ``D = d + B dz + alpha dzbar``.

    Metric compatibility forces ``B = H^{-1} (d_z H - alpha^dagger H)``.
    """
    H = geom.check(h.H)
    if H_inv is None:
        H_inv = np.linalg.inv(H)
    dH = d_prime(H, geom)
    if hol.is_trivial:
        return H_inv @ dH
    return H_inv @ (dH - dagger(hol.alpha) @ H)


def chern_curvature(hol: HolomorphicStructure, h: HermitianMetric, geom: TorusGeometry,
                    H_inv: np.ndarray | None = None) -> np.ndarray:
    """``dz ^ dzbar`` coefficient of the curvature of the Chern connection.

    ``F = d_z alpha - d_zbar B + [B, alpha]``.  With this convention ``F`` is
    itself h-selfadjoint (the 2-form ``F dz ^ dzbar`` is h-skew).
    """
    B = chern_connection(hol, h, geom, H_inv)
    if hol.is_trivial:
        return -d_double_prime(B, geom)
    A = hol.alpha
    return d_prime(A, geom) - d_double_prime(B, geom) + B @ A - A @ B


def degree_chern_weil(hol: HolomorphicStructure, h: HermitianMetric, geom: TorusGeometry) -> float:
    """``int (i / 2pi) tr(F dz ^ dzbar) = (1/pi) int tr F dx dy``."""
    F = chern_curvature(hol, h, geom)
    return float(np.real(integrate(trace(F), geom)) / np.pi)


def slope(deg, rank: int) -> Fraction:
    if rank < 1:
        raise ValueError("rank must be positive")
    return Fraction(deg) / rank


def kron_field(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pointwise Kronecker product of two matrix fields."""
    n1, n2 = a.shape[-1], b.shape[-1]
    out = np.einsum("...ij,...kl->...ikjl", a, b)
    return out.reshape(out.shape[:-4] + (n1 * n2, n1 * n2))


def block_diag_field(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n1, n2 = a.shape[-1], b.shape[-1]
    lead = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    out = np.zeros(lead + (n1 + n2, n1 + n2), dtype=np.result_type(a, b))
    out[..., :n1, :n1] = a
    out[..., n1:, n1:] = b
    return out


def _eye_like(a: np.ndarray) -> np.ndarray:
    return np.eye(a.shape[-1], dtype=complex)


def tensor_mean_curvature_combine(K1: np.ndarray, K2: np.ndarray) -> np.ndarray:
    """Mean curvature of ``E1 (x) E2``: ``K1 (x) I + I (x) K2``."""
    return kron_field(K1, _eye_like(K2)) + kron_field(_eye_like(K1), K2)


def sum_mean_curvature_combine(K1: np.ndarray, K2: np.ndarray) -> np.ndarray:
    """Mean curvature of ``E1 (+) E2``: block diagonal."""
    return block_diag_field(K1, K2)


def tensor_structure(h1: HolomorphicStructure, h2: HolomorphicStructure) -> HolomorphicStructure:
    return HolomorphicStructure(
        kron_field(h1.alpha, _eye_like(h2.alpha)) + kron_field(_eye_like(h1.alpha), h2.alpha)
    )


def sum_structure(h1: HolomorphicStructure, h2: HolomorphicStructure) -> HolomorphicStructure:
    return HolomorphicStructure(block_diag_field(h1.alpha, h2.alpha))


def tensor_metric(m1: HermitianMetric, m2: HermitianMetric) -> HermitianMetric:
    return HermitianMetric(kron_field(m1.H, m2.H))


def sum_metric(m1: HermitianMetric, m2: HermitianMetric) -> HermitianMetric:
    return HermitianMetric(block_diag_field(m1.H, m2.H))
