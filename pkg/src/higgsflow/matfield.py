"""Pointwise algebra of r x r complex matrix fields.

A matrix field is an array of shape ``(N, N, r, r)``.  Metrics follow the
convention ``h(xi, eta) = eta^dagger H xi``, so an endomorphism ``A`` is
h-selfadjoint iff ``H A`` is Hermitian, and the h-adjoint of ``A`` is
``H^{-1} A^dagger H``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import InvalidMetric, SelfadjointnessViolation, SpectrumNotPositive
from .geometry import TorusGeometry, integrate


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + dagger(a))


def trace(a: np.ndarray) -> np.ndarray:
    return np.trace(a, axis1=-2, axis2=-1)


def identity_field(geom: TorusGeometry, rank: int) -> np.ndarray:
    eye = np.eye(rank, dtype=complex)
    return np.broadcast_to(eye, (geom.grid_size, geom.grid_size, rank, rank)).copy()


def _sup(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass(frozen=True, eq=False)
class HermitianMetric:
    """Positive-definite Hermitian matrix field ``H`` of shape ``(N, N, r, r)``."""

    H: np.ndarray

    def __post_init__(self):
        H = np.asarray(self.H, dtype=complex)
        if H.ndim != 4 or H.shape[-1] != H.shape[-2]:
            raise InvalidMetric(f"metric must have shape (N, N, r, r), got {H.shape}")
        if _sup(H - dagger(H)) > 1e-12 * max(_sup(H), 1e-300):
            raise InvalidMetric("metric is not Hermitian")
        H = hermitize(H)
        if np.min(np.linalg.eigvalsh(H)) <= 0:
            raise InvalidMetric("metric is not positive definite")
        H.setflags(write=False)
        object.__setattr__(self, "H", H)

    @classmethod
    def trusted(cls, H: np.ndarray) -> "HermitianMetric":
        """Wrap an already Hermitian positive-definite field without validation."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "H", H)
        return obj

    @property
    def rank(self) -> int:
        return self.H.shape[-1]

    @cached_property
    def _sqrt_pair(self) -> tuple[np.ndarray, np.ndarray]:
        w, V = np.linalg.eigh(self.H)
        sw = np.sqrt(w)
        return (V * sw[..., None, :]) @ dagger(V), (V / sw[..., None, :]) @ dagger(V)

    @classmethod
    def identity(cls, geom: TorusGeometry, rank: int) -> "HermitianMetric":
        return cls(identity_field(geom, rank))

    def scaled(self, factor) -> "HermitianMetric":
        """Conformal change ``h -> factor * h``; ``factor`` may be a positive scalar field."""
        factor = np.asarray(factor, dtype=float)
        if factor.ndim == 2:
            factor = factor[..., None, None]
        return HermitianMetric(self.H * factor)

    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.H)

    def adjoint(self, a: np.ndarray) -> np.ndarray:
        """h-adjoint ``H^{-1} a^dagger H`` of an endomorphism field."""
        return np.linalg.solve(self.H, dagger(a) @ self.H)

    def min_eigenvalue(self) -> float:
        return float(np.min(np.linalg.eigvalsh(self.H)))

    def condition_number(self) -> float:
        w = np.linalg.eigvalsh(self.H)
        return float(np.max(w[..., -1] / w[..., 0]))


def selfadjointness_defect(a: np.ndarray, base: HermitianMetric) -> float:
    """Relative size of the anti-Hermitian part of ``H a``."""
    ha = base.H @ a
    return _sup(ha - dagger(ha)) / max(_sup(ha), 1e-300)


def _require_selfadjoint(a: np.ndarray, base: HermitianMetric, tol: float, what: str):
    # Absolute floor so that the zero field and tiny fields pass.
    ha = base.H @ a
    defect = _sup(ha - dagger(ha))
    if defect > tol * max(_sup(ha), 1.0):
        raise SelfadjointnessViolation(
            f"{what} is not selfadjoint for the metric (defect {defect:.3e})"
        )


def eigenframe(s: np.ndarray, base: HermitianMetric):
    """Real eigenvalues and base-orthonormal eigenvectors of a base-selfadjoint field.

    The decomposition is done on ``B^{1/2} s B^{-1/2}`` which is Hermitian.
    Returns ``lam, P, Pinv`` with ``s = P diag(lam) Pinv`` and ``P^dagger B P = I``.
    """
    half, half_inv = base._sqrt_pair
    sym = hermitize(half @ s @ half_inv)
    lam, U = np.linalg.eigh(sym)
    P = half_inv @ U
    Pinv = dagger(U) @ half
    return lam, P, Pinv


def mat_exp_selfadjoint(S: np.ndarray, base: HermitianMetric, tol: float = 1e-10) -> HermitianMetric:
    """The metric ``base.H @ exp(S)`` for a base-selfadjoint endomorphism field ``S``."""
    S = np.asarray(S, dtype=complex)
    _require_selfadjoint(S, base, tol, "S")
    lam, P, Pinv = eigenframe(S, base)
    expS = (P * np.exp(lam)[..., None, :]) @ Pinv
    return HermitianMetric(hermitize(base.H @ expS))


def mat_log_metric(h: HermitianMetric, base: HermitianMetric) -> np.ndarray:
    """Base-selfadjoint ``S`` with ``h.H = base.H @ exp(S)``."""
    return log_frame(h, base)[0]


def log_frame(h: HermitianMetric, base: HermitianMetric):
    """``S = log(base^{-1} h)`` together with its eigenframe ``(log lam, P, Pinv)``."""
    rel = np.linalg.solve(base.H, h.H)
    # base^{-1} h is base-selfadjoint by construction.
    lam, P, Pinv = eigenframe(rel, base)
    if np.min(lam) <= 0:
        raise SpectrumNotPositive("base^-1 h has a non-positive eigenvalue")
    loglam = np.log(lam)
    return (P * loglam[..., None, :]) @ Pinv, (loglam, P, Pinv)


def apply_two_var(
    s: np.ndarray,
    A: np.ndarray,
    psi: Callable[[np.ndarray, np.ndarray], np.ndarray],
    base: HermitianMetric,
    tol: float = 1e-10,
) -> np.ndarray:
    """Two-variable functional calculus ``Psi(s)(A)``.

    In a pointwise eigenframe of ``s`` the ``(i, j)`` entry of ``A`` is
    multiplied by ``psi(lam_i, lam_j)``.  For polynomial ``psi`` with
    coefficients ``b_mn`` this equals ``sum b_mn s^m A s^n``.
    """
    s = np.asarray(s, dtype=complex)
    _require_selfadjoint(s, base, tol, "s")
    return apply_in_frame(eigenframe(s, base), A, psi)


def apply_in_frame(frame, A: np.ndarray, psi) -> np.ndarray:
    """``Psi(s)(A)`` given a precomputed ``eigenframe(s, base)``."""
    lam, P, Pinv = frame
    weights = psi(lam[..., :, None], lam[..., None, :])
    return P @ (weights * (Pinv @ A @ P)) @ Pinv


def psi_simpson(x1, x2):
    """``(e^u - u - 1) / u^2`` with ``u = x2 - x1``; equal to 1/2 on the diagonal."""
    u = np.asarray(x2, dtype=float) - np.asarray(x1, dtype=float)
    small = np.abs(u) < 1e-2
    safe = np.where(small, 1.0, u)
    direct = (np.expm1(safe) - safe) / safe**2
    series = 0.5 + u * (1 / 6 + u * (1 / 24 + u * (1 / 120 + u * (1 / 720 + u / 5040))))
    out = np.where(small, series, direct)
    return out[()] if out.ndim == 0 else out


def dexp(x, y):
    """Divided difference of exp: ``(e^x - e^y) / (x - y)``, ``e^x`` on the diagonal."""
    x = np.asarray(x, dtype=float)
    d = x - np.asarray(y, dtype=float)
    small = np.abs(d) < 1e-8
    safe = np.where(small, 1.0, d)
    return np.exp(x) * np.where(small, 1.0 - d / 2, -np.expm1(-safe) / safe)


def pointwise_norm(A: np.ndarray, h: HermitianMetric, tol: float = 1e-8) -> np.ndarray:
    """``|A| = sqrt(tr(A A))`` for an h-selfadjoint endomorphism field."""
    _require_selfadjoint(A, h, tol, "A")
    sq = np.real(trace(A @ A))
    return np.sqrt(np.maximum(sq, 0.0))


def norm_family(A: np.ndarray, h: HermitianMetric, geom: TorusGeometry) -> dict[str, float]:
    """L1, L2 and sup norms of an h-selfadjoint endomorphism field."""
    a = pointwise_norm(A, h)
    return {
        "l1": float(np.real(integrate(a, geom))),
        "l2": float(np.sqrt(np.real(integrate(a**2, geom)))),
        "linf": float(np.max(a)),
    }


def scalar_log_bound(a) -> tuple[float, float]:
    """Both sides of ``|a| <= sqrt(n) log(sum e^a_i + sum e^-a_i)``."""
    a = np.asarray(a, dtype=float).ravel()
    if a.size == 0:
        raise ValueError("need a nonempty vector")
    lhs = float(np.sqrt(np.sum(a**2)))
    rhs = float(np.sqrt(a.size) * np.logaddexp.reduce(np.concatenate([a, -a])))
    return lhs, rhs
