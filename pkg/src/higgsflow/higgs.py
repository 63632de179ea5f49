"""Higgs fields, the Hitchin-Simpson curvature and the mean curvature."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import bundle
from .bundle import HolomorphicStructure, chern_curvature
from .geometry import TorusGeometry, d_double_prime
from .matfield import HermitianMetric, dagger, norm_family


@dataclass(frozen=True, eq=False)
class HiggsBundle:
    """Holomorphic structure plus Higgs field ``phi = Phi dz``."""

    hol: HolomorphicStructure
    phi: np.ndarray
    label: str = ""

    @property
    def rank(self) -> int:
        return self.hol.rank

    @cached_property
    def has_higgs_field(self) -> bool:
        return bool(np.any(self.phi))

    def holomorphicity_defect(self, geom: TorusGeometry) -> float:
        """Sup of the ``dzbar`` coefficient of ``dbar_E Phi = dbar Phi + [alpha, Phi]``."""
        A = self.hol.alpha
        r = d_double_prime(self.phi, geom) + A @ self.phi - self.phi @ A
        return float(np.max(np.abs(r)))

    def phi_wedge_phi_vanishes(self) -> bool:
        # Only one (1,0) direction on a curve, so phi ^ phi = Phi Phi dz ^ dz = 0.
        # In higher dimension this is the commutativity of the components of phi.
        return True


def higgs_adjoint(phi: np.ndarray, h: HermitianMetric) -> np.ndarray:
    """``dzbar`` coefficient ``M = H^{-1} Phi^dagger H`` of the metric adjoint of phi."""
    return h.adjoint(phi)


def hs_curvature(higgs: HiggsBundle, h: HermitianMetric, geom: TorusGeometry) -> np.ndarray:
    """``dz ^ dzbar`` coefficient of the (1,1) part of the Hitchin-Simpson curvature.

    ``[phi, phibar] = Phi M dz^dzbar + M Phi dzbar^dz`` contributes
    ``Phi M - M Phi``.  The (2,0) and (0,2) parts are never formed since the
    contraction kills them.
    """
    H_inv = np.linalg.inv(h.H)
    F = chern_curvature(higgs.hol, h, geom, H_inv)
    if not higgs.has_higgs_field:
        return F
    M = H_inv @ dagger(higgs.phi) @ h.H
    return F + higgs.phi @ M - M @ higgs.phi


def mean_curvature(higgs: HiggsBundle, h: HermitianMetric, geom: TorusGeometry) -> np.ndarray:
    """Mean curvature endomorphism ``i Lambda R^{1,1} = 2 F_hs``."""
    return 2.0 * hs_curvature(higgs, h, geom)


@dataclass(frozen=True)
class HYMResidual:
    field: np.ndarray
    norms: dict

    @property
    def linf(self) -> float:
        return self.norms["linf"]

    def is_approximate_hym(self, eps: float) -> bool:
        return self.linf < eps


def hym_residual(higgs: HiggsBundle, h: HermitianMetric, c: float, geom: TorusGeometry) -> HYMResidual:
    R = mean_curvature(higgs, h, geom) - c * np.eye(higgs.rank)
    return HYMResidual(R, norm_family(R, h, geom))


def tensor_bundle(e1: HiggsBundle, e2: HiggsBundle) -> HiggsBundle:
    eye1 = np.eye(e1.rank, dtype=complex)
    eye2 = np.eye(e2.rank, dtype=complex)
    phi = bundle.kron_field(e1.phi, eye2) + bundle.kron_field(eye1, e2.phi)
    return HiggsBundle(bundle.tensor_structure(e1.hol, e2.hol), phi, f"({e1.label})x({e2.label})")


def sum_bundle(e1: HiggsBundle, e2: HiggsBundle) -> HiggsBundle:
    phi = bundle.block_diag_field(e1.phi, e2.phi)
    return HiggsBundle(bundle.sum_structure(e1.hol, e2.hol), phi, f"({e1.label})+({e2.label})")


def is_selfadjoint_field(K: np.ndarray, h: HermitianMetric, tol: float = 1e-8) -> bool:
    hk = h.H @ K
    return float(np.max(np.abs(hk - dagger(hk)))) <= tol * max(float(np.max(np.abs(hk))), 1.0)
