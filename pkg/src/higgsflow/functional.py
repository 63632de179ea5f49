"""The Donaldson functional L(h, k) on a Higgs bundle over the torus.

With ``n = 1`` and ``omega = dx ^ dy`` the (1,1) part of
``i tr(v_t R_t)`` equals ``tr(v_t K_t) dx dy``, so along any curve from
``k`` to ``h``

    L(h, k) = int_0^1 int_X tr(v_t (K_t - c)) dx dy dt.

Two independent evaluations are provided: Gauss-Legendre quadrature along
geodesic (or broken geodesic) paths, and the closed form obtained by
integrating the second variation twice along the geodesic ``k exp(t s)``:

    L(h, k) = int tr(s (K_k - c)) + 2 int <Psi(s) Y, Y>_k,  Y in {D''s, [Phi, s]},

where the factor 2 is ``|dzbar|^2`` for the flat metric and ``Psi`` weights
the ``(i, j)`` eigenframe entry by ``(e^u - u - 1)/u^2``, ``u = lam_i - lam_j``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NonPositiveDeterminant
from .geometry import TorusGeometry, d_double_prime, integrate
from .higgs import HiggsBundle, mean_curvature
from .matfield import (
    HermitianMetric,
    apply_in_frame,
    hermitize,
    log_frame,
    mat_exp_selfadjoint,
    psi_simpson,
    trace,
)

logger = logging.getLogger(__name__)

DEFAULT_NODES = 32


@dataclass(frozen=True)
class FunctionalReport:
    q1_integral: float
    q2_integral: float
    value: float
    method: str
    path_nodes: int = 0


def q1(h: HermitianMetric, k: HermitianMetric) -> np.ndarray:
    """Pointwise ``ln det(k^{-1} h)``."""
    sh, lh = np.linalg.slogdet(h.H)
    sk, lk = np.linalg.slogdet(k.H)
    phase = sh / sk
    if np.max(np.abs(phase - 1.0)) > 1e-8:
        raise NonPositiveDeterminant("det(k^-1 h) is not a positive real")
    return lh - lk


def _realize(z, what: str, scale: float) -> float:
    if abs(np.imag(z)) > 1e-8 * max(1.0, scale):
        logger.warning("%s has imaginary residue %.3e", what, np.imag(z))
    return float(np.real(z))


def _segment(a: HermitianMetric, b: HermitianMetric, higgs: HiggsBundle,
             geom: TorusGeometry, c: float, t: np.ndarray, w: np.ndarray) -> complex:
    """int_0^1 int_X tr(S (K_t - c)) along ``a exp(t S)``, ``S = log(a^{-1} b)``."""
    S, (lam, P, Pinv) = log_frame(b, a)
    total = 0.0
    eye = np.eye(higgs.rank)
    for tj, wj in zip(t, w):
        Ht = hermitize(a.H @ (P * np.exp(tj * lam)[..., None, :]) @ Pinv)
        K = mean_curvature(higgs, HermitianMetric.trusted(Ht), geom)
        total = total + wj * integrate(trace(S @ (K - c * eye)), geom)
    return total


def donaldson_path(
    h: HermitianMetric,
    k: HermitianMetric,
    higgs: HiggsBundle,
    geom: TorusGeometry,
    nodes: int = DEFAULT_NODES,
    c: float = 0.0,
    via: Sequence[HermitianMetric] = (),
) -> FunctionalReport:
    """L(h, k) by quadrature along the geodesic from k to h.

    With ``via`` the path is the broken geodesic ``k -> via[0] -> ... -> h``.
    """
    if nodes < 4:
        raise ValueError("need at least 4 path nodes")
    x, w = np.polynomial.legendre.leggauss(nodes)
    t, w = 0.5 * (x + 1.0), 0.5 * w
    points = [k, *via, h]
    total = sum(_segment(a, b, higgs, geom, c, t, w) for a, b in zip(points[:-1], points[1:]))
    q1_int = float(np.real(integrate(q1(h, k), geom)))
    value = _realize(total, "L (path)", abs(total))
    return FunctionalReport(q1_int, value + c * q1_int, value, "path", nodes)


def _reverse_simpson(x, y):
    # Entry (i, j) needs f(lam_i - lam_j); psi_simpson(x1, x2) = f(x2 - x1).
    return psi_simpson(y, x)


def donaldson_closed_form(
    h: HermitianMetric,
    k: HermitianMetric,
    higgs: HiggsBundle,
    geom: TorusGeometry,
    c: float = 0.0,
    log=None,
    K_ref: np.ndarray | None = None,
) -> FunctionalReport:
    """L(h, k) from the eigenframe closed form along ``k exp(s)``.

    ``log`` may carry a precomputed ``log_frame(h, k)`` and ``K_ref`` the mean
    curvature of ``k``.
    """
    s, frame = log if log is not None else log_frame(h, k)
    eye = np.eye(higgs.rank)
    K0 = mean_curvature(higgs, k, geom) if K_ref is None else K_ref
    linear = integrate(trace(s @ (K0 - c * eye)), geom)

    A, Phi = higgs.hol.alpha, higgs.phi
    quad = 0.0
    for Y in (d_double_prime(s, geom) + A @ s - s @ A, Phi @ s - s @ Phi):
        weighted = apply_in_frame(frame, Y, _reverse_simpson)
        quad = quad + 2.0 * integrate(trace(weighted @ k.adjoint(Y)), geom)

    q1_int = float(np.real(integrate(q1(h, k), geom)))
    total = linear + quad
    value = _realize(total, "L (closed form)", abs(total))
    return FunctionalReport(q1_int, value + c * q1_int, value, "closed_form")


def donaldson(h, k, higgs, geom, c: float = 0.0, method: str = "closed_form",
              nodes: int = DEFAULT_NODES) -> float:
    if method == "closed_form":
        return donaldson_closed_form(h, k, higgs, geom, c).value
    if method == "path":
        return donaldson_path(h, k, higgs, geom, nodes, c).value
    raise ValueError(f"unknown method {method!r}")


def gradient_check(
    h: HermitianMetric,
    k: HermitianMetric,
    v: np.ndarray,
    higgs: HiggsBundle,
    geom: TorusGeometry,
    step: float = 1e-4,
    c: float = 0.0,
    method: str = "closed_form",
) -> dict[str, float]:
    """Compare a finite difference of ``L(h exp(eps v), k)`` with ``int tr((K - c) v)``.

    The centered difference is Richardson-extrapolated from steps ``eps`` and
    ``eps / 2``.
    """
    def L(eps):
        return donaldson(mat_exp_selfadjoint(eps * v, h, tol=1e-8), k, higgs, geom, c, method)

    def centered(eps):
        return (L(eps) - L(-eps)) / (2.0 * eps)

    if not np.any(v):
        fd = 0.0
    else:
        fd = (4.0 * centered(step / 2) - centered(step)) / 3.0
    K = mean_curvature(higgs, h, geom) - c * np.eye(higgs.rank)
    inner = float(np.real(integrate(trace(K @ v), geom)))
    return {"finite_diff": float(fd), "inner_product": inner}
