"""Donaldson heat flow ``dH/dt = -H (K - c)`` with diagnostics.

The flow is integrated with explicit RK4 under the parabolic step bound
``dt <= dt_safety * dx^2 / 2``.  Termination is residual based: the run stops
as soon as ``max|K - c I| < residual_target`` (approximate HYM), or at
``t_max``.  Metric convergence is never required, since on semistable
non-polystable bundles the metric itself diverges while the residual decays.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DivergedMetric, InvalidMetric, StepCollapse
from .functional import donaldson_closed_form
from .geometry import TorusGeometry, integrate, solve_poisson
from .higgs import HiggsBundle, mean_curvature
from .matfield import HermitianMetric, hermitize, log_frame, mat_log_metric, norm_family, pointwise_norm, trace

logger = logging.getLogger(__name__)

SERIES_COLUMNS = (
    "t", "L", "K_l1", "K_l2", "K_linf", "trS_max", "minEigH",
    "superineq_lhs", "superineq_rhs",
)

MAX_HALVINGS = 20
COLLAPSE_RATIO = 1e-8
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class FlowConfig:
    dt_initial: float = 0.01
    dt_safety: float = 0.5
    t_max: float = 50.0
    residual_target: float = 0.05
    record_every: int = 1
    c: float = 0.0

    def __post_init__(self):
        if not self.dt_initial > 0:
            raise ValueError("dt_initial must be positive")
        if not 0 < self.dt_safety <= 1:
            raise ValueError("dt_safety must lie in (0, 1]")
        if not self.residual_target > 0:
            raise ValueError("residual_target must be positive")
        if self.t_max < 0:
            raise ValueError("t_max must be nonnegative")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")

    def max_step(self, geom: TorusGeometry) -> float:
        return min(self.dt_initial, self.dt_safety * geom.spacing**2 / 2)


@dataclass(frozen=True, eq=False)
class FlowState:
    t: float
    h: HermitianMetric
    h0: HermitianMetric
    diagnostics: tuple = ()
    steps: int = 0
    dt_last: float = 0.0
    termination: str | None = None

    @property
    def S(self) -> np.ndarray:
        return mat_log_metric(self.h, self.h0)

    def series(self) -> dict[str, np.ndarray]:
        return {c: np.array([d[c] for d in self.diagnostics]) for c in SERIES_COLUMNS}


def _rhs(H: np.ndarray, higgs: HiggsBundle, geom: TorusGeometry, c: float,
         K: np.ndarray | None = None) -> np.ndarray:
    H = hermitize(H)
    if K is None:
        K = mean_curvature(higgs, HermitianMetric.trusted(H), geom)
    return -(H @ K) + c * H


def _rk4(H, higgs, geom, dt, c, K0=None):
    k1 = _rhs(H, higgs, geom, c, K0)
    k2 = _rhs(H + 0.5 * dt * k1, higgs, geom, c)
    k3 = _rhs(H + 0.5 * dt * k2, higgs, geom, c)
    k4 = _rhs(H + dt * k3, higgs, geom, c)
    return H + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def flow_step(state: FlowState, higgs: HiggsBundle, geom: TorusGeometry, dt: float,
              c: float = 0.0, K: np.ndarray | None = None) -> FlowState:
    """Advance one RK4 step, halving ``dt`` while the result loses definiteness.

    ``K`` optionally supplies the mean curvature at ``state.h``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    H = state.h.H
    scale = float(np.max(np.linalg.eigvalsh(H)))
    for _ in range(MAX_HALVINGS):
        with np.errstate(over="raise", invalid="raise", divide="raise"):
            try:
                H_new = hermitize(_rk4(H, higgs, geom, dt, c, K))
                w = np.linalg.eigvalsh(H_new)
                if np.min(w) >= COLLAPSE_RATIO * max(scale, float(np.max(w))):
                    break
            except (InvalidMetric, np.linalg.LinAlgError, FloatingPointError):
                pass
        logger.debug("step rejected at t=%g, halving dt=%g", state.t, dt)
        dt *= 0.5
    else:
        raise StepCollapse(f"no acceptable step after {MAX_HALVINGS} halvings at t={state.t}")
    h_new = HermitianMetric.trusted(H_new)
    if float(np.max(w[..., -1] / w[..., 0])) > MAX_CONDITION:
        raise DivergedMetric(f"metric condition number exceeded {MAX_CONDITION:g} at t={state.t + dt}")
    return replace(state, t=state.t + dt, h=h_new, steps=state.steps + 1, dt_last=dt)


def diagnose(state: FlowState, higgs: HiggsBundle, geom: TorusGeometry, c: float,
             K: np.ndarray | None = None, K_ref: np.ndarray | None = None) -> dict[str, float]:
    """One row of the diagnostics series for ``state``.

    ``K`` and ``K_ref`` optionally supply the mean curvatures of ``h`` and ``h0``.
    """
    h, h0 = state.h, state.h0
    r = higgs.rank
    V = geom.volume
    if K is None:
        K = mean_curvature(higgs, h, geom)
    K = K - c * np.eye(r)
    norms = norm_family(K, h, geom)
    log = log_frame(h, h0)
    S = log[0]
    L = donaldson_closed_form(h, h0, higgs, geom, c, log=log, K_ref=K_ref).value
    S_l1 = float(np.real(integrate(pointwise_norm(S, h0), geom)))
    return {
        "t": float(state.t),
        "L": L,
        "K_l1": norms["l1"],
        "K_l2": norms["l2"],
        "K_linf": norms["linf"],
        "trS_max": float(np.max(np.abs(trace(S)))),
        "minEigH": h.min_eigenvalue(),
        "superineq_lhs": (S_l1 / math.sqrt(r) - V * math.log(2 * r)) * norms["l2"],
        "superineq_rhs": -math.sqrt(V) * L,
    }


def run_flow(h0: HermitianMetric, higgs: HiggsBundle, geom: TorusGeometry,
             config: FlowConfig = FlowConfig()) -> FlowState:
    """Integrate until approximate HYM at ``config.residual_target`` or ``t_max``.

    ``termination`` on the returned state is ``"residual_target"`` or ``"t_max"``.
    """
    c = config.c
    dt_max = config.max_step(geom)
    state = FlowState(t=0.0, h=h0, h0=h0)
    records: list[dict] = []
    eps_t = 1e-12 * max(1.0, config.t_max)
    K_ref = mean_curvature(higgs, h0, geom)
    K = K_ref
    while True:
        row = diagnose(state, higgs, geom, c, K, K_ref)
        done = None
        if row["K_linf"] < config.residual_target:
            done = "residual_target"
        elif state.t >= config.t_max - eps_t:
            done = "t_max"
        if done or state.steps % config.record_every == 0:
            records.append(row)
        if done:
            logger.info("flow stopped (%s) at t=%g after %d steps, residual %.3e",
                        done, state.t, state.steps, row["K_linf"])
            return replace(state, diagnostics=tuple(records), termination=done)
        dt = min(dt_max, config.t_max - state.t)
        state = flow_step(state, higgs, geom, dt, c, K)
        K = mean_curvature(higgs, state.h, geom)


def conformal_normalize(h: HermitianMetric, higgs: HiggsBundle, geom: TorusGeometry,
                        c: float = 0.0) -> HermitianMetric:
    """Conformal rescaling ``e^u h`` making ``tr(K - c I)`` vanish pointwise.

    Solves ``box0 u = -(1/r) tr(K - c I)``; raises ``SolvabilityViolation``
    when ``c`` is inconsistent with the degree of the bundle.
    """
    r = higgs.rank
    K = mean_curvature(higgs, h, geom)
    f = np.real(trace(K)) / r - c
    u = np.real(solve_poisson(-f, geom))
    return h.scaled(np.exp(u))


def hym_trace_defect(h: HermitianMetric, higgs: HiggsBundle, geom: TorusGeometry, c: float = 0.0) -> float:
    K = mean_curvature(higgs, h, geom)
    return float(np.max(np.abs(trace(K) - c * higgs.rank)))
