"""Donaldson heat flow and Hermitian-Yang-Mills diagnostics for Higgs bundles on the flat torus."""
from .bundle import HolomorphicStructure, chern_curvature, degree_chern_weil, slope
from .catalog import CATALOG, build, check_sequence_balance
from .flow import FlowConfig, FlowState, conformal_normalize, flow_step, run_flow
from .functional import donaldson_closed_form, donaldson_path, gradient_check, q1
from .geometry import TorusGeometry, p1_gamma1_integral
from .higgs import HiggsBundle, hym_residual, mean_curvature
from .matfield import HermitianMetric, mat_exp_selfadjoint, mat_log_metric

__version__ = "0.1.0"

__all__ = [
    "CATALOG", "FlowConfig", "FlowState", "HermitianMetric", "HiggsBundle", "HolomorphicStructure",
    "TorusGeometry", "build", "check_sequence_balance", "chern_curvature", "conformal_normalize",
    "degree_chern_weil", "donaldson_closed_form", "donaldson_path", "flow_step", "gradient_check",
    "hym_residual", "mat_exp_selfadjoint", "mat_log_metric", "mean_curvature", "p1_gamma1_integral",
    "q1", "run_flow", "slope",
]
