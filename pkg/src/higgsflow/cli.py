"""Command-line driver.

    higgsflow flow --config run.json
    higgsflow chern-p1 [--radius R] [--nodes M]
    higgsflow functional --config run.json --h METRIC --k METRIC
    higgsflow catalog list

Metric descriptors for ``functional`` are relative to the entry's initial metric
``h0``: ``initial``, ``scale:A`` (A h0), ``flow:T`` (flow state at time T),
``conformal:AMP`` (exp(u) h0 with a seeded smooth u of sup AMP) and
``random:AMP`` (h0 exp(X) with a seeded smooth selfadjoint X).

Exit codes: 0 success, 1 error, 2 flow reached t_max before the residual target.
HIGGSFLOW_THREADS caps the BLAS thread pool.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import os
import sys
import time
import warnings
from dataclasses import asdict
from pathlib import Path

import jsonschema
import numpy as np

from . import catalog
from .errors import HiggsFlowError
from .flow import SERIES_COLUMNS, FlowConfig, conformal_normalize, run_flow
from .functional import DEFAULT_NODES, donaldson_closed_form, donaldson_path
from .geometry import TorusGeometry, p1_gamma1_integral
from .matfield import HermitianMetric
from .random_fields import random_metric, smooth_scalar

logger = logging.getLogger("higgsflow")

EXIT_OK, EXIT_ERROR, EXIT_TIMEOUT = 0, 1, 2

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["entry", "grid_size"],
    "properties": {
        "entry": {"type": "string", "enum": catalog.names()},
        "grid_size": {"type": "integer", "minimum": 8, "multipleOf": 2},
        "flow": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dt_initial": {"type": "number", "exclusiveMinimum": 0},
                "dt_safety": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "t_max": {"type": "number", "minimum": 0},
                "residual_target": {"type": "number", "exclusiveMinimum": 0},
                "record_every": {"type": "integer", "minimum": 1},
                "c": {"type": "number"},
            },
        },
        "functional": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"nodes": {"type": "integer", "minimum": 4}},
        },
        "output_dir": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "normalize": {"type": "boolean"},
    },
}


def load_config(path) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    jsonschema.validate(cfg, CONFIG_SCHEMA)
    return cfg


def _flow_config(cfg: dict, **overrides) -> FlowConfig:
    return FlowConfig(**{**cfg.get("flow", {}), **overrides})


def _setup(cfg: dict):
    geom = TorusGeometry(cfg["grid_size"])
    higgs, h0 = catalog.build(cfg["entry"], geom)
    if cfg.get("normalize", False):
        h0 = conformal_normalize(h0, higgs, geom, cfg.get("flow", {}).get("c", 0.0))
    return geom, higgs, h0


def write_series(path: Path, diagnostics) -> None:
    # repr gives the shortest string that round-trips to the same double.
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SERIES_COLUMNS)
        for row in diagnostics:
            w.writerow([repr(float(row[c])) for c in SERIES_COLUMNS])


def cmd_flow(args) -> int:
    cfg = load_config(args.config)
    out = Path(cfg.get("output_dir", "."))
    out.mkdir(parents=True, exist_ok=True)
    geom, higgs, h0 = _setup(cfg)
    config = _flow_config(cfg)
    start = time.perf_counter()
    state = run_flow(h0, higgs, geom, config)
    wall = time.perf_counter() - start
    write_series(out / "series.csv", state.diagnostics)
    final = state.diagnostics[-1]
    summary = {
        "entry": cfg["entry"],
        "grid_size": geom.grid_size,
        "seed": cfg.get("seed"),
        "flow": asdict(config),
        "termination_reason": state.termination,
        "final_residual": final["K_linf"],
        "final_t": state.t,
        "steps": state.steps,
        "wall_time": wall,
    }
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    print(f"{state.termination}: t={state.t:.6g} residual={final['K_linf']:.6g} steps={state.steps}")
    return EXIT_OK if state.termination == "residual_target" else EXIT_TIMEOUT


def cmd_chern_p1(args) -> int:
    value = p1_gamma1_integral(radial_cutoff=args.radius, radial_nodes=args.nodes)
    print(repr(value))
    return EXIT_OK if abs(value + 1.0) < 1e-3 else EXIT_ERROR


def resolve_metric(desc: str, cfg: dict, geom: TorusGeometry, higgs, h0: HermitianMetric) -> HermitianMetric:
    kind, _, arg = desc.partition(":")
    if kind == "initial" and not arg:
        return h0
    try:
        value = float(arg)
    except ValueError:
        raise ValueError(f"bad metric descriptor {desc!r}") from None
    rng = np.random.default_rng(cfg.get("seed", 0))
    if kind == "scale":
        return h0.scaled(value)
    if kind == "flow":
        state = run_flow(h0, higgs, geom, _flow_config(cfg, t_max=value, residual_target=1e-300))
        return state.h
    if kind == "conformal":
        return h0.scaled(np.exp(smooth_scalar(geom, rng, value, modes=1)))
    if kind == "random":
        return random_metric(geom, higgs.rank, rng, amplitude=value, base=h0)
    raise ValueError(f"bad metric descriptor {desc!r}")


def cmd_functional(args) -> int:
    cfg = load_config(args.config)
    geom, higgs, h0 = _setup(cfg)
    h = resolve_metric(args.h, cfg, geom, higgs, h0)
    k = resolve_metric(args.k, cfg, geom, higgs, h0)
    c = cfg.get("flow", {}).get("c", 0.0)
    nodes = cfg.get("functional", {}).get("nodes", DEFAULT_NODES)
    path = donaldson_path(h, k, higgs, geom, nodes, c).value
    closed = donaldson_closed_form(h, k, higgs, geom, c).value
    diff = path - closed
    print(f"path        {path!r}")
    print(f"closed_form {closed!r}")
    print(f"diff        {diff!r}")
    return EXIT_OK if abs(diff) < 1e-5 * (1.0 + abs(closed)) else EXIT_ERROR


def cmd_catalog(args) -> int:
    for e in catalog.CATALOG.values():
        print(f"{e.name:24s} rank={e.rank} degree={e.degree} slope={e.slope} status={e.status}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="higgsflow", description="Donaldson heat flow on Higgs bundles over the torus")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("flow", help="run the heat flow and write series.csv and summary.json")
    f.add_argument("--config", required=True)
    f.set_defaults(func=cmd_flow)

    c = sub.add_parser("chern-p1", help="integrate the first Chern form of the tautological bundle over P^1")
    c.add_argument("--radius", type=float, default=1e4, help="radial cutoff of the affine chart")
    c.add_argument("--nodes", type=int, default=4096, help="quadrature nodes")
    c.set_defaults(func=cmd_chern_p1)

    d = sub.add_parser("functional", help="evaluate L(h, k) by path quadrature and closed form")
    d.add_argument("--config", required=True)
    d.add_argument("--h", required=True, help="metric descriptor for h")
    d.add_argument("--k", required=True, help="metric descriptor for k")
    d.set_defaults(func=cmd_functional)

    g = sub.add_parser("catalog", help="catalog operations")
    g.add_argument("action", choices=["list"])
    g.set_defaults(func=cmd_catalog)
    return p


def _thread_limit():
    raw = os.environ.get("HIGGSFLOW_THREADS")
    if not raw:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    n = int(raw)
    if n < 1:
        raise ValueError("HIGGSFLOW_THREADS must be a positive integer")
    return threadpool_limits(limits=n)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    warnings.simplefilter("default")
    try:
        with _thread_limit():
            return args.func(args)
    except (HiggsFlowError, OSError, ValueError, KeyError, json.JSONDecodeError,
            jsonschema.ValidationError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        print(f"higgsflow: error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
