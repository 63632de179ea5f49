import csv
import json

import pytest

from higgsflow import cli

import oracles


def write_config(tmp_path, name="run.json", **cfg):
    cfg.setdefault("output_dir", str(tmp_path / "out"))
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def read_series(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], [[float(v) for v in r] for r in rows[1:]], rows[1:]


def test_catalog_list(capsys):
    assert cli.main(["catalog", "list"]) == 0
    out = capsys.readouterr().out
    assert "nilpotent_higgs_r2" in out and "semistable_not_stable" in out


def test_chern_p1_default(capsys):
    assert cli.main(["chern-p1"]) == 0
    assert abs(float(capsys.readouterr().out) + 1) < 1e-3


def test_chern_p1_unit_radius(capsys):
    assert cli.main(["chern-p1", "--radius", "1"]) == 1
    assert float(capsys.readouterr().out) == pytest.approx(-0.5, abs=1e-10)


def test_chern_p1_coarse_warns(capsys):
    with pytest.warns(UserWarning):
        cli.main(["chern-p1", "--nodes", "8"])


def test_flow_flat(tmp_path, capsys):
    cfg = write_config(tmp_path, entry="flat_unitary_r2", grid_size=16)
    assert cli.main(["flow", "--config", str(cfg)]) == 0
    header, rows, _ = read_series(tmp_path / "out" / "series.csv")
    assert tuple(header) == cli.SERIES_COLUMNS
    assert len(rows) == 1 and rows[0][0] == 0.0
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["termination_reason"] == "residual_target"
    assert summary["final_residual"] == 0
    assert summary["wall_time"] >= 0


def test_flow_timeout_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, entry="nilpotent_higgs_r2", grid_size=16,
                       flow={"residual_target": 1e-9, "t_max": 1.0})
    assert cli.main(["flow", "--config", str(cfg)]) == 2
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["termination_reason"] == "t_max"
    assert summary["final_residual"] == pytest.approx(oracles.nilpotent_k_linf(1.0), rel=1e-6)


def test_flow_csv_round_trip_and_determinism(tmp_path, capsys):
    cfg1 = write_config(tmp_path, "a.json", entry="nilpotent_higgs_bumped", grid_size=16, seed=3,
                        flow={"t_max": 0.1, "residual_target": 1e-9}, output_dir=str(tmp_path / "a"))
    cfg2 = write_config(tmp_path, "b.json", entry="nilpotent_higgs_bumped", grid_size=16, seed=3,
                        flow={"t_max": 0.1, "residual_target": 1e-9}, output_dir=str(tmp_path / "b"))
    assert cli.main(["flow", "--config", str(cfg1)]) == 2
    assert cli.main(["flow", "--config", str(cfg2)]) == 2
    a = (tmp_path / "a" / "series.csv").read_bytes()
    assert a == (tmp_path / "b" / "series.csv").read_bytes()
    _, values, text = read_series(tmp_path / "a" / "series.csv")
    for row, raw in zip(values, text):
        assert [repr(v) for v in row] == raw


def test_flow_normalize_option(tmp_path, capsys):
    cfg = write_config(tmp_path, entry="conformal_line", grid_size=32, normalize=True)
    assert cli.main(["flow", "--config", str(cfg)]) == 0
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["final_t"] == 0 and summary["final_residual"] < 1e-10


@pytest.mark.parametrize("cfg", [
    {"entry": "flat_unitary_r2", "grid_size": 16, "bogus": 1},
    {"entry": "nope", "grid_size": 16},
    {"entry": "flat_unitary_r2", "grid_size": 15},
    {"entry": "flat_unitary_r2"},
    {"entry": "flat_unitary_r2", "grid_size": 16, "flow": {"dt_safety": 2.0}},
])
def test_bad_config(tmp_path, capsys, cfg):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    assert cli.main(["flow", "--config", str(path)]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_config(tmp_path, capsys):
    assert cli.main(["flow", "--config", str(tmp_path / "absent.json")]) == 1
    assert capsys.readouterr().err


def parse_functional(out):
    vals = dict(line.split() for line in out.strip().splitlines())
    return {k: float(v) for k, v in vals.items()}


@pytest.mark.parametrize("h,k", [("initial", "initial"), ("scale:2", "initial")])
def test_functional_trivial(tmp_path, capsys, h, k):
    cfg = write_config(tmp_path, entry="nilpotent_higgs_bumped", grid_size=16)
    assert cli.main(["functional", "--config", str(cfg), "--h", h, "--k", k]) == 0
    vals = parse_functional(capsys.readouterr().out)
    assert abs(vals["path"]) < 1e-10 and abs(vals["closed_form"]) < 1e-10


def test_functional_flow_snapshot(tmp_path, capsys):
    cfg = write_config(tmp_path, entry="nilpotent_higgs_r2", grid_size=16, flow={"dt_initial": 1e-3})
    assert cli.main(["functional", "--config", str(cfg), "--h", "flow:0.5", "--k", "initial"]) == 0
    vals = parse_functional(capsys.readouterr().out)
    assert vals["path"] == pytest.approx(oracles.nilpotent_L(0.5), rel=1e-6)
    assert vals["closed_form"] == pytest.approx(oracles.nilpotent_L(0.5), rel=1e-6)


def test_functional_seeded_descriptors(tmp_path, capsys):
    cfg = write_config(tmp_path, entry="atiyah_extension_r2", grid_size=16, seed=5)
    assert cli.main(["functional", "--config", str(cfg), "--h", "random:0.3", "--k", "conformal:0.4"]) == 0
    first = capsys.readouterr().out
    cli.main(["functional", "--config", str(cfg), "--h", "random:0.3", "--k", "conformal:0.4"])
    assert capsys.readouterr().out == first


def test_functional_bad_descriptor(tmp_path, capsys):
    cfg = write_config(tmp_path, entry="flat_unitary_r2", grid_size=16)
    assert cli.main(["functional", "--config", str(cfg), "--h", "wat:1", "--k", "initial"]) == 1


def test_thread_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HIGGSFLOW_THREADS", "1")
    assert cli.main(["catalog", "list"]) == 0
    monkeypatch.setenv("HIGGSFLOW_THREADS", "0")
    assert cli.main(["catalog", "list"]) == 1
