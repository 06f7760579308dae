"""End-to-end runs of the batch front end, in process via main()."""

import csv
import json

import numpy as np
import pytest
import yaml

from orlicz_lab import __version__
from orlicz_lab.cli import main

import oracles as oc


def write_cfg(tmp_path, payload, name="run.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(payload))
    return str(path)


def read_csv(out_dir, command):
    path = out_dir / f"{command}.csv"
    lines = path.read_text().splitlines()
    header = lines[0]
    rows = list(csv.reader(lines[1:]))
    return header, rows[0], rows[1:]


def read_summary(out_dir):
    return json.loads((out_dir / "summary.json").read_text())


EIG_CFG = {
    "phi": {"kind": "power", "p": 2},
    "psi": {"kind": "power", "p": 2},
    "domain": {"shape": "interval", "n": 257, "extent": [0.0, 1.0]},
    "eig": {"alpha": 1.0},
}


# ---------------------------------------------------------------------------
# happy paths

def test_catalog_lists_members_and_flags_violator(tmp_path, capsys):
    out = tmp_path / "runs"
    assert main(["catalog", "--out", str(out)]) == 0
    header, columns, rows = read_csv(out, "catalog")
    assert header == f"# orlicz-lab v{__version__} catalog"
    assert columns == ["kind", "label", "l", "m", "delta2",
                       "bound_or_witness"]
    assert len(rows) == 5
    kinds = [r[0] for r in rows]
    assert kinds == ["power", "power-sum", "plasticity", "elasticity",
                     "exp-square"]
    flags = {r[0]: int(r[4]) for r in rows}
    assert flags["exp-square"] == 0
    assert sum(flags.values()) == 4
    text = capsys.readouterr().out
    assert "exp-square" in text and "not doubling" in text
    summary = read_summary(out)
    assert summary["command"] == "catalog"
    assert summary["results"] == {"entries": 5, "doubling": 4,
                                  "violators": 1}


def test_check_young_reports_conditions(tmp_path):
    cfg = write_cfg(tmp_path, {"phi": {"kind": "power", "p": 3},
                               "psi": {"kind": "power", "p": 2}})
    out = tmp_path / "runs"
    assert main(["check-young", "--config", cfg, "--out", str(out)]) == 0
    _, columns, rows = read_csv(out, "check-young")
    assert columns == ["condition", "holds", "detail"]
    by_name = {r[0]: int(r[1]) for r in rows}
    for name in ("phi_growth_bounds", "phi_doubling", "phi_sqrt_convexity",
                 "phi_conjugate_involution", "psi_grows_slower"):
        assert by_name[name] == 1


def test_conjugate_table_matches_dual_power(tmp_path):
    cfg = write_cfg(tmp_path, {
        "phi": {"kind": "power", "p": 3, "coeff": 0.3333333333333333},
        "conjugate": {"s_min": 1e-2, "s_max": 1e2, "points": 25}})
    out = tmp_path / "runs"
    assert main(["conjugate", "--config", cfg, "--out", str(out)]) == 0
    _, _, rows = read_csv(out, "conjugate")
    assert len(rows) == 25
    for s_txt, val_txt, err_txt in rows:
        s, val = float(s_txt), float(val_txt)
        assert val == pytest.approx(s ** 1.5 / 1.5, rel=1e-6)
        assert float(err_txt) <= 1e-5


def test_norm_of_unit_constant(tmp_path):
    cfg = write_cfg(tmp_path, {
        "phi": {"kind": "power", "p": 2, "coeff": 1.0},
        "domain": {"shape": "interval", "n": 64, "extent": [0.0, 1.0]},
        "norm": {"u": {"constant": 1.0}}})
    out = tmp_path / "runs"
    assert main(["norm", "--config", cfg, "--out", str(out)]) == 0
    summary = read_summary(out)
    assert summary["results"]["luxemburg_state"] == pytest.approx(1.0,
                                                                  rel=1e-9)
    assert summary["results"]["gradient"] == 0.0


def test_eig_matches_dense_oracle(tmp_path):
    cfg = write_cfg(tmp_path, EIG_CFG)
    out = tmp_path / "runs"
    assert main(["eig", "--config", cfg, "--out", str(out)]) == 0
    summary = read_summary(out)
    want = oc.dirichlet_laplacian_eigenvalues(257)[0]
    assert summary["results"]["lambda"] == pytest.approx(want, rel=1e-6)
    assert summary["results"]["residual"] <= 1e-8 * (
        1.0 + summary["results"]["level_I"])


def test_eig_byte_determinism(tmp_path):
    cfg = write_cfg(tmp_path, EIG_CFG)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["eig", "--config", cfg, "--out", str(out_a),
                 "--seed", "7"]) == 0
    assert main(["eig", "--config", cfg, "--out", str(out_b),
                 "--seed", "7"]) == 0
    assert (out_a / "eig.csv").read_bytes() == (out_b / "eig.csv").read_bytes()
    sa = json.loads((out_a / "summary.json").read_text())
    sb = json.loads((out_b / "summary.json").read_text())
    sa.pop("outputs"), sb.pop("outputs")  # they name the run directories
    assert sa == sb and sa["seed"] == 7


def test_spectrum_sorted_and_thread_independent(tmp_path, monkeypatch):
    cfg = write_cfg(tmp_path, {
        "phi": {"kind": "power", "p": 2},
        "psi": {"kind": "power", "p": 2},
        "domain": {"shape": "interval", "n": 65, "extent": [0.0, 1.0]},
        "spectrum": {"alphas": [2.0, 0.5, 1.0]}})
    outs = []
    for label, threads in (("one", "1"), ("four", "4")):
        out = tmp_path / label
        monkeypatch.setenv("ORLICZ_LAB_THREADS", threads)
        assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
        outs.append((out / "spectrum.csv").read_bytes())
        _, _, rows = read_csv(out, "spectrum")
        alphas = [float(r[0]) for r in rows]
        assert alphas == sorted(alphas) and len(alphas) == 3
        lams = np.array([float(r[1]) for r in rows])
        assert np.ptp(lams) <= 1e-6 * lams[0]
    assert outs[0] == outs[1]


def test_spectrum_range_form(tmp_path):
    cfg = write_cfg(tmp_path, {
        "phi": {"kind": "power", "p": 2},
        "psi": {"kind": "power", "p": 2},
        "domain": {"shape": "interval", "n": 49, "extent": [0.0, 1.0]},
        "spectrum": {"alpha_min": 0.5, "alpha_max": 2.0, "points": 3}})
    out = tmp_path / "runs"
    assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
    summary = read_summary(out)
    assert summary["results"]["levels"] == 3
    assert summary["results"]["solved"] == 3
    assert summary["results"]["failures"] == []


def test_region_run_and_proof_variant_flag(tmp_path, capsys):
    payload = {
        "phi": {"kind": "power", "p": 3},
        "psi": {"kind": "power", "p": 2},
        "domain": {"shape": "disc", "n": 33, "extent": [1.0]},
        "seed": 1,
        "region": {"d_values": [0.15], "r_values": [0.0274],
                   "samples": 8, "c1": 0.45}}
    cfg = write_cfg(tmp_path, payload)
    out = tmp_path / "runs"
    assert main(["region", "--config", cfg, "--out", str(out)]) == 0
    header, columns, rows = read_csv(out, "region")
    from orlicz_lab import REPORT_COLUMNS
    assert columns == REPORT_COLUMNS
    assert len(rows) == 1
    assert "pairs evaluated" in capsys.readouterr().out
    out2 = tmp_path / "runs2"
    assert main(["region", "--config", cfg, "--out", str(out2),
                 "--proof-variant"]) == 0
    assert read_summary(out2)["results"]["proof_variant"] is True
    assert "(2N constant)" in capsys.readouterr().out


# ---------------------------------------------------------------------------
# failure paths

def test_unknown_top_level_key_exits_2(tmp_path, capsys):
    cfg = write_cfg(tmp_path, dict(EIG_CFG, bogus=1))
    assert main(["eig", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "bogus" in capsys.readouterr().err


def test_unknown_section_key_exits_2(tmp_path, capsys):
    payload = dict(EIG_CFG)
    payload["eig"] = {"alpha": 1.0, "junk": 2}
    cfg = write_cfg(tmp_path, payload)
    assert main(["eig", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "junk" in capsys.readouterr().err


def test_missing_config_exits_2(tmp_path, capsys):
    assert main(["eig", "--out", str(tmp_path / "o")]) == 2
    assert "needs --config" in capsys.readouterr().err
    assert main(["eig", "--config", str(tmp_path / "nope.yaml"),
                 "--out", str(tmp_path / "o")]) == 2
    assert "not found" in capsys.readouterr().err


def test_invalid_young_config_exits_2(tmp_path, capsys):
    payload = dict(EIG_CFG, phi={"kind": "power", "p": 2, "zap": 1})
    cfg = write_cfg(tmp_path, payload)
    assert main(["eig", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "zap" in capsys.readouterr().err


def test_exhausted_solver_exits_3(tmp_path, capsys):
    payload = {
        "phi": {"kind": "power", "p": 3},
        "psi": {"kind": "power", "p": 3},
        "domain": {"shape": "interval", "n": 65, "extent": [0.0, 1.0]},
        "solver": {"tol": 1e-13, "max_iter": 2},
        "eig": {"alpha": 1.0}}
    cfg = write_cfg(tmp_path, payload)
    assert main(["eig", "--config", cfg, "--out", str(tmp_path / "o")]) == 3
    assert "solver failure" in capsys.readouterr().err
