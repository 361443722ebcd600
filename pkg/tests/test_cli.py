import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from corrqsl.cli import main, parse_axis
from corrqsl.export import fmt, read_sweep_csv, sweep_to_csv
from corrqsl.svg import sweep_to_svg
from corrqsl.sweep import Axis, SweepSpec, run_sweep

SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kernels_rows(capsys):
    code, out, _ = run(capsys, "kernels", "--alpha", "0.01", "--mu", "5", "--v", "0.01", "--t", "0", "1")
    assert code == 0
    header, row0, row1 = out.strip().splitlines()
    cols = header.split(",")
    zero = dict(zip(cols, map(float, row0.split(","))))
    one = dict(zip(cols, map(float, row1.split(","))))
    assert zero["r"] == 0.0 and zero["phi"] == 0.0
    assert one["r"] == pytest.approx(1.08, rel=1e-12)
    assert abs(one["r_residual"]) < 1e-6


def test_kernels_invalid_mu(capsys):
    code, _, err = run(capsys, "kernels", "--mu", "-1")
    assert code == 2 and "mu" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["kernels", "--alpha", "abc"])
    assert exc.value.code == 2


def test_kappa_json(capsys):
    code, out, _ = run(capsys, "kappa", "--lambda", "0.25", "--t", "0", "--format", "json")
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["kappa_im"] == 0.0 and row["coherence_l1"] == pytest.approx(row["kappa_abs"])


def test_nonmarkov_cases(capsys):
    code, out, _ = run(capsys, "nonmarkov", "--mu", "8", "--format", "json")
    assert code == 0 and json.loads(out)["n_value"] < 1e-3
    code, out, _ = run(capsys, "nonmarkov", "--mu", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["n_value"] > 0 and doc["intervals"]
    code, out, _ = run(capsys, "nonmarkov", "--alpha", "0")
    assert code == 0 and out.splitlines()[1].startswith(fmt(0.0))


def test_nonmarkov_non_convergence_exit_3(capsys):
    code, _, err = run(capsys, "nonmarkov", "--mu", "1.05", "--alpha", "0.2", "--tol", "1e-14")
    assert code == 3 and "converge" in err


def test_nonmarkov_bad_exponent():
    with pytest.raises(SystemExit) as exc:
        main(["nonmarkov", "--exponent", "3"])
    assert exc.value.code == 2


def test_qsl_unitary(capsys):
    code, out, _ = run(capsys, "qsl", "--alpha", "0", "--lambda", "0", "--omega0", "1",
                       "--tau", "1.5708", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["tau_correlated"] == pytest.approx(0.6366, abs=1e-4)
    assert doc["consistency_check"] is True


def test_qsl_ordering_and_convention(capsys):
    vals = {}
    for mu in ("5", "8"):
        _, out, _ = run(capsys, "qsl", "--mu", mu, "--lambda", "0.25", "--tau", "1", "--format", "json")
        vals[mu] = json.loads(out)["tau_correlated"]
    assert vals["5"] < vals["8"]
    _, out, _ = run(capsys, "qsl", "--tau", "2", "--convention", "with-tau-factor", "--format", "json")
    assert json.loads(out)["convention"] == "derived_with_tau_factor"


@pytest.mark.parametrize("tau", ["0", "-1"])
def test_qsl_bad_tau(capsys, tau):
    code, _, err = run(capsys, "qsl", "--tau", tau)
    assert code == 2 and "tau" in err


def test_sweep_csv_round_trip(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--metric", "qsl_correlated", "--axis", "lambda:0:1:5",
                     "--axis", "mu:5:8:2", "--out", str(out))
    assert code == 0
    rows = read_sweep_csv(out.read_text())
    assert len(rows) == 10
    assert list(rows[0]) == ["axis1", "axis1_value", "axis2", "axis2_value", "metric", "value", "converged"]
    spec = SweepSpec("qsl_correlated", (Axis("lambda", 0, 1, 5), Axis("mu", 5, 8, 2)))
    expected = run_sweep(spec)
    assert [r["value"] for r in rows] == [r.value for r in expected.rows]


def test_sweep_bad_axis(capsys):
    code, _, err = run(capsys, "sweep", "--metric", "qsl_correlated", "--axis", "beta:0:1:3")
    assert code == 2 and "beta" in err
    code, _, err = run(capsys, "sweep", "--metric", "qsl_correlated", "--axis", "mu:1:2")
    assert code == 2


def test_sweep_strict(capsys):
    args = ["sweep", "--metric", "non_markovianity", "--axis", "mu:1.02:1.05:2", "--alpha", "0.2",
            "--tol", "1e-14"]
    assert run(capsys, *args)[0] == 0
    assert run(capsys, "--strict", *args)[0] == 3


def test_reproduce(capsys, tmp_path):
    code, out, _ = run(capsys, "reproduce", "fig5b", str(tmp_path))
    assert code == 0
    assert out.startswith("fig5b: rows=101") and "argmax lambda=0" in out
    rows = read_sweep_csv((tmp_path / "fig5b.csv").read_text())
    assert len(rows) == 101
    assert rows[0]["value"] == pytest.approx(1.0) and rows[-1]["value"] < 1e-10
    tree = ET.parse(tmp_path / "fig5b.svg")
    assert len(tree.findall(f".//{SVG}polyline")) == 1


def test_reproduce_unknown_figure(capsys, tmp_path):
    code, _, err = run(capsys, "reproduce", "fig9", str(tmp_path))
    assert code == 2 and "fig9" in err


def test_svg_byte_identical_and_well_formed():
    spec = SweepSpec("qsl_correlated", (Axis("tau", 0.1, 2.0, 9), Axis("mu", 5.0, 8.0, 2)),
                     options={"tau": 1.0})
    a, b = sweep_to_svg(run_sweep(spec), "x"), sweep_to_svg(run_sweep(spec), "x")
    assert a == b
    root = ET.fromstring(a.encode())
    assert len(root.findall(f"{SVG}polyline")) == 2
    labels = [t.text for t in root.findall(f"{SVG}text")]
    assert "tau" in labels and "0.1" in labels


def test_svg_cell_map_for_dense_second_axis():
    spec = SweepSpec("coherence_initial", (Axis("lambda", 0, 1, 4), Axis("v", 0.01, 1, 10)))
    root = ET.fromstring(sweep_to_svg(run_sweep(spec)).encode())
    assert not root.findall(f"{SVG}polyline")
    assert len(root.findall(f"{SVG}rect")) >= 40


def test_csv_is_full_precision():
    spec = SweepSpec("coherence_initial", (Axis("lambda", 0, 1, 7),))
    res = run_sweep(spec)
    parsed = read_sweep_csv(sweep_to_csv(res))
    assert [r["value"] for r in parsed] == [r.value for r in res.rows]
    assert [r["axis1_value"] for r in parsed] == [r.values[0] for r in res.rows]


def test_parse_axis():
    ax = parse_axis("alpha:0.001:0.2:5:log")
    assert (ax.name, ax.count, ax.scale) == ("alpha", 5, "log")
    with pytest.raises(ValueError):
        parse_axis("alpha:a:b:5")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "corrqsl", "qsl", "--tau", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 2


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text('# comment\nlambda = 0.25\nconvention = "with-tau-factor"\nformat = "json"\n')
    code, out, _ = run(capsys, "qsl", "--config", str(cfg), "--tau", "1")
    doc = json.loads(out)
    assert code == 0 and doc["convention"] == "derived_with_tau_factor"
    code, out, _ = run(capsys, "qsl", "--config", str(cfg), "--tau", "1", "--convention", "as-printed")
    assert json.loads(out)["convention"] == "as_printed"


def test_config_errors(capsys, tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("mu = 5\nlambda = 1.5\n")
    code, _, err = run(capsys, "qsl", "--config", str(cfg))
    assert code == 2 and "lambda" in err and "[0, 1]" in err and ":2:" in err
    cfg.write_text("gamma = 2\n")
    code, _, err = run(capsys, "qsl", "--config", str(cfg))
    assert code == 2 and "gamma" in err and ":1:" in err
    code, _, err = run(capsys, "qsl", "--config", str(tmp_path / "missing.toml"))
    assert code == 2
