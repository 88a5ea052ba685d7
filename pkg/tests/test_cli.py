import csv
import io
import json
import subprocess
import sys

import pytest

from stablehit.cli import parse_grid, run


def _run(argv):
    out = io.StringIO()
    code = run(argv, out=out)
    return code, out.getvalue()


def test_density_csv():
    code, text = _run(["density", "--law", "tau1", "--alpha", "1.5", "--grid", "0.01:10:200:log"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["x", "f", "err_est", "rep"]
    assert len(rows) == 201
    x, f = float(rows[1][0]), float(rows[1][1])
    assert x == 0.01 and f > 0


def test_output_round_trips():
    _, text = _run(["density", "--law", "u_alpha", "--alpha", "1.5", "--grid", "1:2:2"])
    row = text.splitlines()[1].split(",")
    from stablehit import closed_forms as cf
    assert float(row[1]) == float(cf.density_closed("u_alpha", 1.5, 1.0))


def test_moments_negative_exponent():
    code, text = _run(["moments", "--law", "t1", "--alpha", "1.5", "--s", "-0.5"])
    assert code == 0
    assert float(text.splitlines()[1].split(",")[1]) == pytest.approx(0.8467486027, rel=1e-9)


def test_sample_is_byte_identical():
    argv = ["sample", "--law", "s1", "--alpha", "1.7", "--n", "50", "--seed", "9"]
    assert _run(argv)[1] == _run(argv)[1]


def test_mode_json():
    code, text = _run(["mode", "--law", "u_alpha", "--alpha", "1.5", "--format", "json"])
    d = json.loads(text)[0]
    assert d["mode_closed_form"] == pytest.approx(2 ** -0.5)
    assert d["verdict"] == "UnimodalOnGrid"


def test_laplace_and_cdf_and_deriv():
    assert _run(["laplace", "--alpha", "1.5", "--grid", "0:2:3"])[1].splitlines()[1] == "0.0,1.0"
    code, text = _run(["cdf", "--alpha", "1.5", "--grid", "0.5:5:2", "--tail", "upper"])
    assert code == 0 and text.startswith("x,F,")
    code, text = _run(["deriv", "--law", "tau1", "--alpha", "1.5", "--p", "2", "--grid", "1:2:2"])
    assert code == 0 and text.startswith("x,f2,")


def test_verify_json_subset():
    code, text = _run(["verify", "--alpha", "1.5", "--json", "--steps", "4"])
    assert code == 0
    assert json.loads(text)["alpha"] == 1.5


@pytest.mark.parametrize("argv", [
    ["density", "--law", "tau1", "--alpha", "2.5", "--grid", "0.1:1:3"],
    ["density", "--law", "tau1", "--alpha", "1.5", "--grid", "1:0.1:3"],
    ["density", "--law", "nope", "--alpha", "1.5", "--grid", "0.1:1:3"],
    ["moments", "--law", "tau1", "--alpha", "1.5", "--s", "5"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _ = _run(argv)
    assert code == 2
    assert "usage" in capsys.readouterr().err


def test_grid_parser():
    g = parse_grid("0.1:10:5:log")
    assert g.values()[0] == pytest.approx(0.1) and g.values()[-1] == pytest.approx(10.0)
    assert parse_grid("0:1:3").spacing == "linear"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "stablehit", "moments", "--law", "hat_tau1",
                        "--alpha", "1.5", "--s", "-1"], capture_output=True, text=True)
    assert r.returncode == 0
    assert float(r.stdout.splitlines()[1].split(",")[1]) == pytest.approx(1.3293403882, rel=1e-9)
