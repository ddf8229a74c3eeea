import csv
import json
import math
import subprocess
import sys

import jsonschema
import pytest

from pslab.cli import main
from pslab.report import CSV_HEADERS, REPORT_SCHEMA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    return doc


def test_verdict_positive_capacity(capsys):
    doc = report(capsys, "verdict", "--domain", "polydisk:2", "--beta", "1.5", "--poly", "1-z1")
    assert doc["result"]["verdict"] == "NONCYCLIC(positive capacity)"


def test_energy_edge(capsys):
    doc = report(capsys, "energy", "--domain", "polydisk:2", "--beta", "2,1", "--measure", "fix(1)xcircle(1)")
    finite, infinite = doc["result"]["energies"]
    assert finite["energy"] == pytest.approx(math.pi**2 / 6 - 1, abs=1e-9)
    assert infinite["energy"] is None and infinite["divergent"] is True


def test_monomial_norms_csv(capsys, tmp_path):
    path = tmp_path / "out.csv"
    report(capsys, "monomial-norms", "--domain", "ellipsoid:1,1", "--beta", "0", "--max-degree", "2", "--csv", str(path))
    rows = list(csv.reader(path.open()))
    assert tuple(rows[0]) == CSV_HEADERS["monomial-norms"]
    table = {r[0]: float(r[2]) for r in rows[1:]}
    assert table["(1,1)"] == pytest.approx(1 / 6, rel=1e-14)
    assert len(table) == 6


@pytest.mark.parametrize(
    "argv",
    [
        ["norm", "--domain", "omega:1,1,2", "--beta", "0,1", "--poly", "1 - z1/2"],
        ["dilation-sweep", "--domain", "polydisk:2", "--beta", "0.5,2", "--poly", "1-z1", "--r-grid", "6"],
        ["capacity-bound", "--domain", "polydisk:2", "--beta", "2.5", "--measure", "fix(1)xfix(1)"],
        ["pointeval-bound", "--domain", "polydisk:2", "--beta", "2,3", "--zeta", "1,1j"],
        ["s-bound", "--p", "2", "--r", "0.5", "--jmax", "300"],
        ["laplace-verify", "--r", "0.3", "--lambdas", "50,500"],
        ["pse-check", "--domain", "ellipsoid:1,2", "--max-degree", "50"],
        ["oracle", "--kind", "ball", "--gamma", "1,1", "--gamma", "2,0", "--samples", "20000", "--seed", "7"],
        ["oracle", "--kind", "radial", "--alpha", "1", "--c", "2"],
        ["approx-reinhardt", "--from-ellipsoid", "1,1", "--count", "32", "-k", "6"],
        ["verdict", "--domain", "polydisk:2", "--beta", "0.3,4", "--poly", "z1 - 1/2"],
    ],
)
def test_reports_and_csv(capsys, tmp_path, argv):
    path = tmp_path / "t.csv"
    doc = report(capsys, *argv, "--csv", str(path))
    assert doc["command"] == argv[0]
    rows = list(csv.reader(path.open()))
    assert tuple(rows[0]) == CSV_HEADERS[argv[0]] and len(rows) > 1


def test_reports_are_byte_identical(capsys):
    argv = ["oracle", "--kind", "sphere", "--gamma", "1,1", "--samples", "30000", "--seed", "3", "--threads", "2"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv[:-1], "1")
    assert a == b
    argv = ["dilation-sweep", "--domain", "ball:2", "--beta", "2", "--poly", "1-(z1+z2)/2", "--r-grid", "5"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_domain_file(capsys, tmp_path):
    path = tmp_path / "omega.json"
    path.write_text(
        json.dumps(
            {
                "kind": "polyhedral",
                "dimension": 2,
                "faces": [
                    {"lambda": 1, "exponents": [[1, 1], [0, 1]]},
                    {"lambda": 1, "exponents": [[0, 1], [1, 1]]},
                    {"lambda": 2, "exponents": [[1, 2], [1, 2]]},
                ],
            }
        )
    )
    doc = report(capsys, "monomial-norms", "--domain-file", str(path), "--beta", "0", "--max-degree", "1")
    entries = {tuple(e["multi_index"]): e["norm_sq"] for e in doc["result"]["entries"]}
    # lambda = 2 on |z1 z2|^{1/2} is the m = n = 1, lambda = 4 domain
    assert entries[(1, 0)] == pytest.approx((0.25**2 + 1) / 2, rel=1e-14)


@pytest.mark.parametrize(
    "argv",
    [
        ["norm", "--domain", "polydisk:3", "--beta", "1", "--poly", "1-z4"],
        ["norm", "--domain", "polydisk:2", "--beta", "1", "--poly", "1/(1-z1)"],
        ["norm", "--domain", "cube:2", "--beta", "1", "--poly", "1"],
        ["energy", "--domain", "polydisk:2", "--beta", "2", "--measure", "fix(0.5)xcircle(1)"],
        ["verdict", "--domain", "polydisk:2", "--poly", "1-z1"],
        ["dilation-sweep", "--domain", "polydisk:2", "--beta", "1", "--poly", "z1"],
        ["oracle", "--kind", "sphere", "--gamma", "1,1", "--samples", "10"],
        ["no-such-command"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    assert code == 2


def test_nonconvergence_exit_3(capsys):
    code, out, _ = run(capsys, "dilation-sweep", "--domain", "polydisk:2", "--beta", "2", "--poly", "1-z1", "--r-grid", "0.99", "--cap", "20")
    assert code == 3
    assert json.loads(out)["result"]["unconverged"] is True


def test_threads_from_environment(monkeypatch):
    from pslab.cli import _default_threads

    monkeypatch.setenv("PSLAB_THREADS", "3")
    assert _default_threads() == 3


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "pslab.cli", "s-bound", "--p", "2", "--r", "0", "--jmax", "10"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(out.stdout)["result"]["maximum"] == 1.0
