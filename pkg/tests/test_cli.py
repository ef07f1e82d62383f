"""Golden-file tests for every subcommand.

Set ARITHPDE_REGEN_GOLDEN=1 to rewrite the files in tests/golden.
"""

import json
import os
from pathlib import Path

import pytest

from arithpde.cli import main, parse_number

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("ARITHPDE_REGEN_GOLDEN") == "1"

CASES = {
    "expand_j": ["expand", "j", "--terms", "3"],
    "expand_eisenstein": ["expand", "eisenstein", "--weight", "6", "--terms", "5"],
    "expand_delta": ["expand", "delta", "--terms", "6"],
    "expand_sigma": ["expand", "sigma", "--m", "5", "--terms", "6"],
    "expand_tate": ["expand", "tate", "--M", "4", "--N", "4"],
    "expand_hurlburt": ["expand", "hurlburt", "--M", "5", "--N", "6"],
    "solve_kernel": ["solve", "--family", "kernel", "--p", "5", "--kappa", "3", "--z", "0", "--alpha", "1", "--M", "10"],
    "solve_additive": ["solve", "--family", "additive", "--kappa", "1", "--M", "30", "--N", "4"],
    "solve_modular_deformed": [
        "solve", "--family", "modular_deformed", "--kappa", "1", "--z", "5", "--alpha", "2", "--M", "6", "--N", "5",
    ],
    "verify_kernel": ["verify", "--family", "kernel", "--p", "5", "--kappa", "3", "--z", "0", "--alpha", "1"],
    "verify_inhomogeneous": ["verify", "--family", "inhomogeneous", "--p", "7", "--kappa", "2", "--z", "7", "--M", "20"],
    "decompose_modular": ["decompose", "--family", "modular_deformed", "--kappa", "2", "--alpha", "3", "--M", "8", "--N", "5"],
    "census_integer": ["census", "--p", "5", "--kappa", "2", "--z", "0", "--M", "30"],
    "census_fraction": ["census", "--kappa", "1/2", "--z", "5", "--M", "12"],
    "instability_grid": ["instability", "--M", "30"],
    "instability_table": ["instability", "--table", "--z", "5", "--z0", "30", "--M", "30"],
}

STATUS = {"instability_grid": 1, "instability_table": 1}


def run(argv, capsys):
    status = main(argv)
    return status, capsys.readouterr().out


def check_golden(name, text):
    path = GOLDEN / f"{name}.out"
    if REGEN:
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(text)
    assert path.read_text() == text


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    status, out = run(CASES[name], capsys)
    assert status == STATUS.get(name, 0)
    check_golden(name, out)


def test_expand_j_values(capsys):
    _, out = run(CASES["expand_j"], capsys)
    data = json.loads(out)
    assert data["series"]["lowest"] == -1
    assert data["series"]["coeffs"] == ["1", "744", "196884"]


def test_census_values(capsys):
    _, out = run(CASES["census_integer"], capsys)
    data = json.loads(out)
    assert data["free"] == [2] and data["obstructed"] == []


def test_verify_pass(capsys):
    status, out = run(CASES["verify_kernel"], capsys)
    data = json.loads(out)
    assert status == 0 and data["verdict"] == "pass"
    assert data["min_coeff_valuation"] >= 8 - 3


def test_instability_grid_reports_missing_witness(capsys):
    status, out = run(CASES["instability_grid"], capsys)
    cells = json.loads(out)["cells"]
    missing = [(c["z"], c["z0"]) for c in cells if c["status"] != "witness"]
    assert missing == [("25", "50")] and status == 1


def test_solve_then_verify_input(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    _, out = run(["solve", "--family", "modular_deformed", "--kappa", "1", "--alpha", "2", "--M", "12"], capsys)
    Path("fam.json").write_text(out)
    status, out = run(["verify", "--input", "fam.json"], capsys)
    assert status == 0
    data = json.loads(out)
    assert data["verdict"] == "pass" and data["context"]["M"] == 12
    status, out = run(["decompose", "--input", "fam.json"], capsys)
    assert status == 0 and json.loads(out)["type"] == "bad"


def test_context_echo(capsys):
    for name in ("solve_kernel", "census_integer", "verify_kernel"):
        _, out = run(CASES[name], capsys)
        ctx = json.loads(out)["context"]
        assert {"p", "N", "f", "M", "seed"} <= set(ctx)


def test_deterministic(capsys):
    outs = {run(CASES["solve_modular_deformed"], capsys)[1] for _ in range(2)}
    assert len(outs) == 1


def test_parallel_matches_serial(capsys):
    _, serial = run(["instability", "--M", "20"], capsys)
    _, parallel = run(["instability", "--M", "20", "--jobs", "2"], capsys)
    assert serial == parallel


def test_fixtures_roundtrip(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    status, out = run(["fixtures", "--out", "fx", "--order", "10"], capsys)
    assert status == 0
    check_golden("fixtures_write", out)
    status, out = run(["fixtures", "--out", "fx", "--order", "10", "--check"], capsys)
    assert status == 0 and json.loads(out)["mismatched"] == []
    (tmp_path / "fx" / "E4.json").write_text("{}")
    status, out = run(["fixtures", "--out", "fx", "--order", "10", "--check"], capsys)
    assert status == 1 and json.loads(out)["mismatched"] == ["E4"]


def test_usage_errors(capsys):
    assert main(["expand", "j", "--p", "4"]) == 2
    assert main(["verify", "--family", "additive"]) == 2
    assert main(["census", "--kappa", "5"]) == 2
    assert main(["solve", "--kappa", "abc"]) == 2
    assert main(["expand", "eisenstein", "--weight", "8"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["expand", "nothing"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_parse_number():
    assert parse_number("3") == 3
    assert str(parse_number("1/2")) == "1/2"
    assert len(parse_number("(1,2)")) == 2
