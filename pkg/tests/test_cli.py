"""Command-line surface: schemas, formats, exit codes, config."""

import json

import pytest
from click.testing import CliRunner

from riccati_pade.cli import cli


@pytest.fixture()
def runner():
    return CliRunner()


def _json(result):
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


def test_solve_json_schema(runner):
    result = runner.invoke(
        cli, ["solve", "--potential", "quartic", "--dmax", "6", "--digits", "12"]
    )
    doc = _json(result)
    assert set(doc) == {"inputs", "results", "meta"}
    assert doc["inputs"]["command"] == "solve"
    assert doc["inputs"]["potential"] == "quartic"
    row = doc["results"][-1]
    assert row["root"].startswith("1.060")
    assert int(row["certified_digits"]) >= 12
    # keys are emitted sorted for diff-friendly output
    assert result.output == json.dumps(doc, indent=2, sort_keys=True) + "\n"


def test_solve_exact_shifted_well(runner):
    # integer eigenvalue of the exponential well, reported with the
    # constant shift undone exactly
    result = runner.invoke(
        cli,
        [
            "solve", "--potential", "mpt:lambda=3", "--dmin", "8", "--dmax", "8",
            "--digits", "20", "--seed", "-4",
        ],
    )
    doc = _json(result)
    assert doc["results"][0]["root"] == "-4.0000000000000000000"
    assert doc["meta"]["constant_shift"] == "-6"


def test_csv_is_crlf_terminated(runner):
    result = runner.invoke(
        cli,
        ["oracle", "--potential", "harmonic", "--kmax", "1", "--format", "csv"],
    )
    assert result.exit_code == 0, result.output
    # Result.output folds \r\n into \n, so check the raw byte stream
    assert b"\r\n" in result.stdout_bytes
    header = result.output.splitlines()[0]
    assert header == "index,parity,energy"


def test_out_writes_file(runner, tmp_path):
    target = tmp_path / "levels.json"
    result = runner.invoke(
        cli,
        ["oracle", "--potential", "harmonic", "--kmax", "0", "--out", str(target)],
    )
    assert result.exit_code == 0, result.output
    doc = json.loads(target.read_text())
    assert abs(float(doc["results"][0]["energy"]) - 1.0) < 1e-8


def test_bounds_gap_stop_option(runner):
    result = runner.invoke(
        cli,
        [
            "bounds", "--potential", "quartic", "--dmax", "12", "--digits", "20",
            "--gap-stop", "1e-6",
        ],
    )
    doc = _json(result)
    rows = doc["results"]
    assert rows, "no bracket rows"
    assert int(rows[-1]["D"]) < 12
    assert float(rows[-1]["gap"]) < 1e-6 * 1.1


def test_rate_fits_decay(runner):
    result = runner.invoke(
        cli,
        ["rate", "--potential", "quartic", "--dmin", "2", "--dmax", "9", "--digits", "24"],
    )
    doc = _json(result)
    fit = doc["results"][0]
    assert 4.1 <= float(fit["rate"]) <= 4.8
    assert int(fit["points"]) >= 7


def test_hankel_poly_exact_string(runner):
    result = runner.invoke(
        cli,
        ["hankel-poly", "--potential", "harmonic", "--dim", "2", "--d", "0"],
    )
    doc = _json(result)
    assert doc["results"][0]["polynomial"] == (
        "1/4725*E^6 - 1/175*E^4 + 17/1575*E^2 - 1/189"
    )


def test_hankel_poly_bivariate_monic(runner):
    result = runner.invoke(
        cli,
        ["hankel-poly", "--potential", "x2x4:lambda=lambda", "--dim", "2", "--d", "0", "--monic"],
    )
    doc = _json(result)
    assert doc["results"][0]["polynomial"] == (
        "E^6 - 27*E^4 + 162*lambda*E^3 + 51*E^2 - 162*lambda*E + (-189*lambda^2 - 25)"
    )
    assert doc["meta"]["parameter"] == "lambda"


def test_expect_command(runner):
    result = runner.invoke(
        cli,
        [
            "expect", "--potential", "quartic", "--observable", "0,1",
            "--dim", "9", "--digits", "12",
        ],
    )
    doc = _json(result)
    assert doc["results"][0]["value"].startswith("0.36202264")


def test_exit_code_for_unreachable_accuracy(runner):
    result = runner.invoke(
        cli,
        [
            "solve", "--potential", "quartic", "--dmax", "3", "--digits", "50",
            "--precision-cap", "40",
        ],
    )
    assert result.exit_code == 2
    assert result.output.lower().startswith("error")


def test_exit_code_for_bad_input(runner):
    result = runner.invoke(cli, ["solve", "--potential", "nosuch"])
    assert result.exit_code == 3
    result = runner.invoke(cli, ["solve", "--potential", "quartic", "--seed", "abc"])
    assert result.exit_code == 3
    result = runner.invoke(cli, ["nosuch-command"])
    assert result.exit_code == 3


def test_config_file_merges_and_flags_override(runner, tmp_path):
    cfg = tmp_path / "rpm.json"
    cfg.write_text(json.dumps({"potential": "harmonic", "format": "csv", "dmax": 4}))
    result = runner.invoke(cli, ["solve", "--config", str(cfg), "--digits", "10"])
    assert result.exit_code == 0, result.output
    assert b"\r\n" in result.stdout_bytes  # csv came from the config's format alias
    assert result.output.splitlines()[0].startswith("D,")
    override = runner.invoke(
        cli, ["solve", "--config", str(cfg), "--digits", "10", "--format", "json"]
    )
    doc = _json(override)
    assert doc["inputs"]["potential"] == "harmonic"
    assert int(doc["inputs"]["dmax"]) == 4


def test_sequence_branch_rows(runner):
    result = runner.invoke(
        cli,
        [
            "sequence", "--potential", "mpt:lambda=3", "--dmin", "2", "--dmax", "5",
            "--digits", "15", "--window", "-4:9",
        ],
    )
    doc = _json(result)
    branches = {row["branch"] for row in doc["results"]}
    assert len(branches) >= 2
    dims = {int(row["D"]) for row in doc["results"]}
    assert dims == {2, 3, 4, 5}


def test_table_spurious_row(runner):
    result = runner.invoke(
        cli,
        ["table", "--name", "spurious", "--dmax", "4", "--digits", "20"],
    )
    doc = _json(result)
    assert any(abs(float(r["E0"]) + 4.0) < 0.01 for r in doc["results"])
    assert any(abs(float(r["spurious"]) + 9.0) < 0.01 for r in doc["results"])


def test_figure_data_smoke(runner):
    result = runner.invoke(
        cli,
        [
            "figure-data", "--preset", "anal", "--lambdas", "1", "--dmin", "2",
            "--dmax", "2", "--digits", "12", "--format", "csv",
        ],
    )
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert len(lines) >= 2  # header plus at least one data row
    assert lines[0].split(",")[0] == "lambda"
