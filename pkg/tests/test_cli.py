"""Command-line front end: exit codes, outputs and configuration."""

import csv
import io
import json

import mpmath as mp
import pytest

from tronquee.cli import EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION, RunConfig, main, read_config
from tronquee.errors import ValidationError


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_airy_member_has_zero_sigma(capsys):
    code, out, _ = _run(capsys, "solve", "--alpha", "0", "--omega", "1", "--s-end", "-2")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows
    for row in rows:
        assert mp.mpf(row["sigma"]) == 0 and mp.mpf(row["dsigma"]) == 0 and mp.mpf(row["H"]) == 0


def test_solve_pole_free_member_json(capsys, hm_traj):
    code, out, _ = _run(capsys, "solve", "--alpha", "0.3", "--omega", "0", "--s-end", "-12", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["poles"] == []


def test_invalid_alpha_is_validation_error(capsys):
    code, _, err = _run(capsys, "solve", "--alpha", "-0.6")
    assert code == EXIT_VALIDATION
    assert json.loads(err)["error"] == "validation"


def test_omega_and_beta_are_exclusive(capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve", "--omega", "1", "--beta-imag", "0.1"])
    assert info.value.code == 2


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig(precision_bits=32)
    with pytest.raises(ValidationError):
        RunConfig(format="xml")
    with pytest.raises(ValidationError):
        RunConfig(s_end=20)
    with pytest.raises(ValidationError):
        RunConfig(omega="1", beta_imag="0.1")


def test_integral_I2_airy_member(capsys):
    code, out, _ = _run(capsys, "integral", "I2", "--alpha", "0", "--omega", "1", "--s", "-3")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert mp.mpf(payload["value"]) == 0 and payload["pass"] is True


def test_integral_c_sweep(capsys):
    code, out, _ = _run(
        capsys, "integral", "I1", "--alpha", "-0.25", "--omega", "0", "--s", "2", "--c", "-1", "--c-sweep", "-4"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert abs(mp.mpf(payload["value"]) - mp.mpf(payload["c_sweep"]["value"])) < mp.mpf(10) ** -25


def test_verify_identity(capsys):
    code, _, err = _run(capsys, "verify", "identityH", "--alpha", "0.3", "--omega", "0")
    assert code == EXIT_OK
    assert err.count("PASS") == 3


def test_failed_check_exits_numeric(capsys):
    # 192 bits cannot meet a 1e-58 pointwise target.
    code, _, err = _run(capsys, "verify", "lemmas", "--alpha", "0", "--omega", "2", "--tol", "1e-60", "--s-end", "-2")
    assert code == EXIT_NUMERIC
    assert "FAIL" in err


@pytest.mark.parametrize("which,extra", [("airy", []), ("bessel", ["--two-alpha", "-0.4"]), ("chf", ["--alpha", "0.3"])])
def test_parametrix_checks(capsys, which, extra):
    code, out, _ = _run(capsys, "parametrix-check", which, *extra)
    assert code == EXIT_OK
    assert json.loads(out)["pass"] is True


def test_tw_table_csv(capsys):
    code, out, _ = _run(capsys, "tw", "--x-min", "-1", "--x-max", "1", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 4


def test_thinned_requires_omega_below_one(capsys):
    code, _, _ = _run(capsys, "thinned", "--omega", "2", "--s-min", "-1", "--s-max", "0")
    assert code == EXIT_VALIDATION


def test_output_is_deterministic(capsys, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for path in (first, second):
        code, _, _ = _run(capsys, "integral", "I2", "--alpha", "0.3", "--omega", "0", "--s", "-2", "--out", str(path))
        assert code == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_config_file_and_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nalpha = 0\nomega = 2\nprecision-bits = 128\nformat = json\n")
    assert read_config(str(cfg)) == {"alpha": "0", "omega": "2", "precision_bits": 128, "format": "json"}
    code, out, _ = _run(capsys, "integral", "I2", "--config", str(cfg), "--omega", "1", "--s", "-2")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["precision_bits"] == 128
    assert mp.mpf(payload["omega"]) == 1


def test_config_file_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("gamma = 3\n")
    with pytest.raises(ValidationError):
        read_config(str(cfg))
