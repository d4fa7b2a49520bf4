"""Command-line front end: exit codes, JSON output, reproducibility."""

import json
import subprocess
import sys

import pytest

from cubecount import cli
from cubecount import clusters, asymptotics


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_oracle_small_dimension(capsys):
    code, out, err = run_cli(capsys, "oracle", "--d", "2")
    assert code == 0 and err == ""
    obj = json.loads(out)
    assert obj["counts"] == ["1", "4", "2"]
    assert obj["total"] == "7"


def test_oracle_with_fugacity(capsys):
    code, out, _ = run_cli(capsys, "oracle", "--d", "3", "--lam", "1")
    assert code == 0
    obj = json.loads(out)
    assert obj["Z"] == "35"
    assert obj["lam"] == "1"
    assert "ln_Z" in obj and "mean_size" in obj


def test_usage_errors_exit_one_with_single_line(capsys):
    for argv in (["oracle", "--d", "0"],
                 ["oracle"],
                 ["pj", "--t", "1"],
                 ["zeta", "--lam", "-1", "--d", "4", "--t", "2"],
                 ["oracle", "--d", "2", "--bogus-flag"],
                 ["validate", "--only", "99"],
                 ["no-such-command"]):
        code = cli.main(argv)
        captured = capsys.readouterr()
        assert code == 1, argv
        assert captured.err.startswith("error:"), argv
        assert captured.err.strip().count("\n") == 0, argv


def test_budget_exhaustion_exits_two(capsys):
    code, _, err = run_cli(capsys, "polymers", "--d", "9", "--max-size", "3",
                           "--budget", "5")
    assert code == 2
    assert err.startswith("error: budget exhausted")


def test_rational_arguments_accept_fractions(capsys):
    code, out, _ = run_cli(capsys, "oracle", "--d", "2", "--lam", "3/7")
    assert code == 0
    assert json.loads(out)["lam"] == "3/7"


def test_rj_output_is_reproducible(capsys):
    outs = []
    for _ in range(2):
        clusters.clear_caches()
        asymptotics.clear_caches()
        code, out, _ = run_cli(capsys, "rj", "--j", "2")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    obj = json.loads(outs[0])
    assert obj["kind"] == "R" and obj["jmax"] == 2
    assert len(obj["entries"]) == 2


def test_bj_and_pj_emit_series(capsys):
    code, out, _ = run_cli(capsys, "bj", "--r", "1")
    assert code == 0
    assert json.loads(out)["entries"][0]["j"] == 1
    code, out, _ = run_cli(capsys, "pj", "--t", "3")
    assert code == 0
    js = [e["j"] for e in json.loads(out)["entries"]]
    assert js == [1, 2]


def test_lambda_beta_regime_warning_on_stderr(capsys):
    code, out, err = run_cli(capsys, "lambda-beta", "--beta", "1/10",
                             "--d", "8", "--t", "2")
    assert code == 0
    assert err.startswith("warning:")
    obj = json.loads(out)
    assert obj["beta"] == "1/10" and "value" in obj


def test_count_emits_log_values(capsys):
    code, out, _ = run_cli(capsys, "count", "--beta", "1/2", "--d", "10",
                           "--t", "2")
    assert code == 0
    obj = json.loads(out)
    assert {"ln_value", "log10_value", "beta", "d", "t"} <= set(obj)


def test_clusters_stratum_with_value(capsys):
    code, out, _ = run_cli(capsys, "clusters", "--d", "4", "--k", "1",
                           "--lam", "1/20")
    assert code == 0
    obj = json.loads(out)
    assert obj["stratum_value"] == "64000/194481"


def test_sample_run_is_byte_reproducible(tmp_path, capsys):
    args = ["sample", "--d", "3", "--lam", "1", "--steps", "20000",
            "--burn-in", "1000", "--thin", "50", "--seed", "99"]
    paths = []
    for tag in ("a", "b"):
        jout = tmp_path / f"{tag}.json"
        csvout = tmp_path / f"{tag}.csv"
        code = cli.main(args + ["--out", str(jout), "--csv", str(csvout)])
        capsys.readouterr()
        assert code == 0
        paths.append((jout.read_bytes(), csvout.read_bytes()))
    assert paths[0] == paths[1]
    obj = json.loads(paths[0][0])
    assert obj["d"] == 3 and "per_type" in obj
    assert paths[0][1].decode().splitlines()[0] == "step,size,odd,even,defects"


def test_validate_single_fast_criterion(capsys):
    code, out, _ = run_cli(capsys, "validate", "--only", "2")
    assert code == 0
    assert "PASS" in out


def test_report_pipeline(tmp_path, capsys):
    oracle_path = tmp_path / "oracle5.json"
    zeta_path = tmp_path / "zeta5.json"
    for argv, path in ((["oracle", "--d", "5"], oracle_path),
                       (["zeta", "--lam", "1", "--d", "5", "--t", "2"], zeta_path)):
        assert cli.main(argv + ["--out", str(path)]) == 0
        capsys.readouterr()
    code, out, _ = run_cli(capsys, "report", "--inputs", str(oracle_path),
                           str(zeta_path), "--out-dir", str(tmp_path))
    assert code == 0
    report = (tmp_path / "report.txt").read_text()
    assert "ln Z, d=5, lam=1" in report
    assert "exact:" in report
    dat = (tmp_path / "truncation_error.dat").read_text()
    assert any(line and not line.startswith("#") for line in dat.splitlines())
    assert out.strip() != ""


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cubecount.cli",
                           "oracle", "--d", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["total"] == "7"
