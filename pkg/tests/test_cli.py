import csv
import io
import json

import pytest
from click.testing import CliRunner

from pearcey import checks
from pearcey import cli


def run(*args, env=None):
    return CliRunner().invoke(cli.main, [str(a) for a in args], env=env)


def rows(result):
    lines = [l for l in result.output.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_tiny_interval():
    r = run("gap", "--alpha", 2, "--rho", 0, "--s", 1e-6)
    assert r.exit_code == 0
    assert abs(float(rows(r)[0]["F"])) < 1e-8


@pytest.fixture(scope="module")
def grid_run():
    return run("gap", "--alpha", 2, "--rho", 0, "--s-grid", "8:25:6log")


def test_grid_monotone(grid_run):
    assert grid_run.exit_code == 0
    F = [float(r["F"]) for r in rows(grid_run)]
    assert len(F) == 6
    assert all(b < a for a, b in zip(F, F[1:]))


def test_threads_do_not_change_output(grid_run):
    r = run("gap", "--alpha", 2, "--rho", 0, "--s-grid", "8:25:6log", "--threads", 3)
    assert r.output == grid_run.output
    r = run("gap", "--alpha", 2, "--rho", 0, "--s-grid", "8:25:6log", env={"PEARCEY_THREADS": "2"})
    assert r.output == grid_run.output


def test_thinning_raises_log_det():
    full = float(rows(run("gap", "--s", 3))[0]["F"])
    thin = float(rows(run("gap", "--s", 3, "--gamma", 0.5))[0]["F"])
    assert thin > full


def test_deterministic_and_round_trip():
    a, b = run("gap", "--s", 2, "--rho", 0.5), run("gap", "--s", 2, "--rho", 0.5)
    assert a.output == b.output
    row = rows(a)[0]
    assert float(row["F"]) == float("%.17g" % float(row["F"]))
    assert list(row) == ["s", "F", "det", "est_error", "m_used"]


def test_json_mirrors_csv():
    c = rows(run("gap", "--s", 2))[0]
    j = json.loads(run("gap", "--s", 2, "--format", "json").output)[0]
    assert list(j) == list(c)
    assert j["F"] == float(c["F"])


def test_out_file(tmp_path):
    out = tmp_path / "g.csv"
    r = run("gap", "--s", 1, "--out", out)
    assert r.exit_code == 0 and r.output == ""
    assert out.read_text().startswith("s,F,det,est_error,m_used\n")


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nalpha = 3\nrho = 0.5  # trailing\n")
    from_file = rows(run("gap", "--config", cfg, "--s", 2))[0]["F"]
    explicit = rows(run("gap", "--alpha", 3, "--rho", 0.5, "--s", 2))[0]["F"]
    assert from_file == explicit
    flag_wins = rows(run("gap", "--config", cfg, "--s", 2, "--alpha", 2))[0]["F"]
    assert flag_wins == rows(run("gap", "--alpha", 2, "--rho", 0.5, "--s", 2))[0]["F"]


@pytest.mark.parametrize("args", [
    ("gap", "--alpha", -2, "--s", 1),
    ("gap", "--s", 40),
    ("gap",),
    ("gap", "--s", 1, "--s-grid", "1:2:3"),
    ("gap", "--s-grid", "1:2"),
    ("gap", "--s", 1, "--gamma", 1.5),
    ("verify", "--suite", "nope"),
    ("kernel", "1.0"),
])
def test_config_errors_exit_one(args):
    assert run(*args).exit_code == 1


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run("gap", "--config", cfg, "--s", 1).exit_code == 1
    assert run("gap", "--config", tmp_path / "missing.cfg", "--s", 1).exit_code == 1


def test_non_convergence_exit_two():
    assert run("gap", "--s", 20, "--nodes", 32, "--tol", 1e-16).exit_code == 2


def test_verify_exit_codes(monkeypatch):
    r = run("verify", "--suite", "bessel", "--format", "json")
    assert r.exit_code == 0
    data = json.loads(r.output)
    assert data and all(d["passed"] for d in data)
    fail = lambda: [checks.CheckResult("bessel", "forced", 1.0, 0.5)]
    monkeypatch.setitem(checks.SUITES, "bessel", fail)
    assert run("verify", "--suite", "bessel").exit_code == 2


def test_kernel_command():
    r = rows(run("kernel", 0.7, 1.3, "--alpha", 2))
    vals = {x["representation"]: float(x["value"]) for x in r}
    assert set(vals) == {"psi", "double", "pq", "psi-double", "psi-pq", "double-pq"}
    assert max(vals["psi-double"], vals["psi-pq"], vals["double-pq"]) < 1e-10
    r = rows(run("kernel", "--diag", 1.0, "--alpha", 3, "--rho", 0.5))
    assert [x["representation"] for x in r] == ["psi", "double", "psi-double"]
    r = rows(run("kernel", 1, 2, "--alpha", 2.5))
    assert [x["representation"] for x in r] == ["psi"]


def test_parse_grid():
    assert cli.parse_grid("1:4:3lin") == [1.0, 2.5, 4.0]
    g = cli.parse_grid("1:100:3log")
    assert g[0] == 1.0 and abs(g[1] - 10) < 1e-12 and abs(g[2] - 100) < 1e-12
    assert cli.parse_grid("1:100:3") == g
    with pytest.raises(cli.ConfigError):
        cli.parse_grid("0:1:3log")


def test_fit_report():
    r = run("fit", "--alpha", 2, "--rho", 0, "--format", "json")
    assert r.exit_code == 0
    rep = json.loads(r.output)
    s = rep["summary"]
    assert s["rms"] <= 2e-2
    assert abs(s["fcet_exponent"] - 4 / 3) < 0.05
    assert len(rep["points"]) == 6
    assert abs(s["log_coeff"] + 49 / 72) < 1e-15


def test_fit_rejects_short_grid():
    assert run("fit", "--s-grid", "8:25:4log").exit_code == 2
