import json
import math
from pathlib import Path

import pytest

from smoothq import cli
from smoothq.distributions import AsymmetricLaplace, Laplace, Normal

GOLDEN = Path(__file__).parent / "golden"


def run_cli(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def _as_csv_record(row):
    # what a CSV reader should recover: 6 significant digits, typed cells
    return cli.read_csv(cli.render([row], "csv"))[0]


@pytest.fixture
def data_file(tmp_path):
    def make(lines):
        path = tmp_path / "data.txt"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path
    return make


def test_parse_distribution():
    assert cli.parse_distribution("normal:0,1") == Normal(0.0, 1.0)
    assert cli.parse_distribution("laplace:1.5,2") == Laplace(1.5, 2.0)
    assert cli.parse_distribution("alaplace:0,1,2") == AsymmetricLaplace(0.0, 1.0, 2.0)
    for bad in ["cauchy:0,1", "normal:0", "normal:a,b", "laplace:0,-1", "normal", "normal:0,inf"]:
        with pytest.raises(cli.UsageError):
            cli.parse_distribution(bad)


def test_estimate_median(capsys, data_file):
    code, out, _ = run_cli(capsys, "estimate", data_file(["1", "2", "3"]), "--z", 0, "--h", 0)
    assert code == 0
    assert cli.read_csv(out) == [{"q_hat": 2, "z": 0, "h": 0, "n": 3}]


def test_estimate_smoothed(capsys, data_file):
    code, out, _ = run_cli(capsys, "estimate", data_file(["0", "1", "", "2", "3"]),
                           "--z", 0, "--h", 1, "--format", "json")
    assert code == 0
    assert json.loads(out) == [{"q_hat": 1.5, "z": 0.0, "h": 1.0, "n": 4}]


def test_estimate_bad_line(capsys, data_file):
    code, out, err = run_cli(capsys, "estimate", data_file(["1", "2", "abc", "4"]), "--z", 0)
    assert code == 2 and out == ""
    assert "line 3" in err


@pytest.mark.parametrize("z, h", [(1.0, 0.0), (0.0, -1.0), (-2.0, 0.0)])
def test_estimate_invalid_params(capsys, data_file, z, h):
    code, _, err = run_cli(capsys, "estimate", data_file(["1"]), "--z", z, "--h", h)
    assert code == 2 and "error" in err


def test_estimate_empty_and_nonfinite(capsys, data_file):
    assert run_cli(capsys, "estimate", data_file([""]), "--z", 0)[0] == 2
    code, _, err = run_cli(capsys, "estimate", data_file(["1", "nan"]), "--z", 0)
    assert code == 2 and "line 2" in err


def test_estimate_missing_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "estimate", tmp_path / "nope.txt", "--z", 0)
    assert code == 1 and "error" in err


@pytest.mark.parametrize("name, argv", [
    ("table_normal.csv", ["table", "normal:0,1"]),
    ("table_laplace.csv", ["table", "laplace:0,1"]),
    ("table_alaplace.csv", ["table", "--dist", "alaplace:0,1,2"]),
    ("sweep_laplace.csv", ["sweep", "laplace:0,1"]),
    ("sweep_normal.csv", ["sweep", "--dist", "normal:0,1", "0.05", "0.95", "0.05"]),
])
def test_golden_files(capsys, name, argv):
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / name).read_text(encoding="utf-8")


def test_table_values():
    normal = cli.table_rows(Normal(), [0.25, 0.5, 0.75], "csv")
    assert [r["v0"] for r in normal] == pytest.approx([1.857, 1.571, 1.857], abs=5e-4)
    assert all(r["h_star"] == "inf" and r["limit"] for r in normal)
    lap = cli.table_rows(Laplace(), [0.25, 0.5, 0.75], "csv")
    assert [r["v0"] for r in lap] == pytest.approx([3.0, 1.0, 3.0], abs=5e-4)
    assert lap[0]["h_star"] == pytest.approx(2.129, abs=5e-4)
    assert lap[0]["ratio"] == pytest.approx(0.647, abs=5e-4)
    assert lap[1]["h_star"] == "0" and lap[1]["case"] == "BoundaryFlat"


def test_table_json_sentinels(capsys):
    code, out, _ = run_cli(capsys, "table", "laplace:0,1", "--tau", "0.5", "--format", "json")
    assert code == 0
    [row] = json.loads(out)
    assert row["h_star"] == 0.0 and row["case"] == "BoundaryFlat"
    code, out, _ = run_cli(capsys, "table", "normal:0,1", "--tau", "0.5", "--format", "json")
    [row] = json.loads(out)
    assert row["h_star"] == "inf" and row["limit"] is True
    assert "Infinity" not in out


@pytest.mark.parametrize("argv", [
    ["table", "normal:0,1", "--tau", "0,0.5"],
    ["table", "normal:0,1", "--tau", "x"],
    ["table", "gumbel:0,1"],
    ["table"],
])
def test_table_usage_errors(capsys, argv):
    assert run_cli(capsys, *argv)[0] == 2


def test_csv_round_trip():
    for d in (Normal(), Laplace(), AsymmetricLaplace(0.0, 1.0, 2.0)):
        rows = cli.table_rows(d, [0.1, 0.25, 0.5, 0.9], "csv")
        back = cli.read_csv(cli.render(rows, "csv", cli.TABLE_FIELDS))
        assert len(back) == len(rows)
        for orig, rec in zip(rows, back):
            assert rec == _as_csv_record(orig)
            for key in ("tau", "q_tau", "v0", "v_opt", "ratio"):
                assert rec[key] == pytest.approx(orig[key], rel=5e-6, abs=1e-300)
            assert rec["case"] == orig["case"] and rec["limit"] == orig["limit"]


@pytest.mark.parametrize("name", ["table_normal.csv", "table_laplace.csv", "sweep_laplace.csv"])
def test_golden_files_reparse_and_rerender(name):
    text = (GOLDEN / name).read_text(encoding="utf-8")
    records = cli.read_csv(text)
    fields = text.splitlines()[0].split(",")
    rerendered = cli.render(records, "csv", fields)
    assert cli.read_csv(rerendered) == records


def test_sweep_laplace(capsys):
    code, out, _ = run_cli(capsys, "sweep", "laplace:0,1", "0.05", "0.95", "0.05")
    rows = cli.read_csv(out)
    assert code == 0 and len(rows) == 19
    assert all(r["ratio"] <= 1 for r in rows)
    assert [r["tau"] for r in rows] == pytest.approx([0.05 * k for k in range(1, 20)])


def test_sweep_normal_ratio_is_inverse_v0():
    taus = cli.tau_grid(0.05, 0.95, 0.05)
    rows = cli.sweep_rows(Normal(), taus)
    for r, base in zip(rows, cli.table_rows(Normal(), taus)):
        assert r["ratio"] == pytest.approx(1.0 / base["v0"], rel=1e-14)
        assert r["ratio"] < 1 and r["limit"]


def test_sweep_single_point(capsys):
    code, out, _ = run_cli(capsys, "sweep", "normal:0,1", "0.5", "0.5", "0.05")
    assert code == 0 and len(cli.read_csv(out)) == 1


@pytest.mark.parametrize("rng", [("0.6", "0.5", "0.1"), ("0", "0.5", "0.1"), ("0.1", "1", "0.1"),
                                 ("0.1", "0.5", "0"), ("0.1", "0.5", "-0.1")])
def test_sweep_invalid_range(capsys, rng):
    assert run_cli(capsys, "sweep", "normal:0,1", *rng)[0] == 2


def test_tau_grid_has_clean_values():
    grid = cli.tau_grid(0.05, 0.95, 0.05)
    assert len(grid) == 19 and grid[-1] == 0.95 and grid[2] == 0.15


def test_simulate(capsys):
    argv = ["simulate", "normal:0,1", "--tau", "0.5", "--h", "0", "--n", "2000",
            "--reps", "2000", "--seed", "42"]
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    [row] = cli.read_csv(out)
    assert row["relative_error"] <= 0.10
    code2, out2, _ = run_cli(capsys, *argv)
    assert code2 == 0 and out2 == out


def test_simulate_json(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--dist", "laplace:0,1", "--z", "0.2", "--h", "1",
                           "--n", "200", "--reps", "50", "--seed", "1", "--format", "json")
    assert code == 0
    [row] = json.loads(out)
    assert row["tau"] is None and row["z"] == 0.2 and row["reps"] == 50


@pytest.mark.parametrize("extra", [
    ["--tau", "0.5", "--reps", "1", "--seed", "1"],
    ["--tau", "0.5", "--n", "1", "--seed", "1"],
    ["--tau", "0.5", "--z", "0", "--seed", "1"],
    ["--seed", "1"],
    ["--tau", "1.5", "--seed", "1"],
    ["--tau", "0.5", "--seed", "-3"],
])
def test_simulate_usage_errors(capsys, extra):
    assert run_cli(capsys, "simulate", "normal:0,1", *extra)[0] == 2


def test_simulate_requires_seed(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["simulate", "normal:0,1", "--tau", "0.5"])
    assert exc.value.code == 2


def test_population(capsys):
    code, out, _ = run_cli(capsys, "population", "normal:0,1", "--z", "0.5", "--h", "0",
                           "--format", "json")
    assert code == 0
    [row] = json.loads(out)
    assert row["q"] == pytest.approx(-0.674, abs=5e-4)
    assert row["level"] == pytest.approx(0.25, abs=1e-12)
    assert row["sigma2"] == pytest.approx(1.857, abs=5e-4)
    assert run_cli(capsys, "population", "normal:0,1", "--z", "1", "--h", "0")[0] == 2


def test_variance(capsys):
    code, out, _ = run_cli(capsys, "variance", "laplace:0,1", "--tau", "0.25", "--h", "2.129445676635465",
                           "--format", "json")
    assert code == 0
    [row] = json.loads(out)
    assert row["v"] == pytest.approx(1.942, abs=5e-4)
    assert abs(row["dv_dh"]) < 1e-12
    assert row["case"] == "FiniteOptimum"
    assert run_cli(capsys, "variance", "laplace:0,1", "--tau", "0", "--h", "1")[0] == 2
    assert run_cli(capsys, "variance", "laplace:0,1", "--tau", "0.5", "--h", "-1")[0] == 2


def test_out_file(capsys, tmp_path):
    target = tmp_path / "t.csv"
    code, out, _ = run_cli(capsys, "table", "normal:0,1", "--out", target)
    assert code == 0 and out == ""
    assert target.read_text(encoding="utf-8") == (GOLDEN / "table_normal.csv").read_text(encoding="utf-8")


def test_out_file_unwritable(capsys, tmp_path):
    code, _, err = run_cli(capsys, "table", "normal:0,1", "--out", tmp_path / "missing" / "t.csv")
    assert code == 1 and "error" in err


def test_unknown_command_and_flags():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["table", "normal:0,1", "--format", "xml"])
    assert exc.value.code == 2


def test_csv_uses_lf_and_no_ieee_infinity(capsys):
    _, out, _ = run_cli(capsys, "table", "normal:0,1")
    assert "\r" not in out and "inf," in out
    assert not any(math.isinf(r["v0"]) for r in cli.read_csv(out))
