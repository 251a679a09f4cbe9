import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from rggap import cli
from rggap.gap import asymptote_large_s, gap_finite_n


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# manifest ")
    man = json.loads(lines[0][len("# manifest "):])
    header = lines[1].split(",")
    body = [ln for ln in lines[2:] if not ln.startswith("#")]
    footer = [ln[2:] for ln in lines[2:] if ln.startswith("#")]
    rows = np.array([[float(v) for v in ln.split(",")] for ln in body])
    return man, header, rows, footer


def test_gap_finite_n_table(capsys):
    code, out, _ = run(capsys, "gap", "--method", "finite-n", "--n-matrix", "120",
                       "--s-max", "8", "--s-step", "0.1", "--seed", "3")
    assert code == 0
    man, header, rows, _ = parse_csv(out)
    assert header == ["s", "value"]
    assert rows.shape == (81, 2)
    assert rows[0].tolist() == [0.0, 1.0]
    assert rows[10, 1] == gap_finite_n(0.5, 120)
    assert man["command"] == "gap" and man["seed"] == 3
    assert man["params"]["method"] == "finite-n" and man["params"]["n_matrix"] == 120
    assert "tool_version" in man and "timestamp" in man


def test_gap_series_and_asymptotic(capsys):
    code, out, _ = run(capsys, "gap", "--method", "series", "--s-max", "2.2", "--seed", "0")
    assert code == 0
    _, _, rows, _ = parse_csv(out)
    assert rows[0, 1] == 1.0 and rows[-1, 0] == pytest.approx(2.2)
    code, out, _ = run(capsys, "gap", "--method", "asymptotic", "--s-min", "4", "--s-max", "8", "--seed", "0")
    assert code == 0
    _, _, rows, _ = parse_csv(out)
    assert np.allclose(rows[:, 1], np.exp(-0.52105 * rows[:, 0] + 0.0627), rtol=2e-3)
    assert rows[3, 1] == asymptote_large_s(rows[3, 0])


@pytest.mark.parametrize("argv", [
    ["gap", "--method", "series", "--s-max", "3"],
    ["gap", "--method", "asymptotic", "--s-max", "2"],
    ["gap", "--method", "truncated-gf", "--s-max", "4"],
    ["gap", "--method", "finite-n", "--s-step", "0"],
    ["gap", "--method", "finite-n", "--s-min", "2", "--s-max", "1"],
    ["gap", "--method", "finite-n", "--n-matrix", "0", "--s-max", "1"],
    ["compare", "--methods", "finite-n"],
    ["compare", "--methods", "finite-n,finite-n"],
    ["correlations", "--process", "rg", "--rho", "1"],
    ["correlations", "--points", "0.5,0.5"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv, "--seed", "1")
    assert code == cli.EXIT_USAGE
    assert out == "" and err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    for argv in (["gap", "--method", "bogus"], ["compare", "--methods", "finite-n,bogus"], []):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--seed", "0")
    assert code == 0
    data = json.loads(out)
    c = data["constants"]
    assert set(c) == {"zeta32", "c1", "c1_tilde", "c2", "compressibility"}
    assert c["c1"]["value"] == pytest.approx(1.3062, abs=5e-5)
    assert c["c2"]["value"] == pytest.approx(0.0627, abs=5e-4)
    assert c["compressibility"]["value"] == pytest.approx(0.5858, abs=5e-5)
    assert c["c1"]["printed"] == 1.3062 and c["c2"]["printed"] == 0.0627
    assert all(entry["status"] == "PASS" for entry in c.values())
    assert data["manifest"]["command"] == "constants"


def test_compare_finite_n_series(capsys):
    code, out, err = run(capsys, "compare", "--methods", "finite-n,series", "--s-max", "2.0",
                         "--s-step", "0.05", "--seed", "0")
    assert code == 0
    _, header, rows, footer = parse_csv(out)
    assert header == ["s", "finite-n", "series", "diff[finite-n|series]", "reldiff[finite-n|series]"]
    assert rows.shape == (41, 5)
    assert np.max(np.abs(rows[:, 3])) <= 1e-3
    assert np.allclose(rows[:, 3], rows[:, 1] - rows[:, 2], rtol=0, atol=1e-15)
    assert footer[-1] == "summary PASS" and "summary PASS" in err
    assert footer[0].startswith("PASS finite-n vs series on [0, 2]")


def test_compare_slope_fit(capsys):
    code, out, _ = run(capsys, "compare", "--methods", "finite-n,asymptotic", "--s-min", "4",
                       "--s-max", "8", "--fit-slope", "--format", "json", "--seed", "0")
    assert code == 0
    data = json.loads(out)
    pair = data["summary"]["pairs"][0]
    assert pair["status"] == "PASS" and pair["slope_rel_diff"] <= 0.03
    assert data["columns"]["s"][0] == 4.0


def test_compare_fail_is_reported(capsys):
    code, out, _ = run(capsys, "compare", "--methods", "finite-n,series", "--s-max", "2.0",
                       "--tol", "1e-9", "--seed", "0")
    assert code == 0
    assert parse_csv(out)[3][-1] == "summary FAIL"


def test_json_gap(capsys):
    code, out, _ = run(capsys, "gap", "--method", "finite-n", "--s-max", "1", "--format", "json", "--seed", "5")
    data = json.loads(out)
    assert code == 0 and data["method"] == "finite-n"
    assert len(data["s_values"]) == len(data["e_values"]) == 11
    assert data["manifest"]["seed"] == 5


def test_deterministic_payload_reproduces(capsys):
    argv = ["gap", "--method", "finite-n", "--s-max", "3", "--seed", "9"]
    a = parse_csv(run(capsys, *argv)[1])
    b = parse_csv(run(capsys, *argv)[1])
    assert np.array_equal(a[2], b[2])


def test_seed_drawn_and_echoed(capsys):
    code, out, _ = run(capsys, "gap", "--method", "series", "--s-max", "0.5")
    seed = parse_csv(out)[0]["seed"]
    assert code == 0 and isinstance(seed, int) and 0 <= seed < 2 ** 63


def test_output_file_and_env_dir(capsys, tmp_path, monkeypatch):
    target = tmp_path / "a.csv"
    code, out, _ = run(capsys, "gap", "--method", "series", "--s-max", "1", "-o", str(target), "--seed", "0")
    assert code == 0 and out == ""
    assert parse_csv(target.read_text())[2].shape == (11, 2)
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path / "env"))
    code, _, _ = run(capsys, "constants", "-o", "c.json", "--seed", "0")
    assert code == 0
    assert json.loads((tmp_path / "env" / "c.json").read_text())["constants"]["c1"]["printed"] == 1.3062
    # no temporary files left behind
    assert [p.name for p in (tmp_path / "env").iterdir()] == ["c.json"]


def test_failed_run_writes_nothing(capsys, tmp_path):
    target = tmp_path / "bad.csv"
    code, _, _ = run(capsys, "gap", "--method", "series", "--s-max", "5", "-o", str(target), "--seed", "0")
    assert code == 2 and not target.exists()


def test_correlations(capsys):
    code, out, _ = run(capsys, "correlations", "--points", "0.4", "--format", "json", "--seed", "0")
    assert code == 0 and json.loads(out)["rho_n"] == pytest.approx(1 / math.sqrt(2 * math.pi))
    code, out, _ = run(capsys, "correlations", "--process", "coalescence", "--rho", "2", "--points", "1.0",
                       "--seed", "0")
    assert code == 0 and parse_csv(out)[2][0, 2] == pytest.approx(2.0)
    code, out, _ = run(capsys, "correlations", "--x-max", "1", "--seed", "0")
    _, header, rows, footer = parse_csv(out)
    assert code == 0 and header == ["x", "value"] and rows.shape == (10, 2)
    assert float(footer[0].split()[1]) == pytest.approx(2 - math.sqrt(2), abs=1e-8)


def test_simulate_and_mc_gap(capsys):
    base = ["--lattice-size", "2000", "--t-end", "50", "--replicas", "4", "--seed", "11"]
    code, out, _ = run(capsys, "simulate", "--process", "annihilation", *base)
    man, header, rows, _ = parse_csv(out)
    assert code == 0 and header == ["replica", "count", "density"] and rows.shape == (4, 3)
    assert np.all(rows[:, 1] % 2 == 0)
    code, out2, _ = run(capsys, "simulate", "--process", "annihilation", *base)
    assert np.array_equal(parse_csv(out2)[2], rows)
    code, out, _ = run(capsys, "simulate", "--process", "coalescence", "--positions", "--format", "json", *base)
    reps = json.loads(out)["replicas"]
    assert code == 0 and len(reps[0]["positions"]) == reps[0]["count"]

    code, out, _ = run(capsys, "gap", "--method", "mc-coalescence", "--s-max", "2", "--s-step", "0.5",
                       "--no-equilibration-check", *base)
    _, header, rows, _ = parse_csv(out)
    assert code == 0 and header == ["s", "value", "stderr"]
    assert rows[0, 1] == 1.0 and np.all(rows[:, 2] >= 0)


def test_young_mc_run_exits_3(capsys):
    # density at t = 1 is far above the equilibration threshold
    code, _, err = run(capsys, "gap", "--method", "mc-annihilation", "--s-max", "1", "--lattice-size", "2000",
                       "--t-end", "1", "--replicas", "4", "--seed", "2")
    assert code == cli.EXIT_RUNTIME and err.startswith("error:")


def test_sample_ginibre(capsys):
    code, out, _ = run(capsys, "sample-ginibre", "--n", "20", "--replicas", "300", "--s-values", "0,1",
                       "--format", "json", "--seed", "4")
    data = json.loads(out)
    assert code == 0 and data["replicas_used"] == 300 and data["e_values"][0] == 1.0
    code, _, _ = run(capsys, "sample-ginibre", "--n", "1", "--replicas", "3", "--seed", "4")
    assert code == 2


def test_module_entry_point(tmp_path):
    env = dict(os.environ, **{cli.OUTPUT_DIR_ENV: str(tmp_path)})
    res = subprocess.run([sys.executable, "-m", "rggap", "gap", "--method", "series", "--s-max", "0.2",
                          "--seed", "1"], capture_output=True, text=True, env=env, check=False)
    assert res.returncode == 0
    assert parse_csv(res.stdout)[2].shape == (3, 2)
