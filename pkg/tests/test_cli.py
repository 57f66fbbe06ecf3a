import json
import math

import numpy as np
import pytest

from fxrsearch import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    def convert(tok):
        try:
            return float(tok)
        except ValueError:
            return tok

    rows = []
    comments = []
    header = None
    for line in text.strip().splitlines():
        if line.startswith("#"):
            comments.append(line)
        elif header is None:
            header = line
        else:
            rows.append([convert(tok) for tok in line.split(",")])
    numeric = all(isinstance(v, float) for row in rows for v in row)
    return comments, header, np.array(rows) if numeric else rows


def test_parse_angle_forms():
    assert cli.parse_angle("pi") == math.pi
    assert cli.parse_angle("0.6pi") == pytest.approx(0.6 * math.pi)
    assert cli.parse_angle("-0.5pi") == pytest.approx(-0.5 * math.pi)
    assert cli.parse_angle("1.884") == 1.884
    assert cli.parse_angle("2PI") == pytest.approx(2 * math.pi)


def test_solve_certified_report(capsys):
    code, out, _ = run_cli(
        capsys, "solve", "--mode", "alpha", "--fixed", "pi", "--lambda", "0.25", "--k", "4"
    )
    assert code == 0
    report = json.loads(out)
    assert report["input"] == {"mode": "alpha", "fixed_angle": math.pi, "lambda": 0.25, "k": 4}
    assert report["k_lower"] == pytest.approx(3.0, abs=1e-9)
    sol = report["solution"]
    assert sol["success_probability"] > 1 - 1e-8
    assert sol["residual_real"] < 1e-9 and sol["residual_imag"] < 1e-9
    assert "beta1" in sol and "beta2" in sol


def test_solve_iteration_count_too_small(capsys):
    code, out, _ = run_cli(
        capsys, "solve", "--mode", "alpha", "--fixed", "pi", "--lambda", "0.25", "--k", "2"
    )
    assert code == 2
    payload = json.loads(out)
    assert payload["error"] == "iteration-count-too-small"
    assert payload["k_lower"] == pytest.approx(3.0, abs=1e-9)


def test_solve_degenerate_angle(capsys):
    code, out, _ = run_cli(
        capsys, "solve", "--mode", "alpha", "--fixed", "pi", "--lambda", "0.5", "--k", "10"
    )
    assert code == 2
    assert json.loads(out)["error"] == "degenerate-angle"


def test_solve_beta_mode(capsys):
    code, out, _ = run_cli(
        capsys, "solve", "--mode", "beta", "--fixed", "0.6pi", "--lambda", "0.2", "--k", "3"
    )
    assert code == 0
    sol = json.loads(out)["solution"]
    assert sol["success_probability"] > 1 - 1e-8
    assert "alpha1" in sol and "alpha2" in sol


def test_solve_deterministic_apart_from_wall_time(capsys):
    args = ("solve", "--mode", "alpha", "--fixed", "0.6pi", "--lambda", "0.2", "--k", "3")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    r1, r2 = json.loads(out1), json.loads(out2)
    r1.pop("wall_time_s"), r2.pop("wall_time_s")
    assert r1 == r2


def test_usage_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "solve", "--mode", "alpha", "--fixed", "pi")
    assert code == 64
    assert "usage error" in err


def test_unknown_flag_exit_code(capsys):
    code, _, _ = run_cli(capsys, "solve", "--nonsense")
    assert code == 64


def test_curve_f_reference_instance(capsys):
    code, out, _ = run_cli(
        capsys, "curve", "--which", "f", "--fixed", "0.6pi", "--lambda", "0.2"
    )
    assert code == 0
    comments, header, rows = parse_csv(out)
    assert header == "x,y"
    assert rows[0][0] == pytest.approx(-math.pi)
    assert rows[-1][0] == pytest.approx(math.pi)
    assert np.max(np.abs(np.diff(rows[:, 1]))) < 0.05  # repaired branch, no jumps


def test_curve_g_reference_instance(capsys):
    code, out, _ = run_cli(
        capsys, "curve", "--which", "g", "--fixed", "0.6pi", "--lambda", "0.2"
    )
    assert code == 0
    comments, header, rows = parse_csv(out)
    assert any("phi0" in c for c in comments)
    phi0 = float(comments[0].split("=")[1])
    g_vals = rows[:, 1]
    assert g_vals.min() < 1e-10
    assert g_vals.max() >= phi0 - 1e-12
    assert g_vals.max() < math.pi - phi0  # upper branch stays unreached here


def test_curve_f_trivial_constant(capsys):
    code, out, _ = run_cli(capsys, "curve", "--which", "f", "--fixed", "pi", "--lambda", "0.25")
    assert code == 0
    _, _, rows = parse_csv(out)
    assert np.max(np.abs(rows[:, 1])) < 1e-12


def test_curve_points_flag(capsys):
    code, out, _ = run_cli(
        capsys, "curve", "--which", "f", "--fixed", "0.3pi", "--lambda", "0.1",
        "--points", "128",
    )
    assert code == 0
    _, _, rows = parse_csv(out)
    assert len(rows) >= 128


def test_curve_out_file(tmp_path, capsys):
    target = tmp_path / "curve.csv"
    code, out, _ = run_cli(
        capsys, "curve", "--which", "f", "--fixed", "0.6pi", "--lambda", "0.2",
        "--out", str(target),
    )
    assert code == 0 and out == ""
    assert target.read_text().startswith("x,y")


def test_sweep_single_cell_matches_solve(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--mode", "alpha", "--lambda", "0.25", "--fixed", "pi", "--k", "4"
    )
    assert code == 0
    _, header, rows = parse_csv(out)
    assert header.startswith("lambda,")
    assert rows.shape[0] == 1
    code, out, _ = run_cli(
        capsys, "solve", "--mode", "alpha", "--fixed", "pi", "--lambda", "0.25", "--k", "4"
    )
    sol = json.loads(out)["solution"]
    assert rows[0][5] == pytest.approx(sol["success_probability"], abs=1e-15)


def test_sweep_degenerate_cell(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--lambda", "0.5", "--fixed", "pi")
    assert code == 0
    assert "degenerate-angle" in out


def test_sweep_small_grid(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--lambda", "0.2,0.333", "--fixed", "0.3pi,1.1pi")
    assert code == 0
    _, _, rows = parse_csv(out)
    assert rows.shape[0] == 2 * 2 * 3
    # every cell certified
    assert np.all(rows[:, 5] > 1 - 1e-8)


def test_hamming_command(capsys):
    code, out, _ = run_cli(capsys, "hamming", "--k", "5", "--n", "2", "--secret", "3,1")
    assert code == 0
    payload = json.loads(out)
    assert payload["recovered"] == [3, 1]
    assert payload["exact"] is True
    assert payload["oracle_queries"] == 8
    assert payload["success_probability"] > 1 - 1e-8


def test_hamming_random_secret_seeded(capsys):
    code, out1, _ = run_cli(capsys, "hamming", "--k", "6", "--n", "2", "--random-secret", "7")
    assert code == 0
    _, out2, _ = run_cli(capsys, "hamming", "--k", "6", "--n", "2", "--random-secret", "7")
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["exact"] is True


def test_hamming_rejects_small_alphabet(capsys):
    code, _, err = run_cli(capsys, "hamming", "--k", "3", "--n", "1", "--secret", "1")
    assert code == 64
    assert "not implemented" in err


def test_classic_three_d(capsys):
    code, out, _ = run_cli(capsys, "classic", "--method", "3d", "--lambda", "0.25")
    assert code == 0
    payload = json.loads(out)
    assert payload["k_used"] == 1
    assert payload["params"]["alpha3"] == pytest.approx(math.pi, abs=1e-12)
    assert payload["success_probability"] > 1 - 1e-8


def test_classic_conjugate(capsys):
    code, out, _ = run_cli(capsys, "classic", "--method", "conj", "--lambda", "0.2")
    assert code == 0
    payload = json.loads(out)
    assert payload["success_probability"] > 1 - 1e-8
    assert payload["schedule"][0][0] == "oracle"


def test_classic_big_small(capsys):
    code, out, _ = run_cli(capsys, "classic", "--method", "bss", "--lambda", "0.1")
    assert code == 0
    payload = json.loads(out)
    assert payload["success_probability"] > 1 - 1e-8
    assert payload["oracle_calls"] == payload["k_used"] + 1
