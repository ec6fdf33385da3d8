import json
import math

import pytest

from liouville.cli import parse_args


def test_parse_solve_defaults():
    cfg = parse_args(["solve", "--tau", "0.5", "--N", "1", "--alpha", "0"])
    assert cfg.command == "solve"
    assert cfg.args.tau == 0.5 and cfg.args.bigN == 1.0 and cfg.args.alpha == 0.0
    assert cfg.args.rel_tol == 1e-10
    assert cfg.args.abs_tol == 1e-12
    assert cfg.args.tail_tol == 1e-8
    assert cfg.args.t_max == 60.0


def test_parse_thresholds_without_tau():
    cfg = parse_args(["thresholds", "--N", "1"])
    assert cfg.command == "thresholds"
    assert cfg.args.tau is None


def test_parse_rejects_out_of_range_tau(run_cli):
    code, _, err = run_cli(["solve", "--tau", "1.2", "--N", "1", "--alpha", "0"])
    assert code == 1
    assert "(0, 1)" in err


def test_parse_rejects_unknown_flag(run_cli):
    code, _, _ = run_cli(["solve", "--tau", "0.5", "--N", "1", "--frobnicate"])
    assert code == 1


def test_parse_requires_alpha_or_target(run_cli):
    code, _, err = run_cli(["solve", "--tau", "0.5", "--N", "1"])
    assert code == 1
    assert "--alpha" in err


def test_parse_decoupled_tau_only_for_curve_runs(run_cli):
    code, _, err = run_cli(["thresholds", "--N", "1", "--tau", "0"])
    assert code == 1
    assert "solve/sweep" in err
    code, _, _ = run_cli(["verify", "--tau", "0", "--N", "1",
                          "--beta1", "8", "--beta2", "4"])
    assert code == 1


def test_thresholds_json_fixed_point(run_cli):
    code, out, _ = run_cli(["thresholds", "--N", "1", "--tau", "0.5"])
    assert code == 0
    data = json.loads(out)
    assert data["beta_minus_1"] == pytest.approx(12.0, abs=1e-12)
    assert data["beta_plus_1"] == pytest.approx(12.0, abs=1e-12)
    expected_keys = {
        "D", "bigN", "tau",
        "tau0_1", "tau0_2", "tau1_1", "tau1_2",
        "beta_under_1", "beta_over_1", "beta_under_2", "beta_over_2",
        "beta_star_1", "beta_star_2", "beta_starstar_1", "beta_starstar_2",
        "beta_minus_1", "beta_plus_1", "beta_minus_2", "beta_plus_2",
        "beta_lim_1_plus", "beta_lim_2_plus", "beta_lim_1_minus",
        "beta_lim_2_minus",
    }
    assert set(data) == expected_keys


def test_solve_json_summary(run_cli):
    code, out, _ = run_cli(["solve", "--tau", "0.5", "--N", "1", "--alpha", "0"])
    assert code == 0
    data = json.loads(out)
    assert data["beta1"] == pytest.approx(12.0, abs=1e-4)
    assert data["converged"] is True
    assert data["max_abs_psi0"] < 1e-7


def test_solve_trajectory_csv(run_cli, tmp_path):
    path = tmp_path / "traj.csv"
    code, _, _ = run_cli(["solve", "--tau", "0.3", "--N", "1", "--alpha", "0",
                          "--format", "csv", "--out", str(path)])
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "t,r,v1,v2,rv1p,rv2p,f1,f2,psi0,psi1,psi2"
    first = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert float(first["r"]) == pytest.approx(math.exp(float(first["t"])))
    # appended diagnostics columns
    code, _, _ = run_cli(["solve", "--tau", "0.3", "--N", "1", "--alpha", "0",
                          "--format", "csv", "--diagnostics", "--out", str(path)])
    assert code == 0
    header = path.read_text().splitlines()[0]
    assert header.endswith("psi0,psi1,psi2,r0q,r1q,hq")


def test_solve_nonconverged_exit_code(run_cli, tmp_path):
    code, _, _ = run_cli(["solve", "--tau", "0.3", "--N", "1", "--alpha", "0",
                          "--t-max", "3", "--out", str(tmp_path / "x.json")])
    assert code == 2


def test_solve_target_mode(run_cli):
    code, out, _ = run_cli(["solve", "--tau", "0.15", "--N", "1",
                            "--target-beta1", "8.6", "--bracket", "-5", "5"])
    assert code == 0
    data = json.loads(out)
    assert data["beta1"] == pytest.approx(8.6, abs=1e-6)
    assert data["beta2"] == pytest.approx(5.6699, abs=1e-4)


def test_sweep_csv_and_determinism(run_cli, tmp_path):
    args = ["sweep", "--tau", "0.15", "--N", "1", "--alpha-min", "-2",
            "--alpha-max", "2", "--steps", "5"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(args + ["--out", str(a)])[0] == 0
    assert run_cli(args + ["--out", str(b)])[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "alpha,beta1,beta2,err1,err2,residual,converged"
    assert len(lines) == 6
    assert all(row.endswith("true") for row in lines[1:])


def test_sweep_json_structure(run_cli):
    code, out, _ = run_cli(["sweep", "--tau", "0.15", "--N", "1",
                            "--alpha-min", "-2", "--alpha-max", "2",
                            "--steps", "3", "--format", "json"])
    assert code == 0
    data = json.loads(out)
    assert len(data["points"]) == 3
    pt = data["points"][0]
    assert {"alpha", "beta1", "beta2", "err1", "err2", "residual",
            "converged", "conditions"} <= set(pt)
    assert "limit_estimate_plus" in data and "limit_estimate_minus" in data


def test_sweep_plot_renders(run_cli, tmp_path):
    png = tmp_path / "sweep.png"
    code, _, _ = run_cli(["sweep", "--tau", "0.5", "--N", "1", "--alpha-min",
                          "-1", "--alpha-max", "1", "--steps", "3",
                          "--out", str(tmp_path / "s.csv"), "--plot", str(png)])
    assert code == 0
    assert png.stat().st_size > 1000


def test_limits_json(run_cli):
    code, out, _ = run_cli(["limits", "--tau", "0.15", "--N", "1",
                            "--alpha-max", "12"])
    assert code == 0
    data = json.loads(out)
    assert data["reliable"] is True
    assert data["plus"]["beta1"] == pytest.approx(8.0, rel=0.05)
    assert data["target_minus"] == [pytest.approx(9.2), pytest.approx(4.0)]


def test_verify_reports_solvable(run_cli):
    code, out, _ = run_cli(["verify", "--tau", "0.15", "--N", "1",
                            "--beta1", "8.6", "--beta2", "5.6699"])
    assert code == 0
    data = json.loads(out)
    assert data["solvable"] is True
    code, out, _ = run_cli(["verify", "--tau", "0.15", "--N", "1",
                            "--beta1", "9.5", "--beta2", "4.2"])
    assert code == 0
    assert json.loads(out)["solvable"] is False


def test_normalize_toda_matrix(run_cli):
    code, out, _ = run_cli(["normalize", "--k11", "2", "--k12", "-1",
                            "--k21", "-1", "--k22", "2", "--n1", "1"])
    assert code == 0
    data = json.loads(out)
    assert data["tau1"] == pytest.approx(0.5)
    assert data["symmetric"] == {"tau": 0.5, "bigN": 1.0}


def test_curve_csv(run_cli, tmp_path):
    path = tmp_path / "curve.csv"
    code, _, _ = run_cli(["curve", "--tau", "0.5", "--N", "1",
                          "--samples", "10", "--out", str(path)])
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "beta1,beta2"
    assert len(lines) == 11
    b1, b2 = map(float, lines[5].split(","))
    from liouville import SystemParams, ellipse_residual
    assert abs(ellipse_residual(b1, b2, SystemParams(0.5, 1.0))) < 1e-8


def test_help_exits_zero(run_cli):
    assert run_cli(["--help"])[0] == 0
    assert run_cli(["sweep", "--help"])[0] == 0


def test_io_error_exit_code(run_cli, tmp_path):
    code, _, err = run_cli(["thresholds", "--N", "1",
                            "--out", str(tmp_path / "no" / "dir" / "x.json")])
    assert code == 1
    assert "i/o error" in err
