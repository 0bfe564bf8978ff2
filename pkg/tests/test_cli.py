import math
import subprocess
import sys

import numpy as np
import pytest

from armsim.cli import main
from armsim.kinematics import forward_kinematics
from armsim.arm_model import HOME_Q, default_arm
from armsim.svg import line_plot, polylines


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fk_golden(capsys):
    code, out, err = run(capsys, "fk", "0", "0", "0", "0", "0", "0")
    assert code == 0 and err == ""
    assert out.splitlines()[0] == "position_m 0.450000 -0.080000 0.100000"
    assert len(out.splitlines()) == 4


def test_fk_out_of_limits_warns(capsys):
    code, out, err = run(capsys, "fk", "0", "0", "0", "0", "0", "170")
    assert code == 0
    assert "outside limits" in err and "6" in err
    assert out.startswith("position_m")


def test_fk_bad_config(capsys, tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[dh]\ncolumns = a_m, d_m, alpha_deg, theta_offset_deg\nrow1 = 0, 0, 0\n")
    code, out, err = run(capsys, "fk", "--arm", str(bad), "0", "0", "0", "0", "0", "0")
    assert code == 2 and out == "" and "error" in err
    code, out, _ = run(capsys, "fk", "--arm", str(tmp_path / "missing.ini"), "0", "0", "0", "0", "0", "0")
    assert code == 2 and out == ""


def test_ik_round_trip_from_home(capsys):
    target = forward_kinematics(default_arm(), HOME_Q).position
    code, out, _ = run(capsys, "ik", *(str(float(v)) for v in target))
    assert code == 0
    q = np.radians([float(v) for v in out.splitlines()[0].split()[1:]])
    assert np.allclose(q, HOME_Q, atol=1e-6)
    assert "residual_m" in out and "iterations 0" in out


def test_ik_exit_codes(capsys):
    assert run(capsys, "ik", "10", "0", "0")[0] == 4
    code, out, err = run(capsys, "ik", "0.1", "0.3", "0.3", "--max-iters", "1")
    assert code == 3 and "not converged" in err


def test_ik_explicit_seed(capsys):
    code, out, _ = run(capsys, "ik", "0.3", "0.0", "0.2", "--start-deg", "10", "50", "-80", "0", "10", "0")
    assert code == 0


def test_simulate_step_summary_and_files(capsys, tmp_path):
    out_path = tmp_path / "run"
    code, out, err = run(capsys, "simulate", "--scenario", "step_joint2", "--out", str(out_path), "--format", "both")
    assert code == 0 and err == ""
    lines = dict(ln.split(None, 1) for ln in out.splitlines()[1:] if ln.strip())
    assert abs(float(lines["overshoot_pct"]) - 4.8) <= 1.0
    assert abs(float(lines["settling_time_s"]) - 1.6) <= 0.2
    csv_text = (tmp_path / "run.csv").read_text()
    svg_text = (tmp_path / "run.svg").read_text()
    assert csv_text.startswith("t_s,")
    assert len(polylines(svg_text)) == 14


def test_simulate_kp_zero(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "--scenario", "step_joint2", "--out", str(tmp_path / "z"),
                       "--set", "controller.kp=0", "--set", "controller.ki=0", "--set", "controller.kd=0",
                       "--set", "task.start_deg=0,90,0,0,90,0")
    assert code == 0
    sse = float([ln for ln in out.splitlines() if ln.startswith("steady_state_error")][0].split()[1])
    assert sse == pytest.approx(math.radians(30), abs=1e-6)


def test_simulate_csv_byte_identical(capsys, tmp_path):
    for name in ("a", "b"):
        assert run(capsys, "simulate", "--scenario", "pick_place", "--set", "task.trials=2",
                   "--set", "task.duration_s=0.5", "--set", "task.move_time_s=0.4",
                   "--seed", "99", "--out", str(tmp_path / name))[0] == 0
    for i in range(2):
        a = (tmp_path / f"a_trial{i:02d}.csv").read_bytes()
        assert a == (tmp_path / f"b_trial{i:02d}.csv").read_bytes()


def test_simulate_table1_report(capsys):
    code, out, _ = run(capsys, "simulate", "--scenario", "table1", "--report", "table1",
                       "--set", "task.trials=2", "--set", "task.probe_duration_s=3")
    assert code == 0
    rows = out.splitlines()
    assert len(rows) == 4 and rows[1].startswith("Open-Loop") and rows[3].startswith("Hybrid")
    err = [float(r.split()[-3]) for r in rows[1:]]
    # two trials are too few to separate hybrid from PID; the full batch does that
    assert err[1] < err[0] and err[2] < err[0]


def test_simulate_config_error_and_instability(capsys, tmp_path):
    code, out, err = run(capsys, "simulate", "--scenario", "step_joint2", "--set", "task.dt_s=0.5")
    assert code == 2 and out == ""
    code, out, err = run(capsys, "simulate", "--scenario", str(tmp_path / "nope.ini"))
    assert code == 2
    code, out, err = run(capsys, "simulate", "--scenario", "step_joint2", "--set", "controller.kd=40",
                         "--set", "controller.output_limit_nm=1e300", "--out", str(tmp_path / "u"))
    assert code == 2  # output limit above the joint max torque is rejected


def test_unstable_simulation_exit_code(capsys, tmp_path, monkeypatch):
    from armsim import cli
    from armsim.sim import UnstableSimulation

    def explode(*a, **k):
        raise UnstableSimulation(17)

    monkeypatch.setattr(cli, "run_trials", explode)
    code, out, err = run(capsys, "simulate", "--scenario", "step_joint2", "--out", str(tmp_path / "x"))
    assert code == 5 and out == "" and "step 17" in err


def test_report_recomputes_from_csv(capsys, tmp_path):
    run(capsys, "simulate", "--scenario", "step_joint2", "--set", "task.duration_s=1", "--out", str(tmp_path / "r"))
    code, out, _ = run(capsys, "simulate", "--scenario", "step_joint2", "--set", "task.duration_s=1",
                       "--out", str(tmp_path / "r"))
    summary = out.splitlines()[1:]
    code, out, _ = run(capsys, "report", str(tmp_path / "r.csv"), "--scenario", "step_joint2",
                       "--set", "task.duration_s=1")
    assert code == 0 and out.splitlines() == summary


def test_usage_errors_exit_2():
    assert subprocess.run([sys.executable, "-m", "armsim"], capture_output=True).returncode == 2
    r = subprocess.run([sys.executable, "-m", "armsim", "fk", "0", "0", "0", "0", "0", "0"], capture_output=True,
                       text=True)
    assert r.returncode == 0 and r.stdout.startswith("position_m 0.450000")


def test_svg_polylines_round_trip():
    x = np.linspace(0, 1, 11)
    svg = line_plot(x, [("p", [("a", x ** 2), ("b", 1 - x)])])
    lines = polylines(svg)
    assert set(lines) == {"a", "b"}
    pts = lines["a"]
    assert pts.shape == (11, 2)
    assert np.all(np.diff(pts[:, 0]) > 0)
    assert np.all(np.diff(pts[:, 1]) <= 0)  # rising curve goes up the page
    assert line_plot(x, [("p", [("a", x)])]) == line_plot(x, [("p", [("a", x)])])


def test_svg_decimates_long_series():
    x = np.arange(5000.0)
    pts = polylines(line_plot(x, [("p", [("flat", np.zeros(5000))])], max_points=100))["flat"]
    assert len(pts) <= 101 and pts[-1, 0] > pts[0, 0]
