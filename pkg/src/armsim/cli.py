"""Command-line entry point: ``armsim fk | ik | simulate | report``.

Results go to standard output and diagnostics to standard error. Exit codes:

    0  success
    2  bad config, scenario, arguments or output path
    3  IK did not converge
    4  IK target outside the reach sphere
    5  simulation became unstable
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .arm_model import ArmSimError, default_arm, load_model
from .ik import IkOptions, NotConverged, Unreachable, solve_position_ik
from .kinematics import forward_kinematics
from .sim.metrics import DeviationStats
from .sim.runner import (ScenarioError, SimResult, UnstableSimulation, format_table1, metrics_from_table,
                         read_csv_table, run_table1, run_trials)
from .sim.scenario import load_scenario_file
from .svg import line_plot

EXIT_OK, EXIT_CONFIG, EXIT_NOT_CONVERGED, EXIT_UNREACHABLE, EXIT_UNSTABLE = 0, 2, 3, 4, 5


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_arm(path: str | None):
    if path is None:
        return default_arm()
    try:
        text = Path(path).read_text("utf-8")
    except OSError as exc:
        raise ArmSimError(f"cannot read arm config {path}: {exc.strerror}") from exc
    return load_model(text)


def _overrides(pairs: list[str]) -> dict[str, str]:
    out = {}
    for p in pairs:
        key, sep, val = p.partition("=")
        if not sep or not key.strip():
            raise ArmSimError(f"--set expects section.key=value, got {p!r}")
        out[key.strip()] = val.strip()
    return out


def cmd_fk(args) -> int:
    arm = _load_arm(args.arm)
    q = np.radians(args.angles)
    bad = [i + 1 for i in range(6) if not arm.lower_limits[i] <= q[i] <= arm.upper_limits[i]]
    if bad:
        _err("warning: joint(s) " + ", ".join(map(str, bad)) + " outside limits; FK computed anyway")
    pose = forward_kinematics(arm, q)
    p, R = pose.position, pose.orientation
    print(f"position_m {p[0]:.6f} {p[1]:.6f} {p[2]:.6f}")
    for i, row in enumerate(R):
        print(f"R{i + 1} {row[0]:+.6f} {row[1]:+.6f} {row[2]:+.6f}")
    return EXIT_OK


def cmd_ik(args) -> int:
    arm = _load_arm(args.arm)
    seed = None if args.start_deg is None else np.radians(args.start_deg)
    try:
        res = solve_position_ik(arm, args.target, seed=seed, opts=IkOptions(max_iters=args.max_iters),
                                raise_on_failure=True)
    except Unreachable as exc:
        _err(f"unreachable: {exc}")
        return EXIT_UNREACHABLE
    except NotConverged as exc:
        res = exc.result
        _err(f"not converged after {res.iterations} iterations, residual {res.residual:.3e} m")
        print("q_deg " + " ".join(f"{v:.6f}" for v in np.degrees(res.q)))
        return EXIT_NOT_CONVERGED
    print("q_deg " + " ".join(f"{v:.6f}" for v in np.degrees(res.q)))
    print(f"residual_m {res.residual:.3e}")
    print(f"iterations {res.iterations}")
    return EXIT_OK


def _run_svg(result: SimResult) -> str:
    t = result.column("t_s")
    des, act = result.joint_block("q_des_rad"), result.joint_block("q_act_rad")
    panels = [(f"joint {j + 1} angle (deg)",
               [(f"q{j + 1} desired", np.degrees(des[:, j])), (f"q{j + 1} actual", np.degrees(act[:, j]))])
              for j in range(6)]
    sc = result.scenario
    if sc.task == "step":
        j = sc.step_joint
        panels.insert(0, (f"joint {j + 1} step response (deg)",
                          [("target", np.degrees(des[:, j])), ("response", np.degrees(act[:, j]))]))
    return line_plot(t, panels)


def _out_paths(out: str, n: int, i: int) -> tuple[Path, Path]:
    base = Path(out)
    if base.suffix in (".csv", ".svg"):
        base = base.with_suffix("")
    if n > 1:
        base = base.with_name(f"{base.name}_trial{i:02d}")
    return base.with_suffix(".csv"), base.with_suffix(".svg")


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, "utf-8")
    except OSError as exc:
        raise ArmSimError(f"cannot write {path}: {exc.strerror}") from exc


def cmd_simulate(args) -> int:
    overrides = _overrides(args.set)
    if args.seed is not None:
        overrides["noise.seed"] = str(args.seed)
    sc = load_scenario_file(args.scenario, overrides)
    fmt = args.format or sc.fmt

    if args.report == "table1":
        rows = run_table1(sc, workers=args.workers)
        print(format_table1(rows))
        if args.out:
            lines = ["mode,mean_error_cm,overshoot_pct,settling_time_s"]
            lines += [f"{r.mode},{r.mean_error_cm:.9g},{r.overshoot_pct:.9g},{r.settling_time_s:.9g}" for r in rows]
            _write(Path(args.out), "\n".join(lines) + "\n")
        return EXIT_OK

    results = run_trials(sc, workers=args.workers)
    out = args.out or sc.csv
    if out:
        for r in results:
            csv_path, svg_path = _out_paths(out, len(results), r.trial)
            if fmt in ("csv", "both"):
                _write(csv_path, r.to_csv())
            if fmt in ("svg", "both"):
                _write(svg_path, _run_svg(r))
    print(f"scenario {sc.name}  task {sc.task}  mode {sc.mode}  trials {len(results)}")
    print("\n".join(results[0].metrics.summary_lines()))
    if sc.task == "pick_place" and len(results) > 1:
        st = DeviationStats(np.array([r.metrics.deviation_m for r in results]))
        print(f"mean_deviation_cm    {st.mean_norm * 100:.4f}")
        print(f"max_deviation_cm     {st.max_norm * 100:.4f}")
        print("std_xyz_cm           " + " ".join(f"{v * 100:.4f}" for v in st.std))
    return EXIT_OK


def cmd_report(args) -> int:
    """Recompute the metrics of a recorded run from its CSV alone."""
    overrides = _overrides(args.set)
    sc = load_scenario_file(args.scenario, overrides)
    try:
        text = Path(args.csv).read_text("utf-8")
    except OSError as exc:
        raise ArmSimError(f"cannot read {args.csv}: {exc.strerror}") from exc
    try:
        data = read_csv_table(text)
    except (ValueError, IndexError) as exc:
        raise ArmSimError(f"{args.csv}: {exc}") from exc
    print("\n".join(metrics_from_table(data, sc).summary_lines()))
    return EXIT_OK


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="armsim", description="6-DOF arm kinematics, control and simulation.")
    sub = p.add_subparsers(dest="command", required=True)

    fk = sub.add_parser("fk", help="forward kinematics of six joint angles (deg)")
    fk.add_argument("angles", type=float, nargs=6, metavar="DEG")
    fk.add_argument("--arm", help="arm config file (default: bundled arm)")
    fk.set_defaults(func=cmd_fk)

    ik = sub.add_parser("ik", help="position IK for a target point (m)")
    ik.add_argument("target", type=float, nargs=3, metavar="M")
    ik.add_argument("--arm")
    ik.add_argument("--start-deg", type=float, nargs=6, metavar="DEG", help="IK seed (default: home pose)")
    ik.add_argument("--max-iters", type=int, default=200)
    ik.set_defaults(func=cmd_ik)

    sim = sub.add_parser("simulate", help="run a scenario file or a shipped scenario name")
    sim.add_argument("--scenario", required=True)
    sim.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE")
    sim.add_argument("--seed", type=_u64, help="noise seed, overrides [noise] seed")
    sim.add_argument("--out", help="output path (default: [output] csv of the scenario)")
    sim.add_argument("--format", choices=("csv", "svg", "both"))
    sim.add_argument("--report", choices=("table1",), help="run the controller comparison instead")
    sim.add_argument("--workers", type=int, default=1, help="processes for multi-trial batches")
    sim.set_defaults(func=cmd_simulate)

    rep = sub.add_parser("report", help="metrics of a recorded CSV under its scenario")
    rep.add_argument("csv")
    rep.add_argument("--scenario", required=True)
    rep.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE")
    rep.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnstableSimulation as exc:
        _err(f"unstable simulation: {exc}")
        return EXIT_UNSTABLE
    except ScenarioError as exc:
        _err(f"scenario error: {exc}")
        return EXIT_CONFIG
    except (ArmSimError, ValueError) as exc:
        _err(f"error: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
