"""Fixed-step closed-loop simulation and the batch experiments built on it.

Measurement model: zero-mean Gaussian noise is added to the joint angles fed
to the controller only; the plant state is never perturbed by it. Noise is
drawn from numpy's PCG64 generator seeded with ``SeedSequence([seed, trial])``
so every trial owns an independent, platform-stable stream.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from ..actuator import ThermalState, angle_to_pwm, calibrate_pwm, thermal_step
from ..arm_model import ArmSimError, JointState
from ..control import PidGains, holding_state, hybrid_update, open_loop_command, pid_update
from ..dynamics import DynParams, NonFiniteState, gravity_torque, gravity_torque_from_frames, integrate_step
from ..ik import solve_position_ik
from ..kinematics import link_frames
from ..trajectory import plan_multipoint
from .metrics import DeviationStats, Metrics, NeverRises, compute_step_metrics, overshoot_pct, settling_time
from .scenario import Scenario

JOINT_GROUPS = ("q_des_rad", "q_meas_rad", "q_act_rad", "qdot_rad_s", "tau_nm", "pwm_us", "temp_c")
COLUMNS = (["t_s"] + [f"{g}_{j}" for g in JOINT_GROUPS for j in range(1, 7)]
           + ["ee_x_m", "ee_y_m", "ee_z_m"])
CSV_FORMAT = "%.9g"


class UnstableSimulation(ArmSimError):
    def __init__(self, step: int, message: str = "non-finite state"):
        self.step = step
        super().__init__(f"{message} at step {step}")


class ScenarioError(ArmSimError):
    """The scenario cannot be set up (for example an IK target that does not converge)."""


def quantize(values) -> np.ndarray:
    """Round-trip through the CSV text representation (9 significant digits)."""
    return np.char.mod(CSV_FORMAT, np.asarray(values, dtype=float)).astype(float)


@dataclass
class SimResult:
    scenario: Scenario
    trial: int
    data: np.ndarray  # (n_rows, len(COLUMNS)), already quantized to the CSV precision
    metrics: Metrics
    q_target: np.ndarray | None = None

    def column(self, name: str) -> np.ndarray:
        return self.data[:, COLUMNS.index(name)]

    def joint_block(self, group: str) -> np.ndarray:
        i = COLUMNS.index(f"{group}_1")
        return self.data[:, i:i + 6]

    def to_csv(self) -> str:
        return table_to_csv(self.data)


def table_to_csv(data: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write(",".join(COLUMNS) + "\n")
    cells = np.char.mod(CSV_FORMAT, data)
    buf.writelines(",".join(row) + "\n" for row in cells)
    return buf.getvalue()


def read_csv_table(text: str) -> np.ndarray:
    """Parse CSV text written by :func:`table_to_csv`."""
    import csv

    rows = list(csv.reader(io.StringIO(text)))
    if tuple(rows[0]) != tuple(COLUMNS):
        raise ValueError("unexpected CSV header")
    return np.array([[float(c) for c in r] for r in rows[1:]])


# ---------------------------------------------------------------------------
# references


def _reference(sc: Scenario) -> tuple[Callable[[float], tuple], np.ndarray | None]:
    """Desired-trajectory function of time, and the IK joint target for pick-and-place."""
    if sc.task == "step":
        q_des = sc.start_q.copy()
        q_des[sc.step_joint] += sc.step_size
        zero = np.zeros(6)
        return (lambda t: (q_des, zero, zero)), None

    if sc.task == "pick_place":
        res = solve_position_ik(sc.arm, sc.target, seed=sc.start_q)
        if not res.converged:
            raise ScenarioError(f"IK for target {sc.target} did not converge (residual {res.residual:.2e} m)")
        path = plan_multipoint([sc.start_q, res.q], [sc.move_time])
        return path.sample, res.q

    joints = []
    seed = sc.start_q
    for wp in sc.waypoints:
        if wp.mode == "joint":
            q = np.asarray(wp.values)
        else:
            res = solve_position_ik(sc.arm, wp.values, seed=seed)
            if not res.converged:
                raise ScenarioError(f"IK for waypoint {wp.values} did not converge")
            q = res.q
        joints.append(q)
        seed = q
    path = plan_multipoint(joints, sc.segment_times)
    return path.sample, None


def start_pose(sc: Scenario) -> np.ndarray:
    if sc.task == "track_path":
        wp = sc.waypoints[0]
        if wp.mode == "joint":
            return np.asarray(wp.values, dtype=float)
        return solve_position_ik(sc.arm, wp.values, seed=sc.start_q).q
    return sc.start_q.copy()


# ---------------------------------------------------------------------------
# the loop


def run_scenario(sc: Scenario, trial: int = 0) -> SimResult:
    """Run one trial of ``sc`` and return its quantized series and metrics.

    Per step: read noisy angles, form the error, update the controller, zero
    torque on overheated joints, saturate, integrate the plant, then heat the
    motors. Row k records the state at t = k*dt and the torque applied over
    the following step.
    """
    nominal, plant = sc.arm, sc.plant
    params = DynParams.from_arm(plant)
    gains: PidGains = sc.gains
    reference, q_target = _reference(sc)
    q0 = start_pose(sc)
    n = sc.n_steps
    dt = sc.dt

    if sc.noise_std > 0:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([sc.seed, trial])))
        noise = rng.normal(0.0, sc.noise_std, size=(n + 1, 6))
    else:
        noise = np.zeros((n + 1, 6))

    state = JointState(q=q0, temp=np.full(6, sc.ambient))
    ctrl = holding_state(gains, sc.mode, gravity_torque(nominal, q0))
    thermal = ThermalState(temp=np.full(6, sc.ambient), heat_capacity=np.full(6, sc.heat_capacity),
                           t0=np.full(6, sc.ambient), shutdown_temp=np.full(6, sc.shutdown_temp),
                           heat_j=np.zeros(6), heat_comp=np.zeros(6))
    calibs = [calibrate_pwm((lo, 500.0), (hi, 2500.0)) for lo, hi in zip(plant.lower_limits, plant.upper_limits)]
    tripped = np.zeros(6, dtype=bool)
    out = np.empty((n + 1, len(COLUMNS)))
    ff_cache: tuple[np.ndarray | None, np.ndarray | None] = (None, None)

    for k in range(n + 1):
        t = k * dt
        q_des, qd_des, qdd_des = reference(t)
        frames = link_frames(plant, state.q)
        tau_g = gravity_torque_from_frames(plant, frames)
        q_meas = state.q + noise[k]
        e = q_des - q_meas

        if sc.mode == "pid":
            u, ctrl = pid_update(gains, ctrl, e, dt)
        elif sc.mode == "hybrid":
            if ff_cache[0] is None or not np.array_equal(ff_cache[0], q_des):
                ff_cache = (q_des.copy(), gravity_torque(nominal, q_des))
            u, ctrl = hybrid_update(gains, ctrl, e, dt, nominal, q_des, tau_g=ff_cache[1])
        else:
            u = open_loop_command(nominal, q_des, qd_des, qdd_des, gains.output_limit)
        u = np.where(tripped, 0.0, u)
        tau = np.clip(u, -params.max_torque, params.max_torque)

        row = out[k]
        row[0] = t
        row[1:7] = q_des
        row[7:13] = q_meas
        row[13:19] = state.q
        row[19:25] = state.qdot
        row[25:31] = tau
        row[31:37] = [angle_to_pwm(c, v) for c, v in zip(calibs, q_des)]
        row[37:43] = thermal.temp
        row[43:46] = frames[6][:3, 3]
        if k == n:
            break

        try:
            state = integrate_step(params, state, tau, dt, tau_g=tau_g)
        except NonFiniteState as exc:
            raise UnstableSimulation(k + 1) from exc
        thermal = thermal_step(thermal, sc.heat_coeff * tau * tau, dt, raise_on_overheat=False)
        # trip on the recorded (CSV-precision) temperature so events are reproducible from the file
        if np.any(thermal.temp >= sc.shutdown_temp * (1 - 1e-7)):
            tripped |= quantize(thermal.temp) >= sc.shutdown_temp
        state.temp = thermal.temp

    data = quantize(out)
    return SimResult(scenario=sc, trial=trial, data=data, metrics=metrics_from_table(data, sc), q_target=q_target)


def metrics_from_table(data: np.ndarray, sc: Scenario) -> Metrics:
    """Metrics from the recorded table alone (the same numbers an external CSV reader gets)."""
    col = {name: i for i, name in enumerate(COLUMNS)}
    block = lambda g: data[:, col[f"{g}_1"]:col[f"{g}_1"] + 6]  # noqa: E731
    tau, qdot, temp = block("tau_nm"), block("qdot_rad_s"), block("temp_c")
    m = Metrics(
        energy_j=float(np.sum(np.abs(tau * qdot)) * sc.dt),
        peak_temp_c=float(np.max(temp)),
    )
    hot = temp >= sc.shutdown_temp
    for j in range(6):
        idx = np.flatnonzero(hot[:, j])
        if idx.size:
            m.overheat_events.append((int(idx[0]), j))

    if sc.task == "step":
        j = sc.step_joint
        x = block("q_act_rad")[:, j]
        target = float(block("q_des_rad")[0, j])
        initial = float(x[0])
        try:
            sm = compute_step_metrics(x, target, initial, sc.dt)
            m.overshoot_pct, m.settling_time_s = sm.overshoot_pct, sm.settling_time_s
            m.rise_time_s, m.steady_state_error = sm.rise_time_s, sm.steady_state_error
        except NeverRises:
            m.overshoot_pct = overshoot_pct(x, target, initial)
            m.settling_time_s = settling_time(x, target, initial, sc.dt)
            m.rise_time_s = math.nan
            m.steady_state_error = abs(target - float(x[-1]))
    elif sc.task == "pick_place":
        ee = data[-1, col["ee_x_m"]:col["ee_z_m"] + 1]
        m.deviation_m = ee - np.asarray(sc.target)
    m.max_tracking_error_rad = np.max(np.abs(block("q_des_rad") - block("q_act_rad")), axis=0)
    return m


# ---------------------------------------------------------------------------
# batches


def _run_trial(args):
    sc, trial = args
    return run_scenario(sc, trial)


def run_trials(sc: Scenario, n_trials: int | None = None, workers: int = 1) -> list[SimResult]:
    """Run trials 0..n-1. Results are ordered by trial index whatever the worker count."""
    n = sc.trials if n_trials is None else n_trials
    if n < 1:
        raise ValueError("n_trials must be >= 1")
    jobs = [(sc, i) for i in range(n)]
    if workers <= 1:
        return [_run_trial(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_trial, jobs))


def run_pick_place_trials(sc: Scenario, n_trials: int | None = None, workers: int = 1,
                          keep_results: bool = False):
    """Deviation statistics of the final end-effector position over a batch of trials."""
    if sc.task != "pick_place":
        raise ValueError("scenario task must be pick_place")
    results = run_trials(sc, n_trials, workers)
    stats = DeviationStats(np.array([r.metrics.deviation_m for r in results]))
    return (stats, results) if keep_results else stats


def run_tracking(sc: Scenario) -> Metrics:
    if sc.task != "track_path":
        raise ValueError("scenario task must be track_path")
    return run_scenario(sc).metrics


def step_probe(sc: Scenario) -> Scenario:
    """Step variant of a comparison scenario: same arm, plant and gains, noise-free sensing.

    Noise is dropped because the derivative term turns it into joint jitter
    larger than the 2% band, which would leave every controller unsettled.
    """
    return replace(sc, task="step", step_joint=sc.probe_joint, step_size=sc.probe_step,
                   duration=sc.probe_duration, target=None, noise_std=0.0)


@dataclass
class Table1Row:
    mode: str
    mean_error_cm: float
    overshoot_pct: float
    settling_time_s: float
    stats: DeviationStats
    results: list[SimResult] | None = None  # pick-and-place trials then the step probe


def run_table1(sc: Scenario, workers: int = 1, keep_results: bool = False) -> list[Table1Row]:
    """Identical pick-and-place batch and step probe under each controller type.

    Overshoot and settling come from the step probe; settling stands in for
    the recovery time column and is inf when the probe never settles.
    """
    rows = []
    for mode in ("open_loop", "pid", "hybrid"):
        variant = sc.with_mode(mode)
        stats, results = run_pick_place_trials(variant, workers=workers, keep_results=True)
        probe = run_scenario(step_probe(variant))
        rows.append(Table1Row(mode=mode, mean_error_cm=stats.mean_norm * 100.0,
                              overshoot_pct=probe.metrics.overshoot_pct,
                              settling_time_s=probe.metrics.settling_time_s, stats=stats,
                              results=results + [probe] if keep_results else None))
    return rows


def format_table1(rows: list[Table1Row]) -> str:
    names = {"open_loop": "Open-Loop Control", "pid": "PID Control", "hybrid": "Hybrid Feedback"}
    lines = [f"{'Control Type':<20}{'Average Error (cm)':>20}{'Overshoot (%)':>16}{'Settling Time (s)':>20}"]
    for r in rows:
        st = f"{r.settling_time_s:.3f}" if math.isfinite(r.settling_time_s) else "unsettled"
        lines.append(f"{names[r.mode]:<20}{r.mean_error_cm:>20.3f}{r.overshoot_pct:>16.2f}{st:>20}")
    return "\n".join(lines)
