"""Declarative experiment descriptions, read from the same sectioned format as the arm config.

Sections::

    [task]          kind, arm, dt_s, duration_s, start_deg and per-kind keys
    [controller]    mode, kp, ki, kd, output_limit_nm, integral_limit
    [noise]         std_deg, seed
    [perturbation]  inertia_scale, friction_scale, payload_kg
    [actuator]      heat_coeff, heat_capacity_j_per_k, shutdown_temp_c, ambient_c
    [output]        csv, format

Per-joint keys take either one value (broadcast) or six.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from ..arm_model import HOME_Q, ArmModel, ConfigParseError, ValidationError, _Reader, default_arm, load_model
from ..control import MODES, PidGains

TASKS = ("step", "pick_place", "track_path")
SHIPPED = ("step_joint2", "pick_place", "track_path", "table1")


@dataclass(frozen=True)
class Waypoint:
    mode: str  # "joint" (6 angles, rad) or "cart" (x, y, z in m)
    values: tuple[float, ...]


@dataclass(frozen=True)
class Scenario:
    arm: ArmModel
    gains: PidGains
    mode: str = "pid"
    task: str = "step"
    dt: float = 0.001
    duration: float = 3.0
    start_q: np.ndarray = field(default_factory=lambda: HOME_Q.copy())
    name: str = "scenario"
    # step
    step_joint: int = 1  # 0-based
    step_size: float = math.radians(30.0)
    # pick_place
    target: np.ndarray | None = None
    trials: int = 1
    move_time: float = 2.0
    # track_path
    waypoints: tuple[Waypoint, ...] = ()
    segment_times: tuple[float, ...] = ()
    # table 1 step probe
    probe_joint: int = 1
    probe_step: float = math.radians(30.0)
    probe_duration: float = 4.0
    # plant perturbation relative to the nominal arm
    inertia_scale: float = 1.0
    friction_scale: float = 1.0
    extra_payload: float = 0.0
    # measurement noise
    noise_std: float = 0.0  # rad
    seed: int | None = None
    # actuator
    heat_coeff: float = 0.5
    heat_capacity: float = 20.0
    shutdown_temp: float = 80.0
    ambient: float = 25.0
    # output
    csv: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not 0.0 < self.dt <= 0.01:
            raise ValidationError("dt in (0, 0.01]", f"dt={self.dt}")
        if not self.duration > 0:
            raise ValidationError("duration > 0")
        if self.task not in TASKS:
            raise ValidationError("task is one of " + ", ".join(TASKS), self.task)
        if self.mode not in MODES:
            raise ValidationError("mode is one of " + ", ".join(MODES), self.mode)
        if self.trials < 1:
            raise ValidationError("trial count >= 1")
        if self.noise_std < 0:
            raise ValidationError("noise std >= 0")
        if self.noise_std > 0 and self.seed is None:
            raise ValidationError("seed mandatory when noise enabled")
        if self.fmt not in ("csv", "svg", "both"):
            raise ValidationError("format is csv, svg or both")
        self.gains.check_limits(self.arm)
        lo, hi = self.arm.lower_limits, self.arm.upper_limits
        if np.any(self.start_q < lo) or np.any(self.start_q > hi):
            raise ValidationError("start pose within joint limits")
        if self.task == "step":
            tgt = self.start_q[self.step_joint] + self.step_size
            if self.step_size == 0 or not lo[self.step_joint] <= tgt <= hi[self.step_joint]:
                raise ValidationError("step target non-zero and within joint limits")
        if self.task == "pick_place":
            if self.target is None:
                raise ValidationError("pick_place needs target_m")
            if self.move_time <= 0 or self.move_time > self.duration:
                raise ValidationError("0 < move_time <= duration")
        if self.task == "track_path":
            if len(self.waypoints) < 2:
                raise ValidationError(">= 2 waypoints")
            if len(self.segment_times) != len(self.waypoints) - 1 or min(self.segment_times) <= 0:
                raise ValidationError("one positive segment time per waypoint gap")

    @property
    def plant(self) -> ArmModel:
        """The simulated arm: nominal geometry with perturbed inertia, friction and payload."""
        return self.arm.with_plant_perturbation(self.inertia_scale, self.friction_scale, self.extra_payload)

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    def with_mode(self, mode: str) -> "Scenario":
        return replace(self, mode=mode)


def _per_joint(rd: _Reader, sec: str, key: str, default=None) -> np.ndarray:
    if default is not None and not rd.has(sec, key):
        return np.broadcast_to(np.asarray(default, dtype=float), (6,)).copy()
    vals = rd.floats(sec, key)
    if len(vals) not in (1, 6):
        raise ConfigParseError("expected 1 or 6 values", field=f"{sec}.{key}", line=rd.line(sec, key))
    return np.broadcast_to(np.asarray(vals, dtype=float), (6,)).copy()


def _angles6(rd: _Reader, sec: str, stem: str) -> np.ndarray | None:
    if rd.has(sec, stem + "_deg"):
        return np.radians(rd.floats(sec, stem + "_deg", 6))
    if rd.has(sec, stem + "_rad"):
        return np.asarray(rd.floats(sec, stem + "_rad", 6))
    return None


def apply_overrides(text: str, overrides: Mapping[str, str]) -> _Reader:
    rd = _Reader(text)
    for dotted, value in overrides.items():
        if "." not in dotted:
            raise ConfigParseError("override must look like section.key=value", field=dotted)
        sec, key = dotted.rsplit(".", 1)
        if not rd.parser.has_section(sec):
            rd.parser.add_section(sec)
        rd.parser.set(sec, key, str(value))
    return rd


def shipped_scenario_text(name: str) -> str:
    return resources.files("armsim.data.scenarios").joinpath(f"{name}.ini").read_text("utf-8")


def load_scenario(text: str, overrides: Mapping[str, str] | None = None, base_dir: str | Path = ".",
                  name: str = "scenario") -> Scenario:
    """Build a :class:`Scenario` from config text plus ``section.key`` overrides."""
    rd = apply_overrides(text, overrides or {})
    rd.require_section("task")
    rd.require_section("controller")

    arm_ref = rd.parser.get("task", "arm", fallback="default").strip()
    if arm_ref == "default":
        arm = default_arm()
    else:
        path = Path(arm_ref)
        if not path.is_absolute():
            path = Path(base_dir) / path
        try:
            arm = load_model(path.read_text("utf-8"))
        except OSError as exc:
            raise ConfigParseError(f"cannot read arm config {path}: {exc.strerror}", field="task.arm",
                                   line=rd.line("task", "arm")) from exc

    kind = rd.raw("task", "kind").strip()
    kw: dict = dict(arm=arm, task=kind, name=name,
                    dt=rd.float("task", "dt_s", 0.001), duration=rd.float("task", "duration_s"))
    start = _angles6(rd, "task", "start")
    if start is not None:
        kw["start_q"] = start

    if kind == "step":
        kw["step_joint"] = int(rd.float("task", "joint")) - 1
        kw["step_size"] = rd.angle("task", "step")
    elif kind == "pick_place":
        kw["target"] = np.asarray(rd.floats("task", "target_m", 3))
        kw["trials"] = int(rd.float("task", "trials", 1.0))
        kw["move_time"] = rd.float("task", "move_time_s")
    elif kind == "track_path":
        wps = []
        keys = sorted((k for k in rd.parser.options("task") if k.startswith("waypoint")),
                      key=lambda k: int(k[len("waypoint"):]))
        for k in keys:
            raw = rd.raw("task", k)
            mode, _, rest = raw.partition(":")
            mode = mode.strip()
            try:
                vals = tuple(float(v) for v in rest.split(","))
            except ValueError as exc:
                raise ConfigParseError("bad waypoint values", field=f"task.{k}", line=rd.line("task", k)) from exc
            if mode == "joint_deg" and len(vals) == 6:
                wps.append(Waypoint("joint", tuple(math.radians(v) for v in vals)))
            elif mode == "joint_rad" and len(vals) == 6:
                wps.append(Waypoint("joint", vals))
            elif mode == "cart_m" and len(vals) == 3:
                wps.append(Waypoint("cart", vals))
            else:
                raise ConfigParseError("waypoint must be 'joint_deg: 6 values', 'joint_rad: 6 values' "
                                       "or 'cart_m: x, y, z'", field=f"task.{k}", line=rd.line("task", k))
        kw["waypoints"] = tuple(wps)
        kw["segment_times"] = tuple(rd.floats("task", "segment_times_s"))
    else:
        raise ConfigParseError(f"unknown task kind {kind!r}", field="task.kind", line=rd.line("task", "kind"))

    if rd.has("task", "probe_joint"):
        kw["probe_joint"] = int(rd.float("task", "probe_joint")) - 1
    kw["probe_step"] = rd.angle("task", "probe_step", default=math.radians(30.0))
    kw["probe_duration"] = rd.float("task", "probe_duration_s", 4.0)

    sec = "controller"
    mode = rd.parser.get(sec, "mode", fallback="pid").strip()
    out_lim = _per_joint(rd, sec, "output_limit_nm", default=arm.max_torque)
    kw["mode"] = mode
    try:
        kw["gains"] = PidGains(kp=_per_joint(rd, sec, "kp"), ki=_per_joint(rd, sec, "ki", 0.0),
                               kd=_per_joint(rd, sec, "kd", 0.0), output_limit=out_lim,
                               integral_limit=_per_joint(rd, sec, "integral_limit", 1e6))
    except ValueError as exc:
        raise ValidationError("controller gains", str(exc)) from exc

    if rd.parser.has_section("noise"):
        kw["noise_std"] = rd.angle("noise", "std", default=0.0)
        if rd.has("noise", "seed"):
            seed = rd.raw("noise", "seed").strip()
            if not seed.isdigit() or int(seed) >= 2 ** 64:
                raise ConfigParseError("seed must be an unsigned 64-bit integer", field="noise.seed",
                                       line=rd.line("noise", "seed"))
            kw["seed"] = int(seed)
    if rd.parser.has_section("perturbation"):
        kw["inertia_scale"] = rd.float("perturbation", "inertia_scale", 1.0)
        kw["friction_scale"] = rd.float("perturbation", "friction_scale", 1.0)
        kw["extra_payload"] = rd.float("perturbation", "payload_kg", 0.0)
    if rd.parser.has_section("actuator"):
        kw["heat_coeff"] = rd.float("actuator", "heat_coeff", 0.5)
        kw["heat_capacity"] = rd.float("actuator", "heat_capacity_j_per_k", 20.0)
        kw["shutdown_temp"] = rd.float("actuator", "shutdown_temp_c", 80.0)
        kw["ambient"] = rd.float("actuator", "ambient_c", 25.0)
    if rd.parser.has_section("output"):
        kw["csv"] = rd.parser.get("output", "csv", fallback=None)
        kw["fmt"] = rd.parser.get("output", "format", fallback="csv").strip()
    return Scenario(**kw)


def load_scenario_file(path: str | Path, overrides: Mapping[str, str] | None = None) -> Scenario:
    """Load a scenario file; a bare shipped name such as ``step_joint2`` also works."""
    p = Path(path)
    if not p.exists() and str(path) in SHIPPED:
        return load_scenario(shipped_scenario_text(str(path)), overrides, name=str(path))
    try:
        text = p.read_text("utf-8")
    except OSError as exc:
        raise ConfigParseError(f"cannot read scenario {p}: {exc.strerror}") from exc
    return load_scenario(text, overrides, base_dir=p.parent, name=p.stem)
