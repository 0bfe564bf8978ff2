"""Parametric description of the six-joint arm and its config-file format.

The config format is sectioned key-value text read with :mod:`configparser`::

    [dh]
    columns = a_m, d_m, alpha_deg, theta_offset_deg
    row1 = 0.0, 0.10, 90, 0
    ...
    [joint.1]
    limit_min_deg = -150
    limit_max_deg = 150
    inertia = 0.02
    friction = 0.05
    max_torque = 2.0
    mass = 0.15
    com_offset_m = 0.0
    ...
    [world]
    gravity = 0, 0, -9.81
    payload_kg = 0.0

Every angle key carries an explicit ``_deg`` or ``_rad`` suffix.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from importlib import resources
from typing import Sequence

import numpy as np

N_JOINTS = 6

DH_COLUMNS_DEG = ("a_m", "d_m", "alpha_deg", "theta_offset_deg")
DH_COLUMNS_RAD = ("a_m", "d_m", "alpha_rad", "theta_offset_rad")

# Documented home pose (rad): shoulder up, elbow bent, away from the
# stretched singularity at q = 0.
HOME_Q = np.radians([0.0, 45.0, -90.0, 0.0, 0.0, 0.0])


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


class ArmSimError(Exception):
    """Base class for all errors raised by armsim."""


class ConfigParseError(ArmSimError):
    """Config text does not follow the documented schema."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = ""
        if field is not None:
            where += f" [field {field}"
            where += f", line {line}]" if line is not None else "]"
        super().__init__(message + where)


class ValidationError(ArmSimError):
    """A parsed value violates a model invariant."""

    def __init__(self, rule: str, detail: str = ""):
        self.rule = rule
        super().__init__(f"{rule}: {detail}" if detail else rule)


@dataclass(frozen=True)
class DhRow:
    a: float
    d: float
    alpha: float
    theta_offset: float = 0.0

    def validate(self, idx: int = 0) -> None:
        vals = (self.a, self.d, self.alpha, self.theta_offset)
        if not all(math.isfinite(v) for v in vals):
            raise ValidationError("DH values must be finite", f"row {idx}")
        if self.a < 0:
            raise ValidationError("a >= 0", f"row {idx}: a={self.a}")
        if not -math.pi <= self.alpha <= math.pi:
            raise ValidationError("alpha in [-pi, pi]", f"row {idx}: alpha={self.alpha}")


@dataclass(frozen=True)
class JointSpec:
    limits: tuple[float, float]
    max_torque: float
    inertia: float
    friction: float
    link_mass: float = 0.0
    com_offset: float = 0.0

    def validate(self, idx: int = 0) -> None:
        lo, hi = self.limits
        nums = (lo, hi, self.max_torque, self.inertia, self.friction, self.link_mass, self.com_offset)
        if not all(math.isfinite(v) for v in nums):
            raise ValidationError("joint values must be finite", f"joint {idx}")
        if not lo < hi:
            raise ValidationError("limit min < max", f"joint {idx}: [{lo}, {hi}]")
        if self.inertia <= 0:
            raise ValidationError("inertia > 0", f"joint {idx}")
        if self.friction < 0:
            raise ValidationError("friction >= 0", f"joint {idx}")
        if self.max_torque <= 0:
            raise ValidationError("max_torque > 0", f"joint {idx}")
        if self.link_mass < 0:
            raise ValidationError("mass >= 0", f"joint {idx}")


@dataclass(frozen=True)
class ArmModel:
    """Immutable arm description: DH table, joint specs and world settings."""

    rows: tuple[DhRow, ...]
    joints: tuple[JointSpec, ...]
    gravity: tuple[float, float, float] = (0.0, 0.0, -9.81)
    payload_mass: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "joints", tuple(self.joints))
        object.__setattr__(self, "gravity", tuple(float(g) for g in self.gravity))
        self.validate()

    def validate(self) -> None:
        if len(self.rows) != N_JOINTS:
            raise ValidationError("exactly 6 rows", f"got {len(self.rows)} DH rows")
        if len(self.joints) != N_JOINTS:
            raise ValidationError("exactly 6 joints", f"got {len(self.joints)} joints")
        for i, row in enumerate(self.rows, 1):
            row.validate(i)
        for i, js in enumerate(self.joints, 1):
            js.validate(i)
        if len(self.gravity) != 3 or not all(math.isfinite(g) for g in self.gravity):
            raise ValidationError("gravity is a finite 3-vector")
        if not 0.0 <= math.hypot(*self.gravity) <= 20.0:
            raise ValidationError("gravity magnitude in [0, 20]")
        if not (math.isfinite(self.payload_mass) and self.payload_mass >= 0):
            raise ValidationError("payload_mass >= 0")

    # convenience vectors used in the hot loops
    @cached_property
    def inertia(self) -> np.ndarray:
        return _frozen([j.inertia for j in self.joints])

    @cached_property
    def friction(self) -> np.ndarray:
        return _frozen([j.friction for j in self.joints])

    @cached_property
    def max_torque(self) -> np.ndarray:
        return _frozen([j.max_torque for j in self.joints])

    @cached_property
    def lower_limits(self) -> np.ndarray:
        return _frozen([j.limits[0] for j in self.joints])

    @cached_property
    def upper_limits(self) -> np.ndarray:
        return _frozen([j.limits[1] for j in self.joints])

    @cached_property
    def link_d(self) -> np.ndarray:
        return _frozen([r.d for r in self.rows])

    @cached_property
    def com_offsets(self) -> np.ndarray:
        return _frozen([j.com_offset for j in self.joints])

    @cached_property
    def point_masses(self) -> np.ndarray:
        """Six link masses followed by the payload."""
        return _frozen([j.link_mass for j in self.joints] + [self.payload_mass])

    @property
    def reach(self) -> float:
        """Conservative spherical reach bound, sum of |a| + |d|."""
        return float(sum(abs(r.a) + abs(r.d) for r in self.rows))

    def with_plant_perturbation(self, inertia_scale: float = 1.0, friction_scale: float = 1.0,
                                extra_payload: float = 0.0) -> "ArmModel":
        joints = tuple(replace(j, inertia=j.inertia * inertia_scale, friction=j.friction * friction_scale)
                       for j in self.joints)
        return replace(self, joints=joints, payload_mass=self.payload_mass + extra_payload)


@dataclass
class JointState:
    """Per-joint state at one instant. Plain value, arrays of length 6."""

    q: np.ndarray
    qdot: np.ndarray = field(default_factory=lambda: np.zeros(N_JOINTS))
    qddot: np.ndarray = field(default_factory=lambda: np.zeros(N_JOINTS))
    tau: np.ndarray = field(default_factory=lambda: np.zeros(N_JOINTS))
    temp: np.ndarray = field(default_factory=lambda: np.full(N_JOINTS, 25.0))

    def __post_init__(self):
        for name in ("q", "qdot", "qddot", "tau", "temp"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (N_JOINTS,):
                raise ValueError(f"{name} must have shape (6,), got {arr.shape}")
            setattr(self, name, arr)

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(getattr(self, n))) for n in ("q", "qdot", "qddot", "tau", "temp"))


@lru_cache(maxsize=1)
def default_arm() -> ArmModel:
    """The committed desk-scale reference arm (not a reconstruction of any prototype)."""
    return load_model(resources.files("armsim.data").joinpath("default_arm.ini").read_text("utf-8"))


# ---------------------------------------------------------------------------
# config parsing


def _key_lines(text: str) -> dict[tuple[str, str], int]:
    """Map (section, key) to the 1-based line where the key is defined."""
    out: dict[tuple[str, str], int] = {}
    section = ""
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        m = re.match(r"\[(.+)\]$", line)
        if m:
            section = m.group(1).strip()
            out[(section, "")] = n
            continue
        m = re.match(r"([^=:]+?)\s*[=:]", line)
        if m:
            out[(section, m.group(1).strip().lower())] = n
    return out


class _Reader:
    """configparser wrapper that reports the field and line of bad values."""

    def __init__(self, text: str):
        self.parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"),
                                                interpolation=None)
        try:
            self.parser.read_string(text)
        except configparser.MissingSectionHeaderError as exc:
            raise ConfigParseError("missing section header", line=exc.lineno, field="<top>") from exc
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            raise ConfigParseError(f"malformed config: {exc.message}",
                                   field=getattr(exc, "option", None) or "<section>", line=line) from exc
        self.lines = _key_lines(text)

    def line(self, section: str, key: str = "") -> int | None:
        return self.lines.get((section, key))

    def require_section(self, section: str) -> None:
        if not self.parser.has_section(section):
            raise ConfigParseError(f"missing required section [{section}]", field=section)

    def has(self, section: str, key: str) -> bool:
        return self.parser.has_option(section, key)

    def raw(self, section: str, key: str) -> str:
        if not self.parser.has_option(section, key):
            raise ConfigParseError("missing required field", field=f"{section}.{key}",
                                   line=self.line(section))
        return self.parser.get(section, key)

    def floats(self, section: str, key: str, n: int | None = None) -> list[float]:
        text = self.raw(section, key)
        try:
            vals = [float(tok) for tok in text.split(",") if tok.strip()]
        except ValueError as exc:
            raise ConfigParseError(f"expected number(s), got {text!r}", field=f"{section}.{key}",
                                   line=self.line(section, key)) from exc
        if n is not None and len(vals) != n:
            raise ConfigParseError(f"expected {n} value(s), got {len(vals)}", field=f"{section}.{key}",
                                   line=self.line(section, key))
        return vals

    def float(self, section: str, key: str, default: float | None = None) -> float:
        if default is not None and not self.has(section, key):
            return default
        return self.floats(section, key, 1)[0]

    def angle(self, section: str, stem: str, default: float | None = None) -> float:
        """Read ``<stem>_deg`` or ``<stem>_rad``; returns radians."""
        has_deg, has_rad = self.has(section, stem + "_deg"), self.has(section, stem + "_rad")
        if has_deg and has_rad:
            raise ConfigParseError("give the angle in one unit only", field=f"{section}.{stem}",
                                   line=self.line(section, stem + "_rad"))
        if has_deg:
            return math.radians(self.float(section, stem + "_deg"))
        if has_rad:
            return self.float(section, stem + "_rad")
        if default is not None:
            return default
        raise ConfigParseError("missing required field (needs _deg or _rad suffix)",
                               field=f"{section}.{stem}_deg", line=self.line(section))


def load_model(config_text: str) -> ArmModel:
    """Parse and validate an arm config. Raises ConfigParseError or ValidationError."""
    rd = _Reader(config_text)
    rd.require_section("dh")
    cols = tuple(c.strip() for c in rd.raw("dh", "columns").split(","))
    if cols not in (DH_COLUMNS_DEG, DH_COLUMNS_RAD):
        raise ConfigParseError(f"columns must be {', '.join(DH_COLUMNS_DEG)} (or the _rad variant)",
                               field="dh.columns", line=rd.line("dh", "columns"))
    to_rad = math.radians if cols == DH_COLUMNS_DEG else float

    row_keys = [k for k in rd.parser.options("dh") if k != "columns"]
    for k in row_keys:
        if not re.fullmatch(r"row\d+", k):
            raise ConfigParseError("unknown key in [dh]", field=f"dh.{k}", line=rd.line("dh", k))
    row_keys.sort(key=lambda k: int(k[3:]))
    rows = []
    for k in row_keys:
        a, d, alpha, off = rd.floats("dh", k, 4)
        rows.append(DhRow(a=a, d=d, alpha=to_rad(alpha), theta_offset=to_rad(off)))
    if len(rows) != N_JOINTS:
        raise ValidationError("exactly 6 rows", f"[dh] has {len(rows)} rows")

    joints = []
    for i in range(1, N_JOINTS + 1):
        sec = f"joint.{i}"
        rd.require_section(sec)
        joints.append(JointSpec(
            limits=(rd.angle(sec, "limit_min"), rd.angle(sec, "limit_max")),
            max_torque=rd.float(sec, "max_torque"),
            inertia=rd.float(sec, "inertia"),
            friction=rd.float(sec, "friction"),
            link_mass=rd.float(sec, "mass", 0.0),
            com_offset=rd.float(sec, "com_offset_m", 0.0),
        ))

    gravity: Sequence[float] = (0.0, 0.0, -9.81)
    payload = 0.0
    if rd.parser.has_section("world"):
        if rd.has("world", "gravity"):
            gravity = rd.floats("world", "gravity", 3)
        payload = rd.float("world", "payload_kg", 0.0)
    return ArmModel(rows=tuple(rows), joints=tuple(joints), gravity=tuple(gravity), payload_mass=payload)


def _fmt(x: float) -> str:
    return repr(float(x))


def _deg_exact(x: float) -> bool:
    return math.radians(float(_fmt(math.degrees(x)))) == x


def serialize_model(arm: ArmModel) -> str:
    """Inverse of :func:`load_model`.

    Angles are written in degrees when that converts back bit-exactly, otherwise
    in radians with a ``_rad`` suffix, so ``load_model(serialize_model(m)) == m``.
    """
    lines = ["[dh]"]
    use_deg = all(_deg_exact(r.alpha) and _deg_exact(r.theta_offset) for r in arm.rows)
    conv = math.degrees if use_deg else float
    lines.append("columns = " + ", ".join(DH_COLUMNS_DEG if use_deg else DH_COLUMNS_RAD))
    for i, r in enumerate(arm.rows, 1):
        lines.append(f"row{i} = {_fmt(r.a)}, {_fmt(r.d)}, {_fmt(conv(r.alpha))}, {_fmt(conv(r.theta_offset))}")
    for i, j in enumerate(arm.joints, 1):
        lines += ["", f"[joint.{i}]"]
        for stem, val in (("limit_min", j.limits[0]), ("limit_max", j.limits[1])):
            if _deg_exact(val):
                lines.append(f"{stem}_deg = {_fmt(math.degrees(val))}")
            else:
                lines.append(f"{stem}_rad = {_fmt(val)}")
        lines += [
            f"inertia = {_fmt(j.inertia)}",
            f"friction = {_fmt(j.friction)}",
            f"max_torque = {_fmt(j.max_torque)}",
            f"mass = {_fmt(j.link_mass)}",
            f"com_offset_m = {_fmt(j.com_offset)}",
        ]
    lines += ["", "[world]", "gravity = " + ", ".join(_fmt(g) for g in arm.gravity),
              f"payload_kg = {_fmt(arm.payload_mass)}", ""]
    return "\n".join(lines)
