"""Discrete joint-space controllers: PID, open-loop feedforward, and PID plus gravity feedforward."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .arm_model import ArmModel
from .dynamics import gravity_torque

MODES = ("open_loop", "pid", "hybrid")


def _vec(x) -> np.ndarray:
    return np.broadcast_to(np.asarray(x, dtype=float), (6,)).copy()


@dataclass(frozen=True)
class PidGains:
    kp: np.ndarray
    ki: np.ndarray
    kd: np.ndarray
    output_limit: np.ndarray
    integral_limit: np.ndarray

    def __post_init__(self):
        for name in ("kp", "ki", "kd", "output_limit", "integral_limit"):
            arr = _vec(getattr(self, name))
            if np.any(arr < 0) or not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite and >= 0")
            object.__setattr__(self, name, arr)

    def check_limits(self, arm: ArmModel) -> None:
        if np.any(self.output_limit > arm.max_torque):
            raise ValueError("output_limit exceeds joint max_torque")

    def scaled(self, kp: float = 1.0, ki: float = 1.0, kd: float = 1.0) -> "PidGains":
        return replace(self, kp=self.kp * kp, ki=self.ki * ki, kd=self.kd * kd)


@dataclass(frozen=True)
class ControllerState:
    integral: np.ndarray
    prev_error: np.ndarray
    mode: str = "pid"

    @classmethod
    def zero(cls, mode: str = "pid") -> "ControllerState":
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        return cls(integral=np.zeros(6), prev_error=np.zeros(6), mode=mode)


def pid_update(gains: PidGains, state: ControllerState, e, dt: float):
    """u = kp*e + ki*integral + kd*(e - e_prev)/dt, saturated at the output limit.

    The integral uses the left rectangular rule and is clamped to
    +-integral_limit. Joints with ki == 0 keep their accumulator untouched.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    e = np.asarray(e, dtype=float)
    integral = np.where(gains.ki > 0,
                        np.clip(state.integral + e * dt, -gains.integral_limit, gains.integral_limit),
                        state.integral)
    deriv = (e - state.prev_error) / dt
    u = gains.kp * e + gains.ki * integral + gains.kd * deriv
    u = np.clip(u, -gains.output_limit, gains.output_limit)
    return u, replace(state, integral=integral, prev_error=e)


def open_loop_command(nominal: ArmModel, q_des, qdot_des, qddot_des, output_limit=None) -> np.ndarray:
    """Inverse-dynamics feedforward from the nominal model; no feedback at all."""
    u = nominal.inertia * np.asarray(qddot_des) + nominal.friction * np.asarray(qdot_des) \
        + gravity_torque(nominal, q_des)
    lim = nominal.max_torque if output_limit is None else output_limit
    return np.clip(u, -lim, lim)


def hybrid_update(gains: PidGains, state: ControllerState, e, dt: float, nominal: ArmModel, q_des,
                  tau_g=None):
    """PID plus gravity feedforward at the desired pose, clamped to the output limit."""
    u, state = pid_update(gains, state, e, dt)
    if tau_g is None:
        tau_g = gravity_torque(nominal, q_des)
    return np.clip(u + tau_g, -gains.output_limit, gains.output_limit), state


def holding_state(gains: PidGains, mode: str, tau_hold) -> ControllerState:
    """Controller state of a loop that has been holding its pose at rest.

    For PID the integral carries the holding torque (where ki > 0); open-loop
    and hybrid already supply it through feedforward.
    """
    st = ControllerState.zero(mode)
    if mode != "pid":
        return st
    with np.errstate(divide="ignore", invalid="ignore"):
        integral = np.where(gains.ki > 0, np.asarray(tau_hold) / np.where(gains.ki > 0, gains.ki, 1.0), 0.0)
    integral = np.clip(integral, -gains.integral_limit, gains.integral_limit)
    return replace(st, integral=integral)
