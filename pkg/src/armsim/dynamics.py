"""Decoupled per-joint dynamics tau = I*qddot + b*qdot + tau_g and its integrator.

Each joint sees only its own reflected inertia and viscous friction; coupling
between joints enters solely through the configuration-dependent gravity
torque. Coriolis and the full manipulator inertia matrix are not modelled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arm_model import ArmModel, ArmSimError, JointState
from .kinematics import link_frames


class NonFiniteState(ArmSimError):
    """The integrator produced NaN or Inf (usually unstable gains or dt)."""


@dataclass(frozen=True)
class DynParams:
    """Array view of the dynamic quantities of an :class:`ArmModel`."""

    arm: ArmModel
    inertia: np.ndarray
    friction: np.ndarray
    max_torque: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    @classmethod
    def from_arm(cls, arm: ArmModel) -> "DynParams":
        return cls(arm=arm, inertia=arm.inertia, friction=arm.friction, max_torque=arm.max_torque,
                   lower=arm.lower_limits, upper=arm.upper_limits)


def mass_points(arm: ArmModel, frames) -> tuple[np.ndarray, np.ndarray]:
    """Point masses (7,) and their base-frame positions (7, 3): six links then the payload.

    Link k's mass sits ``com_offset`` along its x axis from where the link's
    common normal leaves joint axis k.
    """
    F = np.asarray(frames)
    P = np.empty((7, 3))
    P[:6] = F[:6, :3, 3] + arm.link_d[:, None] * F[:6, :3, 2] + arm.com_offsets[:, None] * F[1:, :3, 0]
    P[6] = F[6, :3, 3]
    return arm.point_masses, P


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # row-wise cross product; np.cross is slow for small stacks
    return np.stack([a[:, 1] * b[2] - a[:, 2] * b[1],
                     a[:, 2] * b[0] - a[:, 0] * b[2],
                     a[:, 0] * b[1] - a[:, 1] * b[0]], axis=1)


def potential_energy(arm: ArmModel, q) -> float:
    """Gravitational potential, -sum m g.p (zero at the base height for g along -z)."""
    m, P = mass_points(arm, link_frames(arm, q))
    return float(-(m @ P) @ np.asarray(arm.gravity))


def gravity_torque(arm: ArmModel, q) -> np.ndarray:
    """Joint torques that hold the point-mass model static, the gradient of the potential."""
    return gravity_torque_from_frames(arm, link_frames(arm, q))


def gravity_torque_from_frames(arm: ArmModel, frames) -> np.ndarray:
    F = np.asarray(frames)
    m, P = mass_points(arm, F)
    # joint i moves links i..6 and the payload: rows i.. of the suffix sums
    S = np.cumsum((m[:, None] * P)[::-1], axis=0)[::-1]
    M = np.cumsum(m[::-1])[::-1]
    z, o = F[:6, :3, 2], F[:6, :3, 3]
    moment = _cross(S[:6] - M[:6, None] * o, np.asarray(arm.gravity))
    return -np.einsum("ij,ij->i", z, moment)


def joint_acceleration(params: DynParams, q, qdot, tau_applied, tau_g=None) -> np.ndarray:
    if tau_g is None:
        tau_g = gravity_torque(params.arm, q)
    return (np.asarray(tau_applied) - params.friction * np.asarray(qdot) - tau_g) / params.inertia


def integrate_step(params: DynParams, state: JointState, tau_cmd, dt: float, tau_g=None) -> JointState:
    """One semi-implicit Euler step (velocity first, then position).

    The command is saturated at each joint's max torque. A joint that would
    leave its limits is clamped there with its velocity zeroed. ``tau_g`` may
    be passed when the caller already has the gravity torque at ``state.q``.
    """
    if not 0.0 < dt <= 0.01:
        raise ValueError(f"dt must be in (0, 0.01] s, got {dt}")
    tau = np.clip(np.asarray(tau_cmd, dtype=float), -params.max_torque, params.max_torque)
    # blow-ups are reported through NonFiniteState, not floating-point warnings
    with np.errstate(invalid="ignore", over="ignore"):
        qddot = joint_acceleration(params, state.q, state.qdot, tau, tau_g)
        qdot = state.qdot + qddot * dt
        q = state.q + qdot * dt
    hit = (q < params.lower) | (q > params.upper)
    if np.any(hit):
        q = np.clip(q, params.lower, params.upper)
        qdot = np.where(hit, 0.0, qdot)
    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(qdot))):
        raise NonFiniteState("non-finite joint state after integration step")
    return JointState(q=q, qdot=qdot, qddot=qddot, tau=tau, temp=state.temp.copy())
