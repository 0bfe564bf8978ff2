"""Numerical position IK (damped least squares) and inverse velocity kinematics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arm_model import ArmModel, ArmSimError, HOME_Q
from .kinematics import link_frames, position_jacobian


class Unreachable(ArmSimError):
    """Target lies outside the conservative reach sphere."""


class NotConverged(ArmSimError):
    def __init__(self, result: "IkResult"):
        self.result = result
        super().__init__(f"IK stopped after {result.iterations} iterations, residual {result.residual:.3e} m")


class SingularConfig(ArmSimError):
    """Undamped inverse requested at an ill-conditioned configuration."""


@dataclass(frozen=True)
class IkOptions:
    damping: float = 0.01
    max_iters: int = 200
    tol: float = 1e-6
    step_limit: float = 0.2

    def __post_init__(self):
        if self.damping < 0:
            raise ValueError("damping must be >= 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol <= 0 or self.step_limit <= 0:
            raise ValueError("tol and step_limit must be positive")


@dataclass(frozen=True)
class IkResult:
    q: np.ndarray
    iterations: int
    residual: float
    converged: bool


def dls_step(J: np.ndarray, err: np.ndarray, damping: float) -> np.ndarray:
    """Minimum-norm damped step Jt (J Jt + lambda^2 I)^-1 err."""
    A = J @ J.T + (damping ** 2) * np.eye(J.shape[0])
    return J.T @ np.linalg.solve(A, err)


def _clamped_step(J, err, damping, q, lo, hi):
    # Joints resting on a limit and pushed outward are frozen (column zeroed)
    # so the remaining joints absorb the full correction.
    J = J.copy()
    frozen = np.zeros(J.shape[1], dtype=bool)
    for _ in range(J.shape[1]):
        dq = dls_step(J, err, damping)
        push = ((q <= lo) & (dq < 0)) | ((q >= hi) & (dq > 0))
        if not np.any(push & ~frozen):
            return dq
        frozen |= push
        J[:, frozen] = 0.0
    return dq


def solve_position_ik(arm: ArmModel, target, seed=None, opts: IkOptions | None = None,
                      raise_on_failure: bool = False) -> IkResult:
    """Solve for joint angles placing the frame-6 origin at ``target``.

    Iterates damped least-squares steps, each clamped to ``opts.step_limit`` in
    infinity norm and then to the joint limits. Deterministic for fixed inputs.
    Raises :class:`Unreachable` before iterating if the target is outside the
    reach sphere. A non-converged result is returned with ``converged=False``
    unless ``raise_on_failure`` is set, in which case :class:`NotConverged`
    carries it.
    """
    opts = opts or IkOptions()
    target = np.asarray(target, dtype=float)
    if target.shape != (3,) or not np.all(np.isfinite(target)):
        raise ValueError("target must be a finite 3-vector")
    if np.linalg.norm(target) > arm.reach:
        raise Unreachable(f"|target| = {np.linalg.norm(target):.4f} m exceeds reach {arm.reach:.4f} m")

    lo, hi = arm.lower_limits, arm.upper_limits
    q = np.array(HOME_Q if seed is None else seed, dtype=float)
    if np.any(q < lo) or np.any(q > hi):
        raise ValueError("seed outside joint limits")

    it = 0
    while True:
        p = link_frames(arm, q)[6][:3, 3]
        err = target - p
        residual = float(np.linalg.norm(err))
        if residual <= opts.tol or it >= opts.max_iters:
            break
        dq = _clamped_step(position_jacobian(arm, q), err, opts.damping, q, lo, hi)
        biggest = np.max(np.abs(dq))
        if biggest > opts.step_limit:
            dq *= opts.step_limit / biggest
        q = np.clip(q + dq, lo, hi)
        it += 1

    result = IkResult(q=q, iterations=it, residual=residual, converged=residual <= opts.tol)
    if raise_on_failure and not result.converged:
        raise NotConverged(result)
    return result


def joint_velocities_from_cartesian(arm: ArmModel, q, xdot, damping: float = 0.01) -> np.ndarray:
    """Joint rates for a desired end-effector velocity via the damped pseudoinverse.

    With ``damping == 0`` this is the exact minimum-norm right inverse, and
    :class:`SingularConfig` is raised when cond(J Jt) exceeds 1e12.
    """
    J = position_jacobian(arm, q)
    xdot = np.asarray(xdot, dtype=float)
    if damping == 0:
        if np.linalg.cond(J @ J.T) > 1e12:
            raise SingularConfig("J J^T is singular to working precision")
    return dls_step(J, xdot, damping)
