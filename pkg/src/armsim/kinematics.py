"""Forward kinematics by chained standard-DH transforms, and position Jacobians.

Transforms are plain 4x4 ``numpy`` arrays with bottom row ``(0, 0, 0, 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arm_model import ArmModel, DhRow


@dataclass(frozen=True)
class Pose:
    position: np.ndarray
    orientation: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        T = np.eye(4)
        T[:3, :3] = self.orientation
        T[:3, 3] = self.position
        return T


def dh_transform(row: DhRow, theta: float) -> np.ndarray:
    """Link transform for joint angle ``theta`` (the row's offset is added)."""
    th = theta + row.theta_offset
    ct, st = math.cos(th), math.sin(th)
    ca, sa = math.cos(row.alpha), math.sin(row.alpha)
    return np.array([
        [ct, -st * ca, st * sa, row.a * ct],
        [st, ct * ca, -ct * sa, row.a * st],
        [0.0, sa, ca, row.d],
        [0.0, 0.0, 0.0, 1.0],
    ])


def link_frames(arm: ArmModel, q) -> list[np.ndarray]:
    """Base frame followed by the frame after each joint (7 transforms)."""
    frames = [np.eye(4)]
    T = frames[0]
    for row, th in zip(arm.rows, q):
        T = T @ dh_transform(row, float(th))
        frames.append(T)
    return frames


def forward_kinematics(arm: ArmModel, q) -> Pose:
    T = link_frames(arm, q)[-1]
    return Pose(position=T[:3, 3].copy(), orientation=T[:3, :3].copy())


def point_jacobian(frames: list[np.ndarray], point: np.ndarray, link: int) -> np.ndarray:
    """3x6 Jacobian of a point rigidly attached to ``link`` (1-based).

    Columns for joints beyond ``link`` are zero.
    """
    J = np.zeros((3, 6))
    for i in range(link):
        z = frames[i][:3, 2]
        o = frames[i][:3, 3]
        J[:, i] = np.cross(z, point - o)
    return J


def position_jacobian(arm: ArmModel, q) -> np.ndarray:
    """Geometric position Jacobian of the frame-6 origin, column i = z_{i-1} x (p - o_{i-1})."""
    frames = link_frames(arm, q)
    F = np.array(frames[:6])
    z = F[:, :3, 2]
    o = F[:, :3, 3]
    p = frames[6][:3, 3]
    return np.cross(z, p - o).T


def numeric_jacobian(arm: ArmModel, q, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of the FK position (test oracle)."""
    if h <= 0:
        raise ValueError("step h must be positive")
    q = np.asarray(q, dtype=float)
    J = np.zeros((3, 6))
    for i in range(6):
        dq = np.zeros(6)
        dq[i] = h
        J[:, i] = (forward_kinematics(arm, q + dq).position - forward_kinematics(arm, q - dq).position) / (2 * h)
    return J
