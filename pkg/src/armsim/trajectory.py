"""Cubic joint trajectories, rest-to-rest multi-waypoint paths and difference-quotient rates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arm_model import ArmSimError


class NonPositiveDuration(ArmSimError, ValueError):
    pass


class OutOfRange(ArmSimError, ValueError):
    pass


class MismatchedLengths(ArmSimError, ValueError):
    pass


class TooFewSamples(ArmSimError, ValueError):
    pass


@dataclass(frozen=True)
class CubicSegment:
    a0: float
    a1: float
    a2: float
    a3: float
    T: float

    def __call__(self, t: float):
        return eval_segment(self, t)


def cubic_coeffs(theta0: float, thetaf: float, v0: float, vf: float, T: float) -> CubicSegment:
    """Cubic matching start/end angle and start/end velocity over duration ``T``."""
    if not T > 0:
        raise NonPositiveDuration(f"duration must be positive, got {T}")
    d = thetaf - theta0
    a2 = (3.0 * d - (2.0 * v0 + vf) * T) / T ** 2
    a3 = (-2.0 * d + (v0 + vf) * T) / T ** 3
    return CubicSegment(float(theta0), float(v0), float(a2), float(a3), float(T))


def eval_segment(seg: CubicSegment, t: float) -> tuple[float, float, float]:
    """Angle, rate and acceleration at local time ``t`` in [0, T]."""
    if not 0.0 <= t <= seg.T:
        raise OutOfRange(f"t={t} outside [0, {seg.T}]")
    theta = seg.a0 + t * (seg.a1 + t * (seg.a2 + t * seg.a3))
    thetadot = seg.a1 + t * (2.0 * seg.a2 + 3.0 * t * seg.a3)
    thetaddot = 2.0 * seg.a2 + 6.0 * seg.a3 * t
    return theta, thetadot, thetaddot


@dataclass(frozen=True)
class JointPath:
    """Per-joint list of segments sharing the knot times ``times`` (starts at 0)."""

    segments: tuple[tuple[CubicSegment, ...], ...]
    times: tuple[float, ...]

    @property
    def duration(self) -> float:
        return self.times[-1]

    def sample(self, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Desired (q, qdot, qddot). Before 0 and after the end the path holds at rest."""
        n = len(self.segments)
        if t <= 0.0:
            k, tau = 0, 0.0
        elif t >= self.times[-1]:
            q = np.array([segs[-1](segs[-1].T)[0] for segs in self.segments])
            return q, np.zeros(n), np.zeros(n)
        else:
            k = int(np.searchsorted(self.times, t, side="right")) - 1
            tau = min(t - self.times[k], self.segments[0][k].T)
        out = np.array([segs[k](tau) for segs in self.segments])
        if t <= 0.0:
            out[:, 1:] = 0.0
        return out[:, 0], out[:, 1], out[:, 2]


def plan_multipoint(waypoints: Sequence[Sequence[float]], segment_times: Sequence[float]) -> JointPath:
    """Rest-to-rest cubic per segment through ``waypoints`` (each a list of joint angles)."""
    wp = np.asarray(waypoints, dtype=float)
    if wp.ndim != 2 or wp.shape[0] < 2:
        raise MismatchedLengths("need at least two waypoints of equal length")
    if len(segment_times) != wp.shape[0] - 1:
        raise MismatchedLengths(f"{wp.shape[0]} waypoints need {wp.shape[0] - 1} segment times, "
                                f"got {len(segment_times)}")
    segs = tuple(
        tuple(cubic_coeffs(wp[k, j], wp[k + 1, j], 0.0, 0.0, float(segment_times[k]))
              for k in range(len(segment_times)))
        for j in range(wp.shape[1])
    )
    return JointPath(segments=segs, times=tuple(np.concatenate([[0.0], np.cumsum(segment_times)]).tolist()))


def finite_diff_rates(samples, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Forward differences: velocities (n-1) and accelerations (n-2)."""
    x = np.asarray(samples, dtype=float)
    if x.shape[0] < 3:
        raise TooFewSamples("need at least 3 samples")
    if dt <= 0:
        raise ValueError("dt must be positive")
    v = np.diff(x, axis=0) / dt
    a = np.diff(v, axis=0) / dt
    return v, a
