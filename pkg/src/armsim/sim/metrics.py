"""Step-response and tracking metrics, computed only from recorded series."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..arm_model import ArmSimError

SETTLING_BAND = 0.02


class NeverRises(ArmSimError):
    """The response never reaches 10% of the commanded step."""


@dataclass
class StepMetrics:
    overshoot_pct: float
    settling_time_s: float  # inf when the response leaves the band at the last sample
    rise_time_s: float
    steady_state_error: float

    @property
    def settled(self) -> bool:
        return math.isfinite(self.settling_time_s)


def _normalized(series, target: float, initial: float) -> np.ndarray:
    if target == initial:
        raise ValueError("target must differ from initial value")
    y = np.asarray(series, dtype=float)
    if y.size == 0:
        raise ValueError("empty series")
    return (y - initial) / (target - initial)


def overshoot_pct(series, target: float, initial: float) -> float:
    return max(0.0, float(np.max(_normalized(series, target, initial))) - 1.0) * 100.0


def settling_time(series, target: float, initial: float, dt: float, band: float = SETTLING_BAND) -> float:
    """First time after which the response stays within +-band of the step around the target."""
    x = np.asarray(series, dtype=float)
    outside = np.flatnonzero(np.abs(x - target) > band * abs(target - initial))
    if outside.size == 0:
        return 0.0
    last = int(outside[-1])
    if last == x.size - 1:
        return math.inf
    return (last + 1) * dt


def rise_time(series, target: float, initial: float, dt: float) -> float:
    """10% to 90% interval; inf if 90% is never reached."""
    y = _normalized(series, target, initial)
    i10 = np.flatnonzero(y >= 0.1)
    if i10.size == 0:
        raise NeverRises("response never reaches 10% of the step")
    i90 = np.flatnonzero(y >= 0.9)
    if i90.size == 0:
        return math.inf
    return (int(i90[0]) - int(i10[0])) * dt


def compute_step_metrics(series, target: float, initial: float, dt: float) -> StepMetrics:
    """Overshoot, +-2% settling time, 10-90% rise time and final error of a step response.

    Raises :class:`NeverRises` if the response never gets 10% of the way.
    """
    x = np.asarray(series, dtype=float)
    return StepMetrics(
        overshoot_pct=overshoot_pct(x, target, initial),
        settling_time_s=settling_time(x, target, initial, dt),
        rise_time_s=rise_time(x, target, initial, dt),
        steady_state_error=abs(target - float(x[-1])),
    )


@dataclass
class Metrics:
    """Summary of one run. Fields that do not apply to the task stay NaN/None."""

    overshoot_pct: float = math.nan
    settling_time_s: float = math.nan
    rise_time_s: float = math.nan
    steady_state_error: float = math.nan
    deviation_m: np.ndarray | None = None  # final ee position minus target, per axis
    max_tracking_error_rad: np.ndarray | None = None  # per joint
    energy_j: float = 0.0
    peak_temp_c: float = math.nan
    overheat_events: list[tuple[int, int]] = field(default_factory=list)  # (step, joint)

    @property
    def settled(self) -> bool:
        return math.isfinite(self.settling_time_s)

    def summary_lines(self) -> list[str]:
        out = []
        if not math.isnan(self.overshoot_pct):
            out.append(f"overshoot_pct        {self.overshoot_pct:.3f}")
            st = f"{self.settling_time_s:.3f}" if self.settled else "unsettled"
            out.append(f"settling_time_s      {st}")
            out.append(f"rise_time_s          {self.rise_time_s:.3f}")
            out.append(f"steady_state_error   {self.steady_state_error:.6f} rad")
        if self.deviation_m is not None:
            d = self.deviation_m
            out.append(f"deviation_m          {d[0]:+.6f} {d[1]:+.6f} {d[2]:+.6f}  |d| {np.linalg.norm(d):.6f}")
        if self.max_tracking_error_rad is not None:
            deg = np.degrees(self.max_tracking_error_rad)
            out.append("max_tracking_err_deg " + " ".join(f"{v:.3f}" for v in deg))
        out.append(f"energy_j             {self.energy_j:.4f}")
        out.append(f"peak_temp_c          {self.peak_temp_c:.3f}")
        out.append(f"overheat_events      {len(self.overheat_events)}")
        return out


@dataclass
class DeviationStats:
    """Per-axis statistics of final end-effector deviations over a batch of trials."""

    deviations: np.ndarray  # (n, 3), metres

    @property
    def mean_abs(self) -> np.ndarray:
        return np.mean(np.abs(self.deviations), axis=0)

    @property
    def mean(self) -> np.ndarray:
        return np.mean(self.deviations, axis=0)

    @property
    def std(self) -> np.ndarray:
        return np.std(self.deviations, axis=0)

    @property
    def max_abs(self) -> np.ndarray:
        return np.max(np.abs(self.deviations), axis=0)

    @property
    def mean_norm(self) -> float:
        """Mean Euclidean end-effector deviation over the trials."""
        return float(np.mean(np.linalg.norm(self.deviations, axis=1)))

    @property
    def max_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.deviations, axis=1)))
