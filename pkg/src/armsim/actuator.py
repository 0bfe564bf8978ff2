"""Servo signal model: linear angle-to-PWM calibration, and the motor heating integrator."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .arm_model import ArmSimError

PWM_MIN_US = 500
PWM_MAX_US = 2500


class DegenerateCalibration(ArmSimError, ValueError):
    pass


class OutOfRange(ArmSimError, ValueError):
    pass


class Overheat(ArmSimError):
    def __init__(self, state: "ThermalState"):
        self.state = state
        super().__init__(f"temperature {np.max(state.temp):.2f} C reached shutdown")


@dataclass(frozen=True)
class PwmCalibration:
    m: float  # us per rad
    c: float  # us
    valid_range: tuple[float, float]

    def __post_init__(self):
        if self.m == 0:
            raise DegenerateCalibration("slope must be non-zero")
        lo, hi = self.valid_range
        ends = (self.m * lo + self.c, self.m * hi + self.c)
        if min(ends) < PWM_MIN_US - 1e-9 or max(ends) > PWM_MAX_US + 1e-9:
            raise ValueError(f"calibration maps outside [{PWM_MIN_US}, {PWM_MAX_US}] us: {ends}")


def calibrate_pwm(point_a: tuple[float, float], point_b: tuple[float, float]) -> PwmCalibration:
    """Two-point line through (angle rad, pulse us) pairs; valid between the two angles."""
    (ta, ua), (tb, ub) = point_a, point_b
    if ta == tb:
        raise DegenerateCalibration("calibration angles must differ")
    m = (ub - ua) / (tb - ta)
    c = ua - m * ta
    return PwmCalibration(m=m, c=c, valid_range=(min(ta, tb), max(ta, tb)))


DEFAULT_CALIBRATION = calibrate_pwm((0.0, 500.0), (math.pi, 2500.0))


def angle_to_pwm(calib: PwmCalibration, theta: float) -> int:
    """Pulse width in whole microseconds."""
    lo, hi = calib.valid_range
    if not lo <= theta <= hi:
        raise OutOfRange(f"angle {theta} outside calibrated range [{lo}, {hi}]")
    return int(round(calib.m * theta + calib.c))


@dataclass(frozen=True)
class ThermalState:
    temp: float = 25.0
    heat_capacity: float = 20.0  # J/K
    t0: float = 25.0
    shutdown_temp: float = 80.0
    heat_j: float = 0.0  # total heat absorbed, compensated sum
    heat_comp: float = 0.0

    def __post_init__(self):
        if np.any(np.asarray(self.heat_capacity) <= 0):
            raise ValueError("heat capacity must be positive")


def joule_power(torque: float, coeff: float = 0.5) -> float:
    """Resistive heating c_e * u^2, with u the motor torque (current is proportional to torque)."""
    return coeff * torque * torque


def thermal_step(state: ThermalState, power_w, dt: float, raise_on_overheat: bool = True) -> ThermalState:
    """Advance the heating integral by ``dt``. There is no cooling term.

    Temperature is recomputed from the accumulated heat, so equal total energy
    gives the same temperature however the interval is partitioned. Fields may
    be per-joint arrays, in which case the update is elementwise.
    """
    if np.any(np.asarray(power_w) < 0) or dt <= 0:
        raise ValueError("power must be >= 0 and dt > 0")
    x = power_w * dt
    s = state.heat_j + x
    comp = state.heat_comp + np.where(np.abs(state.heat_j) >= np.abs(x),
                                      (state.heat_j - s) + x, (x - s) + state.heat_j)
    new = replace(state, heat_j=s, heat_comp=comp, temp=state.t0 + (s + comp) / state.heat_capacity)
    if raise_on_overheat and np.any((new.temp >= state.shutdown_temp) & (state.temp < state.shutdown_temp)):
        raise Overheat(new)
    return new
