import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from armsim.actuator import (DEFAULT_CALIBRATION, DegenerateCalibration, OutOfRange, Overheat, ThermalState,
                             angle_to_pwm, calibrate_pwm, joule_power, thermal_step)


def test_default_line():
    c = calibrate_pwm((0.0, 500.0), (math.pi, 2500.0))
    assert c.m == pytest.approx(2000 / math.pi, rel=1e-15)
    assert c.c == 500.0


def test_symmetric_points_put_midpoint_at_zero():
    c = calibrate_pwm((-1.2, 700.0), (1.2, 2300.0))
    assert c.c == pytest.approx(1500.0, abs=1e-12)


@pytest.mark.parametrize("theta,us", [(0.0, 500), (math.pi / 2, 1500), (math.pi, 2500)])
def test_default_pulse_widths(theta, us):
    assert angle_to_pwm(DEFAULT_CALIBRATION, theta) == us


def test_calibration_errors():
    with pytest.raises(DegenerateCalibration):
        calibrate_pwm((1.0, 500.0), (1.0, 2500.0))
    with pytest.raises(ValueError):
        calibrate_pwm((0.0, 100.0), (1.0, 2500.0))
    with pytest.raises(OutOfRange):
        angle_to_pwm(DEFAULT_CALIBRATION, -0.1)


@given(st.floats(-3, 3), st.integers(500, 2499), st.floats(0.01, 3), st.integers(1, 2000))
def test_calibration_reproduces_its_points(a, ua, span, dus):
    ub = min(ua + dus, 2500)
    c = calibrate_pwm((a, float(ua)), (a + span, float(ub)))
    assert angle_to_pwm(c, a) == ua
    assert angle_to_pwm(c, a + span) == ub


@given(st.floats(0, math.pi), st.floats(0, math.pi))
def test_pwm_monotone(t1, t2):
    lo, hi = sorted((t1, t2))
    assert angle_to_pwm(DEFAULT_CALIBRATION, lo) <= angle_to_pwm(DEFAULT_CALIBRATION, hi)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 10, 100, 1000, 4096])
def test_constant_power_any_partition(n):
    s = ThermalState(temp=25.0, heat_capacity=5.0, t0=25.0)
    for _ in range(n):
        s = thermal_step(s, 10.0, 1.0 / n)
    assert s.temp == 27.0


@given(st.lists(st.floats(1e-4, 0.5), min_size=1, max_size=60))
def test_constant_power_uneven_partition(pieces):
    total = math.fsum(pieces)
    s = ThermalState(temp=25.0, heat_capacity=5.0, t0=25.0)
    for p in pieces:
        s = thermal_step(s, 10.0, p)
    assert s.temp == pytest.approx(25.0 + 10.0 * total / 5.0, rel=1e-14)


def test_zero_power_keeps_temperature():
    s = ThermalState(temp=31.5, t0=25.0, heat_j=130.0)
    assert thermal_step(s, 0.0, 0.01).temp == 25.0 + 130.0 / 20.0


def test_sinusoidal_torque_matches_quadrature():
    coeff, C, dt = 0.5, 20.0, 0.001
    t = np.arange(10001) * dt
    u = 1.5 * np.sin(2 * np.pi * 0.7 * t) + 0.3
    s = ThermalState(heat_capacity=C)
    for k in range(10000):
        s = thermal_step(s, joule_power(u[k], coeff), dt)
    f = u ** 2
    rise = coeff * np.sum((f[1:] + f[:-1]) / 2 * dt) / C  # trapezoid rule
    assert abs((s.temp - 25.0) - rise) <= 1e-3 * rise


@given(st.lists(st.floats(0, 50), min_size=2, max_size=30))
def test_temperature_never_decreases(powers):
    s = ThermalState(shutdown_temp=1e9)
    for p in powers:
        new = thermal_step(s, p, 0.01)
        assert new.temp >= s.temp
        s = new


def test_overheat_raises_once_crossed():
    s = ThermalState(temp=79.0, t0=25.0, heat_j=54.0 * 20.0)
    with pytest.raises(Overheat) as info:
        thermal_step(s, 100.0, 1.0)
    assert info.value.state.temp >= 80.0
    assert thermal_step(s, 100.0, 1.0, raise_on_overheat=False).temp == pytest.approx(84.0)


def test_thermal_validation():
    with pytest.raises(ValueError):
        ThermalState(heat_capacity=0.0)
    with pytest.raises(ValueError):
        thermal_step(ThermalState(), -1.0, 0.01)
    with pytest.raises(ValueError):
        thermal_step(ThermalState(), 1.0, 0.0)


def test_per_joint_arrays():
    s = ThermalState(temp=np.full(6, 25.0), heat_capacity=np.full(6, 20.0), t0=np.full(6, 25.0),
                     shutdown_temp=np.full(6, 80.0), heat_j=np.zeros(6), heat_comp=np.zeros(6))
    s = thermal_step(s, joule_power(np.arange(6.0)), 1.0)
    assert np.allclose(s.temp, 25.0 + 0.5 * np.arange(6.0) ** 2 / 20.0)
