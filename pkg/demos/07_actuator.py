"""
Servo pulse widths and motor heating
====================================

Angles map to pulse widths along a calibrated line, and each motor warms up
by c_e * u^2 / C per second with no cooling.
"""

import math

import numpy as np

from armsim.actuator import DEFAULT_CALIBRATION, ThermalState, angle_to_pwm, calibrate_pwm, joule_power, thermal_step
from armsim.sim import load_scenario_file, run_scenario

for deg in (0, 45, 90, 135, 180):
    print(f"{deg:3d} deg -> {angle_to_pwm(DEFAULT_CALIBRATION, math.radians(deg))} us")

# a servo calibrated on its own end stops
calib = calibrate_pwm((math.radians(-90), 600.0), (math.radians(90), 2400.0))
print("slope (us/rad):", round(calib.m, 3), " offset (us):", calib.c)

# 2 N*m held for 60 s with c_e = 0.5 and C = 20 J/K
s = ThermalState()
for _ in range(600):
    s = thermal_step(s, joule_power(2.0), 0.1)
print("temperature after 60 s at 2 N*m:", round(float(s.temp), 6), "C")

# partitioning does not matter for constant power
a = ThermalState(heat_capacity=5.0)
for _ in range(7):
    a = thermal_step(a, 10.0, 1 / 7)
print("10 W for 1 s into 5 J/K in 7 steps:", a.temp)

# motor temperatures at the end of the step run
r = run_scenario(load_scenario_file("step_joint2"))
print("final temperatures (C):", np.round(r.joint_block("temp_c")[-1], 4))
