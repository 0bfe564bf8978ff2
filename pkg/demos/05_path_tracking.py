"""
Multi-point path tracking
=========================

Four waypoints, one given as a Cartesian point and converted by IK, joined by
rest-to-rest cubic segments. The arm tracks the path under PID control.
"""

import numpy as np

from armsim.sim import load_scenario_file, run_scenario
from armsim.trajectory import cubic_coeffs, plan_multipoint

# a single rest-to-rest segment and its closed form
seg = cubic_coeffs(0.0, 1.0, 0.0, 0.0, 2.0)
print("coefficients:", seg.a0, seg.a1, seg.a2, seg.a3)
print("midpoint (theta, rate, accel):", seg(1.0))

path = plan_multipoint([[0.0, 0.0], [1.0, -0.5], [0.2, 0.3]], [1.0, 2.0])
for t in (0.0, 0.5, 1.0, 2.0, 3.0):
    q, qd, _ = path.sample(t)
    print(f"t={t:3.1f}  q={q.round(4)}  qdot={qd.round(4)}")

sc = load_scenario_file("track_path")
r = run_scenario(sc)
print("max tracking error per joint (deg):", np.degrees(r.metrics.max_tracking_error_rad).round(3))
print("energy (J):", round(r.metrics.energy_j, 4), " peak motor temp (C):", r.metrics.peak_temp_c)
