"""
Position IK by damped least squares
===================================

Targets are points for the frame-6 origin. The solver starts from the home
pose unless a seed is given, and clamps every iterate to the joint limits.
"""

import numpy as np

from armsim.arm_model import default_arm
from armsim.ik import Unreachable, joint_velocities_from_cartesian, solve_position_ik
from armsim.kinematics import forward_kinematics

arm = default_arm()

target = np.array([0.30, 0.10, 0.20])
res = solve_position_ik(arm, target)
print("q (deg):", np.degrees(res.q).round(3))
print("iterations", res.iterations, "residual", res.residual)
print("FK check:", forward_kinematics(arm, res.q).position)

# a different seed lands on a different (equally valid) solution
res2 = solve_position_ik(arm, target, seed=np.radians([40, 80, -40, 30, 20, 0]))
print("other solution (deg):", np.degrees(res2.q).round(3), "residual", res2.residual)

# targets outside the reach sphere are refused before iterating
try:
    solve_position_ik(arm, [1.0, 0.0, 0.0])
except Unreachable as exc:
    print("unreachable:", exc)

# inverse velocity kinematics: joint rates for a 5 cm/s motion along +z
qdot = joint_velocities_from_cartesian(arm, res.q, [0.0, 0.0, 0.05])
print("qdot (rad/s):", qdot.round(4))
