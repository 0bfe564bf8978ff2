"""
Forward kinematics and the position Jacobian
============================================

The bundled arm is a six-joint desk-scale manipulator described by a standard
DH table. This script walks the chain at a few poses and checks the analytic
Jacobian against finite differences.
"""

import numpy as np

from armsim.arm_model import HOME_Q, default_arm
from armsim.kinematics import forward_kinematics, link_frames, numeric_jacobian, position_jacobian

arm = default_arm()
print("reach bound (m):", arm.reach)

# all joints at zero: links 2 and 3 lie along x, the wrist offset points along -y
pose = forward_kinematics(arm, np.zeros(6))
print("FK(0) position:", pose.position)
print("FK(0) rotation:\n", pose.orientation.round(6))

# the home pose used as the default IK seed and scenario start
print("FK(home) position:", forward_kinematics(arm, HOME_Q).position.round(4))

# every intermediate frame, base first
for i, F in enumerate(link_frames(arm, HOME_Q)):
    print(f"frame {i} origin", F[:3, 3].round(4))

# the geometric Jacobian against a central-difference oracle
rng = np.random.default_rng(0)
q = rng.uniform(arm.lower_limits, arm.upper_limits)
J = position_jacobian(arm, q)
print("Jacobian at a random pose:\n", J.round(4))
print("max |J - J_fd|:", np.max(np.abs(J - numeric_jacobian(arm, q))))
