"""Grid search for the joint-2 step gains shipped in the scenario files.

Minimizes |overshoot - 4.8%| + |settling - 1.6 s| on the 30 degree joint-2
step from home. Joint 2 gains are searched directly; the other joints get
the same gains scaled by their inertia relative to joint 2, and every
integral clamp is set so ki * integral_limit equals the joint's max torque.

    python3 scripts/tune_gains.py            # coarse grid, about a minute
"""

import itertools
import math

import numpy as np

from armsim.arm_model import default_arm
from armsim.control import PidGains
from armsim.sim import Scenario, run_scenario

TARGET_OS, TARGET_TS = 4.8, 1.6


def gains_for(arm, kp, ki, kd):
    r = arm.inertia / arm.inertia[1]
    return PidGains(kp=kp * r, ki=ki * r, kd=kd * r, output_limit=arm.max_torque,
                    integral_limit=arm.max_torque / (ki * r))


def evaluate(arm, kp, ki, kd):
    sc = Scenario(arm=arm, gains=gains_for(arm, kp, ki, kd), task="step", duration=3.0,
                  step_joint=1, step_size=math.radians(30.0))
    m = run_scenario(sc).metrics
    return m.overshoot_pct, m.settling_time_s


def main():
    arm = default_arm()
    best = None
    for kp, ki, kd in itertools.product([40, 50, 60], [24, 30, 36, 40, 45], [1.75, 2.0, 2.25, 2.5, 2.75, 3.0]):
        os_, ts = evaluate(arm, kp, ki, kd)
        cost = abs(os_ - TARGET_OS) + abs(ts - TARGET_TS)
        print(f"kp={kp:<4} ki={ki:<4} kd={kd:<5} overshoot={os_:6.3f}%  settling={ts:6.3f}s  cost={cost:.3f}")
        if best is None or cost < best[0]:
            best = (cost, kp, ki, kd, os_, ts)
    cost, kp, ki, kd, os_, ts = best
    g = gains_for(arm, kp, ki, kd)
    print(f"\nbest: kp={kp} ki={ki} kd={kd}  overshoot {os_:.3f}%  settling {ts:.3f}s")
    for name in ("kp", "ki", "kd", "integral_limit"):
        print(f"{name} = " + ", ".join(f"{v:.5g}" for v in getattr(g, name)))


if __name__ == "__main__":
    np.set_printoptions(precision=5)
    main()
