"""
Joint-2 step response with the shipped gains
============================================

The step scenario lifts joint 2 by 30 degrees from home under PID control.
Its gains were picked by ``scripts/tune_gains.py`` for about 4.8% overshoot
and 1.6 s settling.
"""

import numpy as np

from armsim.sim import load_scenario_file, run_scenario
from armsim.svg import line_plot

sc = load_scenario_file("step_joint2")
result = run_scenario(sc)
print("\n".join(result.metrics.summary_lines()))

t = result.column("t_s")
q2 = np.degrees(result.joint_block("q_act_rad")[:, 1])
for ti in (0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0):
    print(f"t = {ti:4.2f} s   q2 = {q2[int(round(ti / sc.dt))]:8.3f} deg")

# what the same step looks like with gravity feedforward added
hybrid = run_scenario(sc.with_mode("hybrid")).metrics
print(f"hybrid: overshoot {hybrid.overshoot_pct:.2f}%  settling {hybrid.settling_time_s:.3f} s")

with open("step_joint2.svg", "w") as f:
    f.write(line_plot(t, [("joint 2 (deg)", [("target", np.degrees(result.joint_block("q_des_rad")[:, 1])),
                                             ("response", q2)])]))
print("wrote step_joint2.svg")
