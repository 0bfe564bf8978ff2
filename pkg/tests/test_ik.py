import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from armsim.arm_model import HOME_Q, default_arm
from armsim.ik import (IkOptions, NotConverged, SingularConfig, Unreachable, dls_step,
                       joint_velocities_from_cartesian, solve_position_ik)
from armsim.kinematics import forward_kinematics, position_jacobian

from conftest import random_q

# fully stretched along +x: the position Jacobian loses rank
STRETCHED = np.radians([0, 0, 0, 0, -90, 0])


def test_round_trip_from_near_seed(arm, rng):
    for q_star in random_q(arm, rng, 100):
        target = forward_kinematics(arm, q_star).position
        seed = np.clip(q_star + rng.uniform(-0.1, 0.1, 6), arm.lower_limits, arm.upper_limits)
        res = solve_position_ik(arm, target, seed=seed)
        assert res.converged and res.residual < 1e-6
        assert np.linalg.norm(forward_kinematics(arm, res.q).position - target) < 1e-6


def test_exact_seed_is_fixed_point(arm, rng):
    q = random_q(arm, rng)
    res = solve_position_ik(arm, forward_kinematics(arm, q).position, seed=q)
    assert res.iterations <= 1
    assert np.allclose(res.q, q, atol=1e-9)


def test_far_target_unreachable(arm):
    with pytest.raises(Unreachable):
        solve_position_ik(arm, [10.0, 0.0, 0.0])


def test_default_seed_is_home(arm):
    target = forward_kinematics(arm, HOME_Q).position + [0.01, 0.0, 0.0]
    assert np.array_equal(solve_position_ik(arm, target).q, solve_position_ik(arm, target, seed=HOME_Q).q)


def test_not_converged_raises_with_result(arm):
    target = forward_kinematics(arm, np.radians([60, 20, -40, 0, 30, 0])).position
    with pytest.raises(NotConverged) as info:
        solve_position_ik(arm, target, opts=IkOptions(max_iters=1), raise_on_failure=True)
    assert not info.value.result.converged
    assert not solve_position_ik(arm, target, opts=IkOptions(max_iters=1)).converged


def test_bad_inputs(arm):
    with pytest.raises(ValueError):
        solve_position_ik(arm, [0.3, 0.0])
    with pytest.raises(ValueError):
        solve_position_ik(arm, [0.3, 0.0, 0.1], seed=np.full(6, 3.0))
    for kw in ({"damping": -1}, {"max_iters": 0}, {"tol": 0}, {"step_limit": 0}):
        with pytest.raises(ValueError):
            IkOptions(**kw)


@given(arrays(np.float64, 3, elements=st.floats(-0.6, 0.6)))
def test_result_within_limits_and_deterministic(target):
    arm = default_arm()
    if np.linalg.norm(target) > arm.reach:
        return
    a = solve_position_ik(arm, target, opts=IkOptions(max_iters=40))
    b = solve_position_ik(arm, target, opts=IkOptions(max_iters=40))
    assert np.all(a.q >= arm.lower_limits) and np.all(a.q <= arm.upper_limits)
    assert np.array_equal(a.q, b.q) and a.residual == b.residual and a.iterations == b.iterations
    assert a.converged == (a.residual <= 1e-6)


@given(arrays(np.float64, 6, elements=st.floats(-math.pi, math.pi)),
       arrays(np.float64, 3, elements=st.floats(-1, 1)), st.floats(1e-4, 1.0))
def test_damped_step_always_finite(q, err, lam):
    J = position_jacobian(default_arm(), q)
    assert np.all(np.isfinite(dls_step(J, err, lam)))


def test_zero_cartesian_velocity(arm, rng):
    assert np.array_equal(joint_velocities_from_cartesian(arm, random_q(arm, rng), np.zeros(3)), np.zeros(6))


def test_exact_inverse_velocity_residual(arm, rng):
    for q in random_q(arm, rng, 50):
        J = position_jacobian(arm, q)
        if np.linalg.cond(J @ J.T) > 1e6:
            continue
        xdot = rng.normal(size=3) * 0.1
        qdot = joint_velocities_from_cartesian(arm, q, xdot, damping=0.0)
        assert np.linalg.norm(J @ qdot - xdot) < 1e-9


def test_singular_stretch(arm):
    with pytest.raises(SingularConfig):
        joint_velocities_from_cartesian(arm, STRETCHED, [0.1, 0.0, 0.0], damping=0.0)
    qdot = joint_velocities_from_cartesian(arm, STRETCHED, [0.1, 0.0, 0.0], damping=0.01)
    assert np.all(np.isfinite(qdot)) and np.max(np.abs(qdot)) < 10.0
