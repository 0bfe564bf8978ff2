import math
from importlib import resources
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from armsim.arm_model import (HOME_Q, ArmModel, ConfigParseError, DhRow, JointSpec, JointState, ValidationError,
                              default_arm, load_model, serialize_model)
from armsim.kinematics import forward_kinematics

DEFAULT_TEXT = serialize_model(default_arm())
SHIPPED_TEXT = resources.files("armsim.data").joinpath("default_arm.ini").read_text("utf-8")


def test_default_arm_passes_invariants(arm):
    arm.validate()
    assert len(arm.rows) == len(arm.joints) == 6
    assert np.all(arm.lower_limits < HOME_Q) and np.all(HOME_Q < arm.upper_limits)


def test_reach_bound_is_063(arm):
    assert arm.reach == pytest.approx(0.63, abs=1e-12)


def test_shipped_file_round_trips(arm):
    assert load_model(SHIPPED_TEXT) == arm
    assert load_model(serialize_model(arm)) == arm


def _with_dh_rows(n):
    lines = DEFAULT_TEXT.splitlines()
    return "\n".join(ln for ln in lines if not any(ln.startswith(f"row{k} ") for k in range(n + 1, 7)))


def test_five_rows_rejected():
    with pytest.raises(ValidationError, match="exactly 6 rows"):
        load_model(_with_dh_rows(5))


def test_equal_limits_rejected():
    text = SHIPPED_TEXT.replace("[joint.3]\nlimit_min_deg = -150\nlimit_max_deg = 60",
                                "[joint.3]\nlimit_min_deg = 10\nlimit_max_deg = 10")
    assert text != SHIPPED_TEXT
    with pytest.raises(ValidationError, match="limit min < max"):
        load_model(text)


@pytest.mark.parametrize("old,new,rule", [
    ("inertia = 0.03\n", "inertia = 0.0\n", "inertia > 0"),
    ("friction = 0.08\n", "friction = -1.0\n", "friction >= 0"),
    ("max_torque = 6.0\n", "max_torque = 0.0\n", "max_torque > 0"),
    ("mass = 0.18\n", "mass = -0.1\n", "mass >= 0"),
    ("payload_kg = 0.0", "payload_kg = -1.0", "payload_mass >= 0"),
    ("gravity = 0.0, 0.0, -9.81", "gravity = 0.0, 0.0, -30.0", "gravity magnitude"),
    ("row2 = 0.25,", "row2 = -0.25,", "a >= 0"),
    ("row1 = 0.0, 0.1, 90.0", "row1 = 0.0, 0.1, 200.0", "alpha in"),
])
def test_invariant_violations_name_the_rule(old, new, rule):
    assert old in DEFAULT_TEXT
    with pytest.raises(ValidationError, match=rule):
        load_model(DEFAULT_TEXT.replace(old, new, 1))


def test_parse_error_names_field_and_line():
    text = DEFAULT_TEXT.replace("inertia = 0.03\n", "inertia = heavy\n")
    with pytest.raises(ConfigParseError) as info:
        load_model(text)
    expected_line = text.splitlines().index("inertia = heavy") + 1
    assert info.value.field == "joint.2.inertia"
    assert info.value.line == expected_line


def test_missing_section_is_parse_error():
    with pytest.raises(ConfigParseError):
        load_model(DEFAULT_TEXT.replace("[joint.4]", "[joint.9]"))


def test_angles_need_unit_suffix():
    with pytest.raises(ConfigParseError):
        load_model(DEFAULT_TEXT.replace("limit_min_deg = -90.0", "limit_min = -90.0"))


def test_radian_columns_accepted(arm):
    lines = ["[dh]", "columns = a_m, d_m, alpha_rad, theta_offset_rad"]
    lines += [f"row{i} = {r.a!r}, {r.d!r}, {r.alpha!r}, {r.theta_offset!r}" for i, r in enumerate(arm.rows, 1)]
    body = DEFAULT_TEXT.split("[joint.1]", 1)[1]
    assert load_model("\n".join(lines) + "\n[joint.1]" + body) == arm


def test_plant_perturbation_scales_only_dynamics(arm):
    p = arm.with_plant_perturbation(1.15, 1.2, 0.2)
    assert np.allclose(p.inertia, arm.inertia * 1.15)
    assert np.allclose(p.friction, arm.friction * 1.2)
    assert p.payload_mass == pytest.approx(0.2)
    assert p.rows == arm.rows
    assert np.array_equal(forward_kinematics(p, HOME_Q).position, forward_kinematics(arm, HOME_Q).position)


def test_joint_state_shape_checked():
    with pytest.raises(ValueError):
        JointState(q=np.zeros(5))
    s = JointState(q=np.zeros(6))
    assert s.is_finite()
    s.qdot[2] = np.nan
    assert not s.is_finite()


angles = st.floats(-math.pi, math.pi, allow_nan=False)
lengths = st.floats(0.0, 0.5, allow_nan=False)


@st.composite
def arms(draw):
    rows = tuple(DhRow(a=draw(lengths), d=draw(st.floats(-0.3, 0.3)), alpha=draw(angles),
                       theta_offset=draw(angles)) for _ in range(6))
    joints = []
    for _ in range(6):
        lo = draw(st.floats(-3.0, 0.0))
        hi = draw(st.floats(lo + 1e-3, 3.1))
        joints.append(JointSpec(limits=(lo, hi), max_torque=draw(st.floats(0.01, 10)),
                                inertia=draw(st.floats(1e-4, 1.0)), friction=draw(st.floats(0, 1)),
                                link_mass=draw(st.floats(0, 2)), com_offset=draw(st.floats(-0.3, 0.3))))
    g = draw(st.tuples(*[st.floats(-11, 11)] * 3))
    return ArmModel(rows=rows, joints=tuple(joints), gravity=g, payload_mass=draw(st.floats(0, 1)))


@given(arms())
def test_serialize_round_trip_property(m):
    assert load_model(serialize_model(m)) == m


@given(arms(), st.floats(0.01, 5.0))
def test_zero_inertia_always_rejected(m, scale):
    bad = replace(m.joints[0], inertia=0.0)
    with pytest.raises(ValidationError):
        ArmModel(rows=m.rows, joints=(bad,) + m.joints[1:], gravity=m.gravity)
