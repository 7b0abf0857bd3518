import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uuvplan.currentfield import CurrentSpec, sample


def test_static2d_zero_degrees():
    np.testing.assert_allclose(sample(CurrentSpec.static2d(0.05, 0), (0, 0), 0.0), [0.05, 0.0], atol=1e-15)


def test_static2d_ninety_degrees():
    np.testing.assert_allclose(sample(CurrentSpec.static2d(0.5, 90), (3, 3), 4.0), [0.0, 0.5], atol=1e-15)


def test_static3d_elevation_45():
    v = sample(CurrentSpec.static3d(0.05, 45, 0), (0, 0, 0), 0.0)
    h = 0.05 * math.sqrt(2) / 2
    np.testing.assert_allclose(v, [h, 0.0, h], atol=1e-15)
    np.testing.assert_allclose(v, [0.03536, 0, 0.03536], atol=1e-5)


def test_static3d_in_plane_azimuth():
    np.testing.assert_allclose(sample(CurrentSpec.static3d(0.2, 0, 90), None, 0.0), [0, 0.2, 0], atol=1e-15)


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 2), st.floats(-720, 720), st.floats(-720, 720), st.floats(0, 1e4))
def test_static_magnitude_exact(speed, a, b, t):
    assert np.linalg.norm(sample(CurrentSpec.static2d(speed, a), (1, 1), t)) == pytest.approx(speed, abs=1e-12)
    assert np.linalg.norm(sample(CurrentSpec.static3d(speed, a, b), (1, 1, 1), t)) == pytest.approx(speed, abs=1e-12)


def test_static_ignores_position_and_time():
    spec = CurrentSpec.static2d(0.3, 30)
    ref = sample(spec, (0, 0), 0.0)
    for pos, t in [((5, 2), 3.0), ((9.5, 0.1), 100.0)]:
        assert np.array_equal(sample(spec, pos, t), ref)


def test_dynamic_formula():
    spec = CurrentSpec.dynamic2d()
    t = 3.7
    theta = math.radians(90) * math.sin(2 * math.pi * t / 20)
    s = 0.3 + 0.2 * math.sin(2 * math.pi * t / 15)
    np.testing.assert_allclose(sample(spec, (0, 0), t), [s * math.cos(theta), s * math.sin(theta)], atol=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 200), st.floats(0, 1), st.floats(0, 1))
def test_dynamic_speed_clamped_and_periodic(t, s0, amp):
    spec = CurrentSpec.dynamic2d(s0, speed_amplitude=amp)
    v = sample(spec, (0, 0), t)
    assert np.linalg.norm(v) >= 0
    assert np.linalg.norm(v) <= s0 + amp + 1e-12
    # lcm(20, 15) = 60
    np.testing.assert_allclose(sample(spec, (0, 0), t + 60.0), v, atol=1e-9)


def test_dynamic_zero_amplitude_is_static():
    dyn = CurrentSpec.dynamic2d(0.3, base_angle=30, angle_amplitude=0, speed_amplitude=0)
    stat = CurrentSpec.static2d(0.3, 30)
    for t in (0.0, 1.3, 17.0):
        np.testing.assert_allclose(sample(dyn, (0, 0), t), sample(stat, (0, 0), t), atol=1e-15)


def test_negative_time_and_bad_spec():
    with pytest.raises(ValueError):
        sample(CurrentSpec.static2d(0.1), (0, 0), -1.0)
    with pytest.raises(ValueError):
        CurrentSpec("swirl", 0.1)
    with pytest.raises(ValueError):
        CurrentSpec.static2d(-0.1)


def test_dict_roundtrip():
    spec = CurrentSpec.static3d(0.4, 45, 135)
    assert CurrentSpec.from_dict(spec.to_dict()) == spec
