import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dioclt.model import NormSpec
from dioclt.norms import (
    annulus_integral_grid,
    norm_value,
    omega_n,
    unit_ball_volume,
    unit_ball_volume_mc,
)


def test_norm_values():
    assert norm_value(NormSpec.sup(), [3, -4]) == 4
    assert norm_value(NormSpec.euclidean(), [3, -4]) == 5
    assert norm_value(NormSpec.lp(3), [1, 1]) == pytest.approx(2 ** (1 / 3))


@given(st.floats(-100, 100), st.lists(st.floats(-50, 50), min_size=1, max_size=4))
def test_norm_homogeneous(c, xs):
    x = np.array(xs)
    for norm in (NormSpec.sup(), NormSpec.euclidean(), NormSpec.lp(3)):
        assert norm_value(norm, c * x) == pytest.approx(abs(c) * norm_value(norm, x), abs=1e-9)


@given(st.lists(st.floats(-50, 50), min_size=2, max_size=2),
       st.lists(st.floats(-50, 50), min_size=2, max_size=2))
def test_triangle_inequality(xs, ys):
    x, y = np.array(xs), np.array(ys)
    for norm in (NormSpec.sup(), NormSpec.euclidean(), NormSpec.lp(1.5)):
        assert norm_value(norm, x + y) <= norm_value(norm, x) + norm_value(norm, y) + 1e-9


def test_ball_volumes_closed_form():
    assert unit_ball_volume(NormSpec.sup(), 3).value == 8
    assert unit_ball_volume(NormSpec.euclidean(), 2).value == pytest.approx(math.pi)
    # cross-polytope: (2 Gamma(2))^2 / Gamma(3) = 2
    assert unit_ball_volume(NormSpec.lp(1), 2).value == pytest.approx(2.0)


def test_ball_volume_monte_carlo_agrees():
    for norm, n in ((NormSpec.lp(1), 2), (NormSpec.euclidean(), 3)):
        closed = unit_ball_volume(norm, n).value
        mc = unit_ball_volume_mc(norm, n, samples=100_000, seed=11)
        assert abs(mc.value - closed) <= 4 * mc.std_error


def test_omega_values():
    assert omega_n(NormSpec.sup(), 1) == 2
    assert omega_n(NormSpec.sup(), 2) == 8
    assert omega_n(NormSpec.euclidean(), 2) == pytest.approx(2 * math.pi)


@pytest.mark.parametrize("norm", [NormSpec.sup(), NormSpec.euclidean()])
@pytest.mark.parametrize("n", [1, 2])
def test_annulus_integral_matches_omega(norm, n):
    big_m = 2
    val = annulus_integral_grid(norm, n, big_m=big_m, h=0.005)
    assert val == pytest.approx(omega_n(norm, n) * big_m, rel=0.01)
