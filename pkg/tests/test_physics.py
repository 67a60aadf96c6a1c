import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from projsim.mountaincar import DynamicsOrder, MCAction, MountainCar, MountainCarState
from projsim.physics import (
    Direction,
    PhysicsParams,
    baseline_strategy,
    feasibility_check,
    height,
    height_minimum,
    height_profile,
    max_reach,
    single_push_extremum,
)


def test_height_values():
    assert height(-math.pi / 6) == pytest.approx(-1 / 3, abs=1e-15)
    assert height(0.0) == 0.0
    assert height(0.5) == pytest.approx(math.sin(1.5) / 3, abs=1e-15)
    assert height(0.5) == pytest.approx(0.33250, abs=1e-5)
    assert height(0.0, PhysicsParams(integration_constant=2.0)) == 2.0


def test_height_minimum():
    assert height_minimum() == pytest.approx(-math.pi / 6, abs=1e-9)
    xs, hs = height_profile(100_001)
    assert xs[np.argmin(hs)] == pytest.approx(-math.pi / 6, abs=1e-4)


def test_params_validation():
    with pytest.raises(ValueError):
        PhysicsParams(g_accel=0.0)
    with pytest.raises(ValueError):
        PhysicsParams(a_engine=-1.0)


def test_max_reach_right():
    assert max_reach(-0.5, Direction.RIGHT) == pytest.approx(-0.27, abs=0.02)


def test_max_reach_left():
    assert max_reach(-0.5, Direction.LEFT) == pytest.approx(-0.834, abs=0.02)


@pytest.mark.parametrize("direction", list(Direction))
def test_no_engine_at_valley_floor_stays(direction):
    x0 = -math.pi / 6
    assert max_reach(x0, direction, PhysicsParams(a_engine=0.0)) == pytest.approx(x0, abs=1e-9)


def test_max_reach_runs_to_the_edge():
    strong = PhysicsParams(a_engine=0.01)
    assert max_reach(-0.5, Direction.RIGHT, strong) == 0.5
    assert max_reach(-0.5, Direction.LEFT, strong) == -1.2


def test_max_reach_is_an_energy_balance_root():
    p = PhysicsParams()
    for direction in Direction:
        x = max_reach(-0.5, direction)
        work = p.a_engine * abs(x + 0.5)
        assert work == pytest.approx(p.g_accel * (height(x) - height(-0.5)), abs=1e-12)


def test_feasibility():
    assert not feasibility_check(-0.5, 0.5)
    assert feasibility_check(-0.5, -0.3)
    assert feasibility_check(-0.7, -0.7 + 1e-3)  # downhill towards the floor
    with pytest.raises(ValueError):
        feasibility_check(0.1, 0.1)


def test_feasibility_boundary_is_tight():
    reach = max_reach(-0.5, Direction.RIGHT)
    assert feasibility_check(-0.5, reach - 1e-3)
    assert not feasibility_check(-0.5, reach + 1e-3)


@given(st.floats(-1.0, 0.3))
def test_feasibility_agrees_with_reach(x0):
    reach = max_reach(x0, Direction.RIGHT)
    if reach - 1e-3 > x0:
        assert feasibility_check(x0, reach - 1e-3)
    if reach + 1e-3 < 0.5:
        assert not feasibility_check(x0, reach + 1e-3)


@pytest.mark.parametrize("direction", list(Direction))
def test_energy_bound_matches_semi_implicit_simulation(direction):
    simulated = single_push_extremum(direction, DynamicsOrder.CONVENTIONAL)
    assert abs(max_reach(-0.5, direction) - simulated) <= 0.02


def test_baseline_with_stop_rule():
    res = baseline_strategy(MountainCar(DynamicsOrder.AS_PRINTED))
    # reverse until the velocity turns non-negative, then forward
    assert (res.total, res.left, res.right) == (90, 39, 51)
    assert res.max_abs_v < 0.07


def test_baseline_with_36_reverse_steps():
    res = baseline_strategy(MountainCar(DynamicsOrder.AS_PRINTED), reverse_steps=36)
    assert (res.total, res.left, res.right) == (89, 36, 53)
    assert res.max_abs_v < 0.07


def test_baseline_fails_loudly_when_goal_out_of_reach():
    with pytest.raises(RuntimeError):
        baseline_strategy(MountainCar(DynamicsOrder.CONVENTIONAL), max_steps=5000)


def test_forward_only_from_left_turning_point():
    car = MountainCar(DynamicsOrder.AS_PRINTED, MountainCarState(-0.834, 0.0))
    for _ in range(10_000):
        _, _, done = car.step(MCAction.FORWARD)
        if done:
            break
    assert done
