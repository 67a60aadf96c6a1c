"""Work-energy analysis of the mountain-car track.

The car's gravity term 0.0025 cos(3x) corresponds to a hill of height
h(x) = 0.0025 / (3 g) sin(3x) + C.  Equating engine work with the change in
potential energy bounds how far a single-direction push can carry the car.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from projsim.mountaincar import (
    GRAVITY,
    MCAction,
    MountainCar,
    X_MAX,
    X_MIN,
    DynamicsOrder,
    MountainCarState,
)


class Direction(enum.Enum):
    LEFT = -1
    RIGHT = 1


@dataclass(frozen=True)
class PhysicsParams:
    g_accel: float = GRAVITY
    a_engine: float = 0.001
    integration_constant: float = 0.0

    def __post_init__(self):
        if self.g_accel <= 0:
            raise ValueError("g_accel must be positive")
        if self.a_engine < 0:
            raise ValueError("a_engine must be non-negative")


DEFAULT = PhysicsParams()


def height(x, params: PhysicsParams = DEFAULT):
    return GRAVITY / (3.0 * params.g_accel) * np.sin(3.0 * np.asarray(x)) + params.integration_constant


def height_minimum(params: PhysicsParams = DEFAULT) -> float:
    """Location of the valley floor: root of cos(3x) on the track."""
    return bisect(lambda x: math.cos(3.0 * x), X_MIN, 0.0, xtol=1e-12)


def _surplus(x, x0, sign, params):
    # engine work minus potential-energy gain along a push from x0 to x
    work = params.a_engine * sign * (x - x0)
    return work - params.g_accel * (float(height(x, params)) - float(height(x0, params)))


def max_reach(x0: float, direction, params: PhysicsParams = DEFAULT, tol: float = 1e-9) -> float:
    """Turning point of a car released at rest at ``x0`` and pushed one way.

    Returns the first point past ``x0`` where the energy surplus drops to
    zero, or the track edge if the push never runs out of energy.
    """
    sign = Direction(direction).value
    edge = X_MAX if sign > 0 else X_MIN
    grid = np.linspace(x0, edge, 2001)[1:]
    prev = x0
    for x in grid:
        s = _surplus(x, x0, sign, params)
        if s < 0:
            if prev == x0:
                # the car cannot move away from x0 at all in this direction
                prev = x0 + sign * 1e-9
                if _surplus(prev, x0, sign, params) <= 0:
                    return x0
            return bisect(_surplus, prev, x, args=(x0, sign, params), xtol=tol)
        prev = x
    return edge


def feasibility_check(x0: float, x_goal: float, params: PhysicsParams = DEFAULT) -> bool:
    """Whether a single push from rest at x0 can possibly reach x_goal."""
    if not x0 < x_goal:
        raise ValueError("need x0 < x_goal")
    return params.a_engine * (x_goal - x0) >= params.g_accel * (
        float(height(x_goal, params)) - float(height(x0, params))
    )


@dataclass(frozen=True)
class BaselineResult:
    total: int
    left: int
    right: int
    max_abs_v: float
    turn_x: float


def baseline_strategy(car: MountainCar | None = None, reverse_steps: int | None = None,
                      max_steps: int = 10_000) -> BaselineResult:
    """Push left until the car stops, then push right until the goal.

    With ``reverse_steps=None`` the reverse phase ends on the first step whose
    resulting velocity is >= 0 after having been negative; otherwise exactly
    ``reverse_steps`` reverse pushes are made.  The car starts at (-0.5, 0).
    """
    if car is None:
        car = MountainCar(DynamicsOrder.AS_PRINTED)
    car.state = MountainCarState(-0.5, 0.0)
    car.done = False
    left = right = 0
    reversing = True
    seen_negative = False
    max_abs_v = 0.0
    turn_x = car.state.x
    for _ in range(max_steps):
        if reversing:
            state, _, done = car.step(MCAction.REVERSE)
            left += 1
            if reverse_steps is None:
                if state.v < 0:
                    seen_negative = True
                elif seen_negative:
                    reversing = False
            elif left >= reverse_steps:
                reversing = False
            if not reversing:
                turn_x = state.x
        else:
            state, _, done = car.step(MCAction.FORWARD)
            right += 1
        max_abs_v = max(max_abs_v, abs(state.v))
        if done:
            return BaselineResult(left + right, left, right, max_abs_v, turn_x)
    raise RuntimeError(f"baseline strategy did not reach the goal within {max_steps} steps")


def single_push_extremum(direction, order=DynamicsOrder.AS_PRINTED, x0: float = -0.5,
                         max_steps: int = 1000) -> float:
    """Furthest position reached by simulating a constant push from rest."""
    sign = Direction(direction).value
    car = MountainCar(order, MountainCarState(x0, 0.0))
    best = x0
    for _ in range(max_steps):
        state, _, done = car.step(sign)
        best = max(best, state.x) if sign > 0 else min(best, state.x)
        if done:
            break
    return best


def height_profile(n: int = 171, params: PhysicsParams = DEFAULT):
    xs = np.linspace(X_MIN, X_MAX, n)
    return xs, height(xs, params)
