"""Mountain-car dynamics and (x, v) discretisation.

The update uses the previous velocity for the position step, as in the
original benchmark description:

    v' = v + 0.001 * action - 0.0025 * cos(3 x)
    x' = x + v

``DynamicsOrder.CONVENTIONAL`` switches to x' = x + v' (semi-implicit Euler).
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numba

X_MIN, X_MAX = -1.2, 0.5
V_MAX = 0.07
ENGINE = 0.001
GRAVITY = 0.0025


class MCAction(enum.IntEnum):
    REVERSE = -1
    NONE = 0
    FORWARD = 1


# action-clip index -> thrust
ACTIONS = (MCAction.REVERSE, MCAction.NONE, MCAction.FORWARD)


class DynamicsOrder(str, enum.Enum):
    AS_PRINTED = "printed"
    CONVENTIONAL = "conventional"


class ResetMode(str, enum.Enum):
    RANDOM_UNIFORM = "random"
    FIXED_BOTTOM = "fixed"


class EpisodeFinished(RuntimeError):
    pass


@numba.njit(cache=True)
def mc_dynamics(x, v, thrust, conventional):
    """One step of the car; returns ``(x, v, done)``."""
    v_new = v + ENGINE * thrust - GRAVITY * math.cos(3.0 * x)
    if v_new > V_MAX:
        v_new = V_MAX
    elif v_new < -V_MAX:
        v_new = -V_MAX
    if conventional:
        x_new = x + v_new
    else:
        x_new = x + v
    if x_new >= X_MAX:
        return X_MAX, v_new, True
    if x_new < X_MIN:
        return X_MIN, 0.0, False
    return x_new, v_new, False


@numba.njit(cache=True)
def discretize_index(x, v, bins_x, bins_v):
    bx = int(math.floor((x - X_MIN) * bins_x / (X_MAX - X_MIN)))
    bv = int(math.floor((v + V_MAX) * bins_v / (2.0 * V_MAX)))
    if bx >= bins_x:
        bx = bins_x - 1
    if bv >= bins_v:
        bv = bins_v - 1
    return bx * bins_v + bv


@dataclass(frozen=True)
class MountainCarState:
    x: float
    v: float


@dataclass(frozen=True)
class Discretizer:
    """Uniform grid over the bounded (x, v) box; bins are left-closed."""

    bins_x: int = 20
    bins_v: int = 20

    def __post_init__(self):
        if self.bins_x < 1 or self.bins_v < 1:
            raise ValueError("bin counts must be positive")

    @property
    def n_percepts(self) -> int:
        return self.bins_x * self.bins_v

    def __call__(self, state: MountainCarState) -> int:
        if not (X_MIN <= state.x <= X_MAX and -V_MAX <= state.v <= V_MAX):
            raise ValueError(f"state {state} lies outside the bounded box")
        return discretize_index(state.x, state.v, self.bins_x, self.bins_v)


def initial_state(mode, rng=None) -> MountainCarState:
    """Start state for a trial.

    Random starts draw x from [-1.2, 0.5) and v from [-0.07, 0.07), one
    ``rng.random()`` call each (x first).
    """
    mode = ResetMode(mode)
    if mode is ResetMode.FIXED_BOTTOM:
        return MountainCarState(-0.5, 0.0)
    if rng is None:
        raise ValueError("random reset needs an rng")
    x = X_MIN + (X_MAX - X_MIN) * rng.random()
    v = -V_MAX + 2.0 * V_MAX * rng.random()
    return MountainCarState(x, v)


class MountainCar:
    """Continuous-state car; steps take a thrust in {-1, 0, 1}."""

    def __init__(self, order=DynamicsOrder.AS_PRINTED, state=None):
        self.order = DynamicsOrder(order)
        self.state = state if state is not None else MountainCarState(-0.5, 0.0)
        self.done = False

    def reset(self, mode=ResetMode.FIXED_BOTTOM, rng=None) -> MountainCarState:
        self.state = initial_state(mode, rng)
        self.done = False
        return self.state

    def step(self, thrust):
        if self.done:
            raise EpisodeFinished("episode finished; call reset() first")
        thrust = int(MCAction(thrust))
        x, v, done = mc_dynamics(
            self.state.x, self.state.v, thrust, self.order is DynamicsOrder.CONVENTIONAL
        )
        self.state = MountainCarState(x, v)
        self.done = done
        return self.state, (1.0 if done else 0.0), done


class MountainCarTask:
    """Percept-level view of the car: discretised states, action-clip indices 0..2."""

    n_actions = len(ACTIONS)

    def __init__(self, mode=ResetMode.RANDOM_UNIFORM, disc: Discretizer | None = None,
                 order=DynamicsOrder.AS_PRINTED):
        self.mode = ResetMode(mode)
        self.disc = disc or Discretizer()
        self.car = MountainCar(order)
        self.trajectory = None

    @property
    def n_percepts(self) -> int:
        return self.disc.n_percepts

    def record(self, on=True):
        self.trajectory = [] if on else None

    def reset(self, rng=None) -> int:
        state = self.car.reset(self.mode, rng)
        return self.disc(state)

    def step(self, action: int):
        thrust = ACTIONS[action]
        state, reward, done = self.car.step(thrust)
        if self.trajectory is not None:
            self.trajectory.append((len(self.trajectory) + 1, state.x, state.v, int(thrust), reward))
        return (None if done else self.disc(state)), reward, done

    def dump_trajectory(self, path) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["step", "x", "v", "action", "reward"])
            writer.writerows(self.trajectory or [])
