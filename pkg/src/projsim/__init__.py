"""Projective-simulation agents on grid-world and mountain-car tasks."""

from projsim.core import ClipNetwork, Policy, PSParams
from projsim.gridworld import GridAction, GridWorld, default_maze
from projsim.mountaincar import (
    Discretizer,
    DynamicsOrder,
    MCAction,
    MountainCar,
    MountainCarState,
    MountainCarTask,
    ResetMode,
)

__version__ = "0.1.0"

__all__ = [
    "ClipNetwork",
    "Discretizer",
    "DynamicsOrder",
    "GridAction",
    "GridWorld",
    "MCAction",
    "MountainCar",
    "MountainCarState",
    "MountainCarTask",
    "PSParams",
    "Policy",
    "ResetMode",
    "default_maze",
]
