"""Monte-Carlo experiment runner for ensembles of independent PS agents."""

from __future__ import annotations

import csv
import enum
import json
import logging
from dataclasses import asdict, dataclass, field, replace
from typing import NamedTuple, Sequence

import numba
import numpy as np

from projsim import _kernel
from projsim.core import ClipNetwork, Policy, PSParams
from projsim.gridworld import GridWorld, default_maze
from projsim.mountaincar import Discretizer, DynamicsOrder, MountainCarTask, ResetMode

log = logging.getLogger(__name__)


class Env(str, enum.Enum):
    GRIDWORLD = "gridworld"
    MC_RANDOM = "mc-random"
    MC_FIXED = "mc-fixed"


@dataclass(frozen=True)
class ExperimentConfig:
    env: Env = Env.GRIDWORLD
    agents: int = 1000
    trials: int = 100
    params: PSParams = field(default_factory=PSParams)
    seed: int = 0
    max_steps_per_trial: int = 10**6
    glow_reset_between_trials: bool = False
    dynamics_order: DynamicsOrder = DynamicsOrder.AS_PRINTED
    grid_percepts: int = 20  # bins per axis for mountain-car
    maze: str | None = None  # layout text; None means the built-in maze

    def __post_init__(self):
        object.__setattr__(self, "env", Env(self.env))
        object.__setattr__(self, "dynamics_order", DynamicsOrder(self.dynamics_order))
        for name in ("agents", "trials", "max_steps_per_trial", "grid_percepts"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["env"] = self.env.value
        d["dynamics_order"] = self.dynamics_order.value
        d["params"]["policy"] = self.params.policy.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        if "params" in d and isinstance(d["params"], dict):
            d["params"] = PSParams(**d["params"])
        return cls(**d)


class TrialOutcome(NamedTuple):
    steps: int
    capped: bool


@dataclass
class LearningCurve:
    mean_steps: np.ndarray
    std_steps: np.ndarray
    capped_trials: int = 0
    steps: np.ndarray | None = None  # agents x trials, kept for diagnostics

    @classmethod
    def from_steps(cls, steps: np.ndarray, capped_trials: int = 0) -> "LearningCurve":
        steps = np.asarray(steps, dtype=float)
        # population std across agents; a single agent gives zeros
        return cls(steps.mean(axis=0), steps.std(axis=0), int(capped_trials), steps)

    @property
    def trials(self) -> int:
        return len(self.mean_steps)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["trial", "mean_steps", "std_steps"])
            for i, (m, s) in enumerate(zip(self.mean_steps, self.std_steps), start=1):
                writer.writerow([i, f"{m:.6g}", f"{s:.6g}"])


def make_env(config: ExperimentConfig):
    if config.env is Env.GRIDWORLD:
        return GridWorld.from_text(config.maze) if config.maze else default_maze()
    mode = ResetMode.RANDOM_UNIFORM if config.env is Env.MC_RANDOM else ResetMode.FIXED_BOTTOM
    disc = Discretizer(config.grid_percepts, config.grid_percepts)
    return MountainCarTask(mode, disc, config.dynamics_order)


def run_trial(network: ClipNetwork, env, params: PSParams, rng, max_steps: int = 10**6,
              reset_glow: bool = False) -> TrialOutcome:
    """Play one trial: perceive, hop, act, learn, until the goal or the cap.

    The environment is reset here; ``rng`` drives both the reset (for random
    starts) and action sampling.
    """
    if reset_glow:
        network.reset_glow()
    percept = env.reset(rng)
    steps = 0
    while True:
        action = network.sample_action(percept, params, rng)
        percept, reward, done = env.step(action)
        network.learn(params, reward)
        steps += 1
        if done:
            return TrialOutcome(steps, False)
        if steps >= max_steps:
            return TrialOutcome(steps, True)


def agent_seeds(master_seed: int, agents: int) -> np.ndarray:
    """Independent 32-bit MT19937 seeds, one per agent index."""
    children = np.random.SeedSequence(master_seed).spawn(agents)
    return np.array([c.generate_state(1, dtype=np.uint32)[0] for c in children], dtype=np.uint32)


def _run_reference(config: ExperimentConfig, seeds) -> tuple[np.ndarray, int]:
    steps = np.zeros((len(seeds), config.trials), dtype=np.int64)
    capped = 0
    for i, seed in enumerate(seeds):
        env = make_env(config)
        net = ClipNetwork(env.n_percepts, env.n_actions)
        rng = np.random.RandomState(int(seed))
        for k in range(config.trials):
            out = run_trial(net, env, config.params, rng, config.max_steps_per_trial,
                            config.glow_reset_between_trials)
            steps[i, k] = out.steps
            capped += out.capped
    return steps, capped


def _run_compiled(config: ExperimentConfig, seeds) -> tuple[np.ndarray, int]:
    env = make_env(config)
    if config.env is Env.GRIDWORLD:
        code = _kernel.ENV_GRID
        table = env.transition_table()
        start = env.percept_of(env.start)
    else:
        code = _kernel.ENV_MC_RANDOM if config.env is Env.MC_RANDOM else _kernel.ENV_MC_FIXED
        table = np.zeros((1, 1), dtype=np.int64)
        start = 0
    p = config.params
    steps, capped = _kernel.run_ensemble(
        code, env.n_percepts, env.n_actions, config.trials, p.policy is Policy.SOFTMAX,
        p.eta_glow, p.gamma_damp, p.lambda_reward, p.alpha_softmax,
        config.glow_reset_between_trials, config.max_steps_per_trial,
        np.asarray(seeds, dtype=np.int64), table, start, config.grid_percepts,
        config.grid_percepts, config.dynamics_order is DynamicsOrder.CONVENTIONAL,
    )
    return steps, int(capped.sum())


def run_experiment(config: ExperimentConfig, engine: str = "compiled",
                   threads: int | None = None) -> LearningCurve:
    """Run ``config.agents`` independent agents and aggregate per-trial statistics.

    ``engine="reference"`` drives ``ClipNetwork`` and the environment objects
    step by step in Python; ``"compiled"`` runs the same process in a numba
    kernel.  Both consume agent ``i``'s random stream identically.
    """
    seeds = agent_seeds(config.seed, config.agents)
    if engine == "reference":
        steps, capped = _run_reference(config, seeds)
    elif engine == "compiled":
        if threads:
            numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
        steps, capped = _run_compiled(config, seeds)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    if capped:
        log.warning("%d trial(s) hit the %d-step cap", capped, config.max_steps_per_trial)
    return LearningCurve.from_steps(steps, capped)


def default_etas(n: int = 30) -> list[float]:
    return list(np.logspace(-3, 0, n))


def eta_sweep(base: ExperimentConfig, etas: Sequence[float], probe_trial: int | None = None,
              **run_kwargs) -> list[tuple[float, float]]:
    """Mean steps at ``probe_trial`` (0-based, default: last) for each glow rate."""
    etas = list(etas)
    if not etas:
        raise ValueError("eta list is empty")
    if probe_trial is None:
        probe_trial = base.trials - 1
    if not 0 <= probe_trial < base.trials:
        raise ValueError(f"probe_trial {probe_trial} outside 0..{base.trials - 1}")
    rows = []
    for eta in etas:
        cfg = replace(base, params=replace(base.params, eta_glow=float(eta)))
        curve = run_experiment(cfg, **run_kwargs)
        rows.append((float(eta), float(curve.mean_steps[probe_trial])))
    return rows


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["eta", "mean_steps_at_probe"])
        for eta, m in rows:
            writer.writerow([f"{eta:.6g}", f"{m:.6g}"])


def initial_slope(curve, window: int) -> float:
    """Least-squares slope of mean steps over the first ``window`` trials."""
    mean = curve.mean_steps if isinstance(curve, LearningCurve) else np.asarray(curve, dtype=float)
    if window < 2 or window > len(mean):
        raise ValueError(f"window must be in [2, {len(mean)}], got {window}")
    trials = np.arange(1, window + 1)
    slope, _ = np.polyfit(trials, mean[:window], 1)
    return float(slope)


def write_manifest(path, config: ExperimentConfig, **extra) -> None:
    payload = {"config": config.to_dict(), **extra}
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
