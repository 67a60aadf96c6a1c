"""Two-layer projective-simulation clip network.

Percept clips connect to every action clip.  Each edge carries an h-value
(unnormalised strength, starts at 1) and a glow value g in [0, 1] that is set
to 1 when the edge is traversed and then decays by a factor (1 - eta) per step.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class Policy(str, enum.Enum):
    BASIC = "basic"
    SOFTMAX = "softmax"


@dataclass(frozen=True)
class PSParams:
    """Agent hyperparameters.

    ``lambda_reward`` scales whatever reward the environment hands back; the
    tasks here return 1 on success so the default leaves it untouched.
    """

    eta_glow: float = 0.0
    gamma_damp: float = 0.0
    lambda_reward: float = 1.0
    alpha_softmax: float = 1.0
    policy: Policy = Policy.BASIC

    def __post_init__(self):
        object.__setattr__(self, "policy", Policy(self.policy))
        if not 0.0 <= self.eta_glow <= 1.0:
            raise ValueError(f"eta_glow must lie in [0, 1], got {self.eta_glow}")
        if not 0.0 <= self.gamma_damp <= 1.0:
            raise ValueError(f"gamma_damp must lie in [0, 1], got {self.gamma_damp}")
        if not self.lambda_reward >= 0.0:
            raise ValueError(f"lambda_reward must be >= 0, got {self.lambda_reward}")
        if not self.alpha_softmax > 0.0:
            raise ValueError(f"alpha_softmax must be > 0, got {self.alpha_softmax}")


def action_weights(h_row: np.ndarray, policy: Policy, alpha: float) -> np.ndarray:
    """Unnormalised hop weights for one percept row."""
    if policy is Policy.SOFTMAX:
        z = alpha * h_row
        return np.exp(z - z.max())
    return np.asarray(h_row, dtype=float)


def draw_index(weights: np.ndarray, u: float) -> int:
    """Inverse-CDF draw from unnormalised ``weights`` using a uniform ``u``."""
    cum = np.cumsum(weights)
    k = int(np.searchsorted(cum, u * cum[-1], side="right"))
    return min(k, len(weights) - 1)


class ClipNetwork:
    """Dense percept x action edge table with h- and glow values."""

    def __init__(self, n_percepts: int, n_actions: int):
        if n_percepts < 1 or n_actions < 1:
            raise ValueError(
                f"network needs at least one percept and one action, got ({n_percepts}, {n_actions})"
            )
        self.n_percepts = int(n_percepts)
        self.n_actions = int(n_actions)
        self.h = np.ones((self.n_percepts, self.n_actions))
        self.g = np.zeros((self.n_percepts, self.n_actions))

    def __repr__(self):
        return f"ClipNetwork(n_percepts={self.n_percepts}, n_actions={self.n_actions})"

    def _check_percept(self, percept: int) -> None:
        if not 0 <= percept < self.n_percepts:
            raise IndexError(f"percept {percept} out of range [0, {self.n_percepts})")

    def hop_probabilities(self, percept: int, params: PSParams) -> np.ndarray:
        self._check_percept(percept)
        w = action_weights(self.h[percept], params.policy, params.alpha_softmax)
        return w / w.sum()

    def sample_action(self, percept: int, params: PSParams, rng) -> int:
        """Hop from ``percept`` to an action and light up the traversed edge.

        ``rng`` is anything with a ``random()`` method returning a float in
        [0, 1): a ``numpy.random.Generator`` or a legacy ``RandomState``.
        """
        self._check_percept(percept)
        w = action_weights(self.h[percept], params.policy, params.alpha_softmax)
        action = draw_index(w, rng.random())
        self.g[percept, action] = 1.0
        return action

    def learn(self, params: PSParams, reward: float) -> None:
        """Damp and reward every edge, then decay the glow.

        Reward is applied before the decay so the edge used on this step
        receives the full reward.
        """
        if reward < 0:
            raise ValueError(f"reward must be non-negative, got {reward}")
        lam = params.lambda_reward * reward
        gamma = params.gamma_damp
        self.h = self.h - gamma * (self.h - 1.0) + self.g * lam
        self.g *= 1.0 - params.eta_glow

    def reset_glow(self) -> None:
        self.g[:] = 0.0

    def to_csv(self, path, which: str = "h") -> None:
        """Dump the h or g matrix as CSV, one row per percept."""
        matrix = {"h": self.h, "g": self.g}[which]
        with Path(path).open("w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["percept"] + [f"a{a}" for a in range(self.n_actions)])
            for s, row in enumerate(matrix):
                writer.writerow([s] + [repr(float(x)) for x in row])
