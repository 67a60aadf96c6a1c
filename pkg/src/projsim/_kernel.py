"""Compiled ensemble runner.

Each agent runs all of its trials inside one compiled call, seeded with its
own MT19937 state so results do not depend on thread scheduling.  Glow and
damping are applied lazily: an edge's glow is (1 - eta)**(t - t_visit) and
damping only needs materialising when a reward arrives, which keeps the
per-step cost independent of the network size.  The arithmetic and the
random-number consumption order mirror ``ClipNetwork`` driven by
``harness.run_trial`` with a ``numpy.random.RandomState``.
"""

import math

import numba
import numpy as np

from projsim.mountaincar import X_MAX, X_MIN, V_MAX, discretize_index, mc_dynamics

ENV_GRID = 0
ENV_MC_RANDOM = 1
ENV_MC_FIXED = 2

NEVER = -(2**62)


@numba.njit(cache=True)
def _effective_h(h, stamp, s, a, t, keep):
    # h at step t after damping by (1 - gamma) per elapsed step
    if keep == 1.0 or stamp[s, a] == t:
        return h[s, a]
    return 1.0 + (h[s, a] - 1.0) * keep ** (t - stamp[s, a])


@numba.njit(cache=True)
def _sample(h, stamp, s, t, keep, softmax, alpha, w):
    n = w.shape[0]
    for a in range(n):
        w[a] = _effective_h(h, stamp, s, a, t, keep)
    if softmax:
        zmax = alpha * w[0]
        for a in range(1, n):
            if alpha * w[a] > zmax:
                zmax = alpha * w[a]
        for a in range(n):
            w[a] = math.exp(alpha * w[a] - zmax)
    total = 0.0
    for a in range(n):
        total += w[a]
    threshold = np.random.random() * total
    cum = 0.0
    for a in range(n):
        cum += w[a]
        if cum > threshold:
            return a
    return n - 1


@numba.njit(cache=True)
def _reward(h, stamp, visit, t, trial_start, gamma, decay, reward):
    # full update at step t: damp every edge, add glow * reward
    keep = 1.0 - gamma
    P, A = h.shape
    for s in range(P):
        for a in range(A):
            tv = visit[s, a]
            if tv >= trial_start:
                g = decay ** (t - tv)
            else:
                g = 0.0
            if gamma == 0.0:
                if g > 0.0:
                    h[s, a] = h[s, a] + g * reward
            else:
                he = _effective_h(h, stamp, s, a, t, keep)
                h[s, a] = he - gamma * (he - 1.0) + g * reward
                stamp[s, a] = t + 1


@numba.njit(cache=True)
def run_agent(env, n_percepts, n_actions, trials, softmax, eta, gamma, lam, alpha,
              reset_glow, cap, seed, grid_next, grid_start, bins_x, bins_v,
              conventional, steps_out, capped_out):
    np.random.seed(seed)
    h = np.ones((n_percepts, n_actions))
    stamp = np.zeros((n_percepts, n_actions), dtype=np.int64)
    visit = np.full((n_percepts, n_actions), NEVER, dtype=np.int64)
    w = np.empty(n_actions)
    keep = 1.0 - gamma
    decay = 1.0 - eta
    t = 0
    n_capped = 0
    for trial in range(trials):
        trial_start = t if reset_glow else NEVER + 1
        if env == ENV_GRID:
            s = grid_start
            x = 0.0
            v = 0.0
        else:
            if env == ENV_MC_RANDOM:
                x = X_MIN + (X_MAX - X_MIN) * np.random.random()
                v = -V_MAX + 2.0 * V_MAX * np.random.random()
            else:
                x = -0.5
                v = 0.0
            s = discretize_index(x, v, bins_x, bins_v)
        steps = 0
        while True:
            a = _sample(h, stamp, s, t, keep, softmax, alpha, w)
            visit[s, a] = t
            steps += 1
            if env == ENV_GRID:
                nxt = grid_next[s, a]
                done = nxt < 0
            else:
                x, v, done = mc_dynamics(x, v, float(a - 1), conventional)
                nxt = -1 if done else discretize_index(x, v, bins_x, bins_v)
            if done and lam > 0.0:
                _reward(h, stamp, visit, t, trial_start, gamma, decay, lam)
            t += 1
            if done:
                break
            s = nxt
            if steps >= cap:
                n_capped += 1
                break
        steps_out[trial] = steps
    capped_out[0] = n_capped


@numba.njit(cache=True, parallel=True)
def run_ensemble(env, n_percepts, n_actions, trials, softmax, eta, gamma, lam, alpha,
                 reset_glow, cap, seeds, grid_next, grid_start, bins_x, bins_v,
                 conventional):
    n_agents = seeds.shape[0]
    steps = np.zeros((n_agents, trials), dtype=np.int64)
    capped = np.zeros((n_agents, 1), dtype=np.int64)
    for i in numba.prange(n_agents):
        run_agent(env, n_percepts, n_actions, trials, softmax, eta, gamma, lam, alpha,
                  reset_glow, cap, seeds[i], grid_next, grid_start, bins_x, bins_v,
                  conventional, steps[i], capped[i])
    return steps, capped[:, 0]
