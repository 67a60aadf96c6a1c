"""Command-line entry point: ``projsim run | sweep | physics``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from projsim import __version__
from projsim.core import PSParams
from projsim.harness import (
    ExperimentConfig,
    default_etas,
    eta_sweep,
    run_experiment,
    write_manifest,
    write_sweep_csv,
)
from projsim.mountaincar import DynamicsOrder, MountainCar
from projsim import physics

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3

log = logging.getLogger("projsim")


class ConfigError(ValueError):
    pass


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON file with ExperimentConfig fields; flags override it")
    p.add_argument("--env", choices=["gridworld", "mc-random", "mc-fixed"])
    p.add_argument("--policy", choices=["basic", "softmax"])
    p.add_argument("--eta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--agents", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--grid-percepts", type=int, help="bins per axis for mountain-car")
    p.add_argument("--dynamics", choices=["printed", "conventional"])
    p.add_argument("--max-steps", type=int, help="per-trial step cap")
    p.add_argument("--glow-reset", action=argparse.BooleanOptionalAction, default=None,
                   help="zero all glow at the start of each trial")
    p.add_argument("--maze", type=Path, help="grid-world layout file")
    p.add_argument("--out", type=Path, default=Path("."))
    p.add_argument("--threads", type=int, default=os.cpu_count())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="projsim", description=__doc__)
    parser.add_argument("--version", action="version", version=f"projsim {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="learning curve for one parameter set")
    _add_experiment_flags(run)

    sweep = sub.add_parser("sweep", help="final-trial performance across glow rates")
    _add_experiment_flags(sweep)
    sweep.add_argument("--etas", type=str, default=None,
                       help="comma-separated eta values (default: 30 log-spaced in [1e-3, 1])")
    sweep.add_argument("--probe-trial", type=int, default=None, help="1-based trial to report (default: last)")

    phys = sub.add_parser("physics", help="mountain-car work-energy analysis")
    phys.add_argument("--points", type=int, default=171, help="height-profile samples")
    phys.add_argument("--out", type=Path, default=None, help="also write height.csv here")
    return parser


def config_from_args(args) -> ExperimentConfig:
    """File values first, then any flag the user actually gave."""
    data: dict = {}
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"config: cannot read {args.config}: {e}") from e
    params = dict(data.pop("params", {}) or {})
    for flag, key in (("policy", "policy"), ("eta", "eta_glow"), ("gamma", "gamma_damp"),
                      ("alpha", "alpha_softmax")):
        if getattr(args, flag) is not None:
            params[key] = getattr(args, flag)
    for flag, key in (("env", "env"), ("agents", "agents"), ("trials", "trials"), ("seed", "seed"),
                      ("grid_percepts", "grid_percepts"), ("dynamics", "dynamics_order"),
                      ("max_steps", "max_steps_per_trial"), ("glow_reset", "glow_reset_between_trials")):
        if getattr(args, flag) is not None:
            data[key] = getattr(args, flag)
    if args.maze is not None:
        data["maze"] = args.maze.read_text()
    if "env" not in data:
        raise ConfigError("env: required (use --env or the config file)")
    try:
        ps = PSParams(**params)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"params: {e}") from e
    try:
        return ExperimentConfig(params=ps, **data)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"config: {e}") from e


def _parse_etas(text):
    if text is None:
        return default_etas()
    try:
        etas = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise ConfigError(f"etas: {e}") from e
    if not etas:
        raise ConfigError("etas: empty list")
    bad = [e for e in etas if not 0.0 <= e <= 1.0]
    if bad:
        raise ConfigError(f"etas: values outside [0, 1]: {bad}")
    return etas


def cmd_run(args) -> int:
    config = config_from_args(args)
    args.out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    curve = run_experiment(config, threads=args.threads)
    elapsed = time.perf_counter() - t0
    stem = f"curve_{config.env.value}_{config.params.policy.value}"
    curve.to_csv(args.out / f"{stem}.csv")
    write_manifest(args.out / f"{stem}.manifest.json", config, version=__version__,
                   seed=config.seed, duration_s=round(elapsed, 3), capped_trials=curve.capped_trials)
    print(f"trial 1: {curve.mean_steps[0]:.6g} steps, trial {curve.trials}: "
          f"{curve.mean_steps[-1]:.6g} steps (sd {curve.std_steps[-1]:.6g})")
    print(f"wrote {args.out / (stem + '.csv')}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = config_from_args(args)
    etas = _parse_etas(args.etas)
    probe = None
    if args.probe_trial is not None:
        if not 1 <= args.probe_trial <= config.trials:
            raise ConfigError(f"probe-trial: must be in 1..{config.trials}")
        probe = args.probe_trial - 1
    args.out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    rows = eta_sweep(config, etas, probe, threads=args.threads)
    elapsed = time.perf_counter() - t0
    stem = f"sweep_{config.env.value}_{config.params.policy.value}"
    write_sweep_csv(rows, args.out / f"{stem}.csv")
    write_manifest(args.out / f"{stem}.manifest.json", config, version=__version__, seed=config.seed,
                   etas=etas, probe_trial=(probe if probe is not None else config.trials - 1) + 1,
                   duration_s=round(elapsed, 3))
    best_eta, best = min(rows, key=lambda r: r[1])
    print(f"best eta {best_eta:.6g}: {best:.6g} steps")
    print(f"wrote {args.out / (stem + '.csv')}")
    return EXIT_OK


def cmd_physics(args) -> int:
    xs, hs = physics.height_profile(args.points)
    lines = ["x,height"] + [f"{x:.6g},{h:.6g}" for x, h in zip(xs, hs)]
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "height.csv").write_text("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    right = physics.max_reach(-0.5, physics.Direction.RIGHT)
    left = physics.max_reach(-0.5, physics.Direction.LEFT)
    feasible = physics.feasibility_check(-0.5, 0.5)
    base = physics.baseline_strategy(MountainCar(DynamicsOrder.AS_PRINTED))
    fixed = physics.baseline_strategy(MountainCar(DynamicsOrder.AS_PRINTED), reverse_steps=36)
    print(f"# valley floor at x = {physics.height_minimum():.9f} (-pi/6 = {-math.pi / 6:.9f})")
    print(f"# max reach from -0.5 pushing right: {right:.4f}, pushing left: {left:.4f}")
    print(f"# direct push -0.5 -> 0.5: {'feasible' if feasible else 'infeasible'}")
    print(f"# baseline (reverse until stopped): {base.total} steps ({base.left} left, {base.right} right), "
          f"max |v| {base.max_abs_v:.4f}")
    print(f"# baseline (36 reverse steps): {fixed.total} steps ({fixed.left} left, {fixed.right} right)")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"run": cmd_run, "sweep": cmd_sweep, "physics": cmd_physics}
    try:
        return handlers[args.command](args)
    except ConfigError as e:
        print(f"projsim: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:  # noqa: BLE001 - report and map to the runtime exit code
        log.debug("run failed", exc_info=True)
        print(f"projsim: error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
