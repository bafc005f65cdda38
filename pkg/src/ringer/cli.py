"""Command-line entry points: `run` executes one experiment cell,
`stats` compares emitted summaries across cells.
"""

import argparse
import sys

from .agents import AGENT_KINDS
from .classifiers import Hyperparameters
from .simulation import (SOCIETIES, ExperimentSpec, default_config_path,
                         run_experiment, run_stats)
from .world import ConfigError, PayoffTables, WorldConfig


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ringer",
        description="Norm-emergence simulator for the phone-ringer scenario.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one (society, agent kind) experiment cell")
    run.add_argument("--society", required=True, choices=SOCIETIES)
    run.add_argument("--agents", required=True, choices=AGENT_KINDS)
    run.add_argument("--steps", type=int, default=10000)
    run.add_argument("--runs", type=int, default=8)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--world", default=None, help="world config YAML")
    run.add_argument("--payoffs", default=None, help="payoff tables YAML")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--log-interactions", action="store_true")

    stats = sub.add_parser("stats", help="paired statistics of baselines vs xsiga")
    stats.add_argument("--in", dest="inputs", nargs="+", required=True,
                       help="output directories of the cells to compare")
    stats.add_argument("--out", required=True, help="stats.csv path")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            world_path = args.world or default_config_path("world_default.yaml")
            payoff_path = args.payoffs or default_config_path("payoffs_default.yaml")
            spec = ExperimentSpec(
                society=args.society,
                agent_kind=args.agents,
                runs=args.runs,
                steps=args.steps,
                base_seed=args.seed,
                world=WorldConfig.from_file(world_path),
                payoffs=PayoffTables.from_file(payoff_path),
                hp=Hyperparameters(),
                log_interactions=args.log_interactions,
            )
            run_experiment(spec, out_dir=args.out, jobs=args.jobs)
        else:
            run_stats(args.inputs, args.out)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
