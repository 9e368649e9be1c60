import argparse
import logging
import sys

from pydantic import ValidationError

from errors import (
    ConfigError,
    FedChsError,
    PartitionInfeasibleError,
    UnsupportedModelError,
)
from experiment import Experiment, load_config, run_sweep
from utils import configure_logging, default_out_dir, pp

logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3


def parse_list(text: str, cast=str) -> list:
    return [cast(item.strip()) for item in text.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", type=str, help="Path to a `key = value` experiment config.")
    common.add_argument("--seed", type=int, default=None, help="Override the config's seed.")
    common.add_argument("--out-dir", type=str, default=None, help="Directory for every output file.")
    common.add_argument("--quiet", action="store_true", help="Only log warnings and errors.")
    common.add_argument("--debug", action="store_true", help="Log per-round decisions and print the summaries.")

    parser = argparse.ArgumentParser(
        description="Simulate hierarchical sequential federated training and check it against its convergence bounds."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", parents=[common], help="Run the configured algorithm.")
    run.add_argument("--seeds", type=str, default=None, help="Comma-separated seeds; one sub-directory per seed.")
    run.add_argument("--jobs", type=int, default=1, help="Worker processes for a multi-seed sweep.")

    commands.add_parser("verify-bounds", parents=[common], help="Run Fed-CHS and check the trace against the bounds.")

    compare = commands.add_parser("compare", parents=[common], help="Compare algorithms on identical data.")
    compare.add_argument("--algos", type=str, required=True, help="Comma-separated algorithm names.")
    compare.add_argument("--gamma", type=float, default=None, help="Accuracy (or gap, for regression) threshold Γ.")

    commands.add_parser("partition-stats", parents=[common], help="Describe the client partition and clusters.")
    return parser


def execute(args: argparse.Namespace) -> int:
    config = load_config(args.config).with_overrides(seed=args.seed)
    out_dir = args.out_dir or config.out_dir or default_out_dir()
    experiment = Experiment(config, out_dir)
    logger.info("%s: %r -> %s", args.command, experiment, out_dir)

    if args.command == "run":
        if args.seeds:
            summaries = run_sweep(config, parse_list(args.seeds, int), out_dir, jobs=args.jobs)
        else:
            summaries = [experiment.write_run(experiment.run())]
        if args.debug:
            pp([s.model_dump(mode="json") for s in summaries])
        return EXIT_OK

    if args.command == "verify-bounds":
        reports = experiment.verify_bounds()
        return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED_CHECK

    if args.command == "compare":
        rows = experiment.compare(parse_list(args.algos), args.gamma if args.gamma is not None else config.gamma)
        if args.debug:
            pp([r.model_dump(mode="json") for r in rows])
        return EXIT_OK

    stats = experiment.partition_stats()
    if args.debug:
        pp(stats.model_dump(mode="json"))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(quiet=args.quiet, debug=args.debug)
    try:
        return execute(args)
    except ConfigError as e:
        for line in e.diagnostics:
            logger.error("%s", line)
        return EXIT_INVALID
    except ValidationError as e:
        for item in e.errors():
            logger.error("%s: %s", ".".join(str(p) for p in item["loc"]) or "config", item["msg"])
        return EXIT_INVALID
    except (PartitionInfeasibleError, UnsupportedModelError) as e:
        logger.error("%s", e)
        return EXIT_INFEASIBLE
    except FedChsError as e:
        logger.error("%s", e)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
