# -*- coding: utf-8 -*-

"""
ks_flowlab.cli

``ks-flowlab run <config>`` and ``ks-flowlab list``.
"""

import argparse
import logging
import sys

from ks_flowlab import __version__
from ks_flowlab.errors import FlowLabError, InvalidInputError
from ks_flowlab.scenario_config import ScenarioConfig
from ks_flowlab.scenarios import list_scenarios, run_scenario

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ks-flowlab",
        description="Directional energies and flows of vector fields")
    parser.add_argument("--version", action="version",
                        version="%(prog)s {}".format(__version__))
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for numeric detail")
    commands = parser.add_subparsers(dest="command")

    run = commands.add_parser("run", help="run the scenario of a config file")
    run.add_argument("config", help="key = value scenario configuration")
    run.add_argument("--out", help="output directory for report and CSVs")
    run.add_argument("--seed", type=int, help="override the random seed")
    run.add_argument("--threads", type=int, help="worker threads")

    listing = commands.add_parser("list", help="list the scenario catalog")
    listing.add_argument("--configs", action="store_true",
                         help="print each default configuration too")
    return parser


def _configure_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level,
                        format="%(asctime)s %(name)s %(levelname)s "
                               "%(message)s")


def cmd_list(args, stream):
    for entry in list_scenarios():
        stream.write("{}\n    {}\n    topic: {}\n    statement: {}\n".format(
            entry.name, entry.description, entry.topic, entry.statement))
        if args.configs:
            for line in entry.config.dumps().splitlines():
                stream.write("    | {}\n".format(line))
    return EXIT_PASS


def cmd_run(args, stream):
    try:
        config = ScenarioConfig.load(args.config).with_overrides(
            out=args.out, seed=args.seed, threads=args.threads)
        report = run_scenario(config)
    except (InvalidInputError, IOError) as e:
        logger.error("Configuration error: %s", e)
        stream.write("error: {}\n".format(e))
        return EXIT_CONFIG
    except FlowLabError as e:
        logger.error("Scenario aborted: %s", e)
        stream.write("error: {}\n".format(e))
        return EXIT_FAIL
    stream.write(report.summary() + "\n")
    return EXIT_PASS if report.passed else EXIT_FAIL


def main(argv=None, stream=None):
    stream = sys.stdout if stream is None else stream
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    if args.command == "run":
        return cmd_run(args, stream)
    if args.command == "list":
        return cmd_list(args, stream)
    parser.print_help(stream)
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
