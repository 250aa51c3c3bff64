"""prunekit command line: check, analyze, run and size PRUNE dataflow graphs."""

import argparse
import logging
import sys

from cli.commands import (
    CORPUS_APPS,
    cmd_analyze,
    cmd_bench,
    cmd_capacity,
    cmd_check,
    cmd_corpus,
    cmd_run,
)
from model.errors import PruneError
from runtime.config import DEFAULT_C_FACTOR

logger = logging.getLogger("prune")


def build_parser():
    parser = argparse.ArgumentParser(prog="prune", description=__doc__)
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="run the five design-rule checks")
    check.add_argument("graph")

    analyze = commands.add_parser("analyze", help="decide consistency and buffer bounds")
    analyze.add_argument("graph")
    analyze.add_argument("-o", "--output", help="also write the report to this file")

    run = commands.add_parser("run", help="execute on the threaded runtime")
    run.add_argument("graph")
    run.add_argument("--iterations", type=int, help="firings per source actor")
    run.add_argument("--seed", type=int)
    run.add_argument("--pin", help='core pinning, e.g. "src=0,snk=1"')
    run.add_argument("--trace", help="write the per-transaction occupancy trace here")
    run.add_argument("--oracle", action="store_true",
                     help="compare sink digests with the reference interpreter")
    run.add_argument("--c-factor", type=int, default=DEFAULT_C_FACTOR)
    run.add_argument("--timeout-ms", type=int)
    run.add_argument("--jitter-ms", type=float, default=0.0,
                     help="random sleep of up to this many ms before every firing")

    capacity = commands.add_parser("capacity", help="print FIFO capacities and layouts")
    capacity.add_argument("graph")
    capacity.add_argument("--c-factor", type=int, default=DEFAULT_C_FACTOR)

    corpus = commands.add_parser("corpus", help="write corpus graphs, inputs and goldens")
    corpus.add_argument("out_dir")
    corpus.add_argument("--app", action="append", choices=sorted(CORPUS_APPS))

    bench = commands.add_parser("bench", help="runtime vs interpreter firing rates")
    bench.add_argument("graph")
    bench.add_argument("--iterations", type=int)
    return parser


def dispatch(args, out):
    if args.command == "check":
        return cmd_check(args.graph, out)
    if args.command == "analyze":
        return cmd_analyze(args.graph, out, args.output)
    if args.command == "run":
        return cmd_run(args.graph, out, args.iterations, args.seed, args.pin, args.trace,
                       args.oracle, args.c_factor, args.timeout_ms, args.jitter_ms)
    if args.command == "capacity":
        return cmd_capacity(args.graph, out, args.c_factor)
    if args.command == "corpus":
        return cmd_corpus(args.out_dir, out, args.app)
    return cmd_bench(args.graph, out, args.iterations)


def main(argv=None, out=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    out = out or sys.stdout
    try:
        return dispatch(args, out)
    except PruneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
