"""Command-line front end of pynd.

Subcommands:
    decompose: run one decomposition and print a JSON report.
    validate: compare a configuration matrix against the brute-force
        reference.
    gen-rmat: write an rMAT graph as a SNAP edge list.
    bench: time a configuration sweep and write a CSV.

Exit codes are 0 (ok), 1 (validation failure) and 2 (error).
"""
import typing as t
import argparse
import contextlib
import itertools
import json
import os
import sys

import numpy as np
import pandas as pd

import pynd._internal as _internal
from pynd import _summary
from pynd import graph
from pynd import oracle
from pynd import peeling
from pynd._version import __version__

REPORT_SCHEMA = 1

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_ERROR = 2

PHASES = ("parse", "orient", "build", "count", "peel")

BENCH_COLUMNS = ("graph", "r", "s", "levels", "aggregation", "threads",
                 "phase", "seconds", "peak_table_bytes", "rho", "histogram",
                 "error")

MAX_VALIDATE_S = 5


def _max_threads() -> int:
    return os.cpu_count() or 1


def _threads(value: str) -> int:
    """Parse a thread count, accepting ``max``."""
    if value == "max":
        return _max_threads()

    try:
        threads = int(value)

    except ValueError:
        raise argparse.ArgumentTypeError(
            'invalid thread count "{0}"'.format(value))

    if threads < 1:
        raise argparse.ArgumentTypeError(
            'thread count must be >= 1 (got {0})'.format(threads))

    return threads


def _rs_pair(value: str) -> t.Tuple[int, int]:
    try:
        r, s = (int(part) for part in value.split(":"))

    except ValueError:
        raise argparse.ArgumentTypeError(
            'expected "r:s", got "{0}"'.format(value))

    return r, s


def _csv_list(convert: t.Callable[[str], t.Any]) -> t.Callable:
    def _parse(value: str) -> t.List[t.Any]:
        return [convert(item.strip()) for item in value.split(",")
                if item.strip()]

    return _parse


def _add_bool_flag(parser: argparse.ArgumentParser, name: str,
                   default: t.Optional[bool], help_on: str) -> None:
    dest = name.replace("-", "_")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--" + name, dest=dest, action="store_true",
                       help=help_on)
    group.add_argument("--no-" + name, dest=dest, action="store_false")
    parser.set_defaults(**{dest: default})


def _add_tuning_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--levels", type=int, default=None,
                        help="number of clique table levels (1..r)")
    _add_bool_flag(parser, "contiguous", True,
                   "store all last-level tables in one block")
    parser.add_argument("--inverse", choices=_internal.VALID_INVERSE,
                        default="pointer", help="index to clique map")
    _add_bool_flag(parser, "relabel", None,
                   "rename vertices by rank before building the table")
    parser.add_argument("--agg", choices=_internal.VALID_AGGREGATION,
                        default=None, help="update aggregation strategy")
    parser.add_argument("--buffer-size", type=int,
                        default=_internal.DEFAULT_BUFFER_SIZE)
    _add_bool_flag(parser, "contract", None,
                   "contract the graph while peeling (r, s) = (2, 3)")
    parser.add_argument("--contract-edge-factor", type=float,
                        default=_internal.CONTRACT_EDGE_FACTOR)
    parser.add_argument("--contract-loss-fraction", type=float,
                        default=_internal.CONTRACT_LOSS_FRACTION)
    parser.add_argument("--bucket", choices=_internal.VALID_BUCKET,
                        default="open")
    parser.add_argument("--orientation", choices=_internal.VALID_ORIENTATION,
                        default="degeneracy")
    parser.add_argument("--threads", type=_threads, default=None,
                        help='worker threads, or "max" (default)')
    parser.add_argument("--seed", type=int, default=0,
                        help="seed of the table hash function")
    parser.add_argument("--window", type=int,
                        default=_internal.DEFAULT_WINDOW,
                        help="materialized buckets of the open structure")


def _config_from_args(args: argparse.Namespace) -> peeling.PeelConfig:
    return peeling.PeelConfig(
        levels=args.levels,
        contiguous=args.contiguous,
        inverse_map=args.inverse,
        relabel=args.relabel,
        aggregation=args.agg,
        buffer_size=args.buffer_size,
        contract=args.contract,
        bucket=args.bucket,
        orientation=args.orientation,
        threads=args.threads,
        window=args.window,
        contract_edge_factor=args.contract_edge_factor,
        contract_loss_fraction=args.contract_loss_fraction,
        seed=args.seed,
    )


def load_input(path: str) -> graph.UndirectedGraph:
    """Read a binary graph cache or a SNAP edge list."""
    with open(path, "rb") as f_in:
        header = f_in.read(len(graph.CACHE_MAGIC))

    if header == graph.CACHE_MAGIC:
        return graph.load_graph(path)

    return graph.read_edge_list(path)


def _progress(verbose: bool) -> t.ContextManager:
    """Send progress messages to stderr, keeping stdout for reports."""
    if verbose:
        return contextlib.redirect_stdout(sys.stderr)

    return contextlib.nullcontext()


def build_report(g: graph.UndirectedGraph, res: peeling.PeelResult,
                 parse_time: t.Optional[float] = None) -> t.Dict[str, t.Any]:
    """JSON-ready summary of a decomposition."""
    config = dict(res.config)
    timings = dict(res.timings)

    if parse_time is not None:
        timings["parse"] = parse_time

    return {
        "schema": REPORT_SCHEMA,
        "version": __version__,
        "n": g.n,
        "m": g.m,
        "r": config.pop("r"),
        "s": config.pop("s"),
        "rho": res.rho,
        "max_core": res.max_core,
        "total_cliques": len(res),
        "histogram": {
            str(core): count
            for core, count in sorted(res.histogram().items())
        },
        "summary": _summary.summarize_cores(res.core),
        "timings": {
            phase: timings[phase]
            for phase in PHASES if phase in timings
        },
        "memory": res.table.memory_report(),
        "config": config,
        "threads": config["threads"],
    }


def write_cores(g: graph.UndirectedGraph, res: peeling.PeelResult,
                path: str, with_vertices: bool = False) -> None:
    """Write ``index,core`` rows, optionally with the clique vertices."""
    frame = pd.DataFrame({
        "index": np.arange(len(res), dtype=np.int64),
        "core": res.core,
    })

    if with_vertices:
        vertices = np.array(
            [
                sorted(g.label_of(int(res.labels[v]))
                       for v in res.table.vertices_of(idx))
                for idx in range(len(res))
            ],
            dtype=np.int64).reshape(len(res), res.table.r)

        for pos in range(res.table.r):
            frame["v{0}".format(pos)] = vertices[:, pos]

    frame.to_csv(path, index=False)


def cmd_decompose(args: argparse.Namespace) -> int:
    g, parse_time = _internal.timeit(load_input, args.input)

    with _progress(args.verbose):
        res = peeling.nucleus_decomposition(
            g, args.r, args.s, _config_from_args(args),
            verbose=args.verbose,
            suppress_warnings=args.suppress_warnings)

    json.dump(build_report(g, res, parse_time), sys.stdout, indent=2)
    sys.stdout.write("\n")

    if args.cores_out:
        write_cores(g, res, args.cores_out, args.with_vertices)

    return EXIT_OK


def config_matrix(
        r: int,
        threads: t.Sequence[int]) -> t.Iterator[peeling.PeelConfig]:
    """Every validated combination of table, aggregation and bucketing."""
    inverse_layouts = (("binary", False), ("binary", True), ("pointer", True))

    for levels, (inverse, contiguous), agg, bucket, num_threads in (
            itertools.product(range(1, min(r, 3) + 1), inverse_layouts,
                              _internal.VALID_AGGREGATION,
                              _internal.VALID_BUCKET, threads)):
        yield peeling.PeelConfig(levels=levels, contiguous=contiguous,
                                 inverse_map=inverse, aggregation=agg,
                                 bucket=bucket, threads=num_threads)


def _first_divergence(
        expected: t.Dict[t.Tuple[int, ...], int],
        got: t.Dict[t.Tuple[int, ...], int]) -> t.Optional[str]:
    for clique in sorted(set(expected) | set(got)):
        if expected.get(clique) != got.get(clique):
            return "clique {0}: expected core {1}, got {2}".format(
                clique, expected.get(clique), got.get(clique))

    return None


def _validate_graphs(
        args: argparse.Namespace
) -> t.Iterator[t.Tuple[str, graph.UndirectedGraph]]:
    if args.input:
        yield args.input, load_input(args.input)

    if args.random:
        n, p, seeds = args.random
        for seed in range(int(seeds)):
            yield ("gnp(n={0}, p={1}, seed={2})".format(int(n), p, seed),
                   graph.generate_gnp(int(n), p, seed=seed))


def cmd_validate(args: argparse.Namespace) -> int:
    if not args.input and not args.random:
        raise ValueError('"validate" needs --input or --random.')

    if (args.r is None) != (args.s is None):
        raise ValueError("--r and --s must be given together.")

    if args.r is not None:
        pairs = [_internal.check_rs(args.r, args.s)]

    else:
        pairs = [(r, s) for s in range(2, MAX_VALIDATE_S + 1)
                 for r in range(1, s)]

    threads = sorted({1, _max_threads()})
    checked = failed = 0

    for name, g in _validate_graphs(args):
        for r, s in pairs:
            expected = oracle.oracle_nucleus(g, r, s, cap=args.cap).cores

            corrupt = args.corrupt_index
            if corrupt is not None and corrupt >= len(expected):
                corrupt = None

            for config in config_matrix(r, threads):
                res = peeling.nucleus_decomposition(
                    g, r, s, config, corrupt_index=corrupt,
                    suppress_warnings=True)
                checked += 1
                diff = _first_divergence(expected, res.as_dict())

                if diff is None:
                    continue

                failed += 1
                print("FAIL {0} (r={1}, s={2}) levels={3} inverse={4} "
                      "agg={5} bucket={6} threads={7}: {8}".format(
                          name, r, s, config.levels, config.inverse_map,
                          config.aggregation, config.bucket,
                          config.threads, diff))

                if not args.keep_going:
                    return EXIT_VALIDATION_FAILED

    print("{0} of {1} runs match the reference.".format(
        checked - failed, checked))

    return EXIT_VALIDATION_FAILED if failed else EXIT_OK


def cmd_gen_rmat(args: argparse.Namespace) -> int:
    g = graph.generate_rmat(args.scale, edge_factor=args.edge_factor,
                            a=args.a, b=args.b, c=args.c, d=args.d,
                            seed=args.seed)

    if args.binary:
        graph.save_graph(g, args.output)

    else:
        graph.write_edge_list(g, args.output)

    return EXIT_OK


def _bench_graphs(
        args: argparse.Namespace
) -> t.Iterator[t.Tuple[str, t.Callable[[], graph.UndirectedGraph]]]:
    for path in args.input or ():
        yield path, lambda path=path: load_input(path)

    for scale in args.rmat_scale or ():
        yield ("rmat-{0}-{1}".format(scale, args.rmat_edge_factor),
               lambda scale=scale: graph.generate_rmat(
                   scale, edge_factor=args.rmat_edge_factor,
                   seed=args.seed))


def bench_rows(args: argparse.Namespace) -> t.List[t.Dict[str, t.Any]]:
    """Run the sweep; a failing configuration becomes an error row."""
    rows = []  # type: t.List[t.Dict[str, t.Any]]

    for name, loader in _bench_graphs(args):
        g, parse_time = _internal.timeit(loader)

        for (r, s), levels, agg, threads in itertools.product(
                args.rs or [(2, 3)], args.levels or [None],
                args.agg or [None], args.threads or [1]):
            base = dict(graph=name, r=r, s=s, levels=levels,
                        aggregation=agg, threads=threads)

            try:
                config = peeling.PeelConfig(levels=levels, aggregation=agg,
                                            threads=threads, seed=args.seed)
                res = peeling.nucleus_decomposition(g, r, s, config,
                                                    suppress_warnings=True)

            except Exception as err:  # pylint: disable=W0703
                rows.append(dict(base, phase=None, seconds=None,
                                 peak_table_bytes=None, rho=None,
                                 histogram=None, error=str(err)))
                continue

            timings = dict(res.timings, parse=parse_time)
            peak = res.table.memory_report()["key_memory_bytes"]
            histogram = json.dumps(
                {str(k): v for k, v in sorted(res.histogram().items())})

            for phase in PHASES:
                rows.append(dict(base, levels=res.config["levels"],
                                 aggregation=res.config["aggregation"],
                                 phase=phase, seconds=timings[phase],
                                 peak_table_bytes=peak, rho=res.rho,
                                 histogram=histogram, error=None))

    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    if not args.input and not args.rmat_scale:
        raise ValueError('"bench" needs --input or --rmat-scale.')

    frame = pd.DataFrame(bench_rows(args), columns=BENCH_COLUMNS)
    frame.to_csv(args.output or sys.stdout, index=False)

    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pynd", description="Parallel (r, s) nucleus decomposition.")
    parser.add_argument("--version", action="version",
                        version="%(prog)s " + __version__)
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    decompose = subparsers.add_parser(
        "decompose", help="decompose a graph and print a JSON report")
    decompose.add_argument("--input", required=True,
                           help="SNAP edge list or binary graph cache")
    decompose.add_argument("--r", type=int, required=True)
    decompose.add_argument("--s", type=int, required=True)
    _add_tuning_flags(decompose)
    decompose.add_argument("--cores-out", default=None,
                           help="write index,core rows to this CSV file")
    decompose.add_argument("--with-vertices", action="store_true",
                           help="add the vertices of every clique to "
                           "--cores-out")
    decompose.add_argument("--verbose", action="store_true")
    decompose.add_argument("--suppress-warnings", action="store_true")
    decompose.set_defaults(func=cmd_decompose)

    validate = subparsers.add_parser(
        "validate", help="check every configuration against brute force")
    validate.add_argument("--input", default=None)
    validate.add_argument("--random", nargs=3, type=float, default=None,
                          metavar=("N", "P", "SEEDS"),
                          help="G(N, P) graphs for SEEDS seeds")
    validate.add_argument("--r", type=int, default=None)
    validate.add_argument("--s", type=int, default=None)
    validate.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP,
                          help="largest graph accepted by the reference")
    validate.add_argument("--corrupt-index", type=int, default=None,
                          help="add one s-clique to this clique index")
    validate.add_argument("--keep-going", action="store_true",
                          help="report every mismatch")
    validate.set_defaults(func=cmd_validate)

    gen_rmat = subparsers.add_parser("gen-rmat",
                                     help="write an rMAT edge list")
    gen_rmat.add_argument("--scale", type=int, required=True)
    gen_rmat.add_argument("--edge-factor", type=int, default=16)
    gen_rmat.add_argument("--a", type=float, default=0.5)
    gen_rmat.add_argument("--b", type=float, default=0.1)
    gen_rmat.add_argument("--c", type=float, default=0.1)
    gen_rmat.add_argument("--d", type=float, default=0.3)
    gen_rmat.add_argument("--seed", type=int, default=0)
    gen_rmat.add_argument("--binary", action="store_true",
                          help="write the binary graph cache instead")
    gen_rmat.add_argument("--output", required=True)
    gen_rmat.set_defaults(func=cmd_gen_rmat)

    bench = subparsers.add_parser("bench",
                                  help="time a configuration sweep")
    bench.add_argument("--input", action="append", default=None)
    bench.add_argument("--rmat-scale", type=int, action="append",
                       default=None)
    bench.add_argument("--rmat-edge-factor", type=int, default=16)
    bench.add_argument("--rs", type=_rs_pair, action="append", default=None,
                       help='clique sizes as "r:s" (default 2:3)')
    bench.add_argument("--levels", type=_csv_list(int), default=None)
    bench.add_argument("--agg", type=_csv_list(str), default=None)
    bench.add_argument("--threads", type=_csv_list(_threads), default=None)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--output", default=None)
    bench.set_defaults(func=cmd_bench)

    return parser


def main(argv: t.Optional[t.Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        return args.func(args)

    except Exception as err:  # pylint: disable=W0703
        print("error: {0}".format(err), file=sys.stderr)
        return EXIT_ERROR
