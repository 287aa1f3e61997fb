"""Command line interface.

Subcommands: ``validate`` (parse a universe file and report problems),
``retrieve`` (find one task tree and emit it as annotation text, DOT, or
JSON metrics), ``compare`` (run every algorithm and print a metrics table).

Conventions: products of a run (task tree text, DOT, JSON, the comparison
table) go to stdout or to files named by flags and are byte-identical across
runs on the same inputs; status and diagnostics go to stderr.  Wall-clock
timings are only emitted under ``--timings``.  Exit codes: 0 success, 1 no
task tree found, 2 unreadable or invalid input (including an unknown goal),
3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import NoReturn

from .errors import (
    EmptyUniverseError,
    MissingMotionRateError,
    ParseError,
    UnknownGoalError,
)
from .evaluate import TreeMetrics, compare_algorithms, tree_metrics
from .graph import FoonGraph, MotionProfile, build_graph
from .io import (
    ERROR,
    export_dot,
    parse_foon,
    parse_goal,
    parse_kitchen,
    parse_motion_profile,
    serialize_foon,
)
from .search import (
    ALGORITHMS,
    GBFS_SUCCESS,
    RetrievalConfig,
    RetrievalStats,
    TaskTreeNotFound,
    retrieve,
)

EXIT_OK = 0
EXIT_NOT_FOUND = 1
EXIT_BAD_INPUT = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage failures exit with code 3, not 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="foon",
        description="Parse FOON-style universes and retrieve task trees for a goal.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    validate = subparsers.add_parser(
        "validate", help="parse a universe file and report size and problems"
    )
    validate.add_argument("foon", help="universe annotation file")
    validate.set_defaults(handler=cmd_validate)

    retrieve_cmd = subparsers.add_parser(
        "retrieve", help="retrieve one task tree for a goal"
    )
    retrieve_cmd.add_argument("--foon", required=True, help="universe annotation file")
    retrieve_cmd.add_argument("--kitchen", required=True, help="available-objects file")
    retrieve_cmd.add_argument("--goal", required=True, help="goal object file")
    retrieve_cmd.add_argument(
        "--algorithm", required=True, choices=list(ALGORITHMS), help="search algorithm"
    )
    retrieve_cmd.add_argument(
        "--motions", help="motion success rate file (required by gbfs-success)"
    )
    retrieve_cmd.add_argument(
        "--max-depth", type=int, default=50, help="depth limit for ids (default 50)"
    )
    retrieve_cmd.add_argument(
        "--default-rate",
        type=float,
        default=None,
        help="success rate for motions missing from the profile",
    )
    retrieve_cmd.add_argument(
        "--strict-motions",
        action="store_true",
        help="fail on motions missing from the profile instead of defaulting",
    )
    retrieve_cmd.add_argument(
        "--no-backtrack",
        action="store_true",
        help="greedy search commits to its first choice instead of retrying",
    )
    retrieve_cmd.add_argument("--out", help="write the task tree text here instead of stdout")
    retrieve_cmd.add_argument("--dot", help="also write the task tree as Graphviz DOT")
    retrieve_cmd.add_argument("--json", help="also write metrics and stats as JSON")
    retrieve_cmd.set_defaults(handler=cmd_retrieve)

    compare = subparsers.add_parser(
        "compare", help="run every algorithm and print a metrics table"
    )
    compare.add_argument("--foon", required=True, help="universe annotation file")
    compare.add_argument("--kitchen", required=True, help="available-objects file")
    compare.add_argument("--goal", required=True, help="goal object file")
    compare.add_argument("--motions", required=True, help="motion success rate file")
    compare.add_argument(
        "--max-depth", type=int, default=50, help="depth limit for ids (default 50)"
    )
    compare.add_argument("--json", help="also write the report as JSON")
    compare.add_argument(
        "--timings",
        action="store_true",
        help="include wall-clock timings (makes output nondeterministic)",
    )
    compare.set_defaults(handler=cmd_compare)
    return parser


def _count(number: int, noun: str) -> str:
    return f"{number} {noun}" + ("" if number == 1 else "s")


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_graph(path: str) -> FoonGraph:
    """Parse and index a universe file, printing diagnostics to stderr.

    Raises ParseError when any error-severity diagnostic was reported.
    """
    units, diagnostics = parse_foon(Path(path).read_bytes())
    failed = False
    for diagnostic in diagnostics:
        print(diagnostic, file=sys.stderr)
        failed = failed or diagnostic.severity == ERROR
    if failed:
        raise ParseError(f"cannot parse {path}")
    graph = build_graph(units)
    if graph.duplicates_dropped:
        print(
            f"warning: dropped {_count(graph.duplicates_dropped, 'duplicate unit')}",
            file=sys.stderr,
        )
    return graph


def _metrics_dict(metrics: TreeMetrics) -> dict:
    return {
        "unit_count": metrics.unit_count,
        "success_product": metrics.success_product,
        "success_min": metrics.success_min,
        "max_chain_depth": metrics.max_chain_depth,
        "leaf_count": metrics.leaf_count,
    }


def _stats_dict(stats: RetrievalStats) -> dict:
    return {
        "expanded_units": stats.expanded_units,
        "peak_open_set": stats.peak_open_set,
        "depth_reached": stats.depth_reached,
    }


def _write_json(path: str, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def cmd_validate(args: argparse.Namespace) -> int:
    units, diagnostics = parse_foon(Path(args.foon).read_bytes())
    for diagnostic in diagnostics:
        print(diagnostic, file=sys.stderr)
    if any(d.severity == ERROR for d in diagnostics):
        return EXIT_BAD_INPUT
    graph = build_graph(units)
    if graph.duplicates_dropped:
        print(
            f"warning: dropped {_count(graph.duplicates_dropped, 'duplicate unit')}",
            file=sys.stderr,
        )
    print(f"{_count(len(graph.units), 'unit')}, {_count(len(graph.node_catalog), 'object node')}")
    return EXIT_OK


def cmd_retrieve(args: argparse.Namespace) -> int:
    if args.algorithm == GBFS_SUCCESS and args.motions is None and args.default_rate is None:
        print(
            "foon retrieve: error: --algorithm gbfs-success requires --motions"
            " or --default-rate",
            file=sys.stderr,
        )
        return EXIT_USAGE
    if args.max_depth < 1:
        print("foon retrieve: error: --max-depth must be positive", file=sys.stderr)
        return EXIT_USAGE
    graph = _load_graph(args.foon)
    kitchen = parse_kitchen(_read_text(args.kitchen))
    goal = parse_goal(_read_text(args.goal))
    profile = None
    if args.motions is not None:
        profile = parse_motion_profile(_read_text(args.motions), args.default_rate)
    elif args.default_rate is not None:
        profile = MotionProfile({}, args.default_rate)
    config = RetrievalConfig(
        algorithm=args.algorithm,
        max_depth=args.max_depth,
        motion_profile=profile,
        strict_motions=args.strict_motions,
        backtrack=not args.no_backtrack,
    )
    tree, stats = retrieve(graph, goal, kitchen, config)
    tree_text = serialize_foon(tree.steps)
    if args.out:
        Path(args.out).write_text(tree_text, encoding="utf-8")
    else:
        sys.stdout.write(tree_text)
    if args.dot:
        Path(args.dot).write_text(export_dot(tree), encoding="utf-8")
    if args.json:
        metrics = tree_metrics(tree, profile, kitchen=kitchen, strict=args.strict_motions)
        _write_json(
            args.json,
            {
                "algorithm": tree.algorithm_tag,
                "goal": tree.goal_key,
                "outcome": "found",
                "metrics": _metrics_dict(metrics),
                "stats": _stats_dict(stats),
            },
        )
    if tree.steps:
        print(
            f"retrieved a task tree with {_count(len(tree.steps), 'step')}"
            f" via {tree.algorithm_tag}",
            file=sys.stderr,
        )
    else:
        print("goal already satisfied by the kitchen", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    if args.max_depth < 1:
        print("foon compare: error: --max-depth must be positive", file=sys.stderr)
        return EXIT_USAGE
    graph = _load_graph(args.foon)
    kitchen = parse_kitchen(_read_text(args.kitchen))
    goal = parse_goal(_read_text(args.goal))
    profile = parse_motion_profile(_read_text(args.motions))
    report = compare_algorithms(
        graph,
        goal,
        kitchen,
        profile,
        max_depth=args.max_depth,
        fixture=Path(args.foon).name,
    )
    sys.stdout.write(report.to_table(include_timings=args.timings))
    if args.json:
        _write_json(args.json, report.to_json_dict(include_timings=args.timings))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse exits for usage errors and --help
        return exit_.code if isinstance(exit_.code, int) else EXIT_OK
    try:
        return args.handler(args)
    except TaskTreeNotFound as miss:
        print(f"no task tree found: {miss.reason}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except (
        ParseError,
        EmptyUniverseError,
        UnknownGoalError,
        MissingMotionRateError,
        OSError,
        UnicodeDecodeError,
    ) as problem:
        print(f"error: {problem}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
