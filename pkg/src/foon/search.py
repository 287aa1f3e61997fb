"""Task tree retrieval: iterative deepening and greedy best-first search.

Both algorithms run the same backward resolution over the producers index.
A subgoal key is satisfied by the kitchen when possible (never by a unit),
otherwise by choosing one producing unit and resolving that unit's inputs.
Within one candidate tree every key is resolved at most once and every unit
is placed at most once; a unit already placed may satisfy further keys it
outputs without being expanded again.  A subgoal that reappears on its own
resolution path is a dead end, which bounds the search on cyclic graphs.

The algorithms differ only in candidate order and cutoff.  Iterative
deepening tries producers in file order under a growing depth limit and
returns the first complete tree, so the result minimizes the unit-chain
depth.  Greedy best-first orders producers by a heuristic score (motion
success rate, descending, or input-object count, ascending; ties fall back
to file order) with no depth limit, backtracking to the next-best candidate
when a subtree fails unless backtracking is disabled.

Depth bookkeeping: a kitchen-satisfied key costs 0; a unit's chain depth is
one more than the deepest of its input resolutions.  Reusing a previously
resolved key (or placed unit) at request depth ``d`` is allowed only while
``d`` plus its stored chain depth stays within the limit, and failed
attempts roll back their placements, so a depth-limited pass is exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import FoonError, MissingMotionRateError, UnknownGoalError
from .graph import (
    FoonGraph,
    FunctionalUnit,
    Kitchen,
    MotionProfile,
    ObjectNode,
    TaskTree,
    canonical_node_key,
    kitchen_satisfies,
)

IDS = "ids"
GBFS_SUCCESS = "gbfs-success"
GBFS_INPUTS = "gbfs-inputs"
ALGORITHMS = (IDS, GBFS_SUCCESS, GBFS_INPUTS)

# Candidate lists carry (unit, score) pairs so greedy traces can be replayed.
_Ranked = Sequence[tuple[FunctionalUnit, float]]
_Order = Callable[[Iterable[FunctionalUnit]], _Ranked]


@dataclass
class RetrievalConfig:
    """Knobs shared by the retrieval entry points.

    ``max_depth`` caps iterative deepening only.  ``motion_profile`` and
    ``strict_motions`` matter only to gbfs-success, and ``backtrack`` only
    to the greedy algorithms.
    """

    algorithm: str = IDS
    max_depth: int = 50
    motion_profile: MotionProfile | None = None
    strict_motions: bool = False
    backtrack: bool = True

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.max_depth < 1:
            raise ValueError("max_depth must be a positive integer")


@dataclass
class RetrievalStats:
    """Work counters for one retrieval call.

    ``expanded_units``: candidate unit expansions attempted (across every
    deepening pass, for IDS).  ``peak_open_set``: most subgoal resolutions
    simultaneously in flight; at least 1 whenever a search ran.
    ``depth_reached``: for IDS the depth limit in force when the search
    ended; for greedy search the deepest subgoal request seen.
    """

    expanded_units: int = 0
    peak_open_set: int = 0
    depth_reached: int = 0


@dataclass(frozen=True)
class ChoiceRecord:
    """One greedy choice point: the ranked candidates for a subgoal key.

    ``accepted`` indexes the candidate whose subtree succeeded (or that was
    reused); None means every candidate failed.  Records are appended in
    resolution order, including choice points later rolled back.
    """

    key: str
    candidates: tuple[tuple[FunctionalUnit, float], ...]
    accepted: int | None


class TaskTreeNotFound(FoonError):
    """No task tree exists under the configured search regime."""

    def __init__(self, reason: str, stats: RetrievalStats):
        super().__init__(reason)
        self.reason = reason
        self.stats = stats


def heuristic_success(
    unit: FunctionalUnit, profile: MotionProfile, strict: bool = False
) -> float:
    """Success rate of the unit's motion; greedy search prefers higher."""
    return profile.rate_for(unit.motion.label, strict=strict)


def heuristic_input_count(unit: FunctionalUnit) -> int:
    """Number of input object nodes; greedy search prefers fewer."""
    return len(unit.inputs)


def _resolve(
    graph: FoonGraph,
    kitchen: Kitchen,
    goal_key: str,
    *,
    cap: float,
    order: _Order,
    backtrack: bool,
    stats: RetrievalStats,
    trace: list[ChoiceRecord] | None = None,
) -> list[FunctionalUnit] | None:
    """One depth-capped backward search; returns ordered steps or None."""
    producers = graph.producers
    steps: list[FunctionalUnit] = []
    resolved: dict[str, int] = {}  # key -> chain depth of its resolution
    placed: dict[FunctionalUnit, int] = {}  # unit -> chain depth when placed
    journal: list[tuple[str, object]] = []  # undo log for resolved/placed
    path: set[str] = set()  # keys currently being expanded
    open_subgoals = 0

    def rollback(steps_mark: int, journal_mark: int) -> None:
        del steps[steps_mark:]
        while len(journal) > journal_mark:
            kind, value = journal.pop()
            if kind == "key":
                del resolved[value]  # type: ignore[index]
            else:
                del placed[value]  # type: ignore[index]

    def resolve_key(key: str, depth: int) -> int | None:
        nonlocal open_subgoals
        open_subgoals += 1
        stats.peak_open_set = max(stats.peak_open_set, open_subgoals)
        stats.depth_reached = max(stats.depth_reached, depth)
        try:
            if kitchen_satisfies(kitchen, key):
                return 0
            if key in path:
                return None
            cached = resolved.get(key)
            if cached is not None:
                return cached if depth + cached <= cap else None
            if depth >= cap:
                return None
            candidates = order(producers.get(key, ()))
            accepted: int | None = None
            outcome: int | None = None
            for index, (unit, _score) in enumerate(candidates):
                if index > 0 and not backtrack:
                    break
                reused = placed.get(unit)
                if reused is not None:
                    if depth + reused <= cap:
                        resolved[key] = reused
                        journal.append(("key", key))
                        accepted, outcome = index, reused
                        break
                    continue
                stats.expanded_units += 1
                steps_mark, journal_mark = len(steps), len(journal)
                path.add(key)
                below = resolve_inputs(unit.input_keys(), depth + 1)
                path.discard(key)
                if below is None:
                    rollback(steps_mark, journal_mark)
                    continue
                chain = below + 1
                steps.append(unit)
                placed[unit] = chain
                journal.append(("unit", unit))
                resolved[key] = chain
                journal.append(("key", key))
                accepted, outcome = index, chain
                break
            if trace is not None and candidates:
                trace.append(ChoiceRecord(key, tuple(candidates), accepted))
            return outcome
        finally:
            open_subgoals -= 1

    def resolve_inputs(keys: tuple[str, ...], depth: int) -> int | None:
        deepest = 0
        for key in keys:
            outcome = resolve_key(key, depth)
            if outcome is None:
                return None
            deepest = max(deepest, outcome)
        return deepest

    if resolve_key(goal_key, 0) is None:
        return None
    return list(steps)


def _ensure_known_goal(graph: FoonGraph, kitchen: Kitchen, goal_key: str) -> None:
    if goal_key not in graph.producers and not kitchen_satisfies(kitchen, goal_key):
        raise UnknownGoalError(
            f"goal {goal_key!r} is neither produced by any unit nor in the kitchen"
        )


def _file_order(units: Iterable[FunctionalUnit]) -> _Ranked:
    return [(unit, float(unit.source_index)) for unit in units]


def retrieve_ids(
    graph: FoonGraph,
    goal: ObjectNode,
    kitchen: Kitchen,
    config: RetrievalConfig | None = None,
) -> tuple[TaskTree, RetrievalStats]:
    """Iterative deepening retrieval.

    Runs exhaustive depth-limited passes with limits 0, 1, ... max_depth,
    taking producers left to right in file order, and returns the first
    complete tree, which therefore has the smallest achievable unit-chain
    depth.  Raises UnknownGoalError for an unknown goal and TaskTreeNotFound
    when every pass fails.
    """
    if config is None:
        config = RetrievalConfig(algorithm=IDS)
    goal_key = canonical_node_key(goal)
    _ensure_known_goal(graph, kitchen, goal_key)
    stats = RetrievalStats()
    for limit in range(config.max_depth + 1):
        steps = _resolve(
            graph,
            kitchen,
            goal_key,
            cap=limit,
            order=_file_order,
            backtrack=True,
            stats=stats,
        )
        if steps is not None:
            stats.depth_reached = limit
            return TaskTree(tuple(steps), goal_key, IDS), stats
    stats.depth_reached = config.max_depth
    raise TaskTreeNotFound(
        f"no task tree within depth limit {config.max_depth}"
        f" after {stats.expanded_units} unit expansions",
        stats,
    )


def retrieve_gbfs(
    graph: FoonGraph,
    goal: ObjectNode,
    kitchen: Kitchen,
    config: RetrievalConfig | None = None,
    trace: list[ChoiceRecord] | None = None,
) -> tuple[TaskTree, RetrievalStats]:
    """Greedy best-first retrieval under either heuristic.

    ``config.algorithm`` selects the score: gbfs-success takes the candidate
    with the highest motion success rate (requires a motion profile),
    gbfs-inputs the one with the fewest input objects; ties break toward the
    earlier unit in the file.  With ``config.backtrack`` (the default) a
    failed subtree falls through to the next-best candidate; without it the
    search commits to its first choice and fails if that choice fails.  Pass
    ``trace`` to record every choice point for later inspection.
    """
    if config is None:
        config = RetrievalConfig(algorithm=GBFS_SUCCESS)
    if config.algorithm == GBFS_SUCCESS:
        profile = config.motion_profile
        if profile is None:
            raise MissingMotionRateError(
                "gbfs-success needs a motion profile to score candidates"
            )
        strict = config.strict_motions

        def order(units: Iterable[FunctionalUnit]) -> _Ranked:
            scored = [(u, heuristic_success(u, profile, strict)) for u in units]
            return sorted(scored, key=lambda pair: (-pair[1], pair[0].source_index))

    elif config.algorithm == GBFS_INPUTS:

        def order(units: Iterable[FunctionalUnit]) -> _Ranked:
            scored = [(u, float(heuristic_input_count(u))) for u in units]
            return sorted(scored, key=lambda pair: (pair[1], pair[0].source_index))

    else:
        raise ValueError(f"not a greedy algorithm: {config.algorithm!r}")
    goal_key = canonical_node_key(goal)
    _ensure_known_goal(graph, kitchen, goal_key)
    stats = RetrievalStats()
    steps = _resolve(
        graph,
        kitchen,
        goal_key,
        cap=float("inf"),
        order=order,
        backtrack=config.backtrack,
        stats=stats,
        trace=trace,
    )
    if steps is None:
        regime = (
            "every candidate ordering"
            if config.backtrack
            else "its first-choice path (backtracking disabled)"
        )
        raise TaskTreeNotFound(
            f"greedy search exhausted {regime}"
            f" after {stats.expanded_units} unit expansions",
            stats,
        )
    return TaskTree(tuple(steps), goal_key, config.algorithm), stats


def retrieve(
    graph: FoonGraph,
    goal: ObjectNode,
    kitchen: Kitchen,
    config: RetrievalConfig,
) -> tuple[TaskTree, RetrievalStats]:
    """Dispatch to the algorithm named by ``config.algorithm``."""
    if config.algorithm == IDS:
        return retrieve_ids(graph, goal, kitchen, config)
    return retrieve_gbfs(graph, goal, kitchen, config)


def validate_tree(
    tree: TaskTree, graph: FoonGraph, kitchen: Kitchen
) -> tuple[bool, list[str]]:
    """Check that a task tree is executable against a graph and kitchen.

    Verifies that every step is a unit of the graph, appears only once, and
    has each input either kitchen-satisfied or produced by an earlier step;
    the final step must output the goal (an empty tree needs the goal in the
    kitchen).  Returns (ok, problems).
    """
    problems: list[str] = []
    known = {unit.to_text() for unit in graph.units}
    seen: set[str] = set()
    available: set[str] = set()
    for position, step in enumerate(tree.steps):
        form = step.to_text()
        if form not in known:
            problems.append(f"step {position} is not a unit of the graph")
        if form in seen:
            problems.append(f"step {position} duplicates an earlier step")
        seen.add(form)
        for key in dict.fromkeys(step.input_keys()):
            if not kitchen_satisfies(kitchen, key) and key not in available:
                problems.append(
                    f"step {position} input {key!r} is neither in the kitchen"
                    " nor produced by an earlier step"
                )
        available.update(step.output_keys())
    if tree.steps:
        if tree.goal_key not in tree.steps[-1].output_keys():
            problems.append(
                f"goal {tree.goal_key!r} is not among the final step's outputs"
            )
    elif not kitchen_satisfies(kitchen, tree.goal_key):
        problems.append(
            f"tree is empty but goal {tree.goal_key!r} is not in the kitchen"
        )
    return not problems, problems
