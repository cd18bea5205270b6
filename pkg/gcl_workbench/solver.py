from __future__ import annotations
"""Fixpoint engines: chaotic iteration, the worklist algorithm and chaotic iteration with widening.

Backward analyses are solved on the reversed program graph, so every engine only
ever propagates forwards; the transfer functions still receive the original
edges.
"""

import logging
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Optional

from .framework import AnalysisSpec, Assignment, Direction, FlowEdge, flow_edges
from .graphs import reverse
from .models import ProgramGraph
from .preprocessing import NonReducible
from .worklists import Strategy, make_worklist

LOGGER = logging.getLogger(__name__)

__all__ = [
    "Counters",
    "DomainNotACC",
    "NonReducible",
    "Solution",
    "TraceStep",
    "chaotic_solve",
    "widening_solve",
    "worklist_solve",
]


class DomainNotACC(RuntimeError):
    """Raised when an analysis without the ascending chain condition is solved without a widening."""


@dataclass(frozen=True)
class TraceStep:
    step: int
    extracted: Optional[str]
    edge: Optional[str]
    changed_node: Optional[str]
    inserts: tuple[str, ...]
    worklist_size: int

    def to_json(self) -> dict[str, Any]:
        payload = asdict(self)
        payload["inserts"] = list(self.inserts)
        return payload


@dataclass
class Counters:
    extracts: int = 0
    inserts: int = 0
    evaluations: int = 0
    updates: int = 0
    rounds: int = 0


@dataclass
class Solution:
    """An analysis assignment with the steps and operation counts that produced it."""

    assignment: Assignment
    steps: list[TraceStep] = field(default_factory=list)
    counters: Counters = field(default_factory=Counters)
    strategy: str = "chaotic"

    def __getitem__(self, node: str) -> Any:
        return self.assignment[node]


def _require_acc(spec: AnalysisSpec) -> None:
    if not spec.domain.satisfies_acc:
        raise DomainNotACC(
            f"The domain of {spec.name} ({spec.domain.name}) does not satisfy the ascending chain condition; "
            "solve it with a widening"
        )


def _flow_graph(spec: AnalysisSpec, pg: ProgramGraph) -> ProgramGraph:
    return pg if spec.direction is Direction.FORWARD else reverse(pg)


def _outgoing(spec: AnalysisSpec, pg: ProgramGraph) -> dict[str, list[FlowEdge]]:
    outgoing: dict[str, list[FlowEdge]] = defaultdict(list)
    for flow in flow_edges(spec, pg):
        outgoing[flow.origin].append(flow)
    return outgoing


def _initial_assignment(spec: AnalysisSpec, pg: ProgramGraph) -> Assignment:
    assignment = {node: spec.domain.bottom for node in pg.nodes}
    assignment[spec.extremal_node(pg)] = spec.initial
    return assignment


def _iterate(
    spec: AnalysisSpec,
    pg: ProgramGraph,
    combine: Callable[[Any, Any], Any],
    strategy: str,
) -> Solution:
    """Fix the first violated constraint in edge order until none is left."""
    domain = spec.domain
    flows = flow_edges(spec, pg)
    solution = Solution(_initial_assignment(spec, pg), strategy=strategy)
    assignment = solution.assignment
    counters = solution.counters
    while True:
        for flow in flows:
            effect = spec.transfer(flow.edge)(assignment[flow.origin])
            counters.evaluations += 1
            if not domain.leq(effect, assignment[flow.destination]):
                assignment[flow.destination] = combine(assignment[flow.destination], effect)
                counters.updates += 1
                solution.steps.append(
                    TraceStep(len(solution.steps) + 1, None, flow.edge.label, flow.destination, (), 0)
                )
                break
        else:
            LOGGER.debug("%s: %s finished after %d updates", spec.name, strategy, counters.updates)
            return solution


def chaotic_solve(spec: AnalysisSpec, pg: ProgramGraph) -> Solution:
    """The least solution by chaotic iteration; raises :class:`DomainNotACC` for unbounded domains."""
    _require_acc(spec)
    return _iterate(spec, pg, spec.domain.join, "chaotic")


def widening_solve(
    spec: AnalysisSpec,
    pg: ProgramGraph,
    widen: Callable[[Any, Any], Any] | None = None,
) -> Solution:
    """Chaotic iteration that widens instead of joining.

    The result solves the constraints but need not be the least solution.
    ``widen`` defaults to the domain's own widening.
    """
    if widen is None:
        if not spec.domain.supports_widening:
            raise ValueError(f"{spec.domain.name} has no widening; pass one explicitly")
        widen = spec.domain.widen
    return _iterate(spec, pg, widen, "widening")


def worklist_solve(
    spec: AnalysisSpec,
    pg: ProgramGraph,
    strategy: Strategy | str = Strategy.FIFO,
    *,
    whole_components: bool = False,
) -> Solution:
    """The least solution by the worklist algorithm with the given worklist representation.

    Reverse postorder, strong components and natural loops are computed on the
    graph in the direction of the analysis.
    """
    _require_acc(spec)
    strategy = Strategy(strategy)
    domain = spec.domain
    graph = _flow_graph(spec, pg)
    worklist = make_worklist(strategy, graph, whole_components=whole_components)
    outgoing = _outgoing(spec, pg)
    solution = Solution({node: domain.bottom for node in pg.nodes}, strategy=strategy.value)
    assignment = solution.assignment
    counters = solution.counters

    def record(extracted, edge, changed, inserts):
        solution.steps.append(
            TraceStep(len(solution.steps) + 1, extracted, edge, changed, tuple(inserts), len(worklist))
        )

    for node in graph.nodes:
        worklist.insert(node)
        counters.inserts += 1
    assignment[graph.initial] = spec.initial

    while worklist:
        node = worklist.extract()
        counters.extracts += 1
        if not outgoing[node]:
            record(node, None, None, ())
        for flow in outgoing[node]:
            effect = spec.transfer(flow.edge)(assignment[node])
            counters.evaluations += 1
            if domain.leq(effect, assignment[flow.destination]):
                record(node, flow.edge.label, None, ())
                continue
            assignment[flow.destination] = domain.join(assignment[flow.destination], effect)
            counters.updates += 1
            worklist.insert(flow.destination)
            counters.inserts += 1
            record(node, flow.edge.label, flow.destination, (flow.destination,))
    counters.rounds = worklist.rounds
    LOGGER.debug(
        "%s: %s worklist finished; %d extracts, %d updates, %d rounds",
        spec.name,
        strategy.value,
        counters.extracts,
        counters.updates,
        counters.rounds,
    )
    return solution
