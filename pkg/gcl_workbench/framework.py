from __future__ import annotations
"""Monotone framework instances and constraint checking."""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable

from .lattices import Domain
from .models import Edge, Path, ProgramGraph

Transfer = Callable[[Any], Any]
Assignment = dict[str, Any]


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


class Extremal(str, Enum):
    AT_INITIAL = "at_initial"
    AT_FINAL = "at_final"


@dataclass(frozen=True)
class AnalysisSpec:
    """A packaged analysis: domain, per-edge transfer functions, initial element and direction.

    ``transfer`` always receives the edge as it appears in the analysed program graph;
    for backward analyses the solver applies it from the edge's target to its source.
    """

    name: str
    domain: Domain
    transfer: Callable[[Edge], Transfer]
    initial: Any
    direction: Direction = Direction.FORWARD

    @property
    def extremal(self) -> Extremal:
        return Extremal.AT_INITIAL if self.direction is Direction.FORWARD else Extremal.AT_FINAL

    def extremal_node(self, pg: ProgramGraph) -> str:
        return pg.initial if self.direction is Direction.FORWARD else pg.final


@dataclass(frozen=True)
class FlowEdge:
    """An edge oriented in the direction information flows for a given analysis."""

    origin: str
    edge: Edge
    destination: str


def flow_edges(spec: AnalysisSpec, pg: ProgramGraph) -> list[FlowEdge]:
    if spec.direction is Direction.FORWARD:
        return [FlowEdge(edge.source, edge, edge.target) for edge in pg.edges]
    return [FlowEdge(edge.target, edge, edge.source) for edge in pg.edges]


def check_solution(spec: AnalysisSpec, pg: ProgramGraph, assignment: Assignment) -> list[Edge]:
    """Return the edges whose constraint ``S(AA(from)) <= AA(to)`` fails.

    A violated initial constraint is reported as an edge with a ``None`` action.
    """
    domain = spec.domain
    violated: list[Edge] = []
    extremal = spec.extremal_node(pg)
    if not domain.leq(spec.initial, assignment[extremal]):
        violated.append(Edge(extremal, None, extremal))
    for flow in flow_edges(spec, pg):
        effect = spec.transfer(flow.edge)(assignment[flow.origin])
        if not domain.leq(effect, assignment[flow.destination]):
            violated.append(flow.edge)
    return violated


def path_effect(spec: AnalysisSpec, path: Path) -> Any:
    """Apply the transfer functions along ``path`` (in flow order) to the initial element.

    For backward analyses ``path`` runs from the analysed node to the final node and
    the edges are applied last to first.
    """
    edges = list(path.edges())
    if spec.direction is Direction.BACKWARD:
        edges.reverse()
    value = spec.initial
    for edge in edges:
        value = spec.transfer(edge)(value)
    return value
