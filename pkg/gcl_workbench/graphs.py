from __future__ import annotations
"""Compilation of commands to program graphs and basic graph utilities."""

import logging
from typing import Collection, Iterable

import networkx as nx

from .models import FINAL_NODE, INITIAL_NODE, Edge, Memory, Path, ProgramGraph
from .semantics import eval_bexp
from .syntax import (
    ArrayAssign,
    Assign,
    BExp,
    Command,
    Do,
    Guard,
    GuardedCommand,
    If,
    Input,
    InputArray,
    Output,
    Seq,
    Skip,
    Test,
    conjunction,
    negation,
)

LOGGER = logging.getLogger(__name__)


class ReachabilityViolation(RuntimeError):
    """Raised when a graph has a node not on some path from the initial to the final node."""

    def __init__(self, node: str, message: str):
        super().__init__(message)
        self.node = node


class NodeAllocator:
    """Hands out fresh node names ``q1``, ``q2``, ... in allocation order."""

    def __init__(self, prefix: str = "q", start: int = 1):
        self._prefix = prefix
        self._next = start
        self.allocated: list[str] = []
        self.loop_exits: list[Edge] = []

    def fresh(self) -> str:
        node = f"{self._prefix}{self._next}"
        self._next += 1
        self.allocated.append(node)
        return node


def done(gc: GuardedCommand) -> BExp:
    if isinstance(gc, Guard):
        return negation(gc.test)
    return conjunction(done(gc.first), done(gc.second))


def edges(source: str, target: str, command: Command, fresh: NodeAllocator) -> list[Edge]:
    """Edges of the fragment for ``command`` running from ``source`` to ``target``."""
    if isinstance(command, (Assign, ArrayAssign, Input, InputArray, Output, Skip)):
        return [Edge(source, command, target)]
    if isinstance(command, Seq):
        middle = fresh.fresh()
        return edges(source, middle, command.first, fresh) + edges(middle, target, command.second, fresh)
    if isinstance(command, If):
        return _guarded_edges(source, target, command.body, fresh)
    if isinstance(command, Do):
        exit_edge = Edge(source, Test(done(command.body)), target)
        fresh.loop_exits.append(exit_edge)
        return [exit_edge] + _guarded_edges(source, source, command.body, fresh)
    raise TypeError(f"Not a command: {command!r}")


def _guarded_edges(source: str, target: str, gc: GuardedCommand, fresh: NodeAllocator) -> list[Edge]:
    if isinstance(gc, Guard):
        entry = fresh.fresh()
        return [Edge(source, Test(gc.test), entry)] + edges(entry, target, gc.body, fresh)
    return _guarded_edges(source, target, gc.first, fresh) + _guarded_edges(source, target, gc.second, fresh)


def _never_taken(edge: Edge) -> bool:
    if not isinstance(edge.action, Test):
        return False
    return eval_bexp(edge.action.cond, Memory()) is False


def to_networkx(pg: ProgramGraph, *, dead_edges: Collection[Edge] = ()) -> nx.MultiDiGraph:
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(pg.nodes)
    for index, edge in enumerate(pg.edges):
        if edge in dead_edges:
            continue
        graph.add_edge(edge.source, edge.target, key=index, action=edge.action)
    return graph


def check_reachability(pg: ProgramGraph, dead_edges: Collection[Edge] = ()) -> None:
    """Check that every node lies on a path from the initial to the final node.

    The check follows the edges of the graph, whatever their tests say, except
    for ``dead_edges``. Graph construction passes the loop exits whose test is
    false in every memory, such as the exit of ``do true -> C od``.
    """
    if pg.initial == pg.final:
        raise ReachabilityViolation(pg.initial, "The initial and final node must differ")
    graph = to_networkx(pg, dead_edges=dead_edges)
    reachable = nx.descendants(graph, pg.initial) | {pg.initial}
    for node in pg.nodes:
        if node not in reachable:
            raise ReachabilityViolation(node, f"Node {node} is not reachable from {pg.initial}")
    reaching = nx.ancestors(graph, pg.final) | {pg.final}
    for node in pg.nodes:
        if node not in reaching:
            raise ReachabilityViolation(node, f"The final node {pg.final} is not reachable from {node}")


def program_graph_from_edges(
    edge_list: Iterable[Edge],
    initial: str = INITIAL_NODE,
    final: str = FINAL_NODE,
    *,
    nodes: Iterable[str] | None = None,
    dead_edges: Collection[Edge] = (),
) -> ProgramGraph:
    edge_tuple = tuple(edge_list)
    if nodes is None:
        ordered = [initial]
        for edge in edge_tuple:
            for node in (edge.source, edge.target):
                if node not in ordered and node != final:
                    ordered.append(node)
        ordered.append(final)
    else:
        ordered = list(nodes)
    known = set(ordered)
    for edge in edge_tuple:
        if edge.source not in known or edge.target not in known:
            raise ValueError(f"Edge {edge} uses a node outside the graph")
    pg = ProgramGraph(nodes=tuple(ordered), initial=initial, final=final, edges=edge_tuple)
    check_reachability(pg, dead_edges)
    return pg


def build_program_graph(command: Command) -> ProgramGraph:
    fresh = NodeAllocator()
    edge_list = edges(INITIAL_NODE, FINAL_NODE, command, fresh)
    pg = program_graph_from_edges(
        edge_list,
        nodes=[INITIAL_NODE, *fresh.allocated, FINAL_NODE],
        dead_edges=[exit_edge for exit_edge in fresh.loop_exits if _never_taken(exit_edge)],
    )
    LOGGER.debug("Built program graph with %d nodes and %d edges", len(pg.nodes), len(pg.edges))
    return pg


def reverse(pg: ProgramGraph) -> ProgramGraph:
    return ProgramGraph(
        nodes=pg.nodes,
        initial=pg.final,
        final=pg.initial,
        edges=tuple(Edge(edge.target, edge.action, edge.source) for edge in pg.edges),
    )


def enumerate_paths(pg: ProgramGraph, start: str, end: str, max_len: int) -> list[Path]:
    """All paths from ``start`` to ``end`` with at most ``max_len`` edges."""
    found: list[Path] = []
    stack = [Path((start,))]
    while stack:
        path = stack.pop()
        if path.end == end:
            found.append(path)
        if len(path) == max_len:
            continue
        for edge in reversed(pg.out_edges(path.end)):
            stack.append(path.extend(edge))
    return found


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(pg: ProgramGraph) -> str:
    lines = ["digraph program_graph {"]
    for node in pg.nodes:
        if node == pg.initial:
            shape = "doublecircle"
        elif node == pg.final:
            shape = "box"
        else:
            shape = "circle"
        lines.append(f"  {_dot_quote(node)} [shape={shape}];")
    for edge in pg.edges:
        lines.append(f"  {_dot_quote(edge.source)} -> {_dot_quote(edge.target)} [label={_dot_quote(edge.label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
