from __future__ import annotations
"""Depth-first spanning trees, reverse postorder, edge classes, strong components and natural loops.

Wherever the traversal could pick any edge it follows the order of ``pg.edges``;
ties between candidate components go to the one holding the node with the
smallest reverse postorder number.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping

import networkx as nx

from .graphs import ReachabilityViolation
from .models import Edge, ProgramGraph

LOGGER = logging.getLogger(__name__)


class NonReducible(RuntimeError):
    """Raised when a back edge is not a dominator edge, so natural loops are undefined."""

    def __init__(self, edge: Edge):
        super().__init__(f"The program graph is not reducible: back edge {edge} is not a dominator edge")
        self.edge = edge


class EdgeKind(str, Enum):
    TREE = "tree"
    FORWARD = "forward"
    BACK = "back"
    CROSS = "cross"


@dataclass(frozen=True)
class RPNumbering:
    """Tree edges of a depth-first spanning tree and the reverse postorder numbers ``rP``."""

    tree: frozenset[tuple[str, str]]
    rp: Mapping[str, int]

    @property
    def order(self) -> list[str]:
        return sorted(self.rp, key=self.rp.__getitem__)

    def sort(self, nodes: Iterable[str]) -> list[str]:
        return sorted(nodes, key=self.rp.__getitem__)


def _successor_graph(pg: ProgramGraph) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(pg.nodes)
    # neighbours keep the order of their first edge
    graph.add_edges_from((edge.source, edge.target) for edge in pg.edges)
    return graph


def dfs_spanning_tree(pg: ProgramGraph) -> RPNumbering:
    """Depth-first traversal from the initial node; the first node to finish gets ``|Q|``."""
    graph = _successor_graph(pg)
    tree = frozenset(nx.dfs_edges(graph, source=pg.initial))
    postorder = list(nx.dfs_postorder_nodes(graph, source=pg.initial))
    if len(postorder) != len(pg.nodes):
        missing = next(node for node in pg.nodes if node not in set(postorder))
        raise ReachabilityViolation(missing, f"Node {missing} is not reachable from {pg.initial}")
    total = len(pg.nodes)
    rp = {node: total - index for index, node in enumerate(postorder)}
    return RPNumbering(tree, MappingProxyType(rp))


def classify_edges(pg: ProgramGraph, numbering: RPNumbering) -> dict[Edge, EdgeKind]:
    tree = nx.DiGraph()
    tree.add_nodes_from(pg.nodes)
    tree.add_edges_from(numbering.tree)
    kinds: dict[Edge, EdgeKind] = {}
    for edge in pg.edges:
        q, q_prime = edge.source, edge.target
        if (q, q_prime) in numbering.tree:
            kinds[edge] = EdgeKind.TREE
        elif q == q_prime or q_prime in nx.ancestors(tree, q):
            kinds[edge] = EdgeKind.BACK
        elif q_prime in nx.descendants(tree, q):
            kinds[edge] = EdgeKind.FORWARD
        else:
            kinds[edge] = EdgeKind.CROSS
    return kinds


def back_edges(pg: ProgramGraph, numbering: RPNumbering) -> list[Edge]:
    """Edges whose target does not come later in reverse postorder."""
    rp = numbering.rp
    return [edge for edge in pg.edges if rp[edge.source] >= rp[edge.target]]


def strong_components(pg: ProgramGraph, numbering: RPNumbering) -> list[frozenset[str]]:
    """Kosaraju's second pass: backward traversals started in increasing reverse postorder.

    The list topologically sorts the reduced graph.
    """
    assigned: set[str] = set()
    components: list[frozenset[str]] = []
    for node in numbering.order:
        if node in assigned:
            continue
        component = set()
        stack = [node]
        assigned.add(node)
        while stack:
            current = stack.pop()
            component.add(current)
            for edge in pg.in_edges(current):
                if edge.source not in assigned:
                    assigned.add(edge.source)
                    stack.append(edge.source)
        components.append(frozenset(component))
    LOGGER.debug("Found %d strong components", len(components))
    return components


def reduced_graph(pg: ProgramGraph, components: list[frozenset[str]]) -> nx.DiGraph:
    """DAG over component indices with an edge wherever the program graph crosses components."""
    owner = {node: index for index, component in enumerate(components) for node in component}
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(components)))
    for edge in pg.edges:
        source, target = owner[edge.source], owner[edge.target]
        if source != target:
            graph.add_edge(source, target)
    return graph


def natural_loops(pg: ProgramGraph, numbering: RPNumbering) -> dict[str, frozenset[str]]:
    """``L[q]`` is the natural loop headed at ``q`` (empty when ``q`` heads none).

    Raises :class:`NonReducible` when a back edge is not a dominator edge.
    """
    rp = numbering.rp
    loops: dict[str, set[str]] = {node: set() for node in pg.nodes}
    for edge in back_edges(pg, numbering):
        header = edge.target
        loops[header].add(header)
        pending = [edge.source]
        while pending:
            node = pending.pop()
            if rp[header] <= rp[node]:
                if node in loops[header]:
                    continue
                loops[header].add(node)
                pending.extend(e.source for e in pg.in_edges(node))
            else:
                raise NonReducible(edge)
    return {node: frozenset(members) for node, members in loops.items()}


def natural_components(pg: ProgramGraph, loops: Mapping[str, frozenset[str]]) -> list[frozenset[str]]:
    """Natural loops plus a singleton for every node in no loop."""
    components = [members for members in loops.values() if members]
    covered = frozenset().union(*components) if components else frozenset()
    components += [frozenset({node}) for node in pg.nodes if node not in covered]
    return list(dict.fromkeys(components))


def graph_of_loops(pg: ProgramGraph, loops: Mapping[str, frozenset[str]]) -> nx.DiGraph:
    """Edges go from inner to enclosing components and between disjoint adjacent ones."""
    components = natural_components(pg, loops)
    graph = nx.DiGraph()
    graph.add_nodes_from(components)
    for inner in components:
        for outer in components:
            if inner < outer:
                graph.add_edge(inner, outer)
            elif not inner & outer and any(edge.target in outer for node in inner for edge in pg.out_edges(node)):
                graph.add_edge(inner, outer)
    return graph


def dominator_edges(pg: ProgramGraph) -> list[Edge]:
    """Edges whose target lies on every path from the initial node to their source.

    Brute force: remove the target and test whether the source is still reachable.
    """
    graph = _successor_graph(pg)
    result = []
    for edge in pg.edges:
        if edge.target in (edge.source, pg.initial):
            result.append(edge)
            continue
        pruned = graph.copy()
        pruned.remove_node(edge.target)
        if edge.source not in nx.descendants(pruned, pg.initial) | {pg.initial}:
            result.append(edge)
    return result


def is_reducible(pg: ProgramGraph) -> bool:
    """Removing the dominator edges leaves an acyclic graph."""
    dominating = set(dominator_edges(pg))
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(pg.nodes)
    graph.add_edges_from((e.source, e.target) for e in pg.edges if e not in dominating)
    return nx.is_directed_acyclic_graph(graph)
