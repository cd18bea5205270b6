from __future__ import annotations
"""Worklist representations for the worklist algorithm.

Every worklist offers ``insert``, ``extract`` and emptiness; the list-based ones
refill a list of current nodes from a pending set, and count those refills as
``rounds``.
"""

import logging
from abc import ABC, abstractmethod
from collections import deque
from enum import Enum

import networkx as nx

from .models import ProgramGraph
from .preprocessing import (
    RPNumbering,
    dfs_spanning_tree,
    graph_of_loops,
    natural_loops,
    strong_components,
)

LOGGER = logging.getLogger(__name__)


class Strategy(str, Enum):
    SET = "set"
    LIFO = "lifo"
    FIFO = "fifo"
    ROUND_ROBIN = "round_robin"
    RPO = "rpo"
    SCC = "scc"
    NATLOOP = "natloop"


STRATEGY_NAMES = tuple(strategy.value for strategy in Strategy)
CHAOTIC = "chaotic"


class Worklist(ABC):
    rounds: int = 0

    @abstractmethod
    def insert(self, node: str) -> None: ...

    @abstractmethod
    def extract(self) -> str: ...

    @abstractmethod
    def __len__(self) -> int:
        """Number of entries still to be extracted."""

    def __bool__(self) -> bool:
        return len(self) > 0


class SetWorklist(Worklist):
    """An unordered set; extraction picks the node with the smallest reverse postorder number."""

    def __init__(self, numbering: RPNumbering):
        self._rp = numbering.rp
        self._nodes: set[str] = set()

    def insert(self, node: str) -> None:
        self._nodes.add(node)

    def extract(self) -> str:
        node = min(self._nodes, key=self._rp.__getitem__)
        self._nodes.remove(node)
        return node

    def __len__(self) -> int:
        return len(self._nodes)


class LifoWorklist(Worklist):
    def __init__(self):
        self._stack: list[str] = []

    def insert(self, node: str) -> None:
        self._stack.append(node)

    def extract(self) -> str:
        return self._stack.pop()

    def __len__(self) -> int:
        return len(self._stack)


class FifoWorklist(Worklist):
    def __init__(self):
        self._queue: deque[str] = deque()

    def insert(self, node: str) -> None:
        self._queue.append(node)

    def extract(self) -> str:
        return self._queue.popleft()

    def __len__(self) -> int:
        return len(self._queue)


class RoundRobinWorklist(Worklist):
    """A list ``V`` of the current round and a flag ``t`` asking for another round.

    A new round starts at the initial node and then visits every other node in
    reverse postorder.
    """

    def __init__(self, numbering: RPNumbering, initial: str):
        self._numbering = numbering
        self._initial = initial
        self._current: deque[str] = deque()
        self._again = False

    def insert(self, node: str) -> None:
        self._again = True

    def extract(self) -> str:
        if self._current:
            return self._current.popleft()
        others = [node for node in self._numbering.order if node != self._initial]
        self._current = deque(others)
        self._again = False
        self.rounds += 1
        LOGGER.debug("Round robin: starting round %d", self.rounds)
        return self._initial

    def __len__(self) -> int:
        return len(self._current) + (1 if self._again and not self._current else 0)


class _PendingWorklist(Worklist):
    """Current list ``V`` plus pending set ``P``; subclasses choose which pending nodes form the next list."""

    def __init__(self, numbering: RPNumbering):
        self._numbering = numbering
        self._current: deque[str] = deque()
        self._pending: set[str] = set()

    def insert(self, node: str) -> None:
        if node not in self._current:
            self._pending.add(node)

    @abstractmethod
    def _next_batch(self) -> set[str]: ...

    def extract(self) -> str:
        if not self._current:
            batch = self._next_batch()
            self._pending -= batch
            self._current = deque(self._numbering.sort(batch))
            self.rounds += 1
            LOGGER.debug("%s: next list %s", type(self).__name__, list(self._current))
        return self._current.popleft()

    def __len__(self) -> int:
        return len(self._current) + len(self._pending)


class ReversePostorderWorklist(_PendingWorklist):
    def _next_batch(self) -> set[str]:
        return set(self._pending)


class StrongComponentWorklist(_PendingWorklist):
    """Takes the pending nodes of the topmost strong component with pending nodes.

    With ``whole_components`` the entire component is taken instead.
    """

    def __init__(self, numbering: RPNumbering, components: list[frozenset[str]], *, whole_components: bool = False):
        super().__init__(numbering)
        self._components = components
        self._whole = whole_components

    def _next_batch(self) -> set[str]:
        # the component list is topologically sorted, so the first hit is topmost
        for component in self._components:
            if component & self._pending:
                return set(component) if self._whole else set(component & self._pending)
        raise RuntimeError("No strong component holds a pending node")


class NaturalLoopWorklist(_PendingWorklist):
    """Takes the pending nodes of a topmost natural component (inner loops come first)."""

    def __init__(self, numbering: RPNumbering, loops_graph: nx.DiGraph, *, whole_components: bool = False):
        super().__init__(numbering)
        self._graph = loops_graph
        self._ancestors = {component: nx.ancestors(loops_graph, component) for component in loops_graph}
        self._whole = whole_components

    def _next_batch(self) -> set[str]:
        pending = self._pending
        candidates = [
            component
            for component in self._graph
            if component & pending and not any(ancestor & pending for ancestor in self._ancestors[component])
        ]
        if not candidates:
            raise RuntimeError("No natural component holds a pending node")
        rp = self._numbering.rp
        chosen = min(candidates, key=lambda component: min(rp[node] for node in component))
        return set(chosen) if self._whole else set(chosen & pending)


def make_worklist(
    strategy: Strategy | str,
    pg: ProgramGraph,
    *,
    numbering: RPNumbering | None = None,
    whole_components: bool = False,
) -> Worklist:
    """Build a worklist for ``pg``; graph preprocessing happens here, on the graph given."""
    strategy = Strategy(strategy)
    if strategy is Strategy.LIFO:
        return LifoWorklist()
    if strategy is Strategy.FIFO:
        return FifoWorklist()
    numbering = numbering or dfs_spanning_tree(pg)
    if strategy is Strategy.SET:
        return SetWorklist(numbering)
    if strategy is Strategy.ROUND_ROBIN:
        return RoundRobinWorklist(numbering, pg.initial)
    if strategy is Strategy.RPO:
        return ReversePostorderWorklist(numbering)
    if strategy is Strategy.SCC:
        return StrongComponentWorklist(numbering, strong_components(pg, numbering), whole_components=whole_components)
    loops = natural_loops(pg, numbering)
    return NaturalLoopWorklist(numbering, graph_of_loops(pg, loops), whole_components=whole_components)

