from __future__ import annotations
"""Data models for program graphs, memories and execution traces."""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from types import MappingProxyType
from typing import Any, Iterator, Mapping, Optional

from .parser import walk
from .syntax import Action, ArrayAssign, ArrayLength, ArrayRef, Assign, Input, InputArray, Output, Var, pretty

INITIAL_NODE = "q▷"
FINAL_NODE = "q◀"


@dataclass(frozen=True)
class Edge:
    """A single labelled edge ``(source, action, target)`` of a program graph."""

    source: str
    action: Action
    target: str

    @property
    def label(self) -> str:
        return pretty(self.action)

    def __str__(self) -> str:
        return f"({self.source}, {self.label}, {self.target})"


def _names_in(action: Action) -> tuple[set[str], set[str], set[str]]:
    variables: set[str] = set()
    arrays: set[str] = set()
    channels: set[str] = set()
    for node in walk(action):
        if isinstance(node, Var):
            variables.add(node.name)
        elif isinstance(node, Assign):
            variables.add(node.var)
        elif isinstance(node, Input):
            variables.add(node.var)
            channels.add(node.channel)
        elif isinstance(node, (ArrayRef, ArrayLength, ArrayAssign)):
            arrays.add(node.array)
        elif isinstance(node, InputArray):
            arrays.add(node.array)
            channels.add(node.channel)
        elif isinstance(node, Output):
            channels.add(node.channel)
    return variables, arrays, channels


@dataclass(frozen=True)
class ProgramGraph:
    """Nodes, initial and final node and the ordered edge sequence of a program."""

    nodes: tuple[str, ...]
    initial: str
    final: str
    edges: tuple[Edge, ...]

    @cached_property
    def actions(self) -> frozenset[Action]:
        return frozenset(edge.action for edge in self.edges)

    @cached_property
    def variables(self) -> frozenset[str]:
        return frozenset(name for edge in self.edges for name in _names_in(edge.action)[0])

    @cached_property
    def arrays(self) -> frozenset[str]:
        return frozenset(name for edge in self.edges for name in _names_in(edge.action)[1])

    @cached_property
    def channels(self) -> frozenset[str]:
        return frozenset(name for edge in self.edges for name in _names_in(edge.action)[2])

    def out_edges(self, node: str) -> list[Edge]:
        return [edge for edge in self.edges if edge.source == node]

    def in_edges(self, node: str) -> list[Edge]:
        return [edge for edge in self.edges if edge.target == node]

    def successors(self, node: str) -> list[str]:
        return [edge.target for edge in self.out_edges(node)]


class MemoryFormatError(ValueError):
    """Raised when an initial memory is malformed."""


def _freeze_sequences(values: Mapping[str, Any]) -> Mapping[str, tuple[int, ...]]:
    return MappingProxyType({name: tuple(int(v) for v in seq) for name, seq in sorted(values.items())})


@dataclass(frozen=True)
class Memory:
    """Concrete memory: variables, arrays and channels (front of a channel is the next input)."""

    variables: Mapping[str, int] = field(default_factory=dict)
    arrays: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    channels: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "variables", MappingProxyType({name: int(v) for name, v in sorted(self.variables.items())})
        )
        object.__setattr__(self, "arrays", _freeze_sequences(self.arrays))
        object.__setattr__(self, "channels", _freeze_sequences(self.channels))

    def __hash__(self) -> int:
        return hash(
            (
                tuple(self.variables.items()),
                tuple(self.arrays.items()),
                tuple(self.channels.items()),
            )
        )

    def with_variable(self, name: str, value: int) -> "Memory":
        variables = dict(self.variables)
        variables[name] = value
        return Memory(variables, self.arrays, self.channels)

    def with_entry(self, array: str, index: int, value: int) -> "Memory":
        entries = list(self.arrays[array])
        entries[index] = value
        arrays = dict(self.arrays)
        arrays[array] = tuple(entries)
        return Memory(self.variables, arrays, self.channels)

    def with_channel(self, channel: str, values: tuple[int, ...]) -> "Memory":
        channels = dict(self.channels)
        channels[channel] = tuple(values)
        return Memory(self.variables, self.arrays, channels)

    def to_json(self) -> dict[str, Any]:
        return {
            "vars": dict(self.variables),
            "arrays": {name: list(seq) for name, seq in self.arrays.items()},
            "channels": {name: list(seq) for name, seq in self.channels.items()},
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "Memory":
        if not isinstance(payload, Mapping):
            raise MemoryFormatError("A memory must be a JSON object")
        unknown = set(payload) - {"vars", "arrays", "channels"}
        if unknown:
            raise MemoryFormatError(f"Unknown memory sections: {', '.join(sorted(unknown))}")
        variables = payload.get("vars", {})
        arrays = payload.get("arrays", {})
        channels = payload.get("channels", {})
        try:
            variables = {str(name): _as_int(value) for name, value in variables.items()}
            arrays = {str(name): [_as_int(v) for v in seq] for name, seq in arrays.items()}
            channels = {str(name): [_as_int(v) for v in seq] for name, seq in channels.items()}
        except (AttributeError, TypeError) as exc:
            raise MemoryFormatError(f"Malformed memory: {exc}") from None
        for name, seq in arrays.items():
            if not seq:
                raise MemoryFormatError(f"Array '{name}' must have a positive length")
        return cls(variables, arrays, channels)

    def covers(self, pg: ProgramGraph) -> list[str]:
        """Return the identifiers of ``pg`` that this memory does not bind."""
        missing = [name for name in sorted(pg.variables) if name not in self.variables]
        missing += [name for name in sorted(pg.arrays) if name not in self.arrays]
        missing += [name for name in sorted(pg.channels) if name not in self.channels]
        return missing


def _as_int(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"expected an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class Undefined:
    """The value of an expression whose meaning is undefined in a memory."""

    reason: str


@dataclass(frozen=True)
class Stuck:
    """The outcome of an action that cannot be executed in a memory."""

    reason: str


@dataclass(frozen=True)
class Configuration:
    node: str
    memory: Memory


@dataclass(frozen=True)
class Path:
    """Alternating node/action sequence ``q0, a1, q1, ..., an, qn``."""

    nodes: tuple[str, ...]
    actions: tuple[Action, ...] = ()

    def __post_init__(self):
        if len(self.nodes) != len(self.actions) + 1:
            raise ValueError("A path has exactly one more node than actions")

    @property
    def start(self) -> str:
        return self.nodes[0]

    @property
    def end(self) -> str:
        return self.nodes[-1]

    def __len__(self) -> int:
        return len(self.actions)

    def edges(self) -> Iterator[Edge]:
        for index, action in enumerate(self.actions):
            yield Edge(self.nodes[index], action, self.nodes[index + 1])

    def extend(self, edge: Edge) -> "Path":
        return Path(self.nodes + (edge.target,), self.actions + (edge.action,))


class ExecutionStatus(str, Enum):
    FINAL = "final"
    STUCK = "stuck"
    BUDGET = "budget"


@dataclass
class Trace:
    """Configurations visited by one run together with the realised path."""

    configurations: list[Configuration]
    path: Path
    status: ExecutionStatus
    reason: Optional[str] = None

    @property
    def last(self) -> Configuration:
        return self.configurations[-1]

    @property
    def steps(self) -> int:
        return len(self.path)
