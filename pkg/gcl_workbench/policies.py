from __future__ import annotations
"""Security lattices, data containers and security policies.

A policy associates every data container with an element of a security lattice;
a flow from one container to another is secure when the level of the source is
below the level of the target.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from itertools import product as cartesian
from types import MappingProxyType
from typing import Any, Hashable, Iterable, Mapping, Sequence

import networkx as nx

ALL = "*"


class PolicyFormatError(ValueError):
    """Raised when a policy payload cannot be turned into a security policy."""


class CycleInHasse(ValueError):
    """Raised when the edges of a Hasse diagram form a cycle."""


class NotALattice(ValueError):
    """Raised when two levels have no least upper bound or no greatest lower bound."""


class ContainerKind(str, Enum):
    VARIABLE = "variable"
    ENTRIES = "entries"
    LENGTH = "length"


@dataclass(frozen=True, order=True)
class Container:
    """A variable ``x``, the entries ``A[]`` of an array or its length ``A#``."""

    name: str
    kind: ContainerKind = ContainerKind.VARIABLE

    def __str__(self) -> str:
        if self.kind is ContainerKind.ENTRIES:
            return f"{self.name}[]"
        if self.kind is ContainerKind.LENGTH:
            return f"{self.name}#"
        return self.name


def variable(name: str) -> Container:
    return Container(name, ContainerKind.VARIABLE)


def entries(array: str) -> Container:
    return Container(array, ContainerKind.ENTRIES)


def length(array: str) -> Container:
    return Container(array, ContainerKind.LENGTH)


def parse_container(text: str) -> Container:
    text = text.strip()
    if text.endswith("[]"):
        container = entries(text[:-2])
    elif text.endswith("#"):
        container = length(text[:-1])
    else:
        container = variable(text)
    if not container.name.isidentifier():
        raise PolicyFormatError(f"{text!r} is not a data container")
    return container


class Order(str, Enum):
    RESTRICTION = "restriction"
    PERMISSION = "permission"


class SecurityLattice(ABC):
    """A finite partial order of security levels; data may flow upwards."""

    kind: str = "lattice"

    @property
    @abstractmethod
    def elements(self) -> tuple[Hashable, ...]: ...

    @abstractmethod
    def leq(self, left: Hashable, right: Hashable) -> bool: ...

    @abstractmethod
    def parse_level(self, value: Any) -> Hashable:
        """Read a level as written in a policy file."""

    @abstractmethod
    def format_level(self, level: Hashable) -> str: ...

    def _extreme(self, candidates: list[Hashable], left: Hashable, right: Hashable, *, least: bool) -> Hashable:
        for candidate in candidates:
            if all(self.leq(candidate, other) if least else self.leq(other, candidate) for other in candidates):
                return candidate
        what = "least upper bound" if least else "greatest lower bound"
        raise NotALattice(
            f"{self.format_level(left)} and {self.format_level(right)} have no {what} in the {self.kind} lattice"
        )

    def join(self, left: Hashable, right: Hashable) -> Hashable:
        uppers = [e for e in self.elements if self.leq(left, e) and self.leq(right, e)]
        return self._extreme(uppers, left, right, least=True)

    def meet(self, left: Hashable, right: Hashable) -> Hashable:
        lowers = [e for e in self.elements if self.leq(e, left) and self.leq(e, right)]
        return self._extreme(lowers, left, right, least=False)

    @property
    def bottom(self) -> Hashable:
        result = self.elements[0]
        for element in self.elements[1:]:
            result = self.meet(result, element)
        return result

    @property
    def top(self) -> Hashable:
        result = self.elements[0]
        for element in self.elements[1:]:
            result = self.join(result, element)
        return result

    def join_all(self, levels: Iterable[Hashable]) -> Hashable:
        result = self.bottom
        for level in levels:
            result = self.join(result, level)
        return result

    def meet_all(self, levels: Iterable[Hashable]) -> Hashable:
        result = self.top
        for level in levels:
            result = self.meet(result, level)
        return result

    def require_lattice(self) -> None:
        """Raise :class:`NotALattice` unless every pair of levels has a join and a meet."""
        for left, right in combinations(self.elements, 2):
            self.join(left, right)
            self.meet(left, right)


class HasseLattice(SecurityLattice):
    """Levels listed explicitly; ``⊑`` is the reflexive and transitive closure of the edges."""

    kind = "hasse"

    def __init__(self, elements: Sequence[str], edges: Iterable[tuple[str, str]]):
        if not elements:
            raise PolicyFormatError("A Hasse diagram needs at least one element")
        graph = nx.DiGraph()
        graph.add_nodes_from(elements)
        for lower, upper in edges:
            for name in (lower, upper):
                if name not in graph:
                    raise PolicyFormatError(f"Edge mentions unknown level {name!r}")
            graph.add_edge(lower, upper)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise CycleInHasse("The Hasse diagram has a cycle: " + " -> ".join(edge[0] for edge in cycle))
        self._elements = tuple(dict.fromkeys(elements))
        self._above = {node: nx.descendants(graph, node) | {node} for node in graph}

    @property
    def elements(self) -> tuple[str, ...]:
        return self._elements

    def leq(self, left: str, right: str) -> bool:
        return right in self._above[left]

    def parse_level(self, value: Any) -> str:
        if not isinstance(value, str) or value not in self._above:
            raise PolicyFormatError(f"Unknown security level {value!r}")
        return value

    def format_level(self, level: str) -> str:
        return level


def _subset_leq(order: Order, left: frozenset, right: frozenset) -> bool:
    return left <= right if order is Order.RESTRICTION else left >= right


class ComponentLattice(SecurityLattice):
    """Sets of security categories ordered by ``⊆`` (restrictions) or ``⊇`` (permissions)."""

    kind = "components"

    def __init__(self, categories: Iterable[str], order: Order | str = Order.RESTRICTION):
        self.categories = frozenset(categories)
        if not self.categories:
            raise PolicyFormatError("A component lattice needs at least one category")
        self.order = Order(order)

    @property
    def elements(self) -> tuple[frozenset, ...]:
        ordered = sorted(self.categories)
        return tuple(
            frozenset(subset) for size in range(len(ordered) + 1) for subset in combinations(ordered, size)
        )

    def leq(self, left: frozenset, right: frozenset) -> bool:
        return _subset_leq(self.order, left, right)

    def join(self, left: frozenset, right: frozenset) -> frozenset:
        return left | right if self.order is Order.RESTRICTION else left & right

    def meet(self, left: frozenset, right: frozenset) -> frozenset:
        return left & right if self.order is Order.RESTRICTION else left | right

    @property
    def bottom(self) -> frozenset:
        return frozenset() if self.order is Order.RESTRICTION else self.categories

    @property
    def top(self) -> frozenset:
        return self.categories if self.order is Order.RESTRICTION else frozenset()

    def require_lattice(self) -> None:
        return None

    def parse_level(self, value: Any) -> frozenset:
        if value == ALL or value == [ALL]:
            return self.categories
        if not isinstance(value, list) or not all(isinstance(item, str) for item in value):
            raise PolicyFormatError(f"A security component is a list of categories, not {value!r}")
        unknown = set(value) - self.categories
        if unknown:
            raise PolicyFormatError(f"Unknown security categories {sorted(unknown)}")
        return frozenset(value)

    def format_level(self, level: frozenset) -> str:
        return "{" + ",".join(sorted(level)) + "}"


Label = tuple[frozenset, ...]


class LabelLattice(SecurityLattice):
    """Decentralised labels: every principal maps to a set of principals, compared pointwise."""

    kind = "dlm"

    def __init__(self, principals: Iterable[str], order: Order | str = Order.RESTRICTION):
        self.principals = tuple(sorted(set(principals)))
        if not self.principals:
            raise PolicyFormatError("A decentralised label lattice needs at least one principal")
        self.order = Order(order)
        self._components = ComponentLattice(self.principals, self.order)

    @property
    def elements(self) -> tuple[Label, ...]:
        return tuple(cartesian(self._components.elements, repeat=len(self.principals)))

    def leq(self, left: Label, right: Label) -> bool:
        return all(_subset_leq(self.order, l, r) for l, r in zip(left, right))

    def join(self, left: Label, right: Label) -> Label:
        return tuple(self._components.join(l, r) for l, r in zip(left, right))

    def meet(self, left: Label, right: Label) -> Label:
        return tuple(self._components.meet(l, r) for l, r in zip(left, right))

    @property
    def bottom(self) -> Label:
        return (self._components.bottom,) * len(self.principals)

    @property
    def top(self) -> Label:
        return (self._components.top,) * len(self.principals)

    def require_lattice(self) -> None:
        return None

    def parse_level(self, value: Any) -> Label:
        if not isinstance(value, Mapping):
            raise PolicyFormatError(f"A decentralised label maps principals to readers, not {value!r}")
        if ALL in value:
            if len(value) != 1:
                raise PolicyFormatError("A label using '*' for all principals may not list principals")
            value = {principal: value[ALL] for principal in self.principals}
        missing = set(self.principals) - set(value)
        unknown = set(value) - set(self.principals)
        if missing or unknown:
            # omitted principals are rejected rather than defaulted
            raise PolicyFormatError(
                f"A label must name every principal exactly once (missing {sorted(missing)}, unknown {sorted(unknown)})"
            )
        return tuple(self._components.parse_level(value[principal]) for principal in self.principals)

    def format_level(self, level: Label) -> str:
        parts = [f"{principal}->{self._components.format_level(readers)}" for principal, readers in zip(self.principals, level)]
        return "[" + ", ".join(parts) + "]"


@dataclass(frozen=True)
class SecurityPolicy:
    lattice: SecurityLattice
    assoc: Mapping[Container, Hashable]

    def level(self, container: Container) -> Hashable:
        try:
            return self.assoc[container]
        except KeyError:
            raise PolicyFormatError(f"The policy gives no security level for {container}") from None

    def require_covers(self, containers: Iterable[Container]) -> None:
        missing = sorted(str(c) for c in containers if c not in self.assoc)
        if missing:
            raise PolicyFormatError("The policy gives no security level for " + ", ".join(missing))

    def permits(self, source: Container, target: Container) -> bool:
        return self.lattice.leq(self.level(source), self.level(target))


def build_lattice(descriptor: Mapping[str, Any]) -> SecurityLattice:
    """Build a lattice from its policy-file description.

    Hasse diagrams are not checked for joins and meets here; see
    :meth:`SecurityLattice.require_lattice`.
    """
    if not isinstance(descriptor, Mapping):
        raise PolicyFormatError("The lattice description must be an object")
    kind = descriptor.get("kind")
    try:
        if kind == "hasse":
            edges = [tuple(edge) for edge in descriptor.get("edges", [])]
            if any(len(edge) != 2 for edge in edges):
                raise PolicyFormatError("Hasse edges are [lower, upper] pairs")
            return HasseLattice(list(descriptor["elements"]), edges)
        if kind == "components":
            return ComponentLattice(descriptor["categories"], descriptor.get("order", Order.RESTRICTION))
        if kind == "dlm":
            return LabelLattice(descriptor["principals"], descriptor.get("order", Order.RESTRICTION))
    except KeyError as exc:
        raise PolicyFormatError(f"The {kind} lattice description lacks {exc.args[0]!r}") from None
    except (PolicyFormatError, CycleInHasse):
        raise
    except (TypeError, ValueError) as exc:
        raise PolicyFormatError(f"Malformed {kind} lattice description: {exc}") from None
    raise PolicyFormatError(f"Unknown lattice kind {kind!r}; use hasse, components or dlm")


def load_policy(payload: Mapping[str, Any]) -> SecurityPolicy:
    """Read ``{"lattice": {...}, "assoc": {"x": level, "A[]": level, "A#": level}}``."""
    if not isinstance(payload, Mapping) or "lattice" not in payload or "assoc" not in payload:
        raise PolicyFormatError("A policy needs a 'lattice' and an 'assoc' entry")
    lattice = build_lattice(payload["lattice"])
    assoc_payload = payload["assoc"]
    if not isinstance(assoc_payload, Mapping):
        raise PolicyFormatError("The security association must be an object")
    assoc = {parse_container(name): lattice.parse_level(level) for name, level in assoc_payload.items()}
    return SecurityPolicy(lattice, MappingProxyType(assoc))
