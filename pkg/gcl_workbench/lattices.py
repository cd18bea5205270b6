from __future__ import annotations
"""Analysis domains: pointed semi-lattices and their standard constructions."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Any, Callable, Generic, Hashable, Iterable, Mapping, Optional, Sequence, TypeVar

import networkx as nx

E = TypeVar("E")


class Domain(ABC, Generic[E]):
    """A partial order with a least element and binary least upper bounds.

    ``acc_note`` explains why the ascending chain condition holds; ``None`` means
    it does not and the domain may only be solved with a widening.
    """

    name: str = "domain"
    acc_note: Optional[str] = None

    @property
    @abstractmethod
    def bottom(self) -> E: ...

    @abstractmethod
    def leq(self, left: E, right: E) -> bool: ...

    @abstractmethod
    def join(self, left: E, right: E) -> E: ...

    @property
    def satisfies_acc(self) -> bool:
        return self.acc_note is not None

    @property
    def has_top(self) -> bool:
        return False

    @property
    def top(self) -> E:
        raise NotImplementedError(f"{self.name} has no top element")

    @property
    def supports_widening(self) -> bool:
        return False

    def widen(self, left: E, right: E) -> E:
        raise NotImplementedError(f"{self.name} has no widening")

    def join_all(self, elements: Iterable[E]) -> E:
        result = self.bottom
        for element in elements:
            result = self.join(result, element)
        return result


class CustomDomain(Domain[Any]):
    """Domain assembled from plain functions."""

    def __init__(
        self,
        *,
        leq: Callable[[Any, Any], bool],
        join: Callable[[Any, Any], Any],
        bottom: Any,
        top: Any = None,
        widen: Callable[[Any, Any], Any] | None = None,
        acc_note: str | None = None,
        name: str = "custom",
    ):
        self._leq = leq
        self._join = join
        self._bottom = bottom
        self._top = top
        self._widen = widen
        self.acc_note = acc_note
        self.name = name

    @property
    def bottom(self):
        return self._bottom

    def leq(self, left, right) -> bool:
        return self._leq(left, right)

    def join(self, left, right):
        return self._join(left, right)

    @property
    def has_top(self) -> bool:
        return self._top is not None

    @property
    def top(self):
        if self._top is None:
            return super().top
        return self._top

    @property
    def supports_widening(self) -> bool:
        return self._widen is not None

    def widen(self, left, right):
        if self._widen is None:
            return super().widen(left, right)
        return self._widen(left, right)


class PowersetDomain(Domain[frozenset]):
    """Subsets of a finite universe ordered by inclusion or by reverse inclusion."""

    def __init__(self, universe: Iterable[Hashable] | None = None, orientation: str = "subset"):
        if orientation not in ("subset", "superset"):
            raise ValueError(f"Unknown orientation {orientation!r}")
        if orientation == "superset" and universe is None:
            raise ValueError("A superset-ordered powerset needs an explicit universe")
        self.universe = frozenset(universe) if universe is not None else None
        self.orientation = orientation
        self.name = f"powerset({orientation})"
        self.acc_note = "finite universe" if self.universe is not None else "finitely many facts occur"

    @property
    def bottom(self) -> frozenset:
        if self.orientation == "subset":
            return frozenset()
        return self.universe

    @property
    def has_top(self) -> bool:
        return self.universe is not None or self.orientation == "superset"

    @property
    def top(self) -> frozenset:
        if self.orientation == "superset":
            return frozenset()
        if self.universe is None:
            return super().top
        return self.universe

    def leq(self, left: frozenset, right: frozenset) -> bool:
        if self.orientation == "subset":
            return left <= right
        return left >= right

    def join(self, left: frozenset, right: frozenset) -> frozenset:
        if self.orientation == "subset":
            return frozenset(left) | right
        return frozenset(left) & right


class ProductDomain(Domain[tuple]):
    def __init__(self, first: Domain, second: Domain):
        self.first = first
        self.second = second
        self.name = f"{first.name} x {second.name}"
        if first.satisfies_acc and second.satisfies_acc:
            self.acc_note = "both components satisfy the ascending chain condition"

    @property
    def bottom(self) -> tuple:
        return (self.first.bottom, self.second.bottom)

    @property
    def has_top(self) -> bool:
        return self.first.has_top and self.second.has_top

    @property
    def top(self) -> tuple:
        return (self.first.top, self.second.top)

    def leq(self, left: tuple, right: tuple) -> bool:
        return self.first.leq(left[0], right[0]) and self.second.leq(left[1], right[1])

    def join(self, left: tuple, right: tuple) -> tuple:
        return (self.first.join(left[0], right[0]), self.second.join(left[1], right[1]))

    @property
    def supports_widening(self) -> bool:
        return self.first.supports_widening and self.second.supports_widening

    def widen(self, left: tuple, right: tuple) -> tuple:
        return (self.first.widen(left[0], right[0]), self.second.widen(left[1], right[1]))


class MapDomain(Domain[Mapping]):
    """Total mappings from a finite key set, ordered pointwise."""

    def __init__(self, keys: Iterable[Hashable], values: Domain):
        self.keys = tuple(sorted(keys, key=repr))
        if not self.keys:
            raise ValueError("A map domain needs at least one key")
        self.values = values
        self.name = f"map({values.name})"
        if values.satisfies_acc:
            self.acc_note = "finitely many keys over a domain with the ascending chain condition"

    @property
    def bottom(self) -> dict:
        return {key: self.values.bottom for key in self.keys}

    @property
    def has_top(self) -> bool:
        return self.values.has_top

    @property
    def top(self) -> dict:
        return {key: self.values.top for key in self.keys}

    def leq(self, left: Mapping, right: Mapping) -> bool:
        return all(self.values.leq(left[key], right[key]) for key in self.keys)

    def join(self, left: Mapping, right: Mapping) -> dict:
        return {key: self.values.join(left[key], right[key]) for key in self.keys}

    @property
    def supports_widening(self) -> bool:
        return self.values.supports_widening

    def widen(self, left: Mapping, right: Mapping) -> dict:
        return {key: self.values.widen(left[key], right[key]) for key in self.keys}


def product(first: Domain, second: Domain) -> ProductDomain:
    return ProductDomain(first, second)


def map_domain(keys: Iterable[Hashable], values: Domain) -> MapDomain:
    return MapDomain(keys, values)


def relation_to_mapping(facts: Iterable[tuple], keys: Iterable[Hashable] = ()) -> dict:
    """Turn tuples ``(k, rest...)`` into a mapping ``k -> {rest}``."""
    mapping: dict = {key: frozenset() for key in keys}
    for fact in facts:
        key, rest = fact[0], tuple(fact[1:])
        mapping[key] = mapping.get(key, frozenset()) | {rest}
    return mapping


def mapping_to_relation(mapping: Mapping) -> frozenset:
    return frozenset((key, *rest) for key, values in mapping.items() for rest in values)


@dataclass(frozen=True)
class LawReport:
    passed: bool
    law: Optional[str] = None
    counterexample: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.passed


def check_domain_laws(domain: Domain, samples: Sequence) -> LawReport:
    """Check the partial order and join laws on every pair and triple of samples."""
    if not samples:
        raise ValueError("At least one sample is needed")
    bottom = domain.bottom
    for d in samples:
        if not domain.leq(d, d):
            return LawReport(False, "reflexivity", (d,))
        if not domain.leq(bottom, d):
            return LawReport(False, "bottom is least", (d,))
        if domain.join(d, d) != d:
            return LawReport(False, "idempotence", (d,))
        if domain.join(d, bottom) != d:
            return LawReport(False, "unit", (d,))
    for d1, d2 in cartesian(samples, repeat=2):
        if domain.join(d1, d2) != domain.join(d2, d1):
            return LawReport(False, "commutativity", (d1, d2))
        if domain.leq(d1, d2) and domain.leq(d2, d1) and d1 != d2:
            return LawReport(False, "anti-symmetry", (d1, d2))
        if domain.leq(d1, d2) != (domain.join(d1, d2) == d2):
            return LawReport(False, "order agrees with join", (d1, d2))
    for d1, d2, d3 in cartesian(samples, repeat=3):
        if domain.join(domain.join(d1, d2), d3) != domain.join(d1, domain.join(d2, d3)):
            return LawReport(False, "associativity", (d1, d2, d3))
        if domain.leq(d1, d2) and domain.leq(d2, d3) and not domain.leq(d1, d3):
            return LawReport(False, "transitivity", (d1, d2, d3))
        upper = domain.leq(d1, d3) and domain.leq(d2, d3)
        if upper != domain.leq(domain.join(d1, d2), d3):
            return LawReport(False, "least upper bound", (d1, d2, d3))
    return LawReport(True)


def longest_ascending_chain(domain: Domain, samples: Iterable) -> int:
    """Number of elements in the longest strictly ascending chain among ``samples``."""
    elements = list(dict.fromkeys(_freeze(s) for s in samples))
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(elements)))
    for i, left in enumerate(elements):
        for j, right in enumerate(elements):
            if i != j and domain.leq(_thaw(left), _thaw(right)) and not domain.leq(_thaw(right), _thaw(left)):
                graph.add_edge(i, j)
    if not elements:
        return 0
    return nx.dag_longest_path_length(graph) + 1


def is_ascending_chain_bounded(domain: Domain, chain: Sequence, bound: int) -> bool:
    """True when ``chain`` ascends and has at most ``bound`` distinct elements."""
    for left, right in zip(chain, chain[1:]):
        if not domain.leq(left, right):
            raise ValueError(f"Not an ascending chain: {left!r} is not below {right!r}")
    distinct = 1 if chain else 0
    for left, right in zip(chain, chain[1:]):
        if not domain.leq(right, left):
            distinct += 1
    return distinct <= bound


def _freeze(value):
    if isinstance(value, Mapping):
        return ("__map__", tuple(sorted(value.items(), key=repr)))
    return value


def _thaw(value):
    if isinstance(value, tuple) and len(value) == 2 and value[0] == "__map__":
        return dict(value[1])
    return value
