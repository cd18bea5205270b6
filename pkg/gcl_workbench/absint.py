from __future__ import annotations
"""Galois connections, strong widenings, the collecting semantics and relational signs."""

import logging
from dataclasses import dataclass, field
from itertools import chain, combinations, product
from types import MappingProxyType
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

import networkx as nx

from . import intervals as ia
from .framework import AnalysisSpec, Direction
from .graphs import to_networkx
from .integers import AbstractMemory, MemoryDomain, SignAnalysis, analyze_aexp, analyze_bexp
from .lattices import CustomDomain, Domain, LawReport, PowersetDomain
from .models import Edge, Memory, ProgramGraph, Stuck
from .semantics import step_action
from .signs import NEGATIVE, POSITIVE, SIGNS, TRUE, ZERO, sign, sign_set
from .syntax import (
    Action,
    ArrayAssign,
    Assign,
    BExp,
    AExp,
    Input,
    InputArray,
    Output,
    Skip,
    Test,
)

LOGGER = logging.getLogger(__name__)

Widening = Callable[[Any, Any], Any]


class NotLoopFree(ValueError):
    """Raised when the collecting semantics is asked to solve a graph with a cycle."""


@dataclass(frozen=True)
class IntSet:
    """A set of integers: finitely many members plus whole sign cones (``-`` or ``+``)."""

    finite: frozenset[int] = frozenset()
    cones: frozenset[str] = frozenset()

    def __post_init__(self):
        cones = frozenset(self.cones)
        finite = set(self.finite)
        if ZERO in cones:
            finite.add(0)
            cones = cones - {ZERO}
        unknown = cones - SIGNS
        if unknown:
            raise ValueError(f"Unknown signs {sorted(unknown)}")
        object.__setattr__(self, "cones", cones)
        object.__setattr__(self, "finite", frozenset(n for n in finite if sign(n) not in cones))

    def __contains__(self, n: int) -> bool:
        return n in self.finite or sign(n) in self.cones

    def witnesses(self, per_cone: int = 3) -> frozenset[int]:
        """Finite members plus a few members of every cone."""
        extra = set()
        for cone in self.cones:
            step = 1 if cone == POSITIVE else -1
            extra |= {step * k for k in range(1, per_cone + 1)}
        return self.finite | frozenset(extra)

    def __str__(self) -> str:
        parts = [str(n) for n in sorted(self.finite)]
        if NEGATIVE in self.cones:
            parts.insert(0, "all negatives")
        if POSITIVE in self.cones:
            parts.append("all positives")
        return "{" + ", ".join(parts) + "}"


def _intset_leq(left: IntSet, right: IntSet) -> bool:
    return left.cones <= right.cones and all(n in right for n in left.finite)


def _intset_join(left: IntSet, right: IntSet) -> IntSet:
    return IntSet(left.finite | right.finite, left.cones | right.cones)


INTSET_DOMAIN = CustomDomain(
    leq=_intset_leq,
    join=_intset_join,
    bottom=IntSet(),
    top=IntSet(frozenset({0}), frozenset({NEGATIVE, POSITIVE})),
    name="sets of integers",
)


@dataclass(frozen=True)
class GaloisConnection:
    """``abs`` from the concrete to the abstract domain; ``below_con(c, a)`` decides ``c ⊑ con(a)``.

    ``con`` is only present when concretisations are representable in the
    concrete domain.
    """

    name: str
    concrete: Domain
    abstract: Domain
    abs: Callable[[Any], Any]
    below_con: Callable[[Any, Any], bool]
    con: Optional[Callable[[Any], Any]] = None


def sign_connection() -> GaloisConnection:
    def abstraction(values: IntSet) -> frozenset[str]:
        return sign_set(values.finite) | values.cones

    def concretisation(signs: frozenset[str]) -> IntSet:
        return IntSet(frozenset(), frozenset(signs))

    def below(values: IntSet, signs: frozenset[str]) -> bool:
        return _intset_leq(values, concretisation(signs))

    return GaloisConnection("signs", INTSET_DOMAIN, PowersetDomain(SIGNS), abstraction, below, concretisation)


def interval_domain(K: Iterable[int] | None = None) -> CustomDomain:
    endpoints = ia.Endpoints(K)
    return CustomDomain(
        leq=ia.leq,
        join=ia.join,
        bottom=ia.BOTTOM,
        top=ia.TOP,
        acc_note=None if endpoints.unrestricted else "finitely many endpoints",
        name="intervals" if endpoints.unrestricted else f"intervals over {list(endpoints.points)}",
    )


def interval_connection(K: Iterable[int]) -> GaloisConnection:
    """From unrestricted intervals to intervals with endpoints in ``K``."""
    endpoints = ia.Endpoints(K)

    def abstraction(value: ia.Interval) -> ia.Interval:
        if value.is_bottom:
            return ia.BOTTOM
        return endpoints.clamp(value.lo, value.hi)

    return GaloisConnection(
        "intervals",
        interval_domain(None),
        interval_domain(endpoints.points),
        abstraction,
        ia.leq,
        lambda value: value,
    )


def check_galois(gc: GaloisConnection, concrete_samples: Sequence, abstract_samples: Sequence) -> LawReport:
    """Check the adjunction and the derived laws on the samples; report the first failure."""
    if not concrete_samples or not abstract_samples:
        raise ValueError("Both sample sets must be nonempty")
    C, A = gc.concrete, gc.abstract
    if gc.abs(C.bottom) != A.bottom:
        return LawReport(False, "abs preserves bottom", (C.bottom,))
    for c in concrete_samples:
        if not gc.below_con(c, gc.abs(c)):
            return LawReport(False, "con after abs is extensive", (c,))
        if gc.con is not None and gc.abs(gc.con(gc.abs(c))) != gc.abs(c):
            return LawReport(False, "abs after con after abs is abs", (c,))
        for a in abstract_samples:
            if A.leq(gc.abs(c), a) != gc.below_con(c, a):
                return LawReport(False, "adjunction", (c, a))
    for c1, c2 in product(concrete_samples, repeat=2):
        if C.leq(c1, c2) and not A.leq(gc.abs(c1), gc.abs(c2)):
            return LawReport(False, "abs is monotone", (c1, c2))
        if gc.abs(C.join(c1, c2)) != A.join(gc.abs(c1), gc.abs(c2)):
            return LawReport(False, "abs preserves joins", (c1, c2))
    if gc.con is not None:
        for a in abstract_samples:
            if not A.leq(gc.abs(gc.con(a)), a):
                return LawReport(False, "abs after con is reductive", (a,))
        for a1, a2 in product(abstract_samples, repeat=2):
            if A.leq(a1, a2) and not C.leq(gc.con(a1), gc.con(a2)):
                return LawReport(False, "con is monotone", (a1, a2))
    return LawReport(True)


def induced_widening(gc: GaloisConnection) -> Widening:
    """``d1 ∇ d2 = con(abs(d1) ⊔ abs(d2))``; strong when the abstract domain has ACC."""
    if gc.con is None:
        raise ValueError(f"The {gc.name} connection has no representable concretisation")

    def widen(left, right):
        return gc.con(gc.abstract.join(gc.abs(left), gc.abs(right)))

    return widen


def with_bottom(domain: Domain, widen: Widening) -> Widening:
    """Return the other argument unchanged when one of them is bottom."""
    bottom = domain.bottom

    def widen_with_bottom(left, right):
        if right == bottom:
            return left
        if left == bottom:
            return right
        return widen(left, right)

    return widen_with_bottom


def interval_widening(K: Iterable[int]) -> Widening:
    """Keep a stable bound and round a growing one outwards to ``K``."""
    endpoints = ia.Endpoints(K)

    def widen(left: ia.Interval, right: ia.Interval) -> ia.Interval:
        if right.is_bottom:
            return left
        if left.is_bottom:
            return right
        lo = left.lo if left.lo <= right.lo else endpoints.floor(right.lo)
        hi = left.hi if left.hi >= right.hi else endpoints.ceil(right.hi)
        return ia.Interval(lo, hi)

    return widen


def collecting_transfer(action: Action, memories: Iterable[Memory]) -> frozenset[Memory]:
    """Run ``action`` on every memory, dropping those on which it gets stuck."""
    results = (step_action(action, memory) for memory in memories)
    return frozenset(result for result in results if not isinstance(result, Stuck))


def collecting_spec(pg: ProgramGraph, memories: Iterable[Memory]) -> AnalysisSpec:
    """Sets of memories on every node, starting from ``memories`` at the initial node."""
    domain = PowersetDomain()
    domain.acc_note = None
    return AnalysisSpec(
        "collecting semantics",
        domain,
        lambda edge: lambda states: collecting_transfer(edge.action, states),
        frozenset(memories),
        Direction.FORWARD,
    )


def collecting_solve(pg: ProgramGraph, memories: Iterable[Memory]) -> dict[str, frozenset[Memory]]:
    """The least collecting assignment of a loop-free graph."""
    graph = to_networkx(pg)
    if not nx.is_directed_acyclic_graph(graph):
        raise NotLoopFree("The collecting semantics is only solved on loop-free program graphs")
    spec = collecting_spec(pg, memories)
    assignment: dict[str, frozenset[Memory]] = {node: spec.domain.bottom for node in pg.nodes}
    assignment[pg.initial] = spec.initial
    for node in nx.lexicographical_topological_sort(graph):
        for edge in pg.out_edges(node):
            assignment[edge.target] = spec.domain.join(assignment[edge.target], spec.transfer(edge)(assignment[node]))
    LOGGER.debug("Collected %d memories at the final node", len(assignment[pg.final]))
    return assignment


@dataclass(frozen=True)
class RelSignDescriptor:
    """One sign per variable and a nonempty set of signs per array."""

    variables: Mapping[str, str] = field(default_factory=dict)
    arrays: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variables", MappingProxyType(dict(sorted(self.variables.items()))))
        arrays = {name: frozenset(signs) for name, signs in sorted(self.arrays.items())}
        empty = [name for name, signs in arrays.items() if not signs]
        if empty:
            raise ValueError(f"Array sign sets must be nonempty: {', '.join(empty)}")
        object.__setattr__(self, "arrays", MappingProxyType(arrays))

    def __hash__(self) -> int:
        return hash((tuple(self.variables.items()), tuple(self.arrays.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RelSignDescriptor):
            return NotImplemented
        return dict(self.variables) == dict(other.variables) and dict(self.arrays) == dict(other.arrays)

    def with_variable(self, name: str, s: str) -> "RelSignDescriptor":
        variables = dict(self.variables)
        variables[name] = s
        return RelSignDescriptor(variables, self.arrays)

    def with_array(self, name: str, signs: frozenset[str]) -> "RelSignDescriptor":
        arrays = dict(self.arrays)
        arrays[name] = signs
        return RelSignDescriptor(self.variables, arrays)

    def as_sign_memory(self) -> AbstractMemory:
        return AbstractMemory({n: frozenset({s}) for n, s in self.variables.items()}, dict(self.arrays))

    def __str__(self) -> str:
        parts = [f"{n}:{s}" for n, s in self.variables.items()]
        parts += [f"{n}:{{{','.join(sorted(signs))}}}" for n, signs in self.arrays.items()]
        return "(" + ", ".join(parts) + ")"


_SIGNS = SignAnalysis()


def rel_sign_aexp(a: AExp, descriptor: RelSignDescriptor) -> frozenset[str]:
    return analyze_aexp(_SIGNS, a, descriptor.as_sign_memory())


def rel_sign_bexp(b: BExp, descriptor: RelSignDescriptor) -> frozenset[str]:
    return analyze_bexp(_SIGNS, b, descriptor.as_sign_memory())


def _index_may_be_valid(signs: frozenset[str]) -> bool:
    return bool(signs & {ZERO, POSITIVE})


def _between(lower: frozenset[str], upper: frozenset[str]) -> Iterable[frozenset[str]]:
    optional = sorted(upper - lower)
    for size in range(len(optional) + 1):
        for extra in combinations(optional, size):
            yield lower | frozenset(extra)


def rel_sign_transfer(action: Action, descriptors: frozenset[RelSignDescriptor]) -> frozenset[RelSignDescriptor]:
    result: set[RelSignDescriptor] = set()
    for rho in descriptors:
        if isinstance(action, Skip):
            result.add(rho)
        elif isinstance(action, Test):
            if TRUE in rel_sign_bexp(action.cond, rho):
                result.add(rho)
        elif isinstance(action, Assign):
            result.update(rho.with_variable(action.var, s) for s in rel_sign_aexp(action.expr, rho))
        elif isinstance(action, Input):
            result.update(rho.with_variable(action.var, s) for s in SIGNS)
        elif isinstance(action, Output):
            if rel_sign_aexp(action.expr, rho):
                result.add(rho)
        elif isinstance(action, ArrayAssign):
            if not _index_may_be_valid(rel_sign_aexp(action.index, rho)):
                continue
            current = rho.arrays[action.array]
            # None stands for "no entry lost its sign"
            for assigned in rel_sign_aexp(action.expr, rho):
                upper = current | {assigned}
                for removed in chain([None], sorted(current)):
                    lower = (current - {removed}) | {assigned}
                    result.update(rho.with_array(action.array, signs) for signs in _between(lower, upper))
        elif isinstance(action, InputArray):
            if _index_may_be_valid(rel_sign_aexp(action.index, rho)):
                result.add(rho.with_array(action.array, SIGNS))
        else:
            raise TypeError(f"Not an action: {action!r}")
    return frozenset(result)


def describe(memory: Memory, *, names: Iterable[str] | None = None) -> RelSignDescriptor:
    """``(sign ∘ σ_V, Sign ∘ σ_A)``; channels are not described."""
    keep = set(names) if names is not None else None
    return RelSignDescriptor(
        {n: sign(v) for n, v in memory.variables.items() if keep is None or n in keep},
        {n: sign_set(v) for n, v in memory.arrays.items() if keep is None or n in keep},
    )


def rds_abstraction(memories: Iterable[Memory], *, names: Iterable[str] | None = None) -> frozenset[RelSignDescriptor]:
    return frozenset(describe(memory, names=names) for memory in memories)


def rds_contains(descriptors: frozenset[RelSignDescriptor], memory: Memory) -> bool:
    """Membership of ``memory`` in the concretisation of ``descriptors``."""
    names = set()
    for rho in descriptors:
        names |= set(rho.variables) | set(rho.arrays)
        break
    return describe(memory, names=names or None) in descriptors


def sign_abstraction(
    memories: Iterable[Memory], variables: Iterable[str], arrays: Iterable[str]
) -> AbstractMemory:
    """Detection-of-signs abstraction of a set of memories."""
    memories = list(memories)
    return AbstractMemory(
        {x: sign_set(m.variables[x] for m in memories) for x in variables},
        {A: frozenset().union(*(sign_set(m.arrays[A]) for m in memories)) for A in arrays},
    )


def rds_collapse(
    descriptors: Iterable[RelSignDescriptor], variables: Iterable[str], arrays: Iterable[str]
) -> AbstractMemory:
    """Forget the relations between descriptors, keeping the signs each name can have."""
    descriptors = list(descriptors)
    return AbstractMemory(
        {x: frozenset(rho.variables[x] for rho in descriptors) for x in variables},
        {A: frozenset().union(*(rho.arrays[A] for rho in descriptors)) for A in arrays},
    )


def _nonempty_subsets(signs: frozenset[str]) -> list[frozenset[str]]:
    ordered = sorted(signs)
    return [frozenset(c) for size in range(1, len(ordered) + 1) for c in combinations(ordered, size)]


def rds_expand(memory: AbstractMemory) -> frozenset[RelSignDescriptor]:
    """Every descriptor compatible with a sign memory."""
    variables = list(memory.variables)
    arrays = list(memory.arrays)
    choices = [sorted(memory.variables[x]) for x in variables]
    choices += [_nonempty_subsets(memory.arrays[A]) for A in arrays]
    result = set()
    for combination in product(*choices):
        result.add(
            RelSignDescriptor(
                dict(zip(variables, combination[: len(variables)])),
                dict(zip(arrays, combination[len(variables) :])),
            )
        )
    return frozenset(result)


def rds_chain(
    variables: Iterable[str], arrays: Iterable[str] = ()
) -> tuple[GaloisConnection, GaloisConnection]:
    """Sets of memories to descriptor sets, then descriptor sets to sign memories.

    Composing the two abstractions gives :func:`sign_abstraction`.
    """
    variables = tuple(sorted(variables))
    arrays = tuple(sorted(arrays))
    names = (*variables, *arrays)
    descriptors = PowersetDomain()
    descriptors.name = "sets of sign descriptors"
    relational = GaloisConnection(
        "relational signs",
        PowersetDomain(),
        descriptors,
        lambda memories: rds_abstraction(memories, names=names),
        lambda memories, abstract: all(rds_contains(abstract, memory) for memory in memories),
    )
    independent = GaloisConnection(
        "independent signs",
        descriptors,
        MemoryDomain(SignAnalysis(), variables, arrays),
        lambda abstract: rds_collapse(abstract, variables, arrays),
        lambda abstract, memory: frozenset(abstract) <= rds_expand(memory),
        rds_expand,
    )
    return relational, independent


def rds_spec(pg: ProgramGraph, initial: frozenset[RelSignDescriptor] | None = None) -> AnalysisSpec:
    """Relational detection of signs; the default initial element describes every memory."""
    if initial is None:
        top = AbstractMemory({x: SIGNS for x in pg.variables}, {A: SIGNS for A in pg.arrays})
        initial = rds_expand(top)
    domain = PowersetDomain()
    domain.name = "sets of sign descriptors"
    domain.acc_note = "finitely many descriptors over the program's names"

    def transfer_for(edge: Edge):
        return lambda descriptors: rel_sign_transfer(edge.action, descriptors)

    return AnalysisSpec("relational detection of signs", domain, transfer_for, frozenset(initial), Direction.FORWARD)
