from __future__ import annotations
"""Information flow: which data containers may influence which, and how.

``infer_flows`` over-approximates the flows a command may cause as a matrix of
flow types; ``offending_flows`` keeps the flows a policy forbids.
``typecheck_avoid`` instead enforces a policy while typing the command.
"""

import logging
import math
from dataclasses import dataclass
from enum import IntEnum
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping

from .policies import Container, SecurityPolicy, entries, length, variable
from .satisfiability import DEFAULT_CLAUSE_LIMIT, cosat
from .syntax import (
    AExp,
    ArrayAssign,
    ArrayLength,
    ArrayRef,
    Assign,
    BExp,
    BinOp,
    BoolLit,
    Choice,
    Command,
    Do,
    Guard,
    GuardedCommand,
    If,
    Input,
    InputArray,
    LogicOp,
    Neg,
    Not,
    Num,
    Output,
    RelOp,
    San,
    Seq,
    Skip,
    Str,
    Var,
    pretty,
)

LOGGER = logging.getLogger(__name__)

Containers = frozenset[Container]


class FlowType(IntEnum):
    """Kinds of flow, least worrying first."""

    N = 0
    S = 1
    C = 2
    B = 3
    I = 4
    E = 5

    def __str__(self) -> str:
        return self.name


class SecurityTypeError(RuntimeError):
    """Raised when a command violates a side condition of the leakage-avoidance type system."""

    def __init__(self, rule: str, command: object, containers: Iterable[Container], levels: Mapping[str, str]):
        self.rule = rule
        self.command = command
        self.containers = tuple(sorted(containers))
        self.levels = dict(levels)
        shown = ", ".join(f"{name}={level}" for name, level in self.levels.items())
        super().__init__(
            f"{rule} rule fails for {pretty(command)} "
            f"(containers {', '.join(map(str, self.containers)) or 'none'}; {shown})"
        )


def _aexp_containers(a: AExp, sanitised: bool, free: set[Container], san: set[Container]) -> None:
    target = san if sanitised else free
    if isinstance(a, (Num, Str)):
        return
    if isinstance(a, Var):
        target.add(variable(a.name))
    elif isinstance(a, ArrayRef):
        target.add(entries(a.array))
        _aexp_containers(a.index, sanitised, free, san)
    elif isinstance(a, ArrayLength):
        target.add(length(a.array))
    elif isinstance(a, BinOp):
        _aexp_containers(a.left, sanitised, free, san)
        _aexp_containers(a.right, sanitised, free, san)
    elif isinstance(a, Neg):
        _aexp_containers(a.operand, sanitised, free, san)
    elif isinstance(a, San):
        _aexp_containers(a.operand, True, free, san)
    else:
        raise TypeError(f"Not an arithmetic expression: {a!r}")


def _bexp_containers(b: BExp, free: set[Container], san: set[Container]) -> None:
    if isinstance(b, BoolLit):
        return
    if isinstance(b, RelOp):
        _aexp_containers(b.left, False, free, san)
        _aexp_containers(b.right, False, free, san)
    elif isinstance(b, LogicOp):
        _bexp_containers(b.left, free, san)
        _bexp_containers(b.right, free, san)
    elif isinstance(b, Not):
        _bexp_containers(b.operand, free, san)
    else:
        raise TypeError(f"Not a boolean expression: {b!r}")


def fv_sv(expression: AExp | BExp) -> tuple[Containers, Containers]:
    """Containers occurring outside every ``san`` and containers occurring inside one."""
    free: set[Container] = set()
    san: set[Container] = set()
    if isinstance(expression, (BoolLit, RelOp, LogicOp, Not)):
        _bexp_containers(expression, free, san)
    else:
        _aexp_containers(expression, False, free, san)
    return frozenset(free), frozenset(san)


def guards_of(gc: GuardedCommand) -> list[Guard]:
    if isinstance(gc, Guard):
        return [gc]
    return guards_of(gc.first) + guards_of(gc.second)


def modified(c: Command | GuardedCommand) -> Containers:
    """Containers that may be modified when running ``c``."""
    if isinstance(c, (Assign, Input)):
        return frozenset({variable(c.var)})
    if isinstance(c, (ArrayAssign, InputArray)):
        return frozenset({entries(c.array)})
    if isinstance(c, (Skip, Output)):
        return frozenset()
    if isinstance(c, Seq):
        return modified(c.first) | modified(c.second)
    if isinstance(c, (If, Do)):
        return modified(c.body)
    if isinstance(c, Guard):
        return modified(c.body)
    if isinstance(c, Choice):
        return modified(c.first) | modified(c.second)
    raise TypeError(f"Not a command: {c!r}")


def containers_of(c: Command | GuardedCommand) -> Containers:
    """Every data container mentioned by ``c``."""
    found: set[Container] = set(modified(c))

    def expression(e: AExp | BExp) -> None:
        free, san = fv_sv(e)
        found.update(free, san)

    if isinstance(c, Assign):
        expression(c.expr)
    elif isinstance(c, ArrayAssign):
        expression(c.index)
        expression(c.expr)
        found.add(length(c.array))
    elif isinstance(c, InputArray):
        expression(c.index)
        found.add(length(c.array))
    elif isinstance(c, Output):
        expression(c.expr)
    elif isinstance(c, (Seq, Choice)):
        found.update(containers_of(c.first), containers_of(c.second))
    elif isinstance(c, (If, Do)):
        found.update(containers_of(c.body))
    elif isinstance(c, Guard):
        expression(c.test)
        found.update(containers_of(c.body))
    return frozenset(found)


@dataclass(frozen=True)
class FlowRelation:
    """A total map from pairs of containers to flow types; only entries other than ``N`` are stored."""

    containers: Containers
    flows: Mapping[tuple[Container, Container], FlowType]

    @classmethod
    def of(cls, containers: Iterable[Container], flows: Mapping[tuple[Container, Container], FlowType]) -> "FlowRelation":
        kept = {pair: kind for pair, kind in flows.items() if kind is not FlowType.N}
        universe = frozenset(containers) | {c for pair in kept for c in pair}
        return cls(universe, MappingProxyType(kept))

    @classmethod
    def none(cls, containers: Iterable[Container] = ()) -> "FlowRelation":
        return cls.of(containers, {})

    @classmethod
    def between(
        cls,
        sources: Iterable[Container],
        targets: Iterable[Container],
        kind: FlowType,
        containers: Iterable[Container] = (),
    ) -> "FlowRelation":
        """``N`` everywhere except ``kind`` from every source to every target."""
        targets = tuple(targets)
        return cls.of(containers, {(source, target): kind for source in sources for target in targets})

    def __getitem__(self, pair: tuple[Container, Container]) -> FlowType:
        return self.flows.get(pair, FlowType.N)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FlowRelation):
            return NotImplemented
        return dict(self.flows) == dict(other.flows)

    def __hash__(self) -> int:
        return hash(frozenset(self.flows.items()))

    def plus(self, other: "FlowRelation") -> "FlowRelation":
        """Pointwise maximum."""
        flows = dict(self.flows)
        for pair, kind in other.flows.items():
            flows[pair] = max(flows.get(pair, FlowType.N), kind)
        return FlowRelation.of(self.containers | other.containers, flows)

    def compose(self, other: "FlowRelation") -> "FlowRelation":
        """Max-min matrix product: the best of the weakest links through any middle container."""
        outgoing: dict[Container, list[tuple[Container, FlowType]]] = {}
        for (middle, target), kind in other.flows.items():
            outgoing.setdefault(middle, []).append((target, kind))
        flows: dict[tuple[Container, Container], FlowType] = {}
        for (source, middle), first in self.flows.items():
            for target, second in outgoing.get(middle, ()):
                kind = min(first, second)
                if kind > flows.get((source, target), FlowType.N):
                    flows[source, target] = kind
        return FlowRelation.of(self.containers | other.containers, flows)

    def power(self, n: int) -> "FlowRelation":
        """``F`` composed with itself ``n >= 1`` times."""
        result = self
        for _ in range(n - 1):
            result = result.compose(self)
        return result

    @property
    def max_level(self) -> FlowType:
        return max(self.flows.values(), default=FlowType.N)

    def sorted_containers(self) -> list[Container]:
        return sorted(self.containers, key=lambda c: (str(c).lower(), str(c)))


def flow_plus(left: FlowRelation, right: FlowRelation) -> FlowRelation:
    return left.plus(right)


def flow_compose(left: FlowRelation, right: FlowRelation) -> FlowRelation:
    return left.compose(right)


def flow_closure(relation: FlowRelation, container_count: int | None = None) -> FlowRelation:
    """Summary of all non-empty paths, by repeated squaring.

    ``F[0] = F`` and ``F[m+1] = F + F[m]*F[m]``; ``F[M]`` with ``M = ceil(log2 N)``
    covers every path of length up to ``N``, which is all that matters for
    ``N`` containers.
    """
    count = container_count if container_count is not None else len(relation.containers)
    rounds = math.ceil(math.log2(count)) if count > 1 else 0
    result = relation
    for _ in range(rounds):
        result = relation.plus(result.compose(result))
    return result


class _FlowInference:
    def __init__(self, universe: Containers, clause_limit: int):
        self.universe = universe
        self.clause_limit = clause_limit

    def between(self, sources: Iterable[Container], targets: Iterable[Container], kind: FlowType) -> FlowRelation:
        return FlowRelation.between(sources, targets, kind, self.universe)

    def command(self, c: Command) -> FlowRelation:
        if isinstance(c, Assign):
            free, san = fv_sv(c.expr)
            target = {variable(c.var)}
            return self.between(free, target, FlowType.E).plus(self.between(san, target, FlowType.S))
        if isinstance(c, ArrayAssign):
            index_free, index_san = fv_sv(c.index)
            value_free, value_san = fv_sv(c.expr)
            target = {entries(c.array)}
            return (
                self.between(value_free, target, FlowType.E)
                .plus(self.between(index_free, target, FlowType.I))
                .plus(self.between(index_san | value_san, target, FlowType.S))
            )
        if isinstance(c, InputArray):
            index_free, index_san = fv_sv(c.index)
            target = {entries(c.array)}
            return self.between(index_free, target, FlowType.I).plus(self.between(index_san, target, FlowType.S))
        if isinstance(c, (Skip, Input, Output)):
            return FlowRelation.none(self.universe)
        if isinstance(c, Seq):
            first, second = self.command(c.first), self.command(c.second)
            return first.compose(second).plus(first).plus(second)
        if isinstance(c, If):
            return self.guarded(c.body)
        if isinstance(c, Do):
            return flow_closure(self.guarded(c.body), len(self.universe))
        raise TypeError(f"Not a command: {c!r}")

    def guarded(self, gc: GuardedCommand) -> FlowRelation:
        guards = guards_of(gc)
        tests = [guard.test for guard in guards]
        result = FlowRelation.none(self.universe)
        for i, guard in enumerate(guards):
            free, san = fv_sv(guard.test)
            mod_i = modified(guard.body)
            result = (
                result.plus(self.between(free, mod_i, FlowType.I))
                .plus(self.between(san, mod_i, FlowType.S))
                .plus(self.command(guard.body))
            )
            for j in range(len(guards)):
                if not cosat(i, j, tests, clause_limit=self.clause_limit):
                    continue
                other_free, other_san = fv_sv(tests[j])
                result = (
                    result.plus(self.between(other_free, mod_i, FlowType.B))
                    .plus(self.between(other_san, mod_i, FlowType.S))
                    .plus(self.between(mod_i, mod_i, FlowType.C))
                )
        return result


def infer_flows(c: Command, *, clause_limit: int = DEFAULT_CLAUSE_LIMIT) -> FlowRelation:
    """The flows ``c`` may cause, over every container it mentions."""
    universe = containers_of(c)
    flows = _FlowInference(universe, clause_limit).command(c)
    LOGGER.debug("Inferred %d flows over %d containers", len(flows.flows), len(universe))
    return flows


def offending_flows(policy: SecurityPolicy, relation: FlowRelation) -> FlowRelation:
    """The flows from a container to one the policy does not place above it."""
    policy.require_covers(relation.containers)
    kept = {pair: kind for pair, kind in relation.flows.items() if not policy.permits(*pair)}
    return FlowRelation.of(relation.containers, kept)


def max_offense_level(policy: SecurityPolicy, relation: FlowRelation) -> FlowType:
    return offending_flows(policy, relation).max_level


class _AvoidanceTyping:
    def __init__(self, policy: SecurityPolicy, clause_limit: int):
        self.policy = policy
        self.lattice = policy.lattice
        self.clause_limit = clause_limit

    def level(self, expression: AExp | BExp) -> Hashable:
        free, _ = fv_sv(expression)
        return self.lattice.join_all(self.policy.level(c) for c in free)

    def show(self, level: Hashable) -> str:
        return self.lattice.format_level(level)

    def require(self, condition: bool, rule: str, command: object, containers: Iterable[Container], **levels) -> None:
        if not condition:
            raise SecurityTypeError(rule, command, containers, {k: self.show(v) for k, v in levels.items()})

    def command(self, c: Command) -> tuple[Hashable, Hashable]:
        lattice = self.lattice
        if isinstance(c, (Assign, Input)):
            target = variable(c.var)
            level = self.policy.level(target)
            if isinstance(c, Assign):
                value = self.level(c.expr)
                self.require(
                    lattice.leq(value, level), "assignment", c, fv_sv(c.expr)[0] | {target}, expression=value, target=level
                )
            return level, level
        if isinstance(c, (ArrayAssign, InputArray)):
            target = entries(c.array)
            level = self.policy.level(target)
            index = self.level(c.index)
            self.require(
                lattice.leq(index, level), "array index", c, fv_sv(c.index)[0] | {target}, index=index, target=level
            )
            if isinstance(c, ArrayAssign):
                value = self.level(c.expr)
                self.require(
                    lattice.leq(value, level), "array assignment", c, fv_sv(c.expr)[0] | {target}, expression=value, target=level
                )
            return level, level
        if isinstance(c, (Skip, Output)):
            return lattice.top, lattice.bottom
        if isinstance(c, Seq):
            low_1, high_1 = self.command(c.first)
            low_2, high_2 = self.command(c.second)
            return lattice.meet(low_1, low_2), lattice.join(high_1, high_2)
        if isinstance(c, (If, Do)):
            return self.guarded(c.body)
        raise TypeError(f"Not a command: {c!r}")

    def guarded(self, gc: GuardedCommand) -> tuple[Hashable, Hashable]:
        lattice = self.lattice
        guards = guards_of(gc)
        tests = [guard.test for guard in guards]
        test_levels = [self.level(test) for test in tests]
        bounds = [self.command(guard.body) for guard in guards]
        for i, guard in enumerate(guards):
            low, high = bounds[i]
            mod_i = modified(guard.body)
            self.require(
                lattice.leq(test_levels[i], low),
                "implicit flow",
                guard,
                fv_sv(guard.test)[0] | mod_i,
                test=test_levels[i],
                body=low,
            )
            for j in range(len(guards)):
                if not cosat(i, j, tests, clause_limit=self.clause_limit):
                    continue
                self.require(
                    lattice.leq(test_levels[j], low),
                    "bypassing flow",
                    guard,
                    fv_sv(tests[j])[0] | mod_i,
                    other_test=test_levels[j],
                    body=low,
                )
                self.require(lattice.leq(high, low), "correlation flow", guard, mod_i, lowest=low, highest=high)
        return lattice.meet_all(low for low, _ in bounds), lattice.join_all(high for _, high in bounds)


def typecheck_avoid(
    policy: SecurityPolicy, c: Command, *, clause_limit: int = DEFAULT_CLAUSE_LIMIT
) -> tuple[Hashable, Hashable]:
    """The levels ``[meet, join]`` of the containers ``c`` modifies, if ``c`` only leaks sanitised data.

    Raises :class:`SecurityTypeError` on the first violated side condition and
    :class:`~gcl_workbench.policies.NotALattice` when the policy's levels lack
    joins or meets.
    """
    policy.lattice.require_lattice()
    policy.require_covers(containers_of(c))
    return _AvoidanceTyping(policy, clause_limit).command(c)
