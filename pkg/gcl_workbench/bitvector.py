from __future__ import annotations
"""Bit-vector analyses and their two non bit-vector relatives.

Reaching Definitions, Live Variables, Available Expressions and Very Busy
Expressions are given by kill/gen tables; Dangerous Variables and Faint
Variables use conditional transfer functions. The ``path_*`` functions compute
what a single path contributes and serve as oracles for the solved analyses.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .framework import AnalysisSpec, Direction
from .lattices import PowersetDomain
from .models import Edge, Path, ProgramGraph
from .syntax import (
    Action,
    AExp,
    ArrayAssign,
    ArrayLength,
    ArrayRef,
    Assign,
    BExp,
    BinOp,
    BoolLit,
    Input,
    InputArray,
    LogicOp,
    Neg,
    Not,
    Num,
    Output,
    RelOp,
    San,
    Skip,
    Str,
    Test,
    Var,
)

UNKNOWN = "?"


class AnalysisKind(str, Enum):
    RD = "rd"
    LV = "lv"
    AE = "ae"
    VB = "vb"
    DV = "dv"
    FV = "fv"


def free_vars(e: AExp | BExp) -> frozenset[str]:
    """Variables and arrays occurring in an expression; ``A[a]`` contributes ``A`` and ``fv(a)``."""
    if isinstance(e, (Num, Str, BoolLit)):
        return frozenset()
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, ArrayRef):
        return frozenset({e.array}) | free_vars(e.index)
    if isinstance(e, ArrayLength):
        return frozenset({e.array})
    if isinstance(e, (BinOp, RelOp, LogicOp)):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, (Neg, San, Not)):
        return free_vars(e.operand)
    raise TypeError(f"Not an expression: {e!r}")


def nontrivial_subexpressions(e: AExp | BExp) -> frozenset[AExp]:
    """Composite arithmetic subexpressions of ``e``; literals and bare names are left out."""
    if isinstance(e, (Num, Str, Var, ArrayLength, BoolLit)):
        return frozenset()
    if isinstance(e, ArrayRef):
        return nontrivial_subexpressions(e.index) | {e}
    if isinstance(e, BinOp):
        return nontrivial_subexpressions(e.left) | nontrivial_subexpressions(e.right) | {e}
    if isinstance(e, Neg):
        return nontrivial_subexpressions(e.operand) | {e}
    if isinstance(e, San):
        return nontrivial_subexpressions(e.operand)
    if isinstance(e, (RelOp, LogicOp)):
        return nontrivial_subexpressions(e.left) | nontrivial_subexpressions(e.right)
    if isinstance(e, Not):
        return nontrivial_subexpressions(e.operand)
    raise TypeError(f"Not an expression: {e!r}")


def action_def(action: Action) -> frozenset[str]:
    """Names an action may overwrite."""
    if isinstance(action, (Assign, Input)):
        return frozenset({action.var})
    if isinstance(action, (ArrayAssign, InputArray)):
        return frozenset({action.array})
    return frozenset()


def action_use(action: Action) -> frozenset[str]:
    """Names an action reads."""
    if isinstance(action, (Assign, Output)):
        return free_vars(action.expr)
    if isinstance(action, ArrayAssign):
        return free_vars(action.index) | free_vars(action.expr)
    if isinstance(action, InputArray):
        return free_vars(action.index)
    if isinstance(action, Test):
        return free_vars(action.cond)
    return frozenset()


def action_aexps(action: Action) -> frozenset[AExp]:
    """Non-trivial arithmetic expressions computed by an action."""
    if isinstance(action, (Assign, Output)):
        return nontrivial_subexpressions(action.expr)
    if isinstance(action, ArrayAssign):
        return nontrivial_subexpressions(action.index) | nontrivial_subexpressions(action.expr)
    if isinstance(action, InputArray):
        return nontrivial_subexpressions(action.index)
    if isinstance(action, Test):
        return nontrivial_subexpressions(action.cond)
    return frozenset()


@dataclass(frozen=True, order=True)
class RDFact:
    """Definition of ``subject`` on the edge from ``source`` to ``target``.

    ``source`` is ``"?"`` for the unknown definition before the program starts.
    """

    subject: str
    source: str
    target: str

    def __str__(self) -> str:
        return f"({self.subject}, {self.source}, {self.target})"


@dataclass(frozen=True)
class BitVectorContext:
    """The finite universes the kill sets range over."""

    variables: frozenset[str]
    arrays: frozenset[str]
    nodes: tuple[str, ...]
    aexps: frozenset[AExp]

    @property
    def names(self) -> frozenset[str]:
        return self.variables | self.arrays


def context_of(pg: ProgramGraph) -> BitVectorContext:
    aexps: frozenset[AExp] = frozenset()
    for action in pg.actions:
        aexps |= action_aexps(action)
    return BitVectorContext(pg.variables, pg.arrays, pg.nodes, aexps)


def _killed_aexps(name: str, ctx: BitVectorContext) -> frozenset[AExp]:
    return frozenset(a for a in ctx.aexps if name in free_vars(a))


def _rd_kill_gen(edge: Edge, ctx: BitVectorContext) -> tuple[frozenset, frozenset]:
    action = edge.action
    if isinstance(action, (Assign, Input)):
        sources = (UNKNOWN, *ctx.nodes)
        kill = frozenset(RDFact(action.var, source, target) for source in sources for target in ctx.nodes)
        return kill, frozenset({RDFact(action.var, edge.source, edge.target)})
    if isinstance(action, (ArrayAssign, InputArray)):
        return frozenset(), frozenset({RDFact(action.array, edge.source, edge.target)})
    return frozenset(), frozenset()


def _lv_kill_gen(edge: Edge) -> tuple[frozenset, frozenset]:
    action = edge.action
    kill = frozenset({action.var}) if isinstance(action, (Assign, Input)) else frozenset()
    return kill, action_use(action)


def _ae_kill_gen(edge: Edge, ctx: BitVectorContext, *, very_busy: bool) -> tuple[frozenset, frozenset]:
    action = edge.action
    defined = action_def(action)
    kill: frozenset = frozenset()
    for name in defined:
        kill |= _killed_aexps(name, ctx)
    computed = action_aexps(action)
    if very_busy:
        return kill, computed
    return kill, frozenset(a for a in computed if not (free_vars(a) & defined))


def kill_gen(kind: AnalysisKind | str, edge: Edge, ctx: BitVectorContext) -> tuple[frozenset, frozenset]:
    kind = AnalysisKind(kind)
    if kind is AnalysisKind.RD:
        return _rd_kill_gen(edge, ctx)
    if kind is AnalysisKind.LV:
        return _lv_kill_gen(edge)
    if kind is AnalysisKind.AE:
        return _ae_kill_gen(edge, ctx, very_busy=False)
    if kind is AnalysisKind.VB:
        return _ae_kill_gen(edge, ctx, very_busy=True)
    raise ValueError(f"{kind.value} is not a bit-vector analysis")


def _kill_gen_transfer(kind: AnalysisKind, ctx: BitVectorContext):
    def transfer(edge: Edge):
        kill, gen = kill_gen(kind, edge, ctx)
        return lambda facts: (frozenset(facts) - kill) | gen

    return transfer


def bitvector_spec(
    kind: AnalysisKind | str,
    pg: ProgramGraph,
    *,
    live_at_exit: Iterable[str] = (),
) -> AnalysisSpec:
    """Package RD, LV, AE or VB for ``pg``.

    ``live_at_exit`` seeds the final node of Live Variables with names that are
    used after the program terminates.
    """
    kind = AnalysisKind(kind)
    ctx = context_of(pg)
    transfer = _kill_gen_transfer(kind, ctx)
    if kind is AnalysisKind.RD:
        initial = frozenset(RDFact(name, UNKNOWN, pg.initial) for name in ctx.names)
        return AnalysisSpec("reaching definitions", PowersetDomain(), transfer, initial, Direction.FORWARD)
    if kind is AnalysisKind.LV:
        return AnalysisSpec(
            "live variables",
            PowersetDomain(ctx.names | frozenset(live_at_exit)),
            transfer,
            frozenset(live_at_exit),
            Direction.BACKWARD,
        )
    domain = PowersetDomain(ctx.aexps, orientation="superset")
    if kind is AnalysisKind.AE:
        return AnalysisSpec("available expressions", domain, transfer, frozenset(), Direction.FORWARD)
    if kind is AnalysisKind.VB:
        return AnalysisSpec("very busy expressions", domain, transfer, frozenset(), Direction.BACKWARD)
    raise ValueError(f"{kind.value} is not a bit-vector analysis")


def _dangerous(action: Action, dangerous: frozenset[str]) -> frozenset[str]:
    if isinstance(action, Assign):
        if free_vars(action.expr) & dangerous:
            return dangerous | {action.var}
        return dangerous - {action.var}
    if isinstance(action, ArrayAssign):
        if (free_vars(action.index) | free_vars(action.expr)) & dangerous:
            return dangerous | {action.array}
        return dangerous
    if isinstance(action, Input):
        return dangerous - {action.var}
    if isinstance(action, InputArray):
        if free_vars(action.index) & dangerous:
            return dangerous | {action.array}
        return dangerous
    return dangerous


def _strongly_live(action: Action, live: frozenset[str]) -> frozenset[str]:
    if isinstance(action, Assign):
        if action.var in live:
            return (live - {action.var}) | free_vars(action.expr)
        return live
    if isinstance(action, ArrayAssign):
        if action.array in live:
            return live | free_vars(action.index) | free_vars(action.expr)
        return live
    if isinstance(action, Input):
        return live - {action.var}
    if isinstance(action, InputArray):
        if action.array in live:
            return live | free_vars(action.index)
        return live
    if isinstance(action, Output):
        return live | free_vars(action.expr)
    if isinstance(action, Test):
        return live | free_vars(action.cond)
    if isinstance(action, Skip):
        return live
    raise TypeError(f"Not an action: {action!r}")


def extended_transfer(kind: AnalysisKind | str, edge: Edge, names: Iterable[str]) -> frozenset[str]:
    """Apply the Dangerous Variables or Faint Variables transfer of ``edge`` to ``names``."""
    kind = AnalysisKind(kind)
    names = frozenset(names)
    if kind is AnalysisKind.DV:
        return _dangerous(edge.action, names)
    if kind is AnalysisKind.FV:
        return _strongly_live(edge.action, names)
    raise ValueError(f"{kind.value} has no extended transfer function")


def dv_spec(pg: ProgramGraph) -> AnalysisSpec:
    names = pg.variables | pg.arrays
    return AnalysisSpec(
        "dangerous variables",
        PowersetDomain(names),
        lambda edge: lambda facts: extended_transfer(AnalysisKind.DV, edge, facts),
        frozenset(names),
        Direction.FORWARD,
    )


def fv_spec(pg: ProgramGraph) -> AnalysisSpec:
    """Faint Variables, computed as its complement: the strongly live names."""
    return AnalysisSpec(
        "faint variables",
        PowersetDomain(pg.variables | pg.arrays),
        lambda edge: lambda facts: extended_transfer(AnalysisKind.FV, edge, facts),
        frozenset(),
        Direction.BACKWARD,
    )


def faint_names(pg: ProgramGraph, strongly_live: frozenset[str]) -> frozenset[str]:
    return (pg.variables | pg.arrays) - strongly_live


def path_definitions(path: Path, pg: ProgramGraph) -> frozenset[RDFact]:
    """Definitions reaching the end of ``path``; only the last definition of a variable counts."""
    facts: set[RDFact] = set()
    edges = list(path.edges())
    for name in pg.variables:
        last = RDFact(name, UNKNOWN, path.start)
        for edge in edges:
            if name in action_def(edge.action):
                last = RDFact(name, edge.source, edge.target)
        facts.add(last)
    for name in pg.arrays:
        facts.add(RDFact(name, UNKNOWN, path.start))
        for edge in edges:
            if name in action_def(edge.action):
                facts.add(RDFact(name, edge.source, edge.target))
    return frozenset(facts)


def path_uses(path: Path, pg: ProgramGraph) -> frozenset[str]:
    """Names used along ``path``; a variable counts only when used before any redefinition."""
    used: set[str] = set()
    defined: set[str] = set()
    for action in path.actions:
        for name in action_use(action):
            if name in pg.arrays or name not in defined:
                used.add(name)
        defined |= action_def(action)
    return frozenset(used)


def path_available(path: Path) -> frozenset[AExp]:
    """Expressions computed on ``path`` and not invalidated afterwards (including by their own action)."""
    available: set[AExp] = set()
    for action in path.actions:
        defined = action_def(action)
        available = {a for a in available if not (free_vars(a) & defined)}
        available |= {a for a in action_aexps(action) if not (free_vars(a) & defined)}
    return frozenset(available)


def path_very_busy(path: Path) -> frozenset[AExp]:
    """Expressions computed on ``path`` before any of their names is redefined."""
    busy: set[AExp] = set()
    defined: set[str] = set()
    for action in path.actions:
        busy |= {a for a in action_aexps(action) if not (free_vars(a) & defined)}
        defined |= action_def(action)
    return frozenset(busy)
