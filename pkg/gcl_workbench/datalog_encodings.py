from __future__ import annotations
"""Reaching Definitions, Available Expressions and Faint Variables as Datalog programs.

Every encoder returns an :class:`Encoding` whose ``decode`` turns the solved
relations back into the assignment the worklist solver computes for the same
analysis, so both solvers can be compared directly.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .bitvector import AnalysisKind, RDFact, UNKNOWN, context_of, free_vars, kill_gen
from .datalog import (
    Atom,
    Clause,
    Comparison,
    DatalogProgram,
    Predicate,
    Row,
    Variable,
)
from .models import ProgramGraph
from .syntax import AExp, ArrayAssign, Assign, Input, InputArray, Output, Test, pretty

LOGGER = logging.getLogger(__name__)

Assignment = dict[str, object]


@dataclass(frozen=True)
class Encoding:
    kind: AnalysisKind
    program: DatalogProgram
    inputs: Mapping[str, frozenset[Row]]
    decode: Callable[[Mapping[str, frozenset[Row]]], Assignment]


def _fresh(base: str, taken: Iterable[str]) -> Variable:
    """A Datalog variable named after ``base`` that clashes with no constant."""
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return Variable(name)


def _names(pg: ProgramGraph) -> set[str]:
    return set(pg.variables | pg.arrays | pg.channels) | set(pg.nodes) | {UNKNOWN}


def _copy(predicate: str, target: tuple, source: tuple, *guards) -> Clause:
    return Clause(Atom(predicate, target), (Atom(predicate, source), *guards))


def encode_rd(pg: ProgramGraph) -> Encoding:
    taken = _names(pg)
    u, v, w = (_fresh(base, taken) for base in ("u", "v", "w"))
    predicates = (Predicate("Var", 1, 0), Predicate("Arr", 1, 0), Predicate("RD", 4, 1))
    clauses: list[Clause] = []
    for edge in pg.edges:
        source, target, action = edge.source, edge.target, edge.action
        copy_to = (target, u, v, w)
        copy_from = (source, u, v, w)
        if isinstance(action, (Assign, Input)):
            clauses.append(_copy("RD", copy_to, copy_from, Comparison(u, action.var, equal=False)))
            clauses.append(Clause(Atom("RD", (target, action.var, source, target))))
        elif isinstance(action, (ArrayAssign, InputArray)):
            clauses.append(_copy("RD", copy_to, copy_from))
            clauses.append(Clause(Atom("RD", (target, action.array, source, target))))
        else:
            clauses.append(_copy("RD", copy_to, copy_from))
    for kind in ("Var", "Arr"):
        clauses.append(Clause(Atom("RD", (pg.initial, u, UNKNOWN, pg.initial)), (Atom(kind, (u,)),)))
    inputs = {
        "Var": frozenset((name,) for name in pg.variables),
        "Arr": frozenset((name,) for name in pg.arrays),
    }

    def decode(valuation: Mapping[str, frozenset[Row]]) -> Assignment:
        assignment: Assignment = {node: set() for node in pg.nodes}
        for node, subject, source, target in valuation.get("RD", frozenset()):
            assignment[node].add(RDFact(subject, source, target))
        return {node: frozenset(facts) for node, facts in assignment.items()}

    return Encoding(AnalysisKind.RD, DatalogProgram(predicates, tuple(clauses)), inputs, decode)


def encode_ae(pg: ProgramGraph) -> Encoding:
    """Available Expressions through its complement: ``CAE(q, u)`` means ``u`` may be unavailable at ``q``."""
    ctx = context_of(pg)
    expressions: dict[str, AExp] = {pretty(a): a for a in ctx.aexps}
    taken = _names(pg) | set(expressions) | {edge.label for edge in pg.edges}
    u = _fresh("u", taken)
    predicates = (
        Predicate("AExp", 1, 0),
        Predicate("genAE", 4, 0),
        Predicate("killAE", 4, 0),
        Predicate("CAE", 2, 1),
        Predicate("AE", 2, 2),
    )
    gen_rows: set[Row] = set()
    kill_rows: set[Row] = set()
    clauses: list[Clause] = []
    for edge in pg.edges:
        kill, gen = kill_gen(AnalysisKind.AE, edge, ctx)
        key = (edge.source, edge.label, edge.target)
        gen_rows.update((*key, pretty(a)) for a in gen)
        kill_rows.update((*key, pretty(a)) for a in kill)
        not_generated = Atom("genAE", (*key, u), negated=True)
        clauses.append(Clause(Atom("CAE", (edge.target, u)), (Atom("CAE", (edge.source, u)), not_generated)))
        clauses.append(Clause(Atom("CAE", (edge.target, u)), (Atom("killAE", (*key, u)), not_generated)))
    clauses.append(Clause(Atom("CAE", (pg.initial, u)), (Atom("AExp", (u,)),)))
    for node in pg.nodes:
        clauses.append(Clause(Atom("AE", (node, u)), (Atom("CAE", (node, u), negated=True), Atom("AExp", (u,)))))
    inputs = {
        "AExp": frozenset((text,) for text in expressions),
        "genAE": frozenset(gen_rows),
        "killAE": frozenset(kill_rows),
    }

    def decode(valuation: Mapping[str, frozenset[Row]]) -> Assignment:
        assignment: Assignment = {node: set() for node in pg.nodes}
        for node, text in valuation.get("AE", frozenset()):
            assignment[node].add(expressions[text])
        return {node: frozenset(found) for node, found in assignment.items()}

    return Encoding(AnalysisKind.AE, DatalogProgram(predicates, tuple(clauses)), inputs, decode)


def _slv_clauses(edge, u: Variable) -> list[Clause]:
    """Clauses propagating strongly live names backwards over ``edge``."""
    source, target, action = edge.source, edge.target, edge.action
    copy = _copy("SLV", (source, u), (target, u))

    def uses(expr, live: str | None = None) -> Clause:
        body = [Atom("FreeV", (pretty(expr), u))]
        if live is not None:
            body.append(Atom("SLV", (target, live)))
        return Clause(Atom("SLV", (source, u)), tuple(body))

    if isinstance(action, Assign):
        guarded = _copy("SLV", (source, u), (target, u), Comparison(u, action.var, equal=False))
        return [guarded, uses(action.expr, action.var)]
    if isinstance(action, ArrayAssign):
        return [copy, uses(action.index, action.array), uses(action.expr, action.array)]
    if isinstance(action, Input):
        return [_copy("SLV", (source, u), (target, u), Comparison(u, action.var, equal=False))]
    if isinstance(action, InputArray):
        return [copy, uses(action.index, action.array)]
    if isinstance(action, Output):
        return [copy, uses(action.expr)]
    if isinstance(action, Test):
        return [copy, uses(action.cond)]
    return [copy]


def encode_fv(pg: ProgramGraph) -> Encoding:
    """Faint Variables through the strongly live names ``SLV``; ``decode`` yields the ``SLV`` assignment."""
    used: dict[str, object] = {}
    for edge in pg.edges:
        for expr in _expressions_of(edge.action):
            used[pretty(expr)] = expr
    taken = _names(pg) | set(used)
    u = _fresh("u", taken)
    predicates = (
        Predicate("Var", 1, 0),
        Predicate("Arr", 1, 0),
        Predicate("FreeV", 2, 0),
        Predicate("SLV", 2, 1),
        Predicate("FaintV", 2, 2),
    )
    clauses: list[Clause] = []
    for edge in pg.edges:
        clauses.extend(_slv_clauses(edge, u))
    for node in pg.nodes:
        for kind in ("Var", "Arr"):
            clauses.append(Clause(Atom("FaintV", (node, u)), (Atom("SLV", (node, u), negated=True), Atom(kind, (u,)))))
    inputs = {
        "Var": frozenset((name,) for name in pg.variables),
        "Arr": frozenset((name,) for name in pg.arrays),
        "FreeV": frozenset((text, name) for text, expr in used.items() for name in free_vars(expr)),
    }

    def decode(valuation: Mapping[str, frozenset[Row]]) -> Assignment:
        assignment: Assignment = {node: set() for node in pg.nodes}
        for node, name in valuation.get("SLV", frozenset()):
            assignment[node].add(name)
        return {node: frozenset(names) for node, names in assignment.items()}

    return Encoding(AnalysisKind.FV, DatalogProgram(predicates, tuple(clauses)), inputs, decode)


def _expressions_of(action) -> list:
    if isinstance(action, Assign):
        return [action.expr]
    if isinstance(action, ArrayAssign):
        return [action.index, action.expr]
    if isinstance(action, InputArray):
        return [action.index]
    if isinstance(action, Output):
        return [action.expr]
    if isinstance(action, Test):
        return [action.cond]
    return []


def faint_relation(valuation: Mapping[str, frozenset[Row]], pg: ProgramGraph) -> dict[str, frozenset[str]]:
    found: dict[str, set[str]] = {node: set() for node in pg.nodes}
    for node, name in valuation.get("FaintV", frozenset()):
        found[node].add(name)
    return {node: frozenset(names) for node, names in found.items()}


_ENCODERS = {
    AnalysisKind.RD: encode_rd,
    AnalysisKind.AE: encode_ae,
    AnalysisKind.FV: encode_fv,
}

SUPPORTED_KINDS = tuple(kind.value for kind in _ENCODERS)


def encode(kind: AnalysisKind | str, pg: ProgramGraph) -> Encoding:
    kind = AnalysisKind(kind)
    encoder = _ENCODERS.get(kind)
    if encoder is None:
        raise ValueError(f"{kind.value} has no Datalog encoding; choose one of {', '.join(SUPPORTED_KINDS)}")
    encoding = encoder(pg)
    LOGGER.debug("Encoded %s as %d clauses", kind.value, len(encoding.program.clauses))
    return encoding
