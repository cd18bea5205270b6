from __future__ import annotations
"""Stratified Datalog: programs, their text format and a rank-by-rank solver.

Text format::

    PRED U(1)/0 P(2)/1
    VAR u
    P(u, c) <- U(u).
    P(c, u) <- U(u).

Identifiers declared under ``VAR`` are variables; every other identifier,
number or double-quoted string is a constant.
"""

import csv
import io
import logging
import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, Union

from lark import Lark, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

LOGGER = logging.getLogger(__name__)

GRAMMAR = r"""
start: preds vars clause*

preds: ("PRED" decl*)?
decl: PNAME "(" INT ")" "/" INT

vars: ("VAR" NAME*)?

clause: atom "." -> fact
      | atom "<-" literal ("," literal)* "."

?literal: atom
        | NEGATION atom -> negated
        | term "=" term -> equal
        | term "!=" term -> unequal

atom: PNAME "(" term ("," term)* ")"

term: NAME | INT | STRING | UNKNOWN

NEGATION: "!" | "¬"
UNKNOWN: "?"
PNAME.2: /[A-Za-z_][A-Za-z0-9_']*(?=\s*\()/
NAME: /[A-Za-z_][A-Za-z0-9_']*/
INT: /-?[0-9]+/
STRING: /"(\\.|[^"\\\n])*"/
COMMENT: /\/\/[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_KEYWORDS = frozenset({"PRED", "VAR"})
_ESCAPE = re.compile(r"\\(.)")


class DatalogFormatError(ValueError):
    """Raised when a Datalog program or relation is malformed."""


class StratificationViolation(RuntimeError):
    """Raised when a righthandside has a higher rank than the head of its clause."""

    def __init__(self, clause: Clause, righthandside: RightHandSide, head_rank: int, rank: int):
        super().__init__(
            f"Clause {clause} is not stratified: {righthandside} has rank {rank} above the head rank {head_rank}"
        )
        self.clause = clause
        self.righthandside = righthandside


@dataclass(frozen=True, order=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[str, Variable]
Row = tuple[str, ...]
Valuation = dict[str, frozenset[Row]]


def format_constant(value: str) -> str:
    if _IDENTIFIER.match(value) and value not in _KEYWORDS:
        return value
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _format_term(term: Term) -> str:
    return str(term) if isinstance(term, Variable) else format_constant(term)


@dataclass(frozen=True)
class Predicate:
    name: str
    arity: int
    rank: int

    def __str__(self) -> str:
        return f"{self.name}({self.arity})/{self.rank}"


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...]
    negated: bool = False

    def __str__(self) -> str:
        text = f"{self.predicate}({', '.join(_format_term(arg) for arg in self.args)})"
        return f"!{text}" if self.negated else text


@dataclass(frozen=True)
class Comparison:
    """``left = right`` or, with ``equal=False``, ``left != right``."""

    left: Term
    right: Term
    equal: bool = True

    @property
    def args(self) -> tuple[Term, ...]:
        return (self.left, self.right)

    def __str__(self) -> str:
        op = "=" if self.equal else "!="
        return f"{_format_term(self.left)} {op} {_format_term(self.right)}"


RightHandSide = Union[Atom, Comparison]


@dataclass(frozen=True)
class Clause:
    head: Atom
    body: tuple[RightHandSide, ...] = ()

    @property
    def variables(self) -> frozenset[Variable]:
        terms = list(self.head.args)
        for righthandside in self.body:
            terms.extend(righthandside.args)
        return frozenset(term for term in terms if isinstance(term, Variable))

    @property
    def constants(self) -> frozenset[str]:
        terms = list(self.head.args)
        for righthandside in self.body:
            terms.extend(righthandside.args)
        return frozenset(term for term in terms if not isinstance(term, Variable))

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} <- {', '.join(str(rh) for rh in self.body)}."


@dataclass(frozen=True)
class DatalogProgram:
    predicates: tuple[Predicate, ...]
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self) -> None:
        _validate(self)

    def predicate(self, name: str) -> Predicate:
        for predicate in self.predicates:
            if predicate.name == name:
                return predicate
        raise DatalogFormatError(f"Undeclared predicate {name}")

    def rank(self, righthandside: RightHandSide) -> int:
        if isinstance(righthandside, Comparison):
            return 0
        rank = self.predicate(righthandside.predicate).rank
        return rank + 1 if righthandside.negated else rank

    @property
    def variables(self) -> frozenset[Variable]:
        found: frozenset[Variable] = frozenset()
        for clause in self.clauses:
            found |= clause.variables
        return found

    @property
    def max_rank(self) -> int:
        return max((predicate.rank for predicate in self.predicates), default=0)

    def with_clauses(self, clauses: Iterable[Clause]) -> DatalogProgram:
        return DatalogProgram(self.predicates, tuple(clauses))


def _validate(program: DatalogProgram) -> None:
    declared: dict[str, Predicate] = {}
    for predicate in program.predicates:
        if predicate.name in declared:
            raise DatalogFormatError(f"Predicate {predicate.name} is declared twice")
        if predicate.arity < 1 or predicate.rank < 0:
            raise DatalogFormatError(f"Bad declaration {predicate}: arity must be positive and rank non-negative")
        declared[predicate.name] = predicate
    for clause in program.clauses:
        if clause.head.negated:
            raise DatalogFormatError(f"Clause {clause} has a negated head")
        atoms = [clause.head, *(rh for rh in clause.body if isinstance(rh, Atom))]
        for atom in atoms:
            predicate = declared.get(atom.predicate)
            if predicate is None:
                raise DatalogFormatError(f"Clause {clause} uses the undeclared predicate {atom.predicate}")
            if len(atom.args) != predicate.arity:
                raise DatalogFormatError(
                    f"Clause {clause}: {atom.predicate} takes {predicate.arity} arguments, got {len(atom.args)}"
                )


class _ProgramBuilder(Transformer):
    def start(self, items):
        predicates, variables, *clauses = items
        names = frozenset(variables)
        return DatalogProgram(tuple(predicates), tuple(_bind(clause, names) for clause in clauses))

    def preds(self, items):
        return list(items)

    def decl(self, items):
        name, arity, rank = items
        return Predicate(str(name), int(arity), int(rank))

    def vars(self, items):
        return [str(token) for token in items]

    def fact(self, items):
        (head,) = items
        return Clause(head)

    def clause(self, items):
        head, *body = items
        return Clause(head, tuple(body))

    def negated(self, items):
        _negation, atom = items
        return Atom(atom.predicate, atom.args, negated=True)

    def equal(self, items):
        left, right = items
        return Comparison(left, right, equal=True)

    def unequal(self, items):
        left, right = items
        return Comparison(left, right, equal=False)

    def atom(self, items):
        name, *args = items
        return Atom(str(name), tuple(args))

    def term(self, items):
        (token,) = items
        if token.type == "STRING":
            return _ESCAPE.sub(r"\1", str(token)[1:-1])
        if token.type == "NAME":
            return Variable(str(token))
        return str(token)


def _resolve(term: Term, variables: frozenset[str]) -> Term:
    # names are parsed as variables and become constants unless declared under VAR
    if isinstance(term, Variable) and term.name not in variables:
        return term.name
    return term


def _bind_atom(atom: Atom, variables: frozenset[str]) -> Atom:
    return Atom(atom.predicate, tuple(_resolve(arg, variables) for arg in atom.args), atom.negated)


def _bind(clause: Clause, variables: frozenset[str]) -> Clause:
    body: list[RightHandSide] = []
    for righthandside in clause.body:
        if isinstance(righthandside, Atom):
            body.append(_bind_atom(righthandside, variables))
        else:
            body.append(
                Comparison(
                    _resolve(righthandside.left, variables),
                    _resolve(righthandside.right, variables),
                    righthandside.equal,
                )
            )
    return Clause(_bind_atom(clause.head, variables), tuple(body))


_PARSER = Lark(GRAMMAR, parser="lalr")


def parse_datalog(text: str) -> DatalogProgram:
    try:
        tree = _PARSER.parse(text)
    except (UnexpectedCharacters, UnexpectedToken, UnexpectedEOF) as exc:
        line = getattr(exc, "line", None)
        column = getattr(exc, "column", None)
        raise DatalogFormatError(f"Cannot read Datalog program at line {line}, column {column}") from exc
    except UnexpectedInput as exc:
        raise DatalogFormatError(str(exc)) from exc
    try:
        return _ProgramBuilder().transform(tree)
    except VisitError as exc:
        cause = exc.orig_exc
        if isinstance(cause, DatalogFormatError):
            raise cause from None
        raise DatalogFormatError(str(cause)) from exc


def format_datalog(program: DatalogProgram) -> str:
    lines = ["PRED " + " ".join(str(predicate) for predicate in program.predicates)]
    variables = sorted(program.variables)
    if variables:
        lines.append("VAR " + " ".join(str(variable) for variable in variables))
    lines.extend(str(clause) for clause in program.clauses)
    return "\n".join(lines) + "\n"


def load_csv_relation(text: str, *, arity: int | None = None) -> frozenset[Row]:
    """Tuples of a rank-0 relation, one per CSV line; blank lines are skipped."""
    rows: set[Row] = set()
    for number, record in enumerate(csv.reader(io.StringIO(text)), start=1):
        row = tuple(cell.strip() for cell in record)
        if not row or all(not cell for cell in row):
            continue
        if arity is None:
            arity = len(row)
        if len(row) != arity:
            raise DatalogFormatError(f"Line {number} has {len(row)} columns, expected {arity}")
        rows.add(row)
    return frozenset(rows)


def check_stratified(program: DatalogProgram) -> None:
    for clause in program.clauses:
        head_rank = program.rank(clause.head)
        for righthandside in clause.body:
            rank = program.rank(righthandside)
            if rank > head_rank:
                raise StratificationViolation(clause, righthandside, head_rank, rank)


def _normalize_inputs(program: DatalogProgram, inputs: Mapping[str, Iterable[Iterable[str]]]) -> Valuation:
    valuation: Valuation = {predicate.name: frozenset() for predicate in program.predicates}
    for name, rows in inputs.items():
        predicate = program.predicate(name)
        if predicate.rank != 0:
            raise DatalogFormatError(f"Input {name} is not a rank-0 predicate")
        frozen = frozenset(tuple(str(value) for value in row) for row in rows)
        for row in frozen:
            if len(row) != predicate.arity:
                raise DatalogFormatError(f"Input {name} has a tuple of width {len(row)}, expected {predicate.arity}")
        valuation[name] = frozen
    return valuation


def universe_of(program: DatalogProgram, inputs: Mapping[str, Iterable[Iterable[str]]]) -> frozenset[str]:
    """Constants of the clauses together with every element of the rank-0 inputs."""
    universe: set[str] = set()
    for clause in program.clauses:
        universe |= clause.constants
    for rows in _normalize_inputs(program, inputs).values():
        for row in rows:
            universe.update(row)
    return frozenset(universe)


def _value(term: Term, sigma: Mapping[Variable, str]) -> str:
    return sigma[term] if isinstance(term, Variable) else term


def _ground(atom: Atom, sigma: Mapping[Variable, str]) -> Row:
    return tuple(_value(arg, sigma) for arg in atom.args)


def holds(righthandside: RightHandSide, valuation: Mapping[str, frozenset[Row]], sigma: Mapping[Variable, str]) -> bool:
    if isinstance(righthandside, Comparison):
        same = _value(righthandside.left, sigma) == _value(righthandside.right, sigma)
        return same == righthandside.equal
    present = _ground(righthandside, sigma) in valuation.get(righthandside.predicate, frozenset())
    return present != righthandside.negated


def clause_holds(clause: Clause, valuation: Mapping[str, frozenset[Row]], sigma: Mapping[Variable, str]) -> bool:
    if all(holds(rh, valuation, sigma) for rh in clause.body):
        return holds(clause.head, valuation, sigma)
    return True


def _match(atom: Atom, row: Row, sigma: dict[Variable, str]) -> dict[Variable, str] | None:
    extended = dict(sigma)
    for arg, value in zip(atom.args, row):
        if isinstance(arg, Variable):
            bound = extended.setdefault(arg, value)
            if bound != value:
                return None
        elif arg != value:
            return None
    return extended


def satisfying_valuations(
    clause: Clause,
    valuation: Mapping[str, frozenset[Row]],
    universe: Iterable[str],
) -> Iterator[dict[Variable, str]]:
    """Every σ over ``universe`` making the body of ``clause`` true, in lexicographic order of bindings.

    Positive atoms bind variables from their relations; the remaining variables
    range over the universe.
    """
    positives = [rh for rh in clause.body if isinstance(rh, Atom) and not rh.negated]
    checks = [rh for rh in clause.body if not (isinstance(rh, Atom) and not rh.negated)]
    constants = sorted(universe)

    def extend(index: int, sigma: dict[Variable, str]) -> Iterator[dict[Variable, str]]:
        if index < len(positives):
            atom = positives[index]
            for row in sorted(valuation.get(atom.predicate, frozenset())):
                bound = _match(atom, row, sigma)
                if bound is not None:
                    yield from extend(index + 1, bound)
            return
        ready = [rh for rh in checks if all(not isinstance(arg, Variable) or arg in sigma for arg in rh.args)]
        if not all(holds(rh, valuation, sigma) for rh in ready):
            return
        pending = [rh for rh in checks if rh not in ready]
        free = sorted(clause.variables - sigma.keys())
        for values in product(constants, repeat=len(free)):
            full = {**sigma, **dict(zip(free, values))}
            if all(holds(rh, valuation, full) for rh in pending):
                yield full

    yield from extend(0, {})


def violations(
    program: DatalogProgram,
    valuation: Mapping[str, frozenset[Row]],
    universe: Iterable[str] | None = None,
) -> list[tuple[Clause, dict[Variable, str]]]:
    """Clauses and valuations σ for which the clause is false under ``valuation``."""
    if universe is None:
        rank_zero = {p.name: valuation.get(p.name, frozenset()) for p in program.predicates if p.rank == 0}
        universe = universe_of(program, rank_zero)
    universe = sorted(universe)
    found = []
    for clause in program.clauses:
        for sigma in satisfying_valuations(clause, valuation, universe):
            if _ground(clause.head, sigma) not in valuation.get(clause.head.predicate, frozenset()):
                found.append((clause, sigma))
    return found


def solve(program: DatalogProgram, inputs: Mapping[str, Iterable[Iterable[str]]]) -> Valuation:
    """Least solution rank by rank: rank-0 predicates start at ``inputs``, all others empty.

    Within each rank, clauses are applied until no valuation makes one of them
    false. Raises :class:`StratificationViolation` for unstratified programs.
    """
    check_stratified(program)
    valuation = _normalize_inputs(program, inputs)
    universe = sorted(universe_of(program, inputs))
    for rank in range(program.max_rank + 1):
        clauses = [clause for clause in program.clauses if program.rank(clause.head) == rank]
        if not clauses:
            continue
        rounds = 0
        added = 0
        changed = True
        while changed:
            changed = False
            rounds += 1
            for clause in clauses:
                name = clause.head.predicate
                current = valuation[name]
                new_rows = {
                    _ground(clause.head, sigma)
                    for sigma in satisfying_valuations(clause, valuation, universe)
                } - current
                if new_rows:
                    valuation[name] = current | new_rows
                    added += len(new_rows)
                    changed = True
        LOGGER.debug("Rank %d: %d clauses, %d tuples added in %d rounds", rank, len(clauses), added, rounds)
    return valuation
