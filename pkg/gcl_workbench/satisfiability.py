from __future__ import annotations
"""Over-approximating satisfiability of boolean expressions.

``sat`` converts a test to disjunctive normal form and builds a shared, ordered
DAG for every conjunction of literals; a negated comparison is built as its
complement. A conjunction is refuted only when it marks two mutually exclusive
comparisons of the same operands, so ``sat`` never answers ``False`` for a
satisfiable test.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .syntax import (
    AExp,
    ArrayLength,
    ArrayRef,
    BExp,
    BinOp,
    BoolLit,
    LogicOp,
    Neg,
    Not,
    Num,
    RelOp,
    San,
    Str,
    Var,
    conjunction,
)

LOGGER = logging.getLogger(__name__)

DEFAULT_CLAUSE_LIMIT = 64

# t1 o1 t2 is equivalent to t2 o2 t1
TRANSPOSED = {
    "+": "+",
    "*": "*",
    "<": ">",
    ">": "<",
    "<=": ">=",
    ">=": "<=",
    "=": "=",
    "!=": "!=",
}

# t1 o1 t2 and t1 o2 t2 never hold together
EXCLUSIVE = frozenset(
    {
        ("<", "="),
        ("<", ">="),
        ("<", ">"),
        ("<=", ">"),
        ("=", "<"),
        ("=", ">"),
        ("=", "!="),
        ("!=", "="),
        (">=", "<"),
        (">", "<"),
        (">", "<="),
        (">", "="),
    }
)

# !(t1 o1 t2) is equivalent to t1 o2 t2
COMPLEMENTS = {
    "<": ">=",
    "<=": ">",
    ">=": "<",
    ">": "<=",
    "=": "!=",
    "!=": "=",
}

Literal = BExp
Clause = tuple[Literal, ...]


class ClauseLimitExceeded(RuntimeError):
    """Raised when a disjunctive normal form would hold more conjunctions than allowed."""


def _strip(a: AExp) -> AExp:
    """Drop ``san`` markers; they have no semantic effect."""
    if isinstance(a, San):
        return _strip(a.operand)
    if isinstance(a, BinOp):
        return BinOp(a.op, _strip(a.left), _strip(a.right))
    if isinstance(a, Neg):
        return Neg(_strip(a.operand))
    if isinstance(a, ArrayRef):
        return ArrayRef(a.array, _strip(a.index))
    return a


def _product(left: list[Clause], right: list[Clause], limit: int) -> list[Clause]:
    if len(left) * len(right) > limit:
        raise ClauseLimitExceeded(f"More than {limit} conjunctions in the normal form")
    return [first + second for first in left for second in right]


def _dnf(b: BExp, positive: bool, limit: int) -> list[Clause]:
    if isinstance(b, BoolLit):
        # true is the empty conjunction, false the empty disjunction
        return [()] if b.value == positive else []
    if isinstance(b, RelOp):
        relation = RelOp(b.op, _strip(b.left), _strip(b.right))
        return [(relation if positive else Not(relation),)]
    if isinstance(b, Not):
        return _dnf(b.operand, not positive, limit)
    if isinstance(b, LogicOp):
        is_and = b.op in ("&", "&&")
        left = _dnf(b.left, positive, limit)
        right = _dnf(b.right, positive, limit)
        if is_and == positive:
            return _product(left, right, limit)
        if len(left) + len(right) > limit:
            raise ClauseLimitExceeded(f"More than {limit} conjunctions in the normal form")
        return left + right
    raise TypeError(f"Not a boolean expression: {b!r}")


def to_dnf(b: BExp, *, clause_limit: int = DEFAULT_CLAUSE_LIMIT) -> list[Clause]:
    """Conjunctions of literals whose disjunction is equivalent to ``b`` (modulo undefinedness).

    ``&&``/``||`` are treated as ``&``/``|`` and ``san`` is dropped. Raises
    :class:`ClauseLimitExceeded` beyond ``clause_limit`` conjunctions.
    """
    return _dnf(b, True, clause_limit)


@dataclass
class OrderedDag:
    """Hash-consed nodes of a conjunction of literals; children keep their order."""

    nodes: dict[tuple, int] = field(default_factory=dict)
    keys: list[tuple] = field(default_factory=list)
    marked: set[int] = field(default_factory=set)

    def _node(self, key: tuple) -> int:
        if key in self.nodes:
            return self.nodes[key]
        op = key[0]
        if op in TRANSPOSED and len(key) == 3:
            transposed = (TRANSPOSED[op], key[2], key[1])
            if transposed in self.nodes:
                return self.nodes[transposed]
        self.nodes[key] = len(self.keys)
        self.keys.append(key)
        return self.nodes[key]

    def aexp(self, a: AExp) -> int:
        if isinstance(a, Num):
            return self._node(("num", a.value))
        if isinstance(a, Str):
            return self._node(("str", a.value))
        if isinstance(a, Var):
            return self._node(("var", a.name))
        if isinstance(a, ArrayRef):
            return self._node(("[]", self._node(("array", a.array)), self.aexp(a.index)))
        if isinstance(a, ArrayLength):
            return self._node(("#", self._node(("array", a.array))))
        if isinstance(a, Neg):
            return self._node(("neg", self.aexp(a.operand)))
        if isinstance(a, BinOp):
            return self._node((a.op, self.aexp(a.left), self.aexp(a.right)))
        raise TypeError(f"Not an arithmetic expression: {a!r}")

    def literal(self, literal: Literal) -> int:
        if isinstance(literal, Not):
            # every relational operator has a complement
            relation = literal.operand
            return self._node((COMPLEMENTS[relation.op], self.aexp(relation.left), self.aexp(relation.right)))
        return self._node((literal.op, self.aexp(literal.left), self.aexp(literal.right)))

    def mark(self, literal: Literal) -> None:
        self.marked.add(self.literal(literal))

    def refuted(self) -> bool:
        keys = [self.keys[index] for index in self.marked]
        comparisons: dict[tuple[int, int], set[str]] = {}
        for key in keys:
            if key[0] in TRANSPOSED and key[0] not in ("+", "*"):
                op, left, right = key
                comparisons.setdefault((left, right), set()).add(op)
                comparisons.setdefault((right, left), set()).add(TRANSPOSED[op])
        return any((first, second) in EXCLUSIVE for ops in comparisons.values() for first in ops for second in ops)


def conjunction_satisfiable(clause: Sequence[Literal]) -> bool:
    dag = OrderedDag()
    for literal in clause:
        dag.mark(literal)
    return not dag.refuted()


def sat(b: BExp, *, clause_limit: int = DEFAULT_CLAUSE_LIMIT) -> bool:
    """``False`` only if ``b`` is certainly unsatisfiable."""
    try:
        clauses = to_dnf(b, clause_limit=clause_limit)
    except ClauseLimitExceeded as exc:
        LOGGER.warning("%s; assuming the test is satisfiable", exc)
        return True
    return any(conjunction_satisfiable(clause) for clause in clauses)


def cosat(i: int, j: int, guards: Sequence[BExp], *, clause_limit: int = DEFAULT_CLAUSE_LIMIT) -> bool:
    """Whether guards ``i`` and ``j`` (distinct) might hold at the same time."""
    return i != j and sat(conjunction(guards[i], guards[j]), clause_limit=clause_limit)
