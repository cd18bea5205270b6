from __future__ import annotations
"""Abstract syntax of Guarded Commands and its surface-syntax printer."""

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Str:
    """String literal, only legal in the security dialect."""

    value: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class ArrayRef:
    array: str
    index: "AExp"


@dataclass(frozen=True)
class ArrayLength:
    array: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "AExp"
    right: "AExp"


@dataclass(frozen=True)
class Neg:
    operand: "AExp"


@dataclass(frozen=True)
class San:
    """Sanitisation marker, only legal in the security dialect."""

    operand: "AExp"


AExp = Union[Num, Str, Var, ArrayRef, ArrayLength, BinOp, Neg, San]

ARITHMETIC_OPERATORS = ("+", "-", "*", "/", "%")


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class RelOp:
    op: str
    left: AExp
    right: AExp


@dataclass(frozen=True)
class LogicOp:
    """Binary connective; ``&``/``|`` are strict, ``&&``/``||`` short-circuit."""

    op: str
    left: "BExp"
    right: "BExp"


@dataclass(frozen=True)
class Not:
    operand: "BExp"


BExp = Union[BoolLit, RelOp, LogicOp, Not]

RELATIONAL_OPERATORS = ("=", "!=", ">", ">=", "<", "<=")
LOGICAL_OPERATORS = ("&", "|", "&&", "||")


@dataclass(frozen=True)
class Assign:
    var: str
    expr: AExp


@dataclass(frozen=True)
class ArrayAssign:
    array: str
    index: AExp
    expr: AExp


@dataclass(frozen=True)
class Input:
    channel: str
    var: str


@dataclass(frozen=True)
class InputArray:
    channel: str
    array: str
    index: AExp


@dataclass(frozen=True)
class Output:
    channel: str
    expr: AExp


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Test:
    """Boolean test labelling an edge; never produced by the parser as a command."""

    cond: BExp


@dataclass(frozen=True)
class Seq:
    first: "Command"
    second: "Command"


@dataclass(frozen=True)
class If:
    body: "GuardedCommand"


@dataclass(frozen=True)
class Do:
    body: "GuardedCommand"


@dataclass(frozen=True)
class Guard:
    test: BExp
    body: "Command"


@dataclass(frozen=True)
class Choice:
    first: "GuardedCommand"
    second: "GuardedCommand"


Command = Union[Assign, ArrayAssign, Input, InputArray, Output, Skip, Seq, If, Do]
GuardedCommand = Union[Guard, Choice]
Action = Union[Assign, ArrayAssign, Input, InputArray, Output, Test, Skip]

ACTION_TYPES = (Assign, ArrayAssign, Input, InputArray, Output, Test, Skip)


def conjunction(left: BExp, right: BExp) -> BExp:
    return LogicOp("&", left, right)


def negation(operand: BExp) -> BExp:
    return Not(operand)


_AEXP_LEVEL = {"+": 1, "-": 1, "*": 2, "/": 2, "%": 2}
_BEXP_LEVEL = {"|": 1, "||": 1, "&": 2, "&&": 2}


def _aexp_level(a: AExp) -> int:
    if isinstance(a, BinOp):
        return _AEXP_LEVEL[a.op]
    if isinstance(a, (Neg, San)):
        return 3
    return 4


def _bexp_level(b: BExp) -> int:
    if isinstance(b, LogicOp):
        return _BEXP_LEVEL[b.op]
    if isinstance(b, Not):
        return 3
    return 4


def _wrap(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def pretty_aexp(a: AExp) -> str:
    if isinstance(a, Num):
        return str(a.value)
    if isinstance(a, Str):
        return f'"{a.value}"'
    if isinstance(a, Var):
        return a.name
    if isinstance(a, ArrayRef):
        return f"{a.array}[{pretty_aexp(a.index)}]"
    if isinstance(a, ArrayLength):
        return f"{a.array}#"
    if isinstance(a, Neg):
        return "-" + _wrap(pretty_aexp(a.operand), _aexp_level(a.operand) < 3)
    if isinstance(a, San):
        inner = pretty_aexp(a.operand)
        return "san" + (f"({inner})" if _aexp_level(a.operand) < 4 else f" {inner}")
    if isinstance(a, BinOp):
        level = _AEXP_LEVEL[a.op]
        left = _wrap(pretty_aexp(a.left), _aexp_level(a.left) < level)
        right = _wrap(pretty_aexp(a.right), _aexp_level(a.right) <= level)
        return f"{left}{a.op}{right}"
    raise TypeError(f"Not an arithmetic expression: {a!r}")


def pretty_bexp(b: BExp) -> str:
    if isinstance(b, BoolLit):
        return "true" if b.value else "false"
    if isinstance(b, RelOp):
        return f"{pretty_aexp(b.left)}{b.op}{pretty_aexp(b.right)}"
    if isinstance(b, Not):
        return "!" + _wrap(pretty_bexp(b.operand), _bexp_level(b.operand) < 4 or isinstance(b.operand, RelOp))
    if isinstance(b, LogicOp):
        level = _BEXP_LEVEL[b.op]
        left = _wrap(pretty_bexp(b.left), _bexp_level(b.left) < level)
        right = _wrap(pretty_bexp(b.right), _bexp_level(b.right) <= level)
        return f"{left} {b.op} {right}"
    raise TypeError(f"Not a boolean expression: {b!r}")


def _pretty_guarded(gc: GuardedCommand) -> str:
    if isinstance(gc, Guard):
        return f"{pretty_bexp(gc.test)} -> {_pretty_command(gc.body)}"
    if isinstance(gc.first, Choice):
        return _pretty_guarded(Choice(gc.first.first, Choice(gc.first.second, gc.second)))
    return f"{_pretty_guarded(gc.first)} [] {_pretty_guarded(gc.second)}"


def _pretty_command(c: Command) -> str:
    if isinstance(c, Assign):
        return f"{c.var}:={pretty_aexp(c.expr)}"
    if isinstance(c, ArrayAssign):
        return f"{c.array}[{pretty_aexp(c.index)}]:={pretty_aexp(c.expr)}"
    if isinstance(c, Input):
        return f"{c.channel}?{c.var}"
    if isinstance(c, InputArray):
        return f"{c.channel}?{c.array}[{pretty_aexp(c.index)}]"
    if isinstance(c, Output):
        return f"{c.channel}!{pretty_aexp(c.expr)}"
    if isinstance(c, Skip):
        return "skip"
    if isinstance(c, Test):
        return pretty_bexp(c.cond)
    if isinstance(c, If):
        return f"if {_pretty_guarded(c.body)} fi"
    if isinstance(c, Do):
        return f"do {_pretty_guarded(c.body)} od"
    if isinstance(c, Seq):
        if isinstance(c.first, Seq):
            # sequencing nests to the right when parsed
            return f"{_pretty_command(c.first.first)}; {_pretty_command(Seq(c.first.second, c.second))}"
        return f"{_pretty_command(c.first)}; {_pretty_command(c.second)}"
    raise TypeError(f"Not a command: {c!r}")


def pretty(node: object) -> str:
    """Render an expression, action, command or guarded command as surface text."""
    if isinstance(node, (Num, Str, Var, ArrayRef, ArrayLength, BinOp, Neg, San)):
        return pretty_aexp(node)
    if isinstance(node, (BoolLit, RelOp, LogicOp, Not)):
        return pretty_bexp(node)
    if isinstance(node, (Guard, Choice)):
        return _pretty_guarded(node)
    return _pretty_command(node)
