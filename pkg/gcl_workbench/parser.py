from __future__ import annotations
"""Parser for Guarded Commands and its security dialect."""

from enum import Enum
import logging

from lark import Lark, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from .syntax import (
    AExp,
    Action,
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
    Test,
    Var,
)

LOGGER = logging.getLogger(__name__)

GRAMMAR = r"""
?command: simple_command
        | simple_command ";" command -> seq

?simple_command: NAME ":=" aexp -> assign
    | NAME "[" aexp "]" ":=" aexp -> array_assign
    | NAME "?" NAME -> input
    | NAME "?" NAME "[" aexp "]" -> input_array
    | NAME "!" aexp -> output
    | "skip" -> skip
    | "if" guarded "fi" -> if_
    | "do" guarded "od" -> do_

?guarded: guard
        | guard "[]" guarded -> choice

guard: bexp "->" command

?action: simple_action
       | bexp -> test

?simple_action: NAME ":=" aexp -> assign
    | NAME "[" aexp "]" ":=" aexp -> array_assign
    | NAME "?" NAME -> input
    | NAME "?" NAME "[" aexp "]" -> input_array
    | NAME "!" aexp -> output
    | "skip" -> skip

?aexp: term
     | aexp "+" term -> add
     | aexp "-" term -> sub

?term: factor
     | term "*" factor -> mul
     | term "/" factor -> div
     | term "%" factor -> mod

?factor: atom
       | "-" factor -> neg
       | "san" factor -> san

?atom: INT -> num
     | STRING -> string
     | NAME -> var
     | NAME "[" aexp "]" -> array_ref
     | NAME "#" -> array_length
     | "(" aexp ")"

?bexp: bterm
     | bexp "|" bterm -> or_
     | bexp "||" bterm -> cor

?bterm: bfactor
      | bterm "&" bfactor -> and_
      | bterm "&&" bfactor -> cand

?bfactor: batom
        | "!" bfactor -> not_

?batom: "true" -> true
      | "false" -> false
      | aexp RELOP aexp -> rel
      | "(" bexp ")"

RELOP: "<=" | ">=" | "!=" | "=" | "<" | ">"
NAME: /[A-Za-z_][A-Za-z0-9_']*/
INT: /[0-9]+/
STRING: /"[^"\n]*"/
COMMENT: /\/\/[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""


class Dialect(str, Enum):
    PLAIN = "plain"
    SECURITY = "security"


class ParseError(ValueError):
    """Raised when program text cannot be turned into a valid syntax tree."""

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class LexicalError(ParseError):
    """Raised when the text contains a character that starts no token."""


class SyntacticError(ParseError):
    """Raised when a token appears where the grammar does not allow it."""

    def __init__(
        self,
        message: str,
        *,
        line: int | None = None,
        column: int | None = None,
        expected: tuple[str, ...] = (),
    ):
        super().__init__(message, line=line, column=column)
        self.expected = expected


class DialectError(ParseError):
    """Raised when a construct is not legal in the selected dialect."""


class NameKindError(ParseError):
    """Raised when one identifier is used both as a variable and as an array."""


def _binary_rule(op: str):
    def build(self, items):
        left, right = items
        return BinOp(op, left, right)

    return build


def _logical_rule(op: str):
    def build(self, items):
        left, right = items
        return LogicOp(op, left, right)

    return build


class _AstBuilder(Transformer):
    def seq(self, items):
        first, second = items
        return Seq(first, second)

    def assign(self, items):
        name, expr = items
        return Assign(str(name), expr)

    def array_assign(self, items):
        name, index, expr = items
        return ArrayAssign(str(name), index, expr)

    def input(self, items):
        channel, name = items
        return Input(str(channel), str(name))

    def input_array(self, items):
        channel, name, index = items
        return InputArray(str(channel), str(name), index)

    def output(self, items):
        channel, expr = items
        return Output(str(channel), expr)

    def skip(self, _items):
        return Skip()

    def if_(self, items):
        (body,) = items
        return If(body)

    def do_(self, items):
        (body,) = items
        return Do(body)

    def choice(self, items):
        first, second = items
        return Choice(first, second)

    def guard(self, items):
        test, body = items
        return Guard(test, body)

    def test(self, items):
        (cond,) = items
        return Test(cond)

    add = _binary_rule("+")
    sub = _binary_rule("-")
    mul = _binary_rule("*")
    div = _binary_rule("/")
    mod = _binary_rule("%")

    def neg(self, items):
        (operand,) = items
        return Neg(operand)

    def san(self, items):
        (operand,) = items
        return San(operand)

    def num(self, items):
        (token,) = items
        return Num(int(token))

    def string(self, items):
        (token,) = items
        return Str(str(token)[1:-1])

    def var(self, items):
        (token,) = items
        return Var(str(token))

    def array_ref(self, items):
        name, index = items
        return ArrayRef(str(name), index)

    def array_length(self, items):
        (name,) = items
        return ArrayLength(str(name))

    or_ = _logical_rule("|")
    cor = _logical_rule("||")
    and_ = _logical_rule("&")
    cand = _logical_rule("&&")

    def not_(self, items):
        (operand,) = items
        return Not(operand)

    def true(self, _items):
        return BoolLit(True)

    def false(self, _items):
        return BoolLit(False)

    def rel(self, items):
        left, op, right = items
        return RelOp(str(op), left, right)


_PARSER = Lark(GRAMMAR, start=["command", "action", "aexp", "bexp"], parser="lalr")


def _parse(text: str, start: str):
    try:
        tree = _PARSER.parse(text, start=start)
    except UnexpectedCharacters as exc:
        raise LexicalError(
            f"Unexpected character {exc.char!r} at line {exc.line}, column {exc.column}",
            line=exc.line,
            column=exc.column,
        ) from None
    except UnexpectedToken as exc:
        expected = tuple(sorted(exc.expected))
        found = "end of input" if exc.token.type == "$END" else repr(str(exc.token))
        raise SyntacticError(
            f"Unexpected {found} at line {exc.line}, column {exc.column}; expected one of {', '.join(expected)}",
            line=exc.line,
            column=exc.column,
            expected=expected,
        ) from None
    except UnexpectedEOF as exc:
        expected = tuple(sorted(exc.expected))
        raise SyntacticError(
            f"Unexpected end of input; expected one of {', '.join(expected)}",
            expected=expected,
        ) from None
    except UnexpectedInput as exc:  # pragma: no cover - remaining lark variants
        raise SyntacticError(str(exc)) from None
    return _AstBuilder().transform(tree)


def _children(node: object) -> list[object]:
    if isinstance(node, (Num, Str, Var, ArrayLength, BoolLit, Skip)):
        return []
    if isinstance(node, (ArrayRef, InputArray)):
        return [node.index]
    if isinstance(node, (BinOp, RelOp, LogicOp)):
        return [node.left, node.right]
    if isinstance(node, (Neg, San, Not)):
        return [node.operand]
    if isinstance(node, (Assign, Output)):
        return [node.expr]
    if isinstance(node, ArrayAssign):
        return [node.index, node.expr]
    if isinstance(node, Input):
        return []
    if isinstance(node, Test):
        return [node.cond]
    if isinstance(node, (Seq, Choice)):
        return [node.first, node.second]
    if isinstance(node, (If, Do)):
        return [node.body]
    if isinstance(node, Guard):
        return [node.test, node.body]
    raise TypeError(f"Unknown syntax node: {node!r}")


def walk(node: object):
    """Yield ``node`` and every syntax node below it, parents first."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(_children(current)))


def validate(node: object, dialect: Dialect | str = Dialect.PLAIN) -> None:
    dialect = Dialect(dialect)
    variables: set[str] = set()
    arrays: set[str] = set()
    for current in walk(node):
        if dialect is Dialect.PLAIN and isinstance(current, San):
            raise DialectError("'san' is only available in the security dialect")
        if dialect is Dialect.PLAIN and isinstance(current, Str):
            raise DialectError("String literals are only available in the security dialect")
        if dialect is Dialect.SECURITY and isinstance(current, (Input, InputArray, Output)):
            raise DialectError("Channel communication is not available in the security dialect")
        if isinstance(current, Var):
            variables.add(current.name)
        elif isinstance(current, Assign):
            variables.add(current.var)
        elif isinstance(current, Input):
            variables.add(current.var)
        elif isinstance(current, (ArrayRef, ArrayLength, ArrayAssign, InputArray)):
            arrays.add(current.array)
    clashes = sorted(variables & arrays)
    if clashes:
        raise NameKindError(f"'{clashes[0]}' is used both as a variable and as an array")


def parse_program(text: str, dialect: Dialect | str = Dialect.PLAIN) -> Command:
    command = _parse(text, "command")
    validate(command, dialect)
    LOGGER.debug("Parsed %s program of %d characters", Dialect(dialect).value, len(text))
    return command


def parse_action(text: str, dialect: Dialect | str = Dialect.PLAIN) -> Action:
    action = _parse(text, "action")
    validate(action, dialect)
    return action


def parse_aexp(text: str, dialect: Dialect | str = Dialect.PLAIN) -> AExp:
    expr = _parse(text, "aexp")
    validate(expr, dialect)
    return expr


def parse_bexp(text: str, dialect: Dialect | str = Dialect.PLAIN) -> BExp:
    expr = _parse(text, "bexp")
    validate(expr, dialect)
    return expr
