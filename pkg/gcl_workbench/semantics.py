from __future__ import annotations
"""Concrete semantics: expressions, actions and execution sequences."""

import logging
import random

from .models import (
    Configuration,
    ExecutionStatus,
    Memory,
    Path,
    ProgramGraph,
    Stuck,
    Trace,
    Undefined,
)
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

LOGGER = logging.getLogger(__name__)


def divide(n: int, d: int) -> int:
    """Integer division truncating toward zero."""
    quotient = abs(n) // abs(d)
    return quotient if (n >= 0) == (d > 0) else -quotient


def modulo(n: int, d: int) -> int:
    """Remainder matching :func:`divide`, so ``n == divide(n, d) * d + modulo(n, d)``."""
    return n - divide(n, d) * d


def apply_arithmetic(op: str, left: int, right: int) -> int | Undefined:
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if right == 0:
        return Undefined("division by zero")
    if op == "/":
        return divide(left, right)
    if op == "%":
        return modulo(left, right)
    raise ValueError(f"Unknown arithmetic operator {op!r}")


def apply_relation(op: str, left: int, right: int) -> bool:
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    if op == ">=":
        return left >= right
    raise ValueError(f"Unknown relational operator {op!r}")


def eval_aexp(a: AExp, memory: Memory) -> int | Undefined:
    if isinstance(a, Num):
        return a.value
    if isinstance(a, Var):
        if a.name not in memory.variables:
            return Undefined(f"unknown variable {a.name}")
        return memory.variables[a.name]
    if isinstance(a, ArrayRef):
        if a.array not in memory.arrays:
            return Undefined(f"unknown array {a.array}")
        index = eval_aexp(a.index, memory)
        if isinstance(index, Undefined):
            return index
        entries = memory.arrays[a.array]
        if not 0 <= index < len(entries):
            return Undefined(f"index {index} out of bounds for {a.array}")
        return entries[index]
    if isinstance(a, ArrayLength):
        if a.array not in memory.arrays:
            return Undefined(f"unknown array {a.array}")
        return len(memory.arrays[a.array])
    if isinstance(a, BinOp):
        left = eval_aexp(a.left, memory)
        if isinstance(left, Undefined):
            return left
        right = eval_aexp(a.right, memory)
        if isinstance(right, Undefined):
            return right
        return apply_arithmetic(a.op, left, right)
    if isinstance(a, Neg):
        value = eval_aexp(a.operand, memory)
        return value if isinstance(value, Undefined) else -value
    if isinstance(a, San):
        return eval_aexp(a.operand, memory)
    if isinstance(a, Str):
        return Undefined("string literals have no integer value")
    raise TypeError(f"Not an arithmetic expression: {a!r}")


def eval_bexp(b: BExp, memory: Memory) -> bool | Undefined:
    if isinstance(b, BoolLit):
        return b.value
    if isinstance(b, RelOp):
        left = eval_aexp(b.left, memory)
        if isinstance(left, Undefined):
            return left
        right = eval_aexp(b.right, memory)
        if isinstance(right, Undefined):
            return right
        return apply_relation(b.op, left, right)
    if isinstance(b, Not):
        value = eval_bexp(b.operand, memory)
        return value if isinstance(value, Undefined) else not value
    if isinstance(b, LogicOp):
        left = eval_bexp(b.left, memory)
        if isinstance(left, Undefined):
            return left
        if b.op == "&&" and not left:
            return False
        if b.op == "||" and left:
            return True
        right = eval_bexp(b.right, memory)
        if isinstance(right, Undefined):
            return right
        if b.op in ("&", "&&"):
            return left and right
        return left or right
    raise TypeError(f"Not a boolean expression: {b!r}")


def step_action(action: Action, memory: Memory) -> Memory | Stuck:
    if isinstance(action, Skip):
        return memory
    if isinstance(action, Test):
        value = eval_bexp(action.cond, memory)
        if isinstance(value, Undefined):
            return Stuck(value.reason)
        return memory if value else Stuck("test is false")
    if isinstance(action, Assign):
        if action.var not in memory.variables:
            return Stuck(f"unknown variable {action.var}")
        value = eval_aexp(action.expr, memory)
        if isinstance(value, Undefined):
            return Stuck(value.reason)
        return memory.with_variable(action.var, value)
    if isinstance(action, ArrayAssign):
        index = eval_aexp(action.index, memory)
        if isinstance(index, Undefined):
            return Stuck(index.reason)
        value = eval_aexp(action.expr, memory)
        if isinstance(value, Undefined):
            return Stuck(value.reason)
        stuck = _check_slot(memory, action.array, index)
        return stuck or memory.with_entry(action.array, index, value)
    if isinstance(action, Input):
        if action.var not in memory.variables:
            return Stuck(f"unknown variable {action.var}")
        pending = memory.channels.get(action.channel)
        if not pending:
            return Stuck(f"no input available on {action.channel}")
        return memory.with_variable(action.var, pending[0]).with_channel(action.channel, pending[1:])
    if isinstance(action, InputArray):
        index = eval_aexp(action.index, memory)
        if isinstance(index, Undefined):
            return Stuck(index.reason)
        stuck = _check_slot(memory, action.array, index)
        if stuck is not None:
            return stuck
        pending = memory.channels.get(action.channel)
        if not pending:
            return Stuck(f"no input available on {action.channel}")
        updated = memory.with_entry(action.array, index, pending[0])
        return updated.with_channel(action.channel, pending[1:])
    if isinstance(action, Output):
        if action.channel not in memory.channels:
            return Stuck(f"unknown channel {action.channel}")
        value = eval_aexp(action.expr, memory)
        if isinstance(value, Undefined):
            return Stuck(value.reason)
        return memory.with_channel(action.channel, memory.channels[action.channel] + (value,))
    raise TypeError(f"Not an action: {action!r}")


def _check_slot(memory: Memory, array: str, index: int) -> Stuck | None:
    if array not in memory.arrays:
        return Stuck(f"unknown array {array}")
    if not 0 <= index < len(memory.arrays[array]):
        return Stuck(f"index {index} out of bounds for {array}")
    return None


def execute(pg: ProgramGraph, memory: Memory, *, max_steps: int = 200, seed: int = 0) -> Trace:
    """Run ``pg`` from its initial node, choosing among enabled edges with a seeded generator."""
    if max_steps < 0:
        raise ValueError("max_steps must not be negative")
    chooser = random.Random(seed)
    node = pg.initial
    configurations = [Configuration(node, memory)]
    path = Path((node,))
    while True:
        if node == pg.final:
            return Trace(configurations, path, ExecutionStatus.FINAL)
        enabled = []
        reasons = []
        for edge in pg.out_edges(node):
            outcome = step_action(edge.action, memory)
            if isinstance(outcome, Stuck):
                reasons.append(f"{edge.label}: {outcome.reason}")
            else:
                enabled.append((edge, outcome))
        if not enabled:
            reason = "; ".join(reasons) or "no outgoing edges"
            LOGGER.debug("Stuck at %s: %s", node, reason)
            return Trace(configurations, path, ExecutionStatus.STUCK, reason)
        if len(path) >= max_steps:
            return Trace(configurations, path, ExecutionStatus.BUDGET, f"stopped after {max_steps} steps")
        edge, memory = enabled[0] if len(enabled) == 1 else chooser.choice(enabled)
        node = edge.target
        path = path.extend(edge)
        configurations.append(Configuration(node, memory))
