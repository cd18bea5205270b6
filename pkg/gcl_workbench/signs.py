from __future__ import annotations
"""Signs, sets of signs and the sign-level abstract operators."""

from functools import lru_cache
from itertools import product
from typing import Iterable

from .models import Undefined
from .semantics import apply_arithmetic, apply_relation

NEGATIVE = "-"
ZERO = "0"
POSITIVE = "+"
SIGNS: frozenset[str] = frozenset({NEGATIVE, ZERO, POSITIVE})
SIGN_ORDER = (NEGATIVE, ZERO, POSITIVE)

TRUE = "tt"
FALSE = "ff"
BOOLS: frozenset[str] = frozenset({TRUE, FALSE})

# Two representatives per non-zero sign reach every sign a result can have.
WITNESSES = {NEGATIVE: (-2, -1), ZERO: (0,), POSITIVE: (1, 2)}


def sign(n: int) -> str:
    if n < 0:
        return NEGATIVE
    if n == 0:
        return ZERO
    return POSITIVE


def sign_set(values: Iterable[int]) -> frozenset[str]:
    return frozenset(sign(v) for v in values)


def truth(value: bool) -> str:
    return TRUE if value else FALSE


@lru_cache(maxsize=None)
def sign_arithmetic(op: str, left: str, right: str) -> frozenset[str]:
    """Signs ``op`` can produce from operands of the given signs; division by zero contributes nothing."""
    results = set()
    for n1, n2 in product(WITNESSES[left], WITNESSES[right]):
        value = apply_arithmetic(op, n1, n2)
        if not isinstance(value, Undefined):
            results.add(sign(value))
    return frozenset(results)


@lru_cache(maxsize=None)
def sign_relation(op: str, left: str, right: str) -> frozenset[str]:
    return frozenset(
        truth(apply_relation(op, n1, n2)) for n1, n2 in product(WITNESSES[left], WITNESSES[right])
    )


def lift_arithmetic(op: str, left: frozenset[str], right: frozenset[str]) -> frozenset[str]:
    """Pointwise lifting to sets; an empty operand gives an empty result."""
    result: frozenset[str] = frozenset()
    for s1, s2 in product(left, right):
        result |= sign_arithmetic(op, s1, s2)
    return result


def lift_relation(op: str, left: frozenset[str], right: frozenset[str]) -> frozenset[str]:
    result: frozenset[str] = frozenset()
    for s1, s2 in product(left, right):
        result |= sign_relation(op, s1, s2)
    return result


def negate_signs(signs: frozenset[str]) -> frozenset[str]:
    flipped = {NEGATIVE: POSITIVE, ZERO: ZERO, POSITIVE: NEGATIVE}
    return frozenset(flipped[s] for s in signs)


def format_signs(signs: Iterable[str]) -> str:
    ordered = [s for s in SIGN_ORDER if s in set(signs)]
    return "{" + ", ".join(ordered) + "}"


def abstract_logic(op: str, left: frozenset[str], right: frozenset[str]) -> frozenset[str]:
    """Boolean operators on sets of truth values.

    ``&`` and ``|`` are strict and pointwise; ``&&`` and ``||`` only consult the
    right operand for the left values that do not decide the result.
    """
    if op in ("&", "|"):
        result = set()
        for b1, b2 in product(left, right):
            if op == "&":
                result.add(truth(b1 == TRUE and b2 == TRUE))
            else:
                result.add(truth(b1 == TRUE or b2 == TRUE))
        return frozenset(result)
    if op == "&&":
        result = {FALSE} if FALSE in left else set()
        if TRUE in left:
            result |= right
        return frozenset(result)
    if op == "||":
        result = {TRUE} if TRUE in left else set()
        if FALSE in left:
            result |= right
        return frozenset(result)
    raise ValueError(f"Unknown logical operator {op!r}")


def abstract_not(values: frozenset[str]) -> frozenset[str]:
    return frozenset(truth(b == FALSE) for b in values)
