from __future__ import annotations
"""Extended integer values for constant propagation."""

from enum import Enum
from typing import Iterable, Union

from .models import Undefined
from .semantics import apply_arithmetic, apply_relation
from .signs import BOOLS, truth


class Special(Enum):
    BOTTOM = "⊥"
    TOP = "⊤"

    def __str__(self) -> str:
        return self.value


BOTTOM = Special.BOTTOM
TOP = Special.TOP

CPValue = Union[int, Special]


def is_constant(value: CPValue) -> bool:
    return not isinstance(value, Special)


def cp_leq(left: CPValue, right: CPValue) -> bool:
    return left is BOTTOM or right is TOP or left == right


def cp_join(left: CPValue, right: CPValue) -> CPValue:
    if left is BOTTOM:
        return right
    if right is BOTTOM:
        return left
    if left == right:
        return left
    return TOP


def cp_join_all(values: Iterable[CPValue]) -> CPValue:
    result: CPValue = BOTTOM
    for value in values:
        result = cp_join(result, value)
    return result


def cp_arithmetic(op: str, left: CPValue, right: CPValue) -> CPValue:
    """Strict in ⊥, saturating at ⊤; a divisor known to be 0 yields ⊥."""
    if left is BOTTOM or right is BOTTOM:
        return BOTTOM
    if op in ("/", "%") and right == 0:
        return BOTTOM
    if left is TOP or right is TOP:
        return TOP
    value = apply_arithmetic(op, left, right)
    return BOTTOM if isinstance(value, Undefined) else value


def cp_negate(value: CPValue) -> CPValue:
    return value if isinstance(value, Special) else -value


def cp_relation(op: str, left: CPValue, right: CPValue) -> frozenset[str]:
    if left is BOTTOM or right is BOTTOM:
        return frozenset()
    if left is TOP or right is TOP:
        return BOOLS
    return frozenset({truth(apply_relation(op, left, right))})


def format_cp(value: CPValue) -> str:
    return str(value)


def parse_cp(raw: object) -> CPValue:
    """Read a value from the abstract-memory file: an integer, ``"top"`` or ``"bottom"``."""
    if isinstance(raw, bool):
        raise ValueError(f"expected an integer or 'top', got {raw!r}")
    if isinstance(raw, int):
        return raw
    if raw in ("top", "⊤"):
        return TOP
    if raw in ("bottom", "⊥"):
        return BOTTOM
    raise ValueError(f"expected an integer or 'top', got {raw!r}")
