from __future__ import annotations
"""Intervals over a finite set of permitted endpoints.

Bounds are integers or ``±math.inf``. An endpoint set ``K`` of ``None`` means
every integer is a permitted endpoint; the resulting domain has infinite
ascending chains and is only solvable with a widening.
"""

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional, Union

from .semantics import divide
from .signs import BOOLS, FALSE, TRUE

Bound = Union[int, float]

NEG_INF = -math.inf
POS_INF = math.inf


@dataclass(frozen=True)
class Interval:
    """``[lo, hi]``; any interval with ``lo > hi`` is the empty interval ⊥."""

    lo: Bound
    hi: Bound

    def __post_init__(self):
        if self.lo > self.hi:
            object.__setattr__(self, "lo", POS_INF)
            object.__setattr__(self, "hi", NEG_INF)

    @property
    def is_bottom(self) -> bool:
        return self.lo > self.hi

    @property
    def is_top(self) -> bool:
        return self.lo == NEG_INF and self.hi == POS_INF

    def contains(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def __str__(self) -> str:
        if self.is_bottom:
            return "⊥"
        return f"[{_format_bound(self.lo)}, {_format_bound(self.hi)}]"


BOTTOM = Interval(POS_INF, NEG_INF)
TOP = Interval(NEG_INF, POS_INF)


def _format_bound(bound: Bound) -> str:
    if bound == NEG_INF:
        return "-inf"
    if bound == POS_INF:
        return "+inf"
    return str(int(bound))


def parse_bound(raw: object) -> Bound:
    if raw in ("-inf", "-∞"):
        return NEG_INF
    if raw in ("+inf", "inf", "+∞", "∞"):
        return POS_INF
    if isinstance(raw, int) and not isinstance(raw, bool):
        return raw
    raise ValueError(f"expected an integer, '-inf' or '+inf', got {raw!r}")


def parse_interval(raw: object) -> Interval:
    if raw in ("bottom", "⊥"):
        return BOTTOM
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise ValueError(f"expected [lo, hi], got {raw!r}")
    lo, hi = parse_bound(raw[0]), parse_bound(raw[1])
    if lo == POS_INF or hi == NEG_INF or lo > hi:
        raise ValueError(f"malformed interval {raw!r}")
    return Interval(lo, hi)


class Endpoints:
    """The permitted endpoints ``K`` with the rounding functions ``⌊·⌋`` and ``⌈·⌉``."""

    def __init__(self, points: Optional[Iterable[int]] = None):
        self.points: Optional[tuple[int, ...]] = None if points is None else tuple(sorted(set(points)))

    @property
    def unrestricted(self) -> bool:
        return self.points is None

    def floor(self, n: Bound) -> Bound:
        """Greatest permitted endpoint not above ``n``, or ``-inf``."""
        if self.points is None or n == NEG_INF:
            return n
        index = bisect_right(self.points, n)
        return self.points[index - 1] if index else NEG_INF

    def ceil(self, n: Bound) -> Bound:
        """Least permitted endpoint not below ``n``, or ``+inf``."""
        if self.points is None or n == POS_INF:
            return n
        index = bisect_left(self.points, n)
        return self.points[index] if index < len(self.points) else POS_INF

    def clamp(self, lo: Bound, hi: Bound) -> Interval:
        if lo > hi:
            return BOTTOM
        return Interval(self.floor(lo), self.ceil(hi))

    def point(self, n: int) -> Interval:
        return self.clamp(n, n)

    def __eq__(self, other) -> bool:
        return isinstance(other, Endpoints) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"Endpoints({list(self.points) if self.points is not None else None})"


def leq(left: Interval, right: Interval) -> bool:
    if left.is_bottom:
        return True
    if right.is_bottom:
        return False
    return right.lo <= left.lo and left.hi <= right.hi


def join(left: Interval, right: Interval) -> Interval:
    if left.is_bottom:
        return right
    if right.is_bottom:
        return left
    return Interval(min(left.lo, right.lo), max(left.hi, right.hi))


def meet(left: Interval, right: Interval) -> Interval:
    if left.is_bottom or right.is_bottom:
        return BOTTOM
    return Interval(max(left.lo, right.lo), min(left.hi, right.hi))


def _times(a: Bound, b: Bound) -> Bound:
    # values are finite, so an infinite bound times zero stays zero
    if a == 0 or b == 0:
        return 0
    return a * b


def _quotients(n: Bound, d: Bound) -> list[Bound]:
    if n in (NEG_INF, POS_INF) and d in (NEG_INF, POS_INF):
        return [0, n if d > 0 else -n]
    if d in (NEG_INF, POS_INF):
        return [0]
    if n in (NEG_INF, POS_INF):
        return [n if d > 0 else -n]
    return [divide(int(n), int(d))]


def _nonzero_parts(divisor: Interval) -> list[Interval]:
    parts = []
    if divisor.lo <= -1:
        parts.append(Interval(divisor.lo, min(divisor.hi, -1)))
    if divisor.hi >= 1:
        parts.append(Interval(max(divisor.lo, 1), divisor.hi))
    return parts


def _divide(left: Interval, right: Interval) -> tuple[Bound, Bound] | None:
    candidates: list[Bound] = []
    for part in _nonzero_parts(right):
        for n, d in product((left.lo, left.hi), (part.lo, part.hi)):
            candidates.extend(_quotients(n, d))
    if not candidates:
        return None
    return min(candidates), max(candidates)


def _modulo(left: Interval, right: Interval) -> tuple[Bound, Bound] | None:
    parts = _nonzero_parts(right)
    if not parts:
        return None
    largest = max(max(abs(part.lo), abs(part.hi)) for part in parts)
    bound = largest - 1
    lo = max(left.lo, -bound) if left.lo < 0 else 0
    hi = min(left.hi, bound) if left.hi > 0 else 0
    return lo, hi


def arithmetic(op: str, left: Interval, right: Interval, endpoints: Endpoints) -> Interval:
    """Abstract arithmetic; the exact bounds are rounded outwards to ``K``."""
    if left.is_bottom or right.is_bottom:
        return BOTTOM
    if op == "+":
        return endpoints.clamp(left.lo + right.lo, left.hi + right.hi)
    if op == "-":
        return endpoints.clamp(left.lo - right.hi, left.hi - right.lo)
    if op == "*":
        products = [_times(a, b) for a, b in product((left.lo, left.hi), (right.lo, right.hi))]
        return endpoints.clamp(min(products), max(products))
    if op in ("/", "%"):
        bounds = _divide(left, right) if op == "/" else _modulo(left, right)
        if bounds is None:
            return BOTTOM
        return endpoints.clamp(*bounds)
    raise ValueError(f"Unknown arithmetic operator {op!r}")


def negate(value: Interval, endpoints: Endpoints) -> Interval:
    if value.is_bottom:
        return BOTTOM
    return endpoints.clamp(-value.hi, -value.lo)


def relation(op: str, left: Interval, right: Interval) -> frozenset[str]:
    if left.is_bottom or right.is_bottom:
        return frozenset()
    if op == "<":
        if left.hi < right.lo:
            return frozenset({TRUE})
        if left.lo >= right.hi:
            return frozenset({FALSE})
        return BOOLS
    if op == "<=":
        if left.hi <= right.lo:
            return frozenset({TRUE})
        if left.lo > right.hi:
            return frozenset({FALSE})
        return BOOLS
    if op == ">":
        return relation("<", right, left)
    if op == ">=":
        return relation("<=", right, left)
    if op == "=":
        if left.hi < right.lo or right.hi < left.lo:
            return frozenset({FALSE})
        if left.lo == left.hi == right.lo == right.hi:
            return frozenset({TRUE})
        return BOOLS
    if op == "!=":
        flipped = {TRUE: FALSE, FALSE: TRUE}
        return frozenset(flipped[b] for b in relation("=", left, right))
    raise ValueError(f"Unknown relational operator {op!r}")


def base_intervals(points: Iterable[int]) -> list[Interval]:
    """The minimal intervals over the endpoint set ``points``.

    Each has the form ``[k-, k+]`` with no permitted endpoint strictly between and
    ``k- + 1 != k+``.
    """
    ordered = sorted(set(points))
    if not ordered:
        return [TOP]
    bases = [Interval(NEG_INF, ordered[0])]
    for index, k in enumerate(ordered):
        bases.append(Interval(k, k))
        if index + 1 < len(ordered):
            following = ordered[index + 1]
            if k + 1 != following:
                bases.append(Interval(k, following))
    bases.append(Interval(ordered[-1], POS_INF))
    return bases


def setof_sample(value: Interval, window: Iterable[int]) -> frozenset[int]:
    """The members of ``value`` among ``window``."""
    return frozenset(n for n in window if value.contains(n))
