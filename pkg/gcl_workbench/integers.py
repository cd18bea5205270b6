from __future__ import annotations
"""Detection of Signs, Constant Propagation and Interval analysis.

The three analyses share the abstract memory shape and the clauses for
expressions and actions; an :class:`IntegerAnalysis` supplies the value-level
operations of one of them.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from itertools import product
from types import MappingProxyType
from typing import Any, Callable, Iterable, Mapping, Optional

from . import constants as cp
from . import intervals as ia
from .bitvector import free_vars
from .framework import AnalysisSpec, Direction
from .lattices import Domain
from .models import Memory, MemoryFormatError, ProgramGraph
from .signs import (
    BOOLS,
    FALSE,
    POSITIVE,
    SIGNS,
    TRUE,
    ZERO,
    abstract_logic,
    abstract_not,
    format_signs,
    lift_arithmetic,
    lift_relation,
    negate_signs,
    sign,
    sign_set,
)
from .syntax import (
    RELATIONAL_OPERATORS,
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

DEFAULT_BASIC_VARIABLE_LIMIT = 12


@dataclass(frozen=True)
class AbstractMemory:
    """Abstract values for variables and arrays (CP arrays hold one value per entry)."""

    variables: Mapping[str, Any] = field(default_factory=dict)
    arrays: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variables", MappingProxyType(dict(sorted(self.variables.items()))))
        object.__setattr__(self, "arrays", MappingProxyType(dict(sorted(self.arrays.items()))))

    def __hash__(self) -> int:
        return hash((tuple(self.variables.items()), tuple(self.arrays.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbstractMemory):
            return NotImplemented
        return dict(self.variables) == dict(other.variables) and dict(self.arrays) == dict(other.arrays)

    def with_variable(self, name: str, value: Any) -> "AbstractMemory":
        variables = dict(self.variables)
        variables[name] = value
        return AbstractMemory(variables, self.arrays)

    def with_array(self, name: str, value: Any) -> "AbstractMemory":
        arrays = dict(self.arrays)
        arrays[name] = value
        return AbstractMemory(self.variables, arrays)


class IntegerAnalysis(ABC):
    """Value-level operations of one integer analysis."""

    kind: str = ""
    acc_note: Optional[str] = None

    @property
    @abstractmethod
    def bottom(self) -> Any: ...

    @property
    @abstractmethod
    def top(self) -> Any: ...

    @abstractmethod
    def leq(self, left, right) -> bool: ...

    @abstractmethod
    def join(self, left, right): ...

    @abstractmethod
    def constant(self, n: int): ...

    @abstractmethod
    def arithmetic(self, op: str, left, right): ...

    @abstractmethod
    def negate(self, value): ...

    @abstractmethod
    def relation(self, op: str, left, right) -> frozenset[str]: ...

    @abstractmethod
    def array_length(self, array: str): ...

    @abstractmethod
    def read(self, memory: AbstractMemory, array: str, index) -> Any: ...

    @abstractmethod
    def write(self, memory: AbstractMemory, array: str, index, value) -> Optional[AbstractMemory]:
        """The memory after ``array[index] := value``, or ``None`` when the write is certain to fail."""

    @abstractmethod
    def receive(self, memory: AbstractMemory, array: str, index) -> Optional[AbstractMemory]: ...

    @abstractmethod
    def beta_value(self, n: int): ...

    @abstractmethod
    def beta_array(self, entries: tuple[int, ...]): ...

    @abstractmethod
    def format_value(self, value) -> str: ...

    def basic_values(self, value, test: BExp, memory: AbstractMemory) -> Optional[list]:
        """Basic values below ``value``; ``None`` when tests are not refined."""
        return None

    # Arrays hold one value per array for signs and intervals.
    def array_bottom(self, array: str):
        return self.bottom

    def array_top(self, array: str):
        return self.top

    def array_leq(self, left, right) -> bool:
        return self.leq(left, right)

    def array_join(self, left, right):
        return self.join(left, right)

    def format_array(self, value) -> str:
        return self.format_value(value)


class SignAnalysis(IntegerAnalysis):
    kind = "ds"
    acc_note = "finitely many sets of signs"

    @property
    def bottom(self) -> frozenset:
        return frozenset()

    @property
    def top(self) -> frozenset:
        return SIGNS

    def leq(self, left, right) -> bool:
        return left <= right

    def join(self, left, right):
        return left | right

    def constant(self, n: int):
        return frozenset({sign(n)})

    def arithmetic(self, op, left, right):
        return lift_arithmetic(op, left, right)

    def negate(self, value):
        return negate_signs(value)

    def relation(self, op, left, right):
        return lift_relation(op, left, right)

    def array_length(self, array: str):
        return frozenset({POSITIVE})

    @staticmethod
    def _may_be_valid(index) -> bool:
        return bool(index & {ZERO, POSITIVE})

    def read(self, memory, array, index):
        return memory.arrays[array] if self._may_be_valid(index) else frozenset()

    def write(self, memory, array, index, value):
        if not self._may_be_valid(index) or not value:
            return None
        return memory.with_array(array, memory.arrays[array] | value)

    def receive(self, memory, array, index):
        if not self._may_be_valid(index):
            return None
        return memory.with_array(array, SIGNS)

    def beta_value(self, n):
        return frozenset({sign(n)})

    def beta_array(self, entries):
        return sign_set(entries)

    def format_value(self, value) -> str:
        return format_signs(value)

    def basic_values(self, value, test, memory):
        return [frozenset({s}) for s in sorted(value)]


class ConstantAnalysis(IntegerAnalysis):
    """Constant propagation; arrays are tracked entry by entry and need their lengths."""

    kind = "cp"
    acc_note = "values form a lattice of height three"

    def __init__(self, lengths: Mapping[str, int] | None = None):
        self.lengths = dict(lengths or {})

    def _length(self, array: str) -> int:
        if array not in self.lengths:
            raise MemoryFormatError(
                f"Constant propagation needs the length of array '{array}'; give a memory or an abstract memory"
            )
        return self.lengths[array]

    @property
    def bottom(self):
        return cp.BOTTOM

    @property
    def top(self):
        return cp.TOP

    def leq(self, left, right) -> bool:
        return cp.cp_leq(left, right)

    def join(self, left, right):
        return cp.cp_join(left, right)

    def constant(self, n: int):
        return n

    def arithmetic(self, op, left, right):
        return cp.cp_arithmetic(op, left, right)

    def negate(self, value):
        return cp.cp_negate(value)

    def relation(self, op, left, right):
        return cp.cp_relation(op, left, right)

    def array_length(self, array: str):
        return self.lengths.get(array, cp.TOP)

    def read(self, memory, array, index):
        entries = memory.arrays[array]
        if index is cp.TOP:
            return cp.cp_join_all(entries)
        if cp.is_constant(index) and 0 <= index < len(entries):
            return entries[index]
        return cp.BOTTOM

    def write(self, memory, array, index, value):
        if value is cp.BOTTOM:
            return None
        entries = list(memory.arrays[array])
        if index is cp.TOP:
            return memory.with_array(array, tuple(cp.cp_join(entry, value) for entry in entries))
        if cp.is_constant(index) and 0 <= index < len(entries):
            entries[index] = value
            return memory.with_array(array, tuple(entries))
        return None

    def receive(self, memory, array, index):
        return self.write(memory, array, index, cp.TOP)

    def beta_value(self, n):
        return n

    def beta_array(self, entries):
        return tuple(entries)

    def format_value(self, value) -> str:
        return cp.format_cp(value)

    def array_bottom(self, array: str):
        return (cp.BOTTOM,) * self._length(array)

    def array_top(self, array: str):
        return (cp.TOP,) * self._length(array)

    def array_leq(self, left, right) -> bool:
        return all(cp.cp_leq(l, r) for l, r in zip(left, right))

    def array_join(self, left, right):
        return tuple(cp.cp_join(l, r) for l, r in zip(left, right))

    def format_array(self, value) -> str:
        return "[" + ", ".join(cp.format_cp(entry) for entry in value) + "]"


class IntervalAnalysis(IntegerAnalysis):
    """Interval analysis over the endpoints ``K`` (``None`` for unrestricted endpoints)."""

    kind = "ia"

    def __init__(self, K: Iterable[int] | None = None, lengths: Mapping[str, int] | None = None):
        self.endpoints = ia.Endpoints(K)
        self.lengths = dict(lengths or {})
        self.acc_note = None if self.endpoints.unrestricted else "finitely many endpoints"

    @property
    def bottom(self):
        return ia.BOTTOM

    @property
    def top(self):
        return ia.TOP

    def leq(self, left, right) -> bool:
        return ia.leq(left, right)

    def join(self, left, right):
        return ia.join(left, right)

    def constant(self, n: int):
        return self.endpoints.point(n)

    def arithmetic(self, op, left, right):
        return ia.arithmetic(op, left, right, self.endpoints)

    def negate(self, value):
        return ia.negate(value, self.endpoints)

    def relation(self, op, left, right):
        return ia.relation(op, left, right)

    def array_length(self, array: str):
        if array in self.lengths:
            return self.endpoints.point(self.lengths[array])
        return self.endpoints.clamp(1, ia.POS_INF)

    def _indices(self, array: str) -> ia.Interval:
        upper = self.lengths[array] - 1 if array in self.lengths else ia.POS_INF
        return self.endpoints.clamp(0, upper)

    def read(self, memory, array, index):
        if ia.meet(index, self._indices(array)).is_bottom:
            return ia.BOTTOM
        return memory.arrays[array]

    def write(self, memory, array, index, value):
        if ia.meet(index, self._indices(array)).is_bottom or value.is_bottom:
            return None
        return memory.with_array(array, ia.join(memory.arrays[array], value))

    def receive(self, memory, array, index):
        if ia.meet(index, self._indices(array)).is_bottom:
            return None
        return memory.with_array(array, ia.TOP)

    def beta_value(self, n):
        return self.endpoints.point(n)

    def beta_array(self, entries):
        result = ia.BOTTOM
        for entry in entries:
            result = ia.join(result, self.endpoints.point(entry))
        return result

    def format_value(self, value) -> str:
        return str(value)

    def basic_values(self, value, test, memory):
        if self.endpoints.points is not None:
            points: Iterable[int] = self.endpoints.points
        else:
            points = _test_points(test, memory)
        return [base for base in ia.base_intervals(points) if ia.leq(base, value)]


def _test_points(test: BExp, memory: AbstractMemory) -> set[int]:
    """Endpoints to split on when ``K`` is unrestricted: the finite bounds in play and each test constant with its neighbours."""
    points: set[int] = set()
    for name in free_vars(test):
        value = memory.variables.get(name)
        if isinstance(value, ia.Interval) and not value.is_bottom:
            points |= {int(b) for b in (value.lo, value.hi) if b not in (ia.NEG_INF, ia.POS_INF)}
    for constant in _constants(test):
        points |= {constant - 1, constant, constant + 1}
    return points


def _constants(e) -> set[int]:
    if isinstance(e, Num):
        return {e.value}
    if isinstance(e, (BinOp, RelOp, LogicOp)):
        return _constants(e.left) | _constants(e.right)
    if isinstance(e, (Neg, San, Not)):
        return _constants(e.operand)
    if isinstance(e, ArrayRef):
        return _constants(e.index)
    return set()


def program_constants(pg: ProgramGraph) -> frozenset[int]:
    """Numerals occurring in the actions of ``pg``."""
    found: set[int] = set()
    for action in pg.actions:
        if isinstance(action, Assign):
            found |= _constants(action.expr)
        elif isinstance(action, ArrayAssign):
            found |= _constants(action.index) | _constants(action.expr)
        elif isinstance(action, InputArray):
            found |= _constants(action.index)
        elif isinstance(action, Output):
            found |= _constants(action.expr)
        elif isinstance(action, Test):
            found |= _constants(action.cond)
    return frozenset(found)


def analysis_for(kind: str, *, K: Iterable[int] | None = None, lengths: Mapping[str, int] | None = None) -> IntegerAnalysis:
    if kind == "ds":
        return SignAnalysis()
    if kind == "cp":
        return ConstantAnalysis(lengths)
    if kind in ("ia", "interval"):
        return IntervalAnalysis(K, lengths)
    raise ValueError(f"Unknown integer analysis {kind!r}")


class MemoryDomain(Domain[AbstractMemory]):
    """Abstract memories over fixed variables and arrays, ordered pointwise."""

    def __init__(
        self,
        analysis: IntegerAnalysis,
        variables: Iterable[str],
        arrays: Iterable[str],
        *,
        value_widen: Callable[[Any, Any], Any] | None = None,
    ):
        self.analysis = analysis
        self.variables = tuple(sorted(variables))
        self.arrays = tuple(sorted(arrays))
        self.value_widen = value_widen
        self.name = f"{analysis.kind} memories"
        self.acc_note = analysis.acc_note

    @property
    def bottom(self) -> AbstractMemory:
        return AbstractMemory(
            {name: self.analysis.bottom for name in self.variables},
            {name: self.analysis.array_bottom(name) for name in self.arrays},
        )

    @property
    def has_top(self) -> bool:
        return True

    @property
    def top(self) -> AbstractMemory:
        return AbstractMemory(
            {name: self.analysis.top for name in self.variables},
            {name: self.analysis.array_top(name) for name in self.arrays},
        )

    def is_bottom(self, memory: AbstractMemory) -> bool:
        return self.leq(memory, self.bottom)

    def leq(self, left: AbstractMemory, right: AbstractMemory) -> bool:
        analysis = self.analysis
        return all(analysis.leq(left.variables[n], right.variables[n]) for n in self.variables) and all(
            analysis.array_leq(left.arrays[n], right.arrays[n]) for n in self.arrays
        )

    def join(self, left: AbstractMemory, right: AbstractMemory) -> AbstractMemory:
        analysis = self.analysis
        return AbstractMemory(
            {n: analysis.join(left.variables[n], right.variables[n]) for n in self.variables},
            {n: analysis.array_join(left.arrays[n], right.arrays[n]) for n in self.arrays},
        )

    @property
    def supports_widening(self) -> bool:
        return self.value_widen is not None

    def widen(self, left: AbstractMemory, right: AbstractMemory) -> AbstractMemory:
        if self.value_widen is None:
            return super().widen(left, right)
        return AbstractMemory(
            {n: self.value_widen(left.variables[n], right.variables[n]) for n in self.variables},
            {n: self.value_widen(left.arrays[n], right.arrays[n]) for n in self.arrays},
        )


def abstract_binop(analysis: IntegerAnalysis, op: str, left, right):
    """Apply an arithmetic operator (giving a value) or a relational one (giving truth values)."""
    if op in RELATIONAL_OPERATORS:
        return analysis.relation(op, left, right)
    return analysis.arithmetic(op, left, right)


def analyze_aexp(analysis: IntegerAnalysis, a: AExp, memory: AbstractMemory):
    if isinstance(a, Num):
        return analysis.constant(a.value)
    if isinstance(a, Var):
        return memory.variables[a.name]
    if isinstance(a, ArrayRef):
        return analysis.read(memory, a.array, analyze_aexp(analysis, a.index, memory))
    if isinstance(a, ArrayLength):
        return analysis.array_length(a.array)
    if isinstance(a, BinOp):
        return analysis.arithmetic(a.op, analyze_aexp(analysis, a.left, memory), analyze_aexp(analysis, a.right, memory))
    if isinstance(a, Neg):
        return analysis.negate(analyze_aexp(analysis, a.operand, memory))
    if isinstance(a, San):
        return analyze_aexp(analysis, a.operand, memory)
    if isinstance(a, Str):
        return analysis.bottom
    raise TypeError(f"Not an arithmetic expression: {a!r}")


def analyze_bexp(analysis: IntegerAnalysis, b: BExp, memory: AbstractMemory) -> frozenset[str]:
    if isinstance(b, BoolLit):
        return frozenset({TRUE if b.value else FALSE})
    if isinstance(b, RelOp):
        return analysis.relation(b.op, analyze_aexp(analysis, b.left, memory), analyze_aexp(analysis, b.right, memory))
    if isinstance(b, LogicOp):
        return abstract_logic(b.op, analyze_bexp(analysis, b.left, memory), analyze_bexp(analysis, b.right, memory))
    if isinstance(b, Not):
        return abstract_not(analyze_bexp(analysis, b.operand, memory))
    raise TypeError(f"Not a boolean expression: {b!r}")


def _is_bottom_value(analysis: IntegerAnalysis, value) -> bool:
    return analysis.leq(value, analysis.bottom)


def basic_memories(
    analysis: IntegerAnalysis,
    memory: AbstractMemory,
    test: BExp,
    *,
    names: Iterable[str] | None = None,
) -> Optional[list[AbstractMemory]]:
    """The basic memories below ``memory`` that differ on ``names`` (default: the variables of ``test``).

    Arrays are never split. Returns ``None`` when the analysis does not refine tests.
    """
    split = sorted(names) if names is not None else sorted(n for n in free_vars(test) if n in memory.variables)
    choices = []
    for name in split:
        values = analysis.basic_values(memory.variables[name], test, memory)
        if values is None:
            return None
        choices.append(values)
    result = []
    for combination in product(*choices):
        variables = dict(memory.variables)
        variables.update(zip(split, combination))
        result.append(AbstractMemory(variables, memory.arrays))
    return result


def transfer(
    analysis: IntegerAnalysis,
    action: Action,
    memory: AbstractMemory,
    domain: MemoryDomain,
    *,
    basic_variable_limit: int = DEFAULT_BASIC_VARIABLE_LIMIT,
) -> AbstractMemory:
    """Abstract effect of ``action``; the bottom memory stands for "cannot complete"."""
    bottom = domain.bottom
    if domain.is_bottom(memory):
        return bottom
    if isinstance(action, Skip):
        return memory
    if isinstance(action, Assign):
        value = analyze_aexp(analysis, action.expr, memory)
        return bottom if _is_bottom_value(analysis, value) else memory.with_variable(action.var, value)
    if isinstance(action, ArrayAssign):
        index = analyze_aexp(analysis, action.index, memory)
        value = analyze_aexp(analysis, action.expr, memory)
        if _is_bottom_value(analysis, value):
            return bottom
        return analysis.write(memory, action.array, index, value) or bottom
    if isinstance(action, Input):
        return memory.with_variable(action.var, analysis.top)
    if isinstance(action, InputArray):
        index = analyze_aexp(analysis, action.index, memory)
        return analysis.receive(memory, action.array, index) or bottom
    if isinstance(action, Output):
        value = analyze_aexp(analysis, action.expr, memory)
        return bottom if _is_bottom_value(analysis, value) else memory
    if isinstance(action, Test):
        return _test(analysis, action.cond, memory, domain, basic_variable_limit)
    raise TypeError(f"Not an action: {action!r}")


def _test(
    analysis: IntegerAnalysis,
    test: BExp,
    memory: AbstractMemory,
    domain: MemoryDomain,
    limit: int,
) -> AbstractMemory:
    if any(_is_bottom_value(analysis, value) for value in memory.variables.values()):
        return domain.bottom
    split = [n for n in free_vars(test) if n in memory.variables]
    basics = None
    if len(split) > limit:
        LOGGER.warning(
            "Test %s mentions %d variables (limit %d); not refining it", test, len(split), limit
        )
    else:
        basics = basic_memories(analysis, memory, test)
    if basics is None:
        return memory if TRUE in analyze_bexp(analysis, test, memory) else domain.bottom
    passing = [basic for basic in basics if TRUE in analyze_bexp(analysis, test, basic)]
    return domain.join_all(passing)


def beta(analysis: IntegerAnalysis, memory: Memory, *, names: Iterable[str] | None = None) -> AbstractMemory:
    """The abstract memory describing exactly the concrete ``memory``."""
    keep = set(names) if names is not None else None
    return AbstractMemory(
        {n: analysis.beta_value(v) for n, v in memory.variables.items() if keep is None or n in keep},
        {n: analysis.beta_array(v) for n, v in memory.arrays.items() if keep is None or n in keep},
    )


def memory_domain_for(analysis: IntegerAnalysis, pg: ProgramGraph, **kwargs) -> MemoryDomain:
    return MemoryDomain(analysis, pg.variables, pg.arrays, **kwargs)


def integer_spec(
    analysis: IntegerAnalysis,
    pg: ProgramGraph,
    initial: AbstractMemory | None = None,
    *,
    basic_variable_limit: int = DEFAULT_BASIC_VARIABLE_LIMIT,
    value_widen: Callable[[Any, Any], Any] | None = None,
) -> AnalysisSpec:
    domain = memory_domain_for(analysis, pg, value_widen=value_widen)
    if initial is None:
        initial = domain.top
    else:
        missing = sorted(set(domain.variables) - set(initial.variables)) + sorted(
            set(domain.arrays) - set(initial.arrays)
        )
        if missing:
            raise MemoryFormatError(f"The initial abstract memory does not bind {', '.join(missing)}")

    def transfer_for(edge):
        return lambda memory: transfer(
            analysis, edge.action, memory, domain, basic_variable_limit=basic_variable_limit
        )

    names = {"ds": "detection of signs", "cp": "constant propagation", "ia": "interval analysis"}
    return AnalysisSpec(names[analysis.kind], domain, transfer_for, initial, Direction.FORWARD)


def load_abstract_memory(payload: Mapping[str, Any]) -> tuple[IntegerAnalysis, AbstractMemory]:
    """Read an abstract initial memory.

    The payload names its ``kind`` (``ds``, ``cp`` or ``interval``), optionally
    the endpoints ``K``, and gives ``vars`` and ``arrays``: sign lists for
    ``ds``, integers or ``"top"`` for ``cp`` (one per array entry), ``[lo, hi]``
    pairs for intervals.
    """
    if not isinstance(payload, Mapping):
        raise MemoryFormatError("An abstract memory must be a JSON object")
    kind = payload.get("kind")
    variables = payload.get("vars", {})
    arrays = payload.get("arrays", {})
    try:
        if kind == "ds":
            analysis: IntegerAnalysis = SignAnalysis()
            parse = _parse_signs
            parse_array = _parse_signs
        elif kind == "cp":
            analysis = ConstantAnalysis({name: len(entries) for name, entries in arrays.items()})
            parse = cp.parse_cp
            parse_array = _parse_cp_array
        elif kind in ("interval", "ia"):
            raw_k = payload.get("K")
            analysis = IntervalAnalysis(None if raw_k is None else [_as_int(k) for k in raw_k])
            parse = ia.parse_interval
            parse_array = ia.parse_interval
        else:
            raise MemoryFormatError(f"Unknown abstract memory kind {kind!r}")
        memory = AbstractMemory(
            {str(name): parse(value) for name, value in variables.items()},
            {str(name): parse_array(value) for name, value in arrays.items()},
        )
    except (AttributeError, TypeError, ValueError) as exc:
        if isinstance(exc, MemoryFormatError):
            raise
        raise MemoryFormatError(f"Malformed abstract memory: {exc}") from None
    return analysis, memory


def _as_int(raw: object) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ValueError(f"expected an integer, got {raw!r}")
    return raw


def _parse_signs(raw: object) -> frozenset[str]:
    if not isinstance(raw, (list, tuple)):
        raise ValueError(f"expected a list of signs, got {raw!r}")
    signs = frozenset(str(s) for s in raw)
    unknown = signs - SIGNS
    if unknown:
        raise ValueError(f"unknown signs {sorted(unknown)}")
    return signs


def _parse_cp_array(raw: object) -> tuple:
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ValueError(f"expected a non-empty list of entries, got {raw!r}")
    entries = tuple(cp.parse_cp(entry) for entry in raw)
    if cp.BOTTOM in entries:
        return (cp.BOTTOM,) * len(entries)
    return entries


def format_memory(analysis: IntegerAnalysis, memory: AbstractMemory) -> dict[str, str]:
    rendered = {name: analysis.format_value(value) for name, value in memory.variables.items()}
    rendered.update({name: analysis.format_array(value) for name, value in memory.arrays.items()})
    return rendered


__all__ = [
    "AbstractMemory",
    "BOOLS",
    "ConstantAnalysis",
    "IntegerAnalysis",
    "IntervalAnalysis",
    "MemoryDomain",
    "SignAnalysis",
    "abstract_binop",
    "analysis_for",
    "analyze_aexp",
    "analyze_bexp",
    "basic_memories",
    "beta",
    "format_memory",
    "integer_spec",
    "load_abstract_memory",
    "program_constants",
    "transfer",
]
