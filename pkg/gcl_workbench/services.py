from __future__ import annotations
"""File loading and analysis orchestration, independent of the command line."""

from dataclasses import dataclass, field
from enum import Enum
import json
import logging
from pathlib import Path
from typing import Any, Callable, Hashable, Mapping

from .absint import interval_widening, rds_expand, rds_spec
from .bitvector import bitvector_spec, dv_spec, fv_spec
from .datalog import Row, solve as solve_datalog
from .datalog_encodings import Encoding, encode
from .framework import AnalysisSpec
from .graphs import build_program_graph, enumerate_paths
from .infoflow import FlowRelation, FlowType, infer_flows, offending_flows, typecheck_avoid
from .integers import (
    AbstractMemory,
    ConstantAnalysis,
    IntegerAnalysis,
    IntervalAnalysis,
    SignAnalysis,
    integer_spec,
    load_abstract_memory,
    program_constants,
)
from .models import Memory, MemoryFormatError, Path as ProgramPath, ProgramGraph, Trace
from .parser import Dialect, parse_program
from .policies import PolicyFormatError, SecurityPolicy, load_policy
from .satisfiability import DEFAULT_CLAUSE_LIMIT
from .semantics import execute
from .solver import Solution, chaotic_solve, widening_solve, worklist_solve
from .syntax import Command
from .worklists import CHAOTIC

LOGGER = logging.getLogger(__name__)

BITVECTOR_KINDS = ("rd", "lv", "ae", "vb")
INTEGER_KINDS = ("ds", "cp", "ia")
ANALYSIS_KINDS = (*BITVECTOR_KINDS, "dv", "fv", *INTEGER_KINDS, "rds")
INTERVAL_KINDS = ("ia",)
DATALOG_KINDS = ("rd", "ae", "fv")


class Widening(str, Enum):
    NONE = "none"
    JOIN = "join"
    INTERVAL = "interval"


class SecflowMode(str, Enum):
    MEASURE = "measure"
    ENFORCE = "enforce"
    TYPE = "type"


@dataclass(frozen=True)
class AnalysisRequest:
    """What to analyse and how; abstract and template memories are already loaded."""

    kind: str
    strategy: str = "fifo"
    widening: Widening = Widening.NONE
    K: tuple[int, ...] | None = None
    abstract_memory: tuple[IntegerAnalysis, AbstractMemory] | None = None
    template: Memory | None = None
    live_at_exit: tuple[str, ...] = ()
    whole_components: bool = False
    basic_variable_limit: int = 12


@dataclass
class AnalysisResult:
    kind: str
    pg: ProgramGraph
    spec: AnalysisSpec
    solution: Solution
    analysis: IntegerAnalysis | None = None


@dataclass
class SecflowReport:
    mode: SecflowMode
    relation: FlowRelation | None = None
    offending: FlowRelation | None = None
    policy: SecurityPolicy | None = None
    typing: tuple[Hashable, Hashable] | None = None

    @property
    def level(self) -> FlowType | None:
        if self.offending is None:
            return None
        return self.offending.max_level


@dataclass
class DatalogReport:
    kind: str
    encoding: Encoding
    valuation: Mapping[str, frozenset[Row]]
    decoded: dict[str, Any]
    expected: dict[str, Any] = field(default_factory=dict)

    @property
    def agrees(self) -> bool:
        return self.decoded == self.expected


class WorkbenchService:
    """Reads input files and runs the analyses independent of any command-line surface."""

    def __init__(self, reader: Callable[[Path], str] | None = None):
        self._reader = reader or (lambda path: path.read_text(encoding="utf-8"))

    def read_text(self, path: str | Path) -> str:
        return self._reader(Path(path))

    def read_json(self, path: str | Path) -> Any:
        return json.loads(self.read_text(path))

    def load_program(self, path: str | Path, *, dialect: Dialect | str = Dialect.PLAIN) -> Command:
        command = parse_program(self.read_text(path), dialect)
        LOGGER.debug("Parsed %s as a %s program", path, Dialect(dialect).value)
        return command

    def program_graph(self, command: Command) -> ProgramGraph:
        return build_program_graph(command)

    def load_memory(self, path: str | Path) -> Memory:
        try:
            payload = self.read_json(path)
        except json.JSONDecodeError as exc:
            raise MemoryFormatError(f"{path} is not valid JSON: {exc}") from None
        return Memory.from_json(payload)

    def load_abstract_memory(self, path: str | Path) -> tuple[IntegerAnalysis, AbstractMemory]:
        try:
            payload = self.read_json(path)
        except json.JSONDecodeError as exc:
            raise MemoryFormatError(f"{path} is not valid JSON: {exc}") from None
        return load_abstract_memory(payload)

    def load_policy(self, path: str | Path) -> SecurityPolicy:
        try:
            payload = self.read_json(path)
        except json.JSONDecodeError as exc:
            raise PolicyFormatError(f"{path} is not valid JSON: {exc}") from None
        return load_policy(payload)

    def run_program(self, pg: ProgramGraph, memory: Memory, *, max_steps: int = 200, seed: int = 0) -> Trace:
        missing = memory.covers(pg)
        if missing:
            raise MemoryFormatError(f"The initial memory does not bind {', '.join(missing)}")
        return execute(pg, memory, max_steps=max_steps, seed=seed)

    def paths(self, pg: ProgramGraph, *, max_len: int) -> list[ProgramPath]:
        return enumerate_paths(pg, pg.initial, pg.final, max_len)

    def build_spec(self, pg: ProgramGraph, request: AnalysisRequest) -> tuple[AnalysisSpec, IntegerAnalysis | None]:
        kind = request.kind
        if kind in BITVECTOR_KINDS:
            return bitvector_spec(kind, pg, live_at_exit=request.live_at_exit), None
        if kind == "dv":
            return dv_spec(pg), None
        if kind == "fv":
            return fv_spec(pg), None
        if kind == "rds":
            initial = None
            if request.abstract_memory is not None:
                analysis, memory = request.abstract_memory
                if analysis.kind != "ds":
                    raise MemoryFormatError("Relational signs start from a 'ds' abstract memory")
                initial = rds_expand(memory)
            return rds_spec(pg, initial), None
        if kind in INTEGER_KINDS:
            return self._integer_spec(pg, request)
        raise ValueError(f"Unknown analysis {kind!r}")

    def _integer_spec(self, pg: ProgramGraph, request: AnalysisRequest) -> tuple[AnalysisSpec, IntegerAnalysis]:
        initial = None
        K = request.K
        lengths: dict[str, int] = {}
        if request.template is not None:
            lengths.update({name: len(entries) for name, entries in request.template.arrays.items()})
        if request.abstract_memory is not None:
            loaded, initial = request.abstract_memory
            if loaded.kind != request.kind:
                raise MemoryFormatError(
                    f"The abstract memory is for '{loaded.kind}', not for '{request.kind}'"
                )
            lengths.update(getattr(loaded, "lengths", {}))
            if K is None and isinstance(loaded, IntervalAnalysis) and loaded.endpoints.points is not None:
                K = tuple(loaded.endpoints.points)
        value_widen = None
        if request.kind == "ds":
            analysis: IntegerAnalysis = SignAnalysis()
        elif request.kind == "cp":
            analysis = ConstantAnalysis(lengths)
        elif request.widening is Widening.INTERVAL:
            thresholds = K if K is not None else default_thresholds(pg)
            analysis = IntervalAnalysis(None, lengths)
            value_widen = interval_widening(thresholds)
        else:
            analysis = IntervalAnalysis(K, lengths)
        spec = integer_spec(
            analysis,
            pg,
            initial,
            basic_variable_limit=request.basic_variable_limit,
            value_widen=value_widen,
        )
        return spec, analysis

    def analyze(self, pg: ProgramGraph, request: AnalysisRequest) -> AnalysisResult:
        spec, analysis = self.build_spec(pg, request)
        if request.widening is Widening.INTERVAL:
            solution = widening_solve(spec, pg)
        elif request.widening is Widening.JOIN or request.strategy == CHAOTIC:
            solution = chaotic_solve(spec, pg)
        else:
            solution = worklist_solve(spec, pg, request.strategy, whole_components=request.whole_components)
        LOGGER.debug("%s solved with %s after %d updates", spec.name, solution.strategy, solution.counters.updates)
        return AnalysisResult(request.kind, pg, spec, solution, analysis)

    def secflow(
        self,
        command: Command,
        mode: SecflowMode | str,
        policy: SecurityPolicy | None = None,
        *,
        clause_limit: int = DEFAULT_CLAUSE_LIMIT,
    ) -> SecflowReport:
        mode = SecflowMode(mode)
        if mode is SecflowMode.TYPE:
            if policy is None:
                raise ValueError("Typing needs a security policy")
            typing = typecheck_avoid(policy, command, clause_limit=clause_limit)
            return SecflowReport(mode, policy=policy, typing=typing)
        relation = infer_flows(command, clause_limit=clause_limit)
        report = SecflowReport(mode, relation=relation, policy=policy)
        if policy is not None:
            report.offending = offending_flows(policy, relation)
        return report

    def datalog(self, pg: ProgramGraph, kind: str) -> DatalogReport:
        encoding = encode(kind, pg)
        valuation = solve_datalog(encoding.program, encoding.inputs)
        decoded = encoding.decode(valuation)
        spec = fv_spec(pg) if kind == "fv" else bitvector_spec(kind, pg)
        expected = worklist_solve(spec, pg).assignment
        return DatalogReport(kind, encoding, valuation, decoded, dict(expected))


def default_thresholds(pg: ProgramGraph) -> tuple[int, ...]:
    """Widening thresholds when none are given: the program's numerals and ``0``."""
    return tuple(sorted(program_constants(pg) | {0}))
