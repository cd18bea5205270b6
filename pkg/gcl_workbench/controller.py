from __future__ import annotations
"""Controller layer for the workbench command line."""

from dataclasses import asdict, dataclass, field, replace
from enum import IntEnum
import logging
from pathlib import Path
import sys
from typing import TextIO

from .datalog import (
    DatalogFormatError,
    StratificationViolation,
    format_datalog,
    load_csv_relation,
    parse_datalog,
    solve as solve_datalog,
)
from .formatting import (
    assignment_to_json,
    execution_to_json,
    flow_matrix_to_json,
    format_assignment,
    format_counters,
    format_execution,
    format_flow_matrix,
    format_level,
    format_offending,
    format_table,
    format_trace,
    format_valuation,
    render_value,
    to_json,
)
from .graphs import ReachabilityViolation, emit_dot
from .infoflow import FlowType, SecurityTypeError
from .models import Memory, MemoryFormatError
from .parser import Dialect, ParseError
from .policies import CycleInHasse, NotALattice, PolicyFormatError
from .preprocessing import NonReducible
from .services import (
    ANALYSIS_KINDS,
    DATALOG_KINDS,
    INTEGER_KINDS,
    INTERVAL_KINDS,
    AnalysisRequest,
    SecflowMode,
    Widening,
    WorkbenchService,
)
from .settings import WORKLIST_CHOICES, SettingsStorage, WorkbenchSettings
from .solver import DomainNotACC
from .syntax import pretty

LOGGER = logging.getLogger(__name__)

SUBCOMMANDS = ("graph", "run", "analyze", "secflow", "datalog")
OUTPUT_FORMATS = ("table", "json", "dot")
COMPONENT_STRATEGIES = ("scc", "natloop")


class ExitCode(IntEnum):
    OK = 0
    INPUT_ERROR = 1
    REFUSED = 2
    INSECURE = 3


class ConfigError(ValueError):
    """Raised when command-line options do not fit together."""


@dataclass(frozen=True)
class RunConfig:
    """One command-line invocation; ``None`` fields take the stored settings."""

    command: str
    program: Path
    analysis: str | None = None
    worklist: str | None = None
    widening: str = Widening.NONE.value
    K: tuple[int, ...] | None = None
    memory: Path | None = None
    abstract_memory: Path | None = None
    policy: Path | None = None
    mode: str = SecflowMode.MEASURE.value
    output_format: str | None = None
    seed: int | None = None
    max_steps: int | None = None
    live_at_exit: tuple[str, ...] = ()
    trace: bool = False
    whole_components: bool = False
    paths: bool = False
    inputs: tuple[tuple[str, Path], ...] = field(default_factory=tuple)


class WorkbenchController:
    """Validates a :class:`RunConfig` and runs it with the :class:`WorkbenchService`."""

    def __init__(
        self,
        service: WorkbenchService | None = None,
        storage: SettingsStorage | None = None,
    ):
        self._service = service or WorkbenchService()
        self._storage = storage or SettingsStorage()
        self._settings: WorkbenchSettings = self._storage.load()

    @property
    def settings(self) -> WorkbenchSettings:
        return self._settings

    def resolve(self, cfg: RunConfig) -> RunConfig:
        settings = self._settings
        default_format = settings.default_format
        if cfg.command == "graph" and default_format == "table":
            # graphs render as DOT unless JSON is the stored default
            default_format = "dot"
        return replace(
            cfg,
            worklist=cfg.worklist or settings.default_worklist,
            output_format=cfg.output_format or default_format,
            seed=settings.seed if cfg.seed is None else cfg.seed,
            max_steps=settings.max_steps if cfg.max_steps is None else cfg.max_steps,
        )

    def validate(self, cfg: RunConfig) -> None:
        if cfg.command not in SUBCOMMANDS:
            raise ConfigError(f"Unknown command {cfg.command!r}")
        if cfg.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"Unknown output format {cfg.output_format!r}")
        if cfg.output_format == "dot" and cfg.command != "graph":
            raise ConfigError("--format dot is only available for graph")
        if cfg.policy is not None and cfg.command != "secflow":
            raise ConfigError("--policy is only used by secflow")
        if cfg.memory is not None and cfg.command not in ("run", "analyze"):
            raise ConfigError("--memory is only used by run and analyze")
        if cfg.paths and cfg.command != "graph":
            raise ConfigError("--paths is only used by graph")
        if cfg.inputs and cfg.command != "datalog":
            raise ConfigError("--input is only used by datalog")
        if cfg.max_steps is not None and cfg.max_steps < 0:
            raise ConfigError("--max-steps must not be negative")
        if cfg.command == "analyze":
            self._validate_analyze(cfg)
        else:
            for flag, used in (
                ("--K", cfg.K is not None),
                ("--abstract-memory", cfg.abstract_memory is not None),
                ("--live-at-exit", bool(cfg.live_at_exit)),
                ("--trace", cfg.trace),
                ("--whole-components", cfg.whole_components),
                ("--widening", cfg.widening != Widening.NONE.value),
            ):
                if used:
                    raise ConfigError(f"{flag} is only used by analyze")
        if cfg.command == "secflow":
            mode = cfg.mode
            if mode not in {m.value for m in SecflowMode}:
                raise ConfigError(f"Unknown secflow mode {mode!r}")
            if mode != SecflowMode.MEASURE.value and cfg.policy is None:
                raise ConfigError(f"secflow --mode {mode} needs --policy")
        if cfg.command == "datalog":
            if cfg.analysis is not None and cfg.analysis not in DATALOG_KINDS:
                raise ConfigError(f"Datalog encodings exist for {', '.join(DATALOG_KINDS)}, not {cfg.analysis}")
            if cfg.analysis is not None and cfg.inputs:
                raise ConfigError("--input is only used when solving a Datalog program file")
        elif cfg.analysis is not None and cfg.command != "analyze":
            raise ConfigError("--analysis is only used by analyze and datalog")

    def _validate_analyze(self, cfg: RunConfig) -> None:
        if cfg.analysis is None:
            raise ConfigError("analyze needs --analysis")
        if cfg.analysis not in ANALYSIS_KINDS:
            raise ConfigError(f"Unknown analysis {cfg.analysis!r}")
        if cfg.worklist not in WORKLIST_CHOICES:
            raise ConfigError(f"Unknown worklist {cfg.worklist!r}")
        if cfg.widening not in {w.value for w in Widening}:
            raise ConfigError(f"Unknown widening {cfg.widening!r}")
        if cfg.K is not None and cfg.analysis not in INTERVAL_KINDS:
            raise ConfigError("--K is only used by interval analysis")
        if cfg.widening == Widening.INTERVAL.value and cfg.analysis not in INTERVAL_KINDS:
            raise ConfigError("--widening interval is only used by interval analysis")
        if cfg.abstract_memory is not None and cfg.analysis not in (*INTEGER_KINDS, "rds"):
            raise ConfigError("--abstract-memory is only used by ds, cp, ia and rds")
        if cfg.live_at_exit and cfg.analysis != "lv":
            raise ConfigError("--live-at-exit is only used by live variables")
        if cfg.whole_components and cfg.worklist not in COMPONENT_STRATEGIES:
            raise ConfigError("--whole-components is only used by the scc and natloop worklists")

    def run(self, cfg: RunConfig, out: TextIO | None = None, err: TextIO | None = None) -> int:
        out = out or sys.stdout
        err = err or sys.stderr
        try:
            cfg = self.resolve(cfg)
            self.validate(cfg)
            handler = getattr(self, f"_run_{cfg.command}")
            return int(handler(cfg, out))
        except SecurityTypeError as exc:
            err.write(f"error: {exc}\n")
            return ExitCode.INSECURE
        except (DomainNotACC, NonReducible, StratificationViolation, NotALattice) as exc:
            err.write(f"refused: {exc}\n")
            return ExitCode.REFUSED
        except (
            ConfigError,
            ParseError,
            MemoryFormatError,
            PolicyFormatError,
            CycleInHasse,
            DatalogFormatError,
            ReachabilityViolation,
        ) as exc:
            err.write(f"error: {exc}\n")
            return ExitCode.INPUT_ERROR
        except OSError as exc:
            err.write(f"error: {exc}\n")
            return ExitCode.INPUT_ERROR

    def _program_graph(self, cfg: RunConfig, dialect: Dialect = Dialect.PLAIN):
        command = self._service.load_program(cfg.program, dialect=dialect)
        return command, self._service.program_graph(command)

    def _run_graph(self, cfg: RunConfig, out: TextIO) -> ExitCode:
        _command, pg = self._program_graph(cfg)
        if cfg.paths:
            paths = self._service.paths(pg, max_len=self._settings.path_length_limit)
            rendered = [" ".join(str(part) for part in _interleave(path)) for path in paths]
            if cfg.output_format == "json":
                out.write(to_json({"paths": rendered}))
            else:
                out.write("".join(line + "\n" for line in rendered))
            return ExitCode.OK
        if cfg.output_format == "dot":
            out.write(emit_dot(pg))
        elif cfg.output_format == "json":
            out.write(
                to_json(
                    {
                        "nodes": list(pg.nodes),
                        "initial": pg.initial,
                        "final": pg.final,
                        "edges": [
                            {"source": e.source, "action": e.label, "target": e.target} for e in pg.edges
                        ],
                    }
                )
            )
        else:
            out.write(format_table(["source", "action", "target"], [[e.source, e.label, e.target] for e in pg.edges]))
        return ExitCode.OK

    def _load_memory(self, cfg: RunConfig) -> Memory:
        if cfg.memory is None:
            return Memory()
        return self._service.load_memory(cfg.memory)

    def _run_run(self, cfg: RunConfig, out: TextIO) -> ExitCode:
        _command, pg = self._program_graph(cfg)
        trace = self._service.run_program(pg, self._load_memory(cfg), max_steps=cfg.max_steps, seed=cfg.seed)
        if cfg.output_format == "json":
            out.write(to_json(execution_to_json(trace)))
        else:
            out.write(format_execution(trace))
        return ExitCode.OK

    def _run_analyze(self, cfg: RunConfig, out: TextIO) -> ExitCode:
        _command, pg = self._program_graph(cfg)
        abstract_memory = None
        if cfg.abstract_memory is not None:
            abstract_memory = self._service.load_abstract_memory(cfg.abstract_memory)
        request = AnalysisRequest(
            kind=cfg.analysis,
            strategy=cfg.worklist,
            widening=Widening(cfg.widening),
            K=cfg.K,
            abstract_memory=abstract_memory,
            template=None if cfg.memory is None else self._load_memory(cfg),
            live_at_exit=cfg.live_at_exit,
            whole_components=cfg.whole_components,
            basic_variable_limit=self._settings.basic_variable_limit,
        )
        result = self._service.analyze(pg, request)
        solution = result.solution
        if cfg.output_format == "json":
            payload = {
                "analysis": result.spec.name,
                "strategy": solution.strategy,
                "assignment": assignment_to_json(result),
                "counters": asdict(solution.counters),
            }
            if cfg.trace:
                payload["trace"] = [step.to_json() for step in solution.steps]
            out.write(to_json(payload))
            return ExitCode.OK
        out.write(format_assignment(result))
        if cfg.trace:
            out.write("\n")
            out.write(format_trace(solution.steps))
        out.write(format_counters(solution.counters))
        return ExitCode.OK

    def _run_secflow(self, cfg: RunConfig, out: TextIO) -> ExitCode:
        command = self._service.load_program(cfg.program, dialect=Dialect.SECURITY)
        policy = None if cfg.policy is None else self._service.load_policy(cfg.policy)
        report = self._service.secflow(
            command, cfg.mode, policy, clause_limit=self._settings.dnf_clause_limit
        )
        if report.mode is SecflowMode.TYPE:
            low, high = report.typing
            lattice = policy.lattice
            if cfg.output_format == "json":
                out.write(to_json({"typed": True, "lowest": lattice.format_level(low), "highest": lattice.format_level(high)}))
            else:
                out.write(f"typed: [{lattice.format_level(low)}, {lattice.format_level(high)}]\n")
            return ExitCode.OK
        level = report.level
        if cfg.output_format == "json":
            payload = {"flows": flow_matrix_to_json(report.relation)}
            if report.offending is not None:
                payload["offending"] = [
                    {"from": str(source), "to": str(target), "kind": str(kind)}
                    for (source, target), kind in sorted(report.offending.flows.items(), key=lambda item: str(item[0]))
                ]
                payload["level"] = format_level(level)
            out.write(to_json(payload))
        else:
            out.write(format_flow_matrix(report.relation))
            if report.offending is not None:
                out.write("\n")
                out.write(format_offending(report.offending))
                out.write(f"max offending level: {format_level(level)}\n")
        if report.mode is SecflowMode.ENFORCE and level is not None and level > FlowType.S:
            LOGGER.debug("Offending flows at level %s", level)
            return ExitCode.INSECURE
        return ExitCode.OK

    def _run_datalog(self, cfg: RunConfig, out: TextIO) -> ExitCode:
        if cfg.analysis is None:
            return self._solve_datalog_file(cfg, out)
        _command, pg = self._program_graph(cfg)
        report = self._service.datalog(pg, cfg.analysis)
        program = report.encoding.program
        heads = [predicate.name for predicate in program.predicates if predicate.rank > 0]
        if cfg.output_format == "json":
            out.write(
                to_json(
                    {
                        "program": format_datalog(program),
                        "relations": {name: sorted(list(row) for row in report.valuation[name]) for name in heads},
                        "agrees": report.agrees,
                    }
                )
            )
            return ExitCode.OK
        out.write(format_datalog(program))
        out.write("\n")
        out.write(format_valuation(report.valuation, heads))
        out.write("\n")
        rows = [[node, render_value(report.decoded[node]), render_value(report.expected[node])] for node in pg.nodes]
        out.write(format_table(["node", "datalog", "worklist"], rows))
        verdict = "agrees with" if report.agrees else "differs from"
        out.write(f"the Datalog solution {verdict} the worklist solution\n")
        return ExitCode.OK

    def _solve_datalog_file(self, cfg: RunConfig, out: TextIO) -> ExitCode:
        program = parse_datalog(self._service.read_text(cfg.program))
        inputs = {name: load_csv_relation(self._service.read_text(path)) for name, path in cfg.inputs}
        valuation = solve_datalog(program, inputs)
        if cfg.output_format == "json":
            out.write(to_json({name: sorted(list(row) for row in rows) for name, rows in sorted(valuation.items())}))
        else:
            out.write(format_valuation(valuation))
        return ExitCode.OK


def _interleave(path):
    yield path.nodes[0]
    for action, node in zip(path.actions, path.nodes[1:]):
        yield f"-[{pretty(action)}]->"
        yield node
