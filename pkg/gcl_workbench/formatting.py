from __future__ import annotations
"""Rendering of assignments, traces, flow matrices and relations as text tables and JSON."""

from dataclasses import dataclass
from importlib.metadata import PackageNotFoundError, metadata, version
import json
from typing import Any, Iterable, Mapping, Sequence

from .bitvector import RDFact
from .datalog import Row, format_constant
from .infoflow import FlowRelation, FlowType
from .integers import AbstractMemory, format_memory
from .models import Trace
from .solver import Counters, TraceStep
from .syntax import ArrayLength, ArrayRef, BinOp, Neg, Num, Var, pretty

DIST_NAME = "gclwb"
EMPTY_SET = "∅"


@dataclass(frozen=True)
class PackageInfo:
    name: str
    version: str
    summary: str
    homepage: str | None
    repository: str | None
    author: str | None


def load_package_info(dist_name: str = DIST_NAME) -> PackageInfo:
    try:
        distribution_metadata = metadata(dist_name)
        package_version = version(dist_name)
    except PackageNotFoundError:
        return PackageInfo(
            name="Guarded Commands Workbench",
            version="",
            summary="Program graphs, dataflow analyses and security checks for Guarded Commands.",
            homepage=None,
            repository=None,
            author=None,
        )
    summary = distribution_metadata.get("Summary") or ""
    author = distribution_metadata.get("Author") or distribution_metadata.get("Author-email")
    homepage = distribution_metadata.get("Home-page")
    repository = None
    for entry in distribution_metadata.get_all("Project-URL") or []:
        label, _, link = entry.partition(",")
        label = label.strip().lower()
        url = link.strip()
        if label == "repository":
            repository = url
        elif label == "homepage" and not homepage:
            homepage = url
    return PackageInfo(
        name=distribution_metadata.get("Name"),
        version=package_version,
        summary=summary,
        homepage=homepage or None,
        repository=repository,
        author=author or None,
    )


def format_version(info: PackageInfo) -> str:
    return f"{info.name} {info.version}".strip()


def render_element(element: Any) -> str:
    if isinstance(element, RDFact):
        return str(element)
    if isinstance(element, str):
        return element
    if isinstance(element, (Num, Var, ArrayRef, ArrayLength, BinOp, Neg)):
        return pretty(element)
    return str(element)


def render_set(elements: Iterable[Any]) -> str:
    rendered = sorted(render_element(element) for element in elements)
    if not rendered:
        return EMPTY_SET
    return "{" + ", ".join(rendered) + "}"


def render_value(value: Any, analysis=None) -> str | dict[str, str]:
    """One node's value: a name-to-value map for abstract memories, a set otherwise."""
    if isinstance(value, AbstractMemory):
        return format_memory(analysis, value)
    if isinstance(value, (frozenset, set)):
        return render_set(value)
    return render_element(value)


def assignment_to_json(result) -> dict[str, Any]:
    """``{"node": {"name": value}}`` for memories, ``{"node": [element, ...]}`` for sets."""
    payload: dict[str, Any] = {}
    for node in result.pg.nodes:
        value = result.solution.assignment[node]
        if isinstance(value, AbstractMemory):
            payload[node] = format_memory(result.analysis, value)
        else:
            payload[node] = sorted(render_element(element) for element in value)
    return payload


def format_table(headers: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    rows = [[str(cell) for cell in row] for row in rows]
    widths = [len(header) for header in headers]
    for row in rows:
        for index, cell in enumerate(row):
            widths[index] = max(widths[index], len(cell))
    lines = [
        "  ".join(header.ljust(width) for header, width in zip(headers, widths)).rstrip(),
        "  ".join("-" * width for width in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def format_assignment(result) -> str:
    assignment = result.solution.assignment
    nodes = result.pg.nodes
    values = [assignment[node] for node in nodes]
    if values and all(isinstance(value, AbstractMemory) for value in values):
        rendered = [format_memory(result.analysis, value) for value in values]
        names = sorted({name for memory in rendered for name in memory})
        rows = [[node, *(memory.get(name, "") for name in names)] for node, memory in zip(nodes, rendered)]
        return format_table(["node", *names], rows)
    return format_table(["node", result.spec.name], [[node, render_value(value)] for node, value in zip(nodes, values)])


def format_trace(steps: Sequence[TraceStep]) -> str:
    rows = [
        [
            str(step.step),
            step.extracted or "",
            step.edge or "",
            step.changed_node or "",
            ", ".join(step.inserts),
            str(step.worklist_size),
        ]
        for step in steps
    ]
    return format_table(["step", "extracted", "edge", "changed", "inserted", "worklist"], rows)


def format_counters(counters: Counters) -> str:
    return (
        f"extracts={counters.extracts} inserts={counters.inserts} evaluations={counters.evaluations} "
        f"updates={counters.updates} rounds={counters.rounds}\n"
    )


def format_execution(trace: Trace) -> str:
    rows = []
    for index, configuration in enumerate(trace.configurations):
        memory = configuration.memory
        parts = [f"{name}={value}" for name, value in memory.variables.items()]
        parts += [f"{name}=[{', '.join(str(v) for v in entries)}]" for name, entries in memory.arrays.items()]
        rows.append([str(index), configuration.node, " ".join(parts)])
    footer = f"status: {trace.status.value}"
    if trace.reason:
        footer += f" ({trace.reason})"
    return format_table(["step", "node", "memory"], rows) + footer + "\n"


def execution_to_json(trace: Trace) -> dict[str, Any]:
    return {
        "status": trace.status.value,
        "reason": trace.reason,
        "configurations": [
            {"node": configuration.node, "memory": configuration.memory.to_json()}
            for configuration in trace.configurations
        ],
    }


def format_flow_matrix(relation: FlowRelation, containers: Sequence | None = None) -> str:
    """Rows are flow sources, columns flow targets."""
    containers = list(containers) if containers is not None else relation.sorted_containers()
    rows = [[str(source), *(str(relation[source, target]) for target in containers)] for source in containers]
    return format_table(["", *(str(target) for target in containers)], rows)


def flow_matrix_to_json(relation: FlowRelation) -> dict[str, dict[str, str]]:
    containers = relation.sorted_containers()
    return {
        str(source): {str(target): str(relation[source, target]) for target in containers}
        for source in containers
    }


def format_offending(relation: FlowRelation) -> str:
    flows = sorted(relation.flows.items(), key=lambda item: (-item[1], str(item[0][0]), str(item[0][1])))
    if not flows:
        return "no offending flows\n"
    rows = [[str(source), str(target), str(kind)] for (source, target), kind in flows]
    return format_table(["from", "to", "kind"], rows)


def format_level(level: FlowType | None) -> str:
    return str(FlowType.N if level is None else level)


def format_relation(name: str, rows: Iterable[Row]) -> list[str]:
    return [f"{name}({', '.join(format_constant(value) for value in row)})." for row in sorted(rows)]


def format_valuation(valuation: Mapping[str, Iterable[Row]], names: Iterable[str] | None = None) -> str:
    lines: list[str] = []
    for name in names if names is not None else sorted(valuation):
        lines.extend(format_relation(name, valuation.get(name, ())))
    return "\n".join(lines) + ("\n" if lines else "")


def to_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
