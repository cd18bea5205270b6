import json
import unittest
from pathlib import Path

from gcl_workbench.infoflow import FlowType
from gcl_workbench.intervals import POS_INF, Interval
from gcl_workbench.models import ExecutionStatus, Memory, MemoryFormatError
from gcl_workbench.parser import Dialect, ParseError, parse_program
from gcl_workbench.policies import PolicyFormatError, variable
from gcl_workbench.services import (
    AnalysisRequest,
    SecflowMode,
    Widening,
    WorkbenchService,
    default_thresholds,
)
from gcl_workbench.solver import DomainNotACC

from tests.programs import COUNTER, DATABASE, END, FACTORIAL, START, factorial_graph, graph_of


def secure(text):
    return parse_program(text, Dialect.SECURITY)


class FakeFiles:
    def __init__(self, files):
        self.files = {Path(name): text for name, text in files.items()}
        self.reads = []

    def __call__(self, path: Path) -> str:
        self.reads.append(path)
        try:
            return self.files[path]
        except KeyError:
            raise FileNotFoundError(f"No such file: '{path}'") from None


def service_with(files=None):
    reader = FakeFiles(files or {})
    return WorkbenchService(reader=reader), reader


class LoadingTests(unittest.TestCase):
    def test_load_program_reads_through_the_reader(self):
        service, reader = service_with({"prog.gcl": "x:=1"})

        command = service.load_program("prog.gcl")

        self.assertEqual(parse_program("x:=1"), command)
        self.assertEqual([Path("prog.gcl")], reader.reads)

    def test_load_program_in_the_security_dialect(self):
        service, _reader = service_with({"prog.gcl": "x:=san y"})

        with self.assertRaises(ParseError):
            service.load_program("prog.gcl")
        service.load_program("prog.gcl", dialect=Dialect.SECURITY)

    def test_missing_file(self):
        service, _reader = service_with()

        with self.assertRaises(FileNotFoundError):
            service.load_program("missing.gcl")

    def test_load_memory(self):
        service, _reader = service_with({"mem.json": json.dumps({"vars": {"x": 3}, "arrays": {"A": [1, 2]}})})

        memory = service.load_memory("mem.json")

        self.assertEqual(3, memory.variables["x"])
        self.assertEqual((1, 2), tuple(memory.arrays["A"]))

    def test_invalid_json_is_a_format_error(self):
        service, _reader = service_with({"mem.json": "{", "policy.json": "["})

        with self.assertRaises(MemoryFormatError):
            service.load_memory("mem.json")
        with self.assertRaises(MemoryFormatError):
            service.load_abstract_memory("mem.json")
        with self.assertRaises(PolicyFormatError):
            service.load_policy("policy.json")


class RunProgramTests(unittest.TestCase):
    def test_factorial_runs_to_the_final_node(self):
        service = WorkbenchService()
        pg = factorial_graph()

        trace = service.run_program(pg, Memory({"x": 3, "y": 0}))

        self.assertEqual(ExecutionStatus.FINAL, trace.status)
        self.assertEqual(END, trace.configurations[-1].node)
        self.assertEqual(6, trace.configurations[-1].memory.variables["y"])

    def test_memory_must_bind_every_variable(self):
        with self.assertRaises(MemoryFormatError) as ctx:
            WorkbenchService().run_program(factorial_graph(), Memory({"y": 0}))

        self.assertIn("x", str(ctx.exception))

    def test_paths(self):
        paths = WorkbenchService().paths(factorial_graph(), max_len=5)

        self.assertEqual([2, 5], sorted(len(path) for path in paths))
        self.assertTrue(all(path.nodes[0] == START for path in paths))


class AnalyzeTests(unittest.TestCase):
    def test_bit_vector_analysis(self):
        pg = factorial_graph()

        result = WorkbenchService().analyze(pg, AnalysisRequest(kind="lv", live_at_exit=("y",)))

        self.assertEqual(frozenset({"y"}), result.solution.assignment[END])
        self.assertEqual(frozenset({"x"}), result.solution.assignment[START])
        self.assertIsNone(result.analysis)

    def test_signs_from_an_abstract_memory(self):
        service, _reader = service_with(
            {"signs.json": json.dumps({"kind": "ds", "vars": {"x": ["+"], "y": ["-", "0", "+"]}})}
        )
        pg = factorial_graph()
        request = AnalysisRequest(kind="ds", abstract_memory=service.load_abstract_memory("signs.json"))

        result = service.analyze(pg, request)

        memory = result.solution.assignment[END]
        self.assertEqual(frozenset({"-", "0"}), memory.variables["x"])
        self.assertEqual(frozenset({"+"}), memory.variables["y"])

    def test_abstract_memory_must_match_the_analysis(self):
        service, _reader = service_with({"signs.json": json.dumps({"kind": "ds", "vars": {"x": ["+"], "y": ["+"]}})})
        abstract_memory = service.load_abstract_memory("signs.json")

        with self.assertRaises(MemoryFormatError):
            service.analyze(factorial_graph(), AnalysisRequest(kind="cp", abstract_memory=abstract_memory))

    def test_relational_signs_start_from_signs(self):
        service, _reader = service_with({"cp.json": json.dumps({"kind": "cp", "vars": {"x": 1, "y": 1}})})
        abstract_memory = service.load_abstract_memory("cp.json")

        with self.assertRaises(MemoryFormatError):
            service.analyze(factorial_graph(), AnalysisRequest(kind="rds", abstract_memory=abstract_memory))

    def test_template_memory_gives_array_lengths(self):
        pg = graph_of("A[0]:=5; A[1]:=2; x:=A[0]+A[1]")
        request = AnalysisRequest(kind="cp", template=Memory({"x": 0}, {"A": (0, 0)}))

        result = WorkbenchService().analyze(pg, request)

        memory = result.solution.assignment[END]
        self.assertEqual("[5, 2]", result.analysis.format_array(memory.arrays["A"]))
        self.assertEqual("7", result.analysis.format_value(memory.variables["x"]))

    def test_intervals_with_endpoints(self):
        result = WorkbenchService().analyze(graph_of(COUNTER), AnalysisRequest(kind="ia", K=(0, 1, 9, 10)))

        self.assertEqual(Interval(10, 10), result.solution.assignment[END].variables["i"])

    def test_intervals_with_threshold_widening(self):
        request = AnalysisRequest(kind="ia", widening=Widening.INTERVAL, K=(0,))

        result = WorkbenchService().analyze(graph_of(COUNTER), request)

        self.assertEqual(Interval(10, POS_INF), result.solution.assignment[END].variables["i"])
        self.assertEqual("widening", result.solution.strategy)

    def test_unbounded_intervals_are_refused(self):
        with self.assertRaises(DomainNotACC):
            WorkbenchService().analyze(graph_of(COUNTER), AnalysisRequest(kind="ia"))

    def test_chaotic_iteration_gives_the_worklist_solution(self):
        pg = factorial_graph()
        service = WorkbenchService()

        chaotic = service.analyze(pg, AnalysisRequest(kind="rd", strategy="chaotic"))
        lifo = service.analyze(pg, AnalysisRequest(kind="rd", strategy="lifo"))

        self.assertEqual("chaotic", chaotic.solution.strategy)
        self.assertEqual(lifo.solution.assignment, chaotic.solution.assignment)

    def test_unknown_analysis(self):
        with self.assertRaises(ValueError):
            WorkbenchService().build_spec(factorial_graph(), AnalysisRequest(kind="octagons"))

    def test_default_thresholds(self):
        self.assertEqual((0, 1, 10), default_thresholds(graph_of(COUNTER)))
        self.assertEqual((0, 1), default_thresholds(graph_of(FACTORIAL)))


class SecflowTests(unittest.TestCase):
    COMPANIES = {
        "lattice": {
            "kind": "hasse",
            "elements": ["clean", "Microsoft", "Google"],
            "edges": [["clean", "Microsoft"], ["clean", "Google"]],
        },
        "assoc": {"i": "Microsoft", "j": "Google", "A[]": "Microsoft", "B[]": "Google", "A#": "clean", "B#": "clean"},
    }

    def test_measure_without_a_policy(self):
        report = WorkbenchService().secflow(secure("x:=y"), SecflowMode.MEASURE)

        self.assertEqual(FlowType.E, report.relation[variable("y"), variable("x")])
        self.assertIsNone(report.offending)
        self.assertIsNone(report.level)

    def test_enforce_reports_the_worst_offence(self):
        service, _reader = service_with({"policy.json": json.dumps(self.COMPANIES)})
        policy = service.load_policy("policy.json")

        report = service.secflow(secure(DATABASE), "enforce", policy)

        self.assertEqual(FlowType.B, report.level)

    def test_typing_needs_a_policy(self):
        with self.assertRaises(ValueError):
            WorkbenchService().secflow(secure("skip"), SecflowMode.TYPE)


class DatalogTests(unittest.TestCase):
    def test_reports_agreement_with_the_worklist_solution(self):
        for kind in ("rd", "ae", "fv"):
            with self.subTest(kind=kind):
                report = WorkbenchService().datalog(factorial_graph(), kind)

                self.assertTrue(report.agrees)
                self.assertEqual(kind, report.kind)


if __name__ == "__main__":
    unittest.main()
