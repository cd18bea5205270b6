import unittest

from gcl_workbench import intervals as ia
from gcl_workbench.constants import BOTTOM as CP_BOTTOM, TOP as CP_TOP
from gcl_workbench.integers import (
    AbstractMemory,
    ConstantAnalysis,
    IntervalAnalysis,
    SignAnalysis,
    abstract_binop,
    analysis_for,
    basic_memories,
    beta,
    format_memory,
    integer_spec,
    load_abstract_memory,
    program_constants,
)
from gcl_workbench.models import ExecutionStatus, Memory, MemoryFormatError
from gcl_workbench.parser import parse_bexp
from gcl_workbench.semantics import execute
from gcl_workbench.signs import BOOLS, FALSE, TRUE, lift_arithmetic, lift_relation
from gcl_workbench.solver import worklist_solve

from tests.programs import COUNTER, END, THREE_WAY, factorial_graph, graph_of, random_memory, random_program


def solve(analysis, pg, initial=None):
    return worklist_solve(integer_spec(analysis, pg, initial), pg)


class SignTests(unittest.TestCase):
    def test_operators_on_sign_sets(self):
        self.assertEqual(frozenset({"+"}), lift_arithmetic("*", frozenset({"-"}), frozenset({"-"})))
        self.assertEqual(frozenset({"-", "0", "+"}), lift_arithmetic("+", frozenset({"-"}), frozenset({"+"})))
        self.assertEqual(frozenset(), lift_arithmetic("/", frozenset({"+"}), frozenset({"0"})))
        self.assertEqual(frozenset({TRUE}), lift_relation("<", frozenset({"0"}), frozenset({"+"})))

    def test_factorial_with_positive_input(self):
        pg = factorial_graph()
        analysis, initial = load_abstract_memory({"kind": "ds", "vars": {"x": ["+"], "y": ["-", "0", "+"]}})

        solution = solve(analysis, pg, initial)

        self.assertEqual({"x": "{-, 0}", "y": "{+}"}, format_memory(analysis, solution[END]))
        self.assertEqual(frozenset({"+"}), solution["q2"].variables["x"])

    def test_basic_memories_split_the_tested_variables(self):
        analysis = SignAnalysis()
        memory = AbstractMemory({"x": frozenset({"-", "0", "+"}), "y": frozenset({"+"}), "z": frozenset({"0", "+"})})

        basics = basic_memories(analysis, memory, parse_bexp("x>y"))

        self.assertEqual(3, len(basics))
        self.assertEqual({frozenset({"0", "+"})}, {basic.variables["z"] for basic in basics})


class ConstantPropagationTests(unittest.TestCase):
    def test_known_input_selects_one_branch(self):
        pg = graph_of(THREE_WAY)
        analysis, initial = load_abstract_memory({"kind": "cp", "vars": {"x": 7, "y": "top"}})

        solution = solve(analysis, pg, initial)

        self.assertEqual(1, solution[END].variables["y"])

    def test_unknown_input_joins_to_top(self):
        pg = graph_of(THREE_WAY)
        analysis, initial = load_abstract_memory({"kind": "cp", "vars": {"x": "top", "y": "top"}})

        solution = solve(analysis, pg, initial)

        self.assertIs(CP_TOP, solution[END].variables["y"])
        self.assertEqual("⊤", format_memory(analysis, solution[END])["y"])

    def test_arrays_are_tracked_per_entry(self):
        pg = graph_of("A[0]:=5; x:=A[0]+A[1]")
        analysis, initial = load_abstract_memory({"kind": "cp", "vars": {"x": "top"}, "arrays": {"A": [1, 2]}})

        solution = solve(analysis, pg, initial)

        self.assertEqual({"A": "[5, 2]", "x": "7"}, format_memory(analysis, solution[END]))

    def test_array_lengths_are_required(self):
        with self.assertRaises(MemoryFormatError):
            integer_spec(ConstantAnalysis(), graph_of("A[0]:=1"))


class IntervalTests(unittest.TestCase):
    def test_counter_exit_interval_depends_on_endpoints(self):
        pg = graph_of(COUNTER)
        expected = [
            ({0}, ia.Interval(0, ia.POS_INF)),
            ({0, 1}, ia.Interval(1, ia.POS_INF)),
            ({0, 9, 10}, ia.Interval(10, ia.POS_INF)),
            ({0, 1, 9, 10}, ia.Interval(10, 10)),
        ]
        for K, interval in expected:
            with self.subTest(K=sorted(K)):
                solution = solve(IntervalAnalysis(K), pg)
                self.assertEqual(interval, solution[END].variables["i"])

    def test_base_intervals(self):
        self.assertEqual(
            [
                ia.Interval(ia.NEG_INF, 0),
                ia.Interval(0, 0),
                ia.Interval(1, 1),
                ia.Interval(1, 10),
                ia.Interval(10, 10),
                ia.Interval(10, ia.POS_INF),
            ],
            ia.base_intervals({0, 1, 10}),
        )

    def test_relation_on_separated_intervals(self):
        self.assertEqual(frozenset({TRUE}), ia.relation("<", ia.Interval(0, 9), ia.Interval(10, 10)))
        self.assertEqual(frozenset({FALSE}), ia.relation("<", ia.Interval(10, 12), ia.Interval(3, 10)))
        self.assertEqual(frozenset(), ia.relation("<", ia.BOTTOM, ia.Interval(3, 10)))

    def test_arithmetic_rounds_outwards(self):
        exact = ia.Endpoints(None)
        coarse = ia.Endpoints({-1, 0, 1})

        self.assertEqual(ia.Interval(4, ia.POS_INF), ia.arithmetic("+", ia.Interval(1, 2), ia.Interval(3, ia.POS_INF), exact))
        self.assertEqual(ia.Interval(-8, 12), ia.arithmetic("*", ia.Interval(-2, 3), ia.Interval(-1, 4), exact))
        self.assertEqual(ia.Interval(-4, 8), ia.arithmetic("/", ia.Interval(-4, 8), ia.Interval(0, 2), exact))
        self.assertEqual(ia.BOTTOM, ia.arithmetic("/", ia.Interval(1, 2), ia.Interval(0, 0), exact))
        self.assertEqual(ia.Interval(1, ia.POS_INF), ia.arithmetic("+", ia.Interval(1, 1), ia.Interval(1, 1), coarse))

    def test_meet_and_join_against_membership(self):
        window = range(-6, 7)
        samples = [ia.BOTTOM, ia.TOP, ia.Interval(-3, 2), ia.Interval(0, 5), ia.Interval(4, ia.POS_INF), ia.Interval(ia.NEG_INF, -2)]
        for left in samples:
            for right in samples:
                with self.subTest(left=str(left), right=str(right)):
                    self.assertEqual(
                        ia.setof_sample(left, window) & ia.setof_sample(right, window),
                        ia.setof_sample(ia.meet(left, right), window),
                    )
                    self.assertLessEqual(
                        ia.setof_sample(left, window) | ia.setof_sample(right, window),
                        ia.setof_sample(ia.join(left, right), window),
                    )

    def test_beta_of_an_array_joins_its_entries(self):
        analysis = IntervalAnalysis({-1, 0, 1})

        abstract = beta(analysis, Memory({"x": -5}, {"A": list(range(8))}))

        self.assertEqual(ia.Interval(0, ia.POS_INF), abstract.arrays["A"])
        self.assertEqual(ia.Interval(ia.NEG_INF, -1), abstract.variables["x"])

    def test_rendering(self):
        self.assertEqual("[-inf, 3]", str(ia.Interval(ia.NEG_INF, 3)))
        self.assertEqual("⊥", str(ia.BOTTOM))


class AbstractOperatorTests(unittest.TestCase):
    def test_signs(self):
        ds = SignAnalysis()

        self.assertEqual(frozenset({"-", "0", "+"}), abstract_binop(ds, "+", frozenset({"-"}), frozenset({"+"})))
        self.assertEqual(frozenset({"0", "+"}), abstract_binop(ds, "+", frozenset({"0", "+"}), frozenset({"0", "+"})))
        self.assertEqual(frozenset({"0", "+"}), abstract_binop(ds, "/", frozenset({"+"}), frozenset({"0", "+"})))
        self.assertEqual(frozenset(), abstract_binop(ds, "%", frozenset({"+"}), frozenset({"0"})))
        self.assertEqual(frozenset({TRUE}), abstract_binop(ds, "<", frozenset({"-"}), frozenset({"0", "+"})))
        self.assertEqual(BOOLS, abstract_binop(ds, "<", frozenset({"0", "+"}), frozenset({"+"})))

    def test_constants(self):
        cp = ConstantAnalysis()

        self.assertEqual(CP_TOP, abstract_binop(cp, "+", 3, CP_TOP))
        self.assertEqual(8, abstract_binop(cp, "+", 3, 5))
        self.assertEqual(1, abstract_binop(cp, "/", 6, 4))
        self.assertEqual(CP_BOTTOM, abstract_binop(cp, "/", 7, 0))
        self.assertEqual(CP_BOTTOM, abstract_binop(cp, "%", CP_TOP, 0))
        self.assertEqual(frozenset({TRUE}), abstract_binop(cp, "<", 3, 5))
        self.assertEqual(BOOLS, abstract_binop(cp, "=", CP_TOP, 5))

    def test_intervals(self):
        rounded = IntervalAnalysis({-1, 0, 1})
        exact = IntervalAnalysis()

        self.assertEqual(ia.Interval(0, ia.POS_INF), abstract_binop(rounded, "+", ia.Interval(-1, 1), ia.Interval(1, 1)))
        self.assertEqual(frozenset({TRUE}), abstract_binop(exact, "<", ia.Interval(0, 9), ia.Interval(10, 10)))
        self.assertEqual(ia.Interval(2, 8), abstract_binop(exact, "/", ia.Interval(4, 8), ia.Interval(0, 2)))
        self.assertEqual(ia.Interval(0, 2), abstract_binop(exact, "%", ia.Interval(5, 9), ia.Interval(-3, 0)))
        self.assertEqual(ia.BOTTOM, abstract_binop(exact, "/", ia.Interval(4, 8), ia.Interval(0, 0)))

    def test_bottom_operands(self):
        cases = [
            (SignAnalysis(), frozenset({"+"})),
            (ConstantAnalysis(), 5),
            (IntervalAnalysis(), ia.Interval(1, 1)),
        ]
        for analysis, value in cases:
            for op in ("+", "-", "*", "/", "%"):
                with self.subTest(kind=analysis.kind, op=op):
                    self.assertEqual(analysis.bottom, abstract_binop(analysis, op, analysis.bottom, value))
                    self.assertEqual(analysis.bottom, abstract_binop(analysis, op, value, analysis.bottom))
            with self.subTest(kind=analysis.kind, op="<="):
                self.assertEqual(frozenset(), abstract_binop(analysis, "<=", analysis.bottom, value))


class SoundnessTests(unittest.TestCase):
    """Every concrete configuration is described by the analysis result at its node."""

    def _check(self, analysis):
        for seed in range(20):
            pg = graph_of(random_program(seed))
            memory = random_memory(seed)
            solution = solve(analysis, pg, beta(analysis, memory, names=pg.variables))
            trace = execute(pg, memory, max_steps=200, seed=seed)
            self.assertNotEqual(ExecutionStatus.STUCK, trace.status)
            domain = integer_spec(analysis, pg).domain
            for configuration in trace.configurations:
                with self.subTest(seed=seed, node=configuration.node):
                    described = beta(analysis, configuration.memory, names=pg.variables)
                    self.assertTrue(domain.leq(described, solution[configuration.node]))

    def test_detection_of_signs(self):
        self._check(SignAnalysis())

    def test_constant_propagation(self):
        self._check(ConstantAnalysis())

    def test_intervals(self):
        self._check(IntervalAnalysis({-1, 0, 1, 3}))

    def test_many_programs_from_many_memories(self):
        analyses = (SignAnalysis(), ConstantAnalysis(), IntervalAnalysis({-1, 0, 1, 3}))
        for seed in range(500):
            pg = graph_of(random_program(seed))
            memories = [random_memory(seed * 20 + k) for k in range(20)]
            reached = set()
            for k, memory in enumerate(memories):
                trace = execute(pg, memory, max_steps=200, seed=k)
                self.assertNotEqual(ExecutionStatus.STUCK, trace.status)
                reached.update((c.node, c.memory) for c in trace.configurations)

            for analysis in analyses:
                domain = integer_spec(analysis, pg).domain
                initial = domain.join_all(beta(analysis, memory, names=pg.variables) for memory in memories)
                solution = solve(analysis, pg, initial)
                missed = [
                    node
                    for node, memory in reached
                    if not domain.leq(beta(analysis, memory, names=pg.variables), solution[node])
                ]
                self.assertEqual([], missed, f"{analysis.kind} on program {seed}")


class AbstractMemoryFileTests(unittest.TestCase):
    def test_interval_memory_with_endpoints(self):
        analysis, memory = load_abstract_memory({"kind": "interval", "K": [0, 10], "vars": {"i": ["-inf", 10]}})

        self.assertIsInstance(analysis, IntervalAnalysis)
        self.assertEqual((0, 10), analysis.endpoints.points)
        self.assertEqual(ia.Interval(ia.NEG_INF, 10), memory.variables["i"])

    def test_malformed_memories(self):
        for payload in (
            {"kind": "octagon"},
            {"kind": "ds", "vars": {"x": ["*"]}},
            {"kind": "interval", "K": [True]},
            {"kind": "interval", "vars": {"x": [3, 1]}},
            {"kind": "cp", "arrays": {"A": []}},
            "ds",
        ):
            with self.subTest(payload=payload):
                with self.assertRaises(MemoryFormatError):
                    load_abstract_memory(payload)

    def test_analysis_for(self):
        self.assertIsInstance(analysis_for("ds"), SignAnalysis)
        self.assertIsInstance(analysis_for("ia", K=[0]), IntervalAnalysis)
        with self.assertRaises(ValueError):
            analysis_for("rd")

    def test_program_constants(self):
        self.assertEqual(frozenset({0, 1, 10}), program_constants(graph_of(COUNTER)))


if __name__ == "__main__":
    unittest.main()
