import unittest

from gcl_workbench.models import ExecutionStatus, Memory, MemoryFormatError, Undefined
from gcl_workbench.parser import parse_aexp, parse_bexp
from gcl_workbench.semantics import divide, eval_aexp, eval_bexp, execute, modulo

from tests.programs import END, factorial_graph, graph_of


class ArithmeticTests(unittest.TestCase):
    def test_division_truncates_toward_zero(self):
        self.assertEqual(3, divide(7, 2))
        self.assertEqual(-3, divide(-7, 2))
        self.assertEqual(-3, divide(7, -2))
        self.assertEqual(3, divide(-7, -2))

    def test_modulo_matches_division(self):
        for n in range(-9, 10):
            for d in (-4, -3, 3, 4):
                with self.subTest(n=n, d=d):
                    self.assertEqual(n, divide(n, d) * d + modulo(n, d))
        self.assertEqual(-1, modulo(-7, 2))
        self.assertEqual(1, modulo(7, -2))

    def test_division_by_zero_is_undefined(self):
        value = eval_aexp(parse_aexp("x/y"), Memory({"x": 1, "y": 0}))

        self.assertIsInstance(value, Undefined)

    def test_out_of_bounds_read_is_undefined(self):
        memory = Memory({"i": 3}, {"A": [1, 2, 3]})

        self.assertIsInstance(eval_aexp(parse_aexp("A[i]"), memory), Undefined)
        self.assertEqual(3, eval_aexp(parse_aexp("A#"), memory))

    def test_short_circuit_operators_skip_undefined_operands(self):
        memory = Memory({"x": 0})

        self.assertFalse(eval_bexp(parse_bexp("x>0 && 1/x>0"), memory))
        self.assertIsInstance(eval_bexp(parse_bexp("x>0 & 1/x>0"), memory), Undefined)
        self.assertTrue(eval_bexp(parse_bexp("x=0 || 1/x>0"), memory))


class ExecuteTests(unittest.TestCase):
    def test_factorial_terminates_with_result(self):
        trace = execute(factorial_graph(), Memory({"x": 3, "y": 0}))

        self.assertEqual(ExecutionStatus.FINAL, trace.status)
        self.assertEqual(END, trace.last.node)
        self.assertEqual({"x": 0, "y": 6}, dict(trace.last.memory.variables))
        self.assertEqual(14, trace.steps)

    def test_division_by_zero_gets_stuck(self):
        trace = execute(graph_of("x:=1/y"), Memory({"x": 0, "y": 0}))

        self.assertEqual(ExecutionStatus.STUCK, trace.status)
        self.assertIn("division by zero", trace.reason)
        self.assertEqual(0, trace.steps)

    def test_unknown_variable_gets_stuck(self):
        trace = execute(graph_of("x:=1"), Memory())

        self.assertEqual(ExecutionStatus.STUCK, trace.status)

    def test_step_budget_stops_a_diverging_run(self):
        trace = execute(graph_of("do x>0 -> x:=x+1 od"), Memory({"x": 1}), max_steps=10)

        self.assertEqual(ExecutionStatus.BUDGET, trace.status)
        self.assertEqual(10, trace.steps)

    def test_channels_are_read_from_the_front_and_appended_to(self):
        memory = Memory({"x": 0}, channels={"in": [5, 6], "out": []})

        trace = execute(graph_of("in?x; out!x*2"), memory)

        self.assertEqual(ExecutionStatus.FINAL, trace.status)
        self.assertEqual((6,), trace.last.memory.channels["in"])
        self.assertEqual((10,), trace.last.memory.channels["out"])

    def test_array_write_out_of_bounds_gets_stuck(self):
        trace = execute(graph_of("A[i]:=1"), Memory({"i": 2}, {"A": [0, 0]}))

        self.assertEqual(ExecutionStatus.STUCK, trace.status)
        self.assertIn("out of bounds", trace.reason)

    def test_seed_decides_between_enabled_edges(self):
        pg = graph_of("if true -> x:=1 [] true -> x:=2 fi")

        outcomes = {execute(pg, Memory({"x": 0}), seed=seed).last.memory.variables["x"] for seed in range(50)}
        repeated = execute(pg, Memory({"x": 0}), seed=11).last.memory
        again = execute(pg, Memory({"x": 0}), seed=11).last.memory

        self.assertEqual({1, 2}, outcomes)
        self.assertEqual(repeated, again)

    def test_negative_budget_is_rejected(self):
        with self.assertRaises(ValueError):
            execute(factorial_graph(), Memory({"x": 1, "y": 1}), max_steps=-1)


class MemoryTests(unittest.TestCase):
    def test_from_json_reads_all_sections(self):
        memory = Memory.from_json({"vars": {"x": 1}, "arrays": {"A": [1, 2]}, "channels": {"in": [3]}})

        self.assertEqual(1, memory.variables["x"])
        self.assertEqual((1, 2), memory.arrays["A"])
        self.assertEqual({"vars": {"x": 1}, "arrays": {"A": [1, 2]}, "channels": {"in": [3]}}, memory.to_json())

    def test_from_json_rejects_malformed_payloads(self):
        for payload in (
            {"registers": {}},
            {"vars": {"x": True}},
            {"vars": {"x": "1"}},
            {"arrays": {"A": []}},
            [1, 2],
        ):
            with self.subTest(payload=payload):
                with self.assertRaises(MemoryFormatError):
                    Memory.from_json(payload)

    def test_covers_lists_unbound_names(self):
        pg = graph_of("in?x; A[x]:=y; out!x")

        missing = Memory({"x": 0}, channels={"in": []}).covers(pg)

        self.assertEqual(["y", "A", "out"], missing)


if __name__ == "__main__":
    unittest.main()
