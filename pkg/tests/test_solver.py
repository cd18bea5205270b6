import unittest

from gcl_workbench.absint import interval_widening
from gcl_workbench.bitvector import bitvector_spec, dv_spec, fv_spec
from gcl_workbench.framework import check_solution
from gcl_workbench.integers import IntervalAnalysis, integer_spec
from gcl_workbench.intervals import POS_INF, Interval
from gcl_workbench.preprocessing import NonReducible, dfs_spanning_tree
from gcl_workbench.solver import DomainNotACC, chaotic_solve, widening_solve, worklist_solve
from gcl_workbench.worklists import STRATEGY_NAMES, Strategy, make_worklist

from tests.programs import (
    COUNTER,
    END,
    START,
    factorial_graph,
    graph_of,
    irreducible_graph,
    modulo_graph,
    random_program,
    split_sum_graph,
    transpose_graph,
)

ALL_KINDS = ("rd", "lv", "ae", "vb")


def spec_for(kind, pg):
    if kind == "dv":
        return dv_spec(pg)
    if kind == "fv":
        return fv_spec(pg)
    return bitvector_spec(kind, pg)


class WorklistTests(unittest.TestCase):
    def test_set_extracts_smallest_reverse_postorder_number(self):
        pg = factorial_graph()
        worklist = make_worklist("set", pg)

        for node in (END, "q3", "q1"):
            worklist.insert(node)

        self.assertEqual(["q1", "q3", END], [worklist.extract() for _ in range(3)])
        self.assertFalse(worklist)

    def test_stack_and_queue_orders(self):
        pg = factorial_graph()
        lifo = make_worklist(Strategy.LIFO, pg)
        fifo = make_worklist(Strategy.FIFO, pg)

        for node in ("q1", "q2", "q3"):
            lifo.insert(node)
            fifo.insert(node)

        self.assertEqual(["q3", "q2", "q1"], [lifo.extract() for _ in range(3)])
        self.assertEqual(["q1", "q2", "q3"], [fifo.extract() for _ in range(3)])

    def test_reverse_postorder_list_refills_from_pending(self):
        pg = factorial_graph()
        worklist = make_worklist("rpo", pg, numbering=dfs_spanning_tree(pg))

        worklist.insert("q3")
        worklist.insert(START)
        first = worklist.extract()
        worklist.insert("q1")

        self.assertEqual(START, first)
        self.assertEqual(["q3", "q1"], [worklist.extract() for _ in range(2)])
        self.assertEqual(2, worklist.rounds)

    def test_strong_component_list_takes_topmost_component(self):
        pg = factorial_graph()
        worklist = make_worklist("scc", pg)

        worklist.insert(END)
        worklist.insert("q2")

        self.assertEqual("q2", worklist.extract())
        self.assertEqual(END, worklist.extract())

    def test_whole_components_take_every_member(self):
        pg = factorial_graph()
        worklist = make_worklist("scc", pg, whole_components=True)

        worklist.insert("q2")

        self.assertEqual(["q1", "q2", "q3"], [worklist.extract() for _ in range(3)])

    def test_natural_loop_list_needs_a_reducible_graph(self):
        with self.assertRaises(NonReducible):
            make_worklist("natloop", irreducible_graph())


class WorklistSolveTests(unittest.TestCase):
    def test_every_strategy_reaches_the_chaotic_solution(self):
        graphs = {
            "factorial": factorial_graph(),
            "modulo": modulo_graph(),
            "transpose": transpose_graph(),
            "split_sum": split_sum_graph(),
        }
        for name, pg in graphs.items():
            for kind in (*ALL_KINDS, "dv", "fv"):
                spec = spec_for(kind, pg)
                expected = chaotic_solve(spec, pg).assignment
                for strategy in STRATEGY_NAMES:
                    with self.subTest(graph=name, kind=kind, strategy=strategy):
                        self.assertEqual(expected, worklist_solve(spec, pg, strategy).assignment)

    def test_random_programs_agree_across_strategies(self):
        for seed in range(15):
            pg = graph_of(random_program(seed))
            for kind in ALL_KINDS:
                spec = spec_for(kind, pg)
                expected = chaotic_solve(spec, pg).assignment
                self.assertEqual([], check_solution(spec, pg, expected))
                for strategy in STRATEGY_NAMES:
                    with self.subTest(seed=seed, kind=kind, strategy=strategy):
                        self.assertEqual(expected, worklist_solve(spec, pg, strategy).assignment)

    def test_whole_component_variants_agree(self):
        pg = transpose_graph()
        spec = bitvector_spec("rd", pg)
        expected = worklist_solve(spec, pg, "fifo").assignment

        for strategy in ("scc", "natloop"):
            with self.subTest(strategy=strategy):
                solution = worklist_solve(spec, pg, strategy, whole_components=True)
                self.assertEqual(expected, solution.assignment)

    def test_round_robin_needs_three_rounds_on_factorial(self):
        pg = factorial_graph()

        solution = worklist_solve(bitvector_spec("rd", pg), pg, "round_robin")

        self.assertEqual(3, solution.counters.rounds)
        self.assertEqual("round_robin", solution.strategy)

    def test_counters_and_steps_are_recorded(self):
        pg = factorial_graph()

        solution = worklist_solve(bitvector_spec("rd", pg), pg, "fifo")

        counters = solution.counters
        self.assertEqual(counters.extracts, counters.inserts)
        self.assertGreaterEqual(counters.extracts, len(pg.nodes))
        self.assertEqual(counters.evaluations, len(solution.steps) - sum(1 for s in solution.steps if s.edge is None))
        self.assertEqual(counters.updates, sum(1 for s in solution.steps if s.changed_node is not None))
        self.assertEqual(START, solution.steps[0].extracted)

    def test_non_reducible_graph_rejects_natural_loops_only(self):
        pg = irreducible_graph()
        spec = bitvector_spec("rd", pg)

        with self.assertRaises(NonReducible):
            worklist_solve(spec, pg, "natloop")
        self.assertEqual(chaotic_solve(spec, pg).assignment, worklist_solve(spec, pg, "scc").assignment)


class WideningTests(unittest.TestCase):
    def test_unbounded_domain_is_refused_without_widening(self):
        pg = graph_of(COUNTER)
        spec = integer_spec(IntervalAnalysis(None), pg)

        with self.assertRaises(DomainNotACC):
            chaotic_solve(spec, pg)
        with self.assertRaises(DomainNotACC):
            worklist_solve(spec, pg)

    def test_widening_terminates_with_a_solution(self):
        pg = graph_of(COUNTER)
        spec = integer_spec(IntervalAnalysis(None), pg, value_widen=interval_widening({0}))

        solution = widening_solve(spec, pg)

        self.assertEqual(Interval(0, POS_INF), solution["q1"].variables["i"])
        self.assertEqual(Interval(10, POS_INF), solution[END].variables["i"])
        self.assertLessEqual(solution.counters.updates, 10)
        self.assertEqual([], check_solution(spec, pg, solution.assignment))

    def test_domain_without_widening_needs_an_explicit_one(self):
        pg = graph_of(COUNTER)
        spec = integer_spec(IntervalAnalysis(None), pg)

        with self.assertRaises(ValueError):
            widening_solve(spec, pg)

    def test_join_as_widening_gives_the_least_solution(self):
        pg = factorial_graph()
        spec = bitvector_spec("rd", pg)

        solution = widening_solve(spec, pg, spec.domain.join)

        self.assertEqual(chaotic_solve(spec, pg).assignment, solution.assignment)
        self.assertEqual("widening", solution.strategy)


if __name__ == "__main__":
    unittest.main()
