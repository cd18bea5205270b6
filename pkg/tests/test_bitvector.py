import unittest

from gcl_workbench.bitvector import (
    AnalysisKind,
    RDFact,
    UNKNOWN,
    bitvector_spec,
    context_of,
    dv_spec,
    faint_names,
    free_vars,
    fv_spec,
    kill_gen,
    path_available,
    path_definitions,
    path_uses,
    path_very_busy,
)
from gcl_workbench.framework import Direction, check_solution, path_effect
from gcl_workbench.graphs import enumerate_paths
from gcl_workbench.parser import parse_aexp
from gcl_workbench.solver import worklist_solve

from tests.programs import (
    END,
    START,
    factorial_graph,
    graph_of,
    modulo_graph,
    random_loop_free_program,
    random_program,
    split_sum_graph,
    transpose_graph,
)


def exprs(*texts):
    return frozenset(parse_aexp(text) for text in texts)


def rd(subject, source, target):
    return RDFact(subject, source, target)


class ReachingDefinitionsTests(unittest.TestCase):
    def test_factorial(self):
        pg = factorial_graph()
        loop_head = frozenset({rd("x", "?", START), rd("y", START, "q1"), rd("x", "q3", "q1"), rd("y", "q2", "q3")})

        solution = worklist_solve(bitvector_spec("rd", pg), pg)

        self.assertEqual(frozenset({rd("x", "?", START), rd("y", "?", START)}), solution[START])
        self.assertEqual(loop_head, solution["q1"])
        self.assertEqual(loop_head, solution["q2"])
        self.assertEqual(frozenset({rd("x", "?", START), rd("x", "q3", "q1"), rd("y", "q2", "q3")}), solution["q3"])
        self.assertEqual(loop_head, solution[END])

    def test_fact_rendering(self):
        self.assertEqual("(x, ?, q▷)", str(RDFact("x", UNKNOWN, START)))

    def test_array_assignment_never_kills(self):
        pg = graph_of("A[0]:=1; A[1]:=2")
        ctx = context_of(pg)

        kill, gen = kill_gen(AnalysisKind.RD, pg.edges[1], ctx)

        self.assertEqual(frozenset(), kill)
        self.assertEqual(frozenset({rd("A", "q1", END)}), gen)
        solution = worklist_solve(bitvector_spec("rd", pg), pg)
        self.assertEqual(
            frozenset({rd("A", "?", START), rd("A", START, "q1"), rd("A", "q1", END)}),
            solution[END],
        )


class LiveVariablesTests(unittest.TestCase):
    def test_modulo(self):
        pg = modulo_graph()

        solution = worklist_solve(bitvector_spec("lv", pg), pg)

        expected = {
            END: set(),
            "q6": {"r"},
            "q5": {"q", "r", "y"},
            "q4": {"q", "r", "y"},
            "q3": {"q", "r", "y"},
            "q2": {"q", "x", "y"},
            "q1": {"x", "y"},
            START: {"x", "y"},
        }
        self.assertEqual({node: frozenset(names) for node, names in expected.items()}, solution.assignment)

    def test_names_live_at_exit_seed_the_final_node(self):
        pg = graph_of("x:=y+1")

        solution = worklist_solve(bitvector_spec("lv", pg, live_at_exit=["x"]), pg)

        self.assertEqual(frozenset({"x"}), solution[END])
        self.assertEqual(frozenset({"y"}), solution[START])


class AvailableExpressionsTests(unittest.TestCase):
    def test_transpose(self):
        pg = transpose_graph()

        solution = worklist_solve(bitvector_spec("ae", pg), pg)

        inner = exprs("i*m", "i*m+j")
        for node in (START, "q1", "q2", "q3", "q4", "q5", END):
            with self.subTest(node=node):
                self.assertEqual(frozenset(), solution[node])
        self.assertEqual(inner, solution["q6"])
        self.assertEqual(inner | exprs("j*n", "j*n+i"), solution["q7"])
        self.assertEqual(inner | exprs("j*n", "j*n+i", "A[u]"), solution["q8"])

    def test_self_referencing_assignment_generates_nothing(self):
        pg = graph_of("x:=x+1")

        kill, gen = kill_gen("ae", pg.edges[0], context_of(pg))

        self.assertEqual(exprs("x+1"), kill)
        self.assertEqual(frozenset(), gen)


class VeryBusyExpressionsTests(unittest.TestCase):
    def test_split_sum(self):
        pg = split_sum_graph()

        solution = worklist_solve(bitvector_spec("vb", pg), pg)

        expected = {
            "q4": exprs("A[i]", "i+1"),
            "q5": exprs("A[i]", "i+1", "x+A[i]"),
            "q6": exprs("i+1"),
            "q7": exprs("A[i]", "i+1", "y+A[i]"),
            "q8": exprs("i+1"),
        }
        for node in pg.nodes:
            with self.subTest(node=node):
                self.assertEqual(expected.get(node, frozenset()), solution[node])


class ExtendedAnalysesTests(unittest.TestCase):
    def test_dangerous_variables_are_cleaned_by_constant_assignments(self):
        pg = graph_of("x:=1; y:=x; z:=y+w")

        solution = worklist_solve(dv_spec(pg), pg)

        self.assertEqual(frozenset({"w", "x", "y", "z"}), solution[START])
        self.assertEqual(frozenset({"w", "z"}), solution["q2"])
        self.assertEqual(frozenset({"w", "z"}), solution[END])

    def test_faint_variables_ignore_uses_by_dead_assignments(self):
        pg = graph_of("x:=1; y:=x; out!z")

        strongly_live = worklist_solve(fv_spec(pg), pg)
        live = worklist_solve(bitvector_spec("lv", pg), pg)

        self.assertEqual(frozenset({"z"}), strongly_live["q1"])
        self.assertEqual(frozenset({"x", "z"}), live["q1"])
        self.assertEqual(frozenset({"x", "y"}), faint_names(pg, strongly_live[START]))

    def test_free_vars_of_array_reference(self):
        self.assertEqual(frozenset({"A", "i", "j"}), free_vars(parse_aexp("A[i+j]*2")))


class PathOracleTests(unittest.TestCase):
    """On loop-free programs the solved analyses agree with the path summaries."""

    SEEDS = range(100)

    def _paths_to(self, pg, node):
        return enumerate_paths(pg, pg.initial, node, len(pg.edges))

    def _paths_from(self, pg, node):
        return enumerate_paths(pg, node, pg.final, len(pg.edges))

    def test_reaching_definitions_union_over_paths(self):
        for seed in self.SEEDS:
            pg = graph_of(random_loop_free_program(seed))
            solution = worklist_solve(bitvector_spec("rd", pg), pg)
            for node in pg.nodes:
                with self.subTest(seed=seed, node=node):
                    expected = frozenset().union(*(path_definitions(p, pg) for p in self._paths_to(pg, node)))
                    self.assertEqual(expected, solution[node])

    def test_live_variables_union_over_paths(self):
        for seed in self.SEEDS:
            pg = graph_of(random_loop_free_program(seed))
            solution = worklist_solve(bitvector_spec("lv", pg), pg)
            for node in pg.nodes:
                with self.subTest(seed=seed, node=node):
                    expected = frozenset().union(*(path_uses(p, pg) for p in self._paths_from(pg, node)))
                    self.assertEqual(expected, solution[node])

    def test_available_expressions_intersect_over_paths(self):
        for seed in self.SEEDS:
            pg = graph_of(random_loop_free_program(seed))
            solution = worklist_solve(bitvector_spec("ae", pg), pg)
            for node in pg.nodes:
                with self.subTest(seed=seed, node=node):
                    found = [path_available(p) for p in self._paths_to(pg, node)]
                    self.assertEqual(frozenset.intersection(*found), solution[node])

    def test_very_busy_expressions_intersect_over_paths(self):
        for seed in self.SEEDS:
            pg = graph_of(random_loop_free_program(seed))
            solution = worklist_solve(bitvector_spec("vb", pg), pg)
            for node in pg.nodes:
                with self.subTest(seed=seed, node=node):
                    found = [path_very_busy(p) for p in self._paths_from(pg, node)]
                    self.assertEqual(frozenset.intersection(*found), solution[node])

    def test_paths_of_cyclic_programs_are_covered(self):
        for kind in ("rd", "lv", "ae", "vb"):
            for seed in self.SEEDS:
                pg = graph_of(random_program(seed))
                spec = bitvector_spec(kind, pg)
                solution = worklist_solve(spec, pg)
                for node in pg.nodes:
                    if spec.direction is Direction.FORWARD:
                        paths = enumerate_paths(pg, pg.initial, node, 10)
                    else:
                        paths = enumerate_paths(pg, node, pg.final, 10)
                    with self.subTest(kind=kind, seed=seed, node=node):
                        self.assertTrue(all(spec.domain.leq(path_effect(spec, p), solution[node]) for p in paths))

    def test_path_effect_matches_path_summary(self):
        pg = graph_of(random_loop_free_program(3))
        spec = bitvector_spec("rd", pg)

        for path in self._paths_to(pg, pg.final):
            self.assertEqual(path_definitions(path, pg), path_effect(spec, path))

    def test_solutions_satisfy_their_constraints(self):
        pg = factorial_graph()
        for kind in ("rd", "lv", "ae", "vb"):
            spec = bitvector_spec(kind, pg)
            with self.subTest(kind=kind):
                self.assertEqual([], check_solution(spec, pg, worklist_solve(spec, pg).assignment))

    def test_bottom_assignment_violates_the_initial_constraint(self):
        pg = factorial_graph()
        spec = bitvector_spec("rd", pg)

        violated = check_solution(spec, pg, {node: frozenset() for node in pg.nodes})

        self.assertIsNone(violated[0].action)
        self.assertEqual(START, violated[0].source)


if __name__ == "__main__":
    unittest.main()
