import unittest

from gcl_workbench.graphs import (
    ReachabilityViolation,
    build_program_graph,
    emit_dot,
    enumerate_paths,
    program_graph_from_edges,
    reverse,
    to_networkx,
)
from gcl_workbench.parser import parse_program

from tests.programs import END, START, edge, factorial_graph, modulo_graph


class BuildProgramGraphTests(unittest.TestCase):
    def test_factorial_edges_in_construction_order(self):
        pg = factorial_graph()

        self.assertEqual((START, "q1", "q2", "q3", END), pg.nodes)
        self.assertEqual(
            [
                (START, "y:=1", "q1"),
                ("q1", "!(x>0)", END),
                ("q1", "x>0", "q2"),
                ("q2", "y:=x*y", "q3"),
                ("q3", "x:=x-1", "q1"),
            ],
            [(e.source, e.label, e.target) for e in pg.edges],
        )

    def test_names_of_the_program(self):
        pg = build_program_graph(parse_program("in?x; A[x]:=x; out!A#"))

        self.assertEqual(frozenset({"x"}), pg.variables)
        self.assertEqual(frozenset({"A"}), pg.arrays)
        self.assertEqual(frozenset({"in", "out"}), pg.channels)

    def test_if_with_two_guards_meets_at_the_target(self):
        pg = build_program_graph(parse_program("if x>0 -> y:=1 [] x<=0 -> y:=2 fi"))

        self.assertEqual(
            [(START, "x>0", "q1"), ("q1", "y:=1", END), (START, "x<=0", "q2"), ("q2", "y:=2", END)],
            [(e.source, e.label, e.target) for e in pg.edges],
        )

    def test_loop_exit_uses_negated_guards(self):
        pg = build_program_graph(parse_program("do x>0 -> x:=x-1 [] y>0 -> y:=y-1 od"))

        self.assertEqual("!(x>0) & !(y>0)", pg.edges[0].label)

    def test_endless_loop_leaves_final_node_unreachable(self):
        with self.assertRaises(ReachabilityViolation) as ctx:
            build_program_graph(parse_program("do true -> skip od"))

        self.assertEqual(END, ctx.exception.node)

    def test_closed_false_branch_still_connects(self):
        pg = build_program_graph(parse_program("if x>0 -> skip [] false -> skip fi"))

        self.assertEqual(["x>0", "skip", "false", "skip"], [e.label for e in pg.edges])


class ProgramGraphFromEdgesTests(unittest.TestCase):
    def test_unreachable_node_is_reported(self):
        with self.assertRaises(ReachabilityViolation) as ctx:
            program_graph_from_edges([edge(START, "skip", END), edge("q1", "skip", END)])

        self.assertEqual("q1", ctx.exception.node)

    def test_reachability_follows_every_edge(self):
        pg = program_graph_from_edges([edge(START, "false", "q1"), edge("q1", "skip", END)])

        self.assertEqual((START, "q1", END), pg.nodes)

    def test_edge_outside_the_node_list_is_rejected(self):
        with self.assertRaises(ValueError):
            program_graph_from_edges([edge(START, "skip", END)], nodes=[START, "q1"])

    def test_node_order_follows_first_appearance(self):
        pg = modulo_graph()

        self.assertEqual((START, "q1", "q2", "q3", "q4", "q5", "q6", END), pg.nodes)


class GraphUtilityTests(unittest.TestCase):
    def test_reverse_swaps_endpoints_and_edges(self):
        pg = factorial_graph()

        reversed_pg = reverse(pg)

        self.assertEqual(END, reversed_pg.initial)
        self.assertEqual(START, reversed_pg.final)
        self.assertEqual(("q1", "y:=1", START), (reversed_pg.edges[0].source, reversed_pg.edges[0].label, reversed_pg.edges[0].target))
        self.assertEqual(pg, reverse(reversed_pg))

    def test_enumerate_paths_respects_the_length_limit(self):
        pg = factorial_graph()

        self.assertEqual([2], [len(p) for p in enumerate_paths(pg, START, END, 4)])
        paths = enumerate_paths(pg, START, END, 5)
        self.assertEqual([2, 5], sorted(len(p) for p in paths))
        longest = max(paths, key=len)
        self.assertEqual((START, "q1", "q2", "q3", "q1", END), longest.nodes)

    def test_enumerate_paths_includes_the_empty_path(self):
        paths = enumerate_paths(factorial_graph(), "q1", "q1", 3)

        self.assertEqual([0, 3], sorted(len(p) for p in paths))

    def test_to_networkx_keeps_parallel_edges(self):
        pg = program_graph_from_edges([edge(START, "x>0", END), edge(START, "x<=0", END)])

        graph = to_networkx(pg)

        self.assertEqual(2, graph.number_of_edges(START, END))

    def test_emit_dot(self):
        dot = emit_dot(factorial_graph())

        self.assertTrue(dot.startswith("digraph program_graph {\n"))
        self.assertIn('"q▷" [shape=doublecircle];', dot)
        self.assertIn('"q◀" [shape=box];', dot)
        self.assertIn('"q2" [shape=circle];', dot)
        self.assertIn('"q1" -> "q2" [label="x>0"];', dot)
        self.assertTrue(dot.endswith("}\n"))


if __name__ == "__main__":
    unittest.main()
