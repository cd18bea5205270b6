import unittest

from gcl_workbench.graphs import reverse
from gcl_workbench.preprocessing import (
    EdgeKind,
    NonReducible,
    back_edges,
    classify_edges,
    dfs_spanning_tree,
    dominator_edges,
    graph_of_loops,
    is_reducible,
    natural_components,
    natural_loops,
    reduced_graph,
    strong_components,
)

from tests.programs import END, START, factorial_graph, graph_of, irreducible_graph


def triples(edges):
    return [(e.source, e.label, e.target) for e in edges]


class SpanningTreeTests(unittest.TestCase):
    def test_factorial_reverse_postorder(self):
        numbering = dfs_spanning_tree(factorial_graph())

        self.assertEqual([START, "q1", "q2", "q3", END], numbering.order)
        self.assertEqual(
            frozenset({(START, "q1"), ("q1", END), ("q1", "q2"), ("q2", "q3")}),
            numbering.tree,
        )

    def test_reversed_factorial_reverse_postorder(self):
        numbering = dfs_spanning_tree(reverse(factorial_graph()))

        self.assertEqual([END, "q1", "q3", "q2", START], numbering.order)

    def test_sort_uses_reverse_postorder(self):
        numbering = dfs_spanning_tree(factorial_graph())

        self.assertEqual(["q1", "q3", END], numbering.sort({END, "q3", "q1"}))


class EdgeClassificationTests(unittest.TestCase):
    def test_factorial_has_one_back_edge(self):
        pg = factorial_graph()
        numbering = dfs_spanning_tree(pg)

        kinds = classify_edges(pg, numbering)

        self.assertEqual([("q3", "x:=x-1", "q1")], triples(back_edges(pg, numbering)))
        self.assertEqual(EdgeKind.BACK, kinds[pg.edges[4]])
        self.assertEqual([EdgeKind.TREE] * 4, [kinds[e] for e in pg.edges[:4]])

    def test_cross_edge_between_branches(self):
        pg = graph_of("if x>0 -> y:=1 [] x<=0 -> y:=2 fi")

        kinds = classify_edges(pg, dfs_spanning_tree(pg))

        self.assertEqual(EdgeKind.CROSS, kinds[pg.edges[3]])

    def test_forward_and_back_edges_of_an_irreducible_graph(self):
        pg = irreducible_graph()
        numbering = dfs_spanning_tree(pg)

        kinds = classify_edges(pg, numbering)

        self.assertEqual(EdgeKind.FORWARD, kinds[pg.edges[1]])
        self.assertEqual(EdgeKind.BACK, kinds[pg.edges[3]])


class StrongComponentTests(unittest.TestCase):
    def test_factorial_components_in_topological_order(self):
        pg = factorial_graph()

        components = strong_components(pg, dfs_spanning_tree(pg))

        self.assertEqual([frozenset({START}), frozenset({"q1", "q2", "q3"}), frozenset({END})], components)
        self.assertEqual([(0, 1), (1, 2)], sorted(reduced_graph(pg, components).edges))


class NaturalLoopTests(unittest.TestCase):
    def test_factorial_loop(self):
        pg = factorial_graph()

        loops = natural_loops(pg, dfs_spanning_tree(pg))

        self.assertEqual(frozenset({"q1", "q2", "q3"}), loops["q1"])
        self.assertEqual(frozenset(), loops[START])
        self.assertEqual(
            [frozenset({"q1", "q2", "q3"}), frozenset({START}), frozenset({END})],
            natural_components(pg, loops),
        )

    def test_graph_of_loops_links_neighbouring_components(self):
        pg = factorial_graph()
        loop = frozenset({"q1", "q2", "q3"})

        graph = graph_of_loops(pg, natural_loops(pg, dfs_spanning_tree(pg)))

        self.assertEqual({(frozenset({START}), loop), (loop, frozenset({END}))}, set(graph.edges))

    def test_nested_loops_point_outwards(self):
        pg = graph_of("do x>0 -> y:=x; do y>0 -> y:=y-1 od; x:=x-1 od")
        loops = natural_loops(pg, dfs_spanning_tree(pg))
        inner = loops["q2"]
        outer = loops[START]

        graph = graph_of_loops(pg, loops)

        self.assertLess(inner, outer)
        self.assertIn((inner, outer), set(graph.edges))

    def test_irreducible_graph_has_no_natural_loops(self):
        pg = irreducible_graph()

        with self.assertRaises(NonReducible) as ctx:
            natural_loops(pg, dfs_spanning_tree(pg))

        self.assertEqual(("q2", "x:=x+1", "q1"), (ctx.exception.edge.source, ctx.exception.edge.label, ctx.exception.edge.target))


class ReducibilityTests(unittest.TestCase):
    def test_dominator_edges_of_factorial(self):
        pg = factorial_graph()

        self.assertEqual([("q3", "x:=x-1", "q1")], triples(dominator_edges(pg)))
        self.assertTrue(is_reducible(pg))

    def test_irreducible_graph(self):
        self.assertFalse(is_reducible(irreducible_graph()))


if __name__ == "__main__":
    unittest.main()
