import unittest
from itertools import combinations

from gcl_workbench.lattices import (
    CustomDomain,
    PowersetDomain,
    check_domain_laws,
    is_ascending_chain_bounded,
    longest_ascending_chain,
    map_domain,
    mapping_to_relation,
    product,
    relation_to_mapping,
)


def subsets(universe):
    items = sorted(universe)
    return [frozenset(c) for size in range(len(items) + 1) for c in combinations(items, size)]


class DomainLawTests(unittest.TestCase):
    def test_powerset_by_inclusion(self):
        domain = PowersetDomain({"a", "b", "c"})

        self.assertTrue(check_domain_laws(domain, subsets({"a", "b", "c"})))
        self.assertEqual(frozenset(), domain.bottom)
        self.assertEqual(frozenset({"a", "b", "c"}), domain.top)

    def test_powerset_by_reverse_inclusion(self):
        domain = PowersetDomain({"a", "b", "c"}, orientation="superset")

        self.assertTrue(check_domain_laws(domain, subsets({"a", "b", "c"})))
        self.assertEqual(frozenset({"a", "b", "c"}), domain.bottom)
        self.assertEqual(frozenset({"b"}), domain.join(frozenset({"a", "b"}), frozenset({"b", "c"})))

    def test_product_and_map_constructions(self):
        powerset = PowersetDomain({"a", "b"})
        pairs = [(left, right) for left in subsets({"a", "b"}) for right in subsets({"a"})]
        maps = [{"x": left, "y": right} for left in subsets({"a", "b"}) for right in subsets({"a"})]

        self.assertTrue(check_domain_laws(product(powerset, PowersetDomain({"a"})), pairs))
        self.assertTrue(check_domain_laws(map_domain(["x", "y"], powerset), maps))

    def test_broken_domain_reports_a_counterexample(self):
        domain = CustomDomain(leq=lambda a, b: a >= b, join=max, bottom=0)

        report = check_domain_laws(domain, [0, 1, 2])

        self.assertFalse(report)
        self.assertEqual("bottom is least", report.law)
        self.assertEqual((1,), report.counterexample)

    def test_laws_need_samples(self):
        with self.assertRaises(ValueError):
            check_domain_laws(PowersetDomain(), [])


class AscendingChainTests(unittest.TestCase):
    def test_acc_notes(self):
        finite = PowersetDomain({"a"})
        unbounded = CustomDomain(leq=lambda a, b: a <= b, join=max, bottom=0)

        self.assertTrue(finite.satisfies_acc)
        self.assertTrue(PowersetDomain().satisfies_acc)
        self.assertFalse(unbounded.satisfies_acc)
        self.assertFalse(product(finite, unbounded).satisfies_acc)
        self.assertTrue(map_domain(["x"], finite).satisfies_acc)

    def test_longest_ascending_chain_of_a_powerset(self):
        domain = PowersetDomain({"a", "b"})

        self.assertEqual(3, longest_ascending_chain(domain, subsets({"a", "b"})))
        self.assertEqual(0, longest_ascending_chain(domain, []))

    def test_chain_bound(self):
        domain = PowersetDomain({"a", "b"})
        chain = [frozenset(), frozenset(), frozenset({"a"}), frozenset({"a", "b"})]

        self.assertTrue(is_ascending_chain_bounded(domain, chain, 3))
        self.assertFalse(is_ascending_chain_bounded(domain, chain, 2))
        with self.assertRaises(ValueError):
            is_ascending_chain_bounded(domain, [frozenset({"a"}), frozenset({"b"})], 5)

    def test_invalid_constructions(self):
        with self.assertRaises(ValueError):
            PowersetDomain(orientation="superset")
        with self.assertRaises(ValueError):
            PowersetDomain({"a"}, orientation="sideways")
        with self.assertRaises(ValueError):
            map_domain([], PowersetDomain())


class RelationMappingTests(unittest.TestCase):
    def test_relation_and_mapping_views_agree(self):
        facts = frozenset({("x", "q1", "q2"), ("x", "?", "q▷"), ("y", "q1", "q2")})

        mapping = relation_to_mapping(facts, keys=["x", "y", "z"])

        self.assertEqual(
            {
                "x": frozenset({("q1", "q2"), ("?", "q▷")}),
                "y": frozenset({("q1", "q2")}),
                "z": frozenset(),
            },
            mapping,
        )
        self.assertEqual(facts, mapping_to_relation(mapping))


if __name__ == "__main__":
    unittest.main()
