from django.test import SimpleTestCase, override_settings

from layerlat.algebra.bunch import validate
from layerlat.algebra.chain import Chain
from layerlat.constructions.decompose import CayleyTable, chain_table
from layerlat.exceptions import BoundExceeded, NotOddOrEven
from layerlat.oracle import (
    check_flea_axioms,
    enumerate_finite_chains,
    finite_bunches,
    reconstructed_tables,
)
from layerlat.tests.fixtures import one_element

S3_TABLE = CayleyTable(3, [[0, 0, 0], [0, 1, 2], [0, 2, 2]], unit=1, falsum=1)


class TestAxiomOracle(SimpleTestCase):
    def test_s3(self):
        report = check_flea_axioms(S3_TABLE)
        self.assertTrue(report.ok)
        self.assertEqual(report.chain_type, "Odd")

    def test_one_element(self):
        report = check_flea_axioms(CayleyTable(1, [[0]], unit=0, falsum=0))
        self.assertTrue(report.ok)
        self.assertEqual(report.chain_type, "Odd")

    def test_even(self):
        report = check_flea_axioms(CayleyTable(2, [[0, 0], [0, 1]], unit=1, falsum=0))
        self.assertEqual(report.chain_type, "Even")

    def test_top_times_bottom_is_top(self):
        table = CayleyTable(3, [[0, 0, 2], [0, 1, 2], [2, 2, 2]], unit=1, falsum=1)
        report = check_flea_axioms(table)
        self.assertFalse(report.ok)
        self.assertIn("residuation", report.axioms_failed())
        self.assertTrue(all(v.witness for v in report.violations))

    def test_unit_and_commutativity(self):
        table = CayleyTable(3, [[0, 0, 0], [1, 1, 2], [0, 2, 2]], unit=1, falsum=1)
        failed = check_flea_axioms(table).axioms_failed()
        self.assertIn("unit", failed)
        self.assertIn("commutativity", failed)


class TestEnumeration(SimpleTestCase):
    def test_small_sizes(self):
        for n in range(1, 6):
            tables = enumerate_finite_chains(n)
            self.assertEqual(len(tables), 1, f"size {n}")
            report = check_flea_axioms(tables[0])
            self.assertTrue(report.ok)
            self.assertEqual(report.chain_type, "Odd" if n % 2 else "Even")

    def test_three_elements(self):
        self.assertEqual(enumerate_finite_chains(3), [S3_TABLE])

    def test_empty_carrier(self):
        self.assertEqual(enumerate_finite_chains(0), [])

    def test_bound(self):
        with self.assertRaises(BoundExceeded):
            enumerate_finite_chains(8)

    @override_settings(LAYERLAT_ENUMERATION_BOUND=3)
    def test_bound_is_a_setting(self):
        with self.assertRaises(BoundExceeded):
            enumerate_finite_chains(4)

    @override_settings(LAYERLAT_ENUMERATION_BOUND=50)
    def test_bound_has_a_ceiling(self):
        with self.assertRaises(BoundExceeded):
            enumerate_finite_chains(10)

    def test_enumeration_matches_the_reconstructions(self):
        for n in range(1, 8):
            self.assertEqual(enumerate_finite_chains(n), reconstructed_tables(n), f"size {n}")

    def test_finite_bunches(self):
        self.assertEqual([b.skeleton for b in finite_bunches(5)], [("t", "u1", "u2")])
        self.assertEqual([b.skeleton for b in finite_bunches(4)], [("t", "u")])
        self.assertEqual(finite_bunches(1)[0], one_element())
        for n in range(1, 8):
            for bunch in finite_bunches(n):
                self.assertTrue(validate(bunch).ok)
                self.assertEqual(len(Chain(bunch).elements()), n)


class TestBoundednessAgainstExhaustiveSearch(SimpleTestCase):
    def test_top_and_bottom_of_finite_chains(self):
        for n in range(1, 8):
            for bunch in finite_bunches(n):
                chain = Chain(bunch)
                elements = chain.elements()
                bounds = chain.is_bounded()
                self.assertTrue(bounds)
                self.assertEqual((bounds.bottom, bounds.top), (elements[0], elements[-1]))


class TestFiniteChainTables(SimpleTestCase):
    def test_tables_of_chains_pass_the_axioms(self):
        for n in range(1, 8):
            for bunch in finite_bunches(n):
                self.assertTrue(check_flea_axioms(chain_table(Chain(bunch))[0]).ok)

    def test_not_odd_or_even(self):
        # the 3-element Lukasiewicz chain: t is the top, f the bottom
        table = CayleyTable(3, [[0, 0, 0], [0, 0, 1], [0, 1, 2]], unit=2, falsum=0)
        report = check_flea_axioms(table)
        self.assertEqual(report.axioms_failed(), ["type"])
        with self.assertRaises(NotOddOrEven):
            report.raise_for_failure()
