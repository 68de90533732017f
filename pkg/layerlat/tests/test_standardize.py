import itertools
from fractions import Fraction

from django.test import SimpleTestCase

from layerlat.algebra.chain import Chain, ChainElement
from layerlat.algebra.ogroup import E
from layerlat.constructions.densify import densify_driver
from layerlat.constructions.standardize import (
    RationalPlacement,
    cantor_map,
    check_placement,
    parse_placement,
    serialize_placement,
    sup_extend,
)
from layerlat.exceptions import LayerLatError, ParseError, Unbounded
from layerlat.tests.fixtures import lz, one_element, s3, ze, zb

BOTTOM = ChainElement("u", E, True)
T = ChainElement("t", E)
TOP = ChainElement("u", E)


class TestCantorMap(SimpleTestCase):
    def test_zb(self):
        chain = Chain(zb())
        placement = cantor_map(chain, prefix=3)
        self.assertEqual(placement.pairs, [(BOTTOM, 0), (ChainElement("t", 0), Fraction(1, 2)), (TOP, 1)])

        placement = cantor_map(chain, prefix=4)
        self.assertEqual(placement.value_of(ChainElement("t", 1)), Fraction(3, 4))
        self.assertEqual(len(placement), 4)

    def test_s3(self):
        placement = cantor_map(Chain(s3()))
        self.assertEqual([q for _, q in placement.pairs], [0, Fraction(1, 2), 1])
        self.assertEqual(placement.elements(), [BOTTOM, T, TOP])

    def test_placement_is_monotone(self):
        chain = Chain(zb())
        placement = cantor_map(chain, prefix=25)
        report = check_placement(chain, placement)
        self.assertTrue(report.ok, report.violations)
        self.assertEqual(report.checked, 25 * 24 // 2)

    def test_densified_chain(self):
        bunch, _ = densify_driver(Chain(s3()), prefix=3, rounds=2)
        chain = Chain(bunch)
        placement = cantor_map(chain)
        self.assertEqual(placement.elements(), chain.elements())
        self.assertTrue(check_placement(chain, placement).ok)

    def test_densified_infinite_chain(self):
        bunch, _ = densify_driver(Chain(zb()), prefix=6)
        chain = Chain(bunch)
        placement = cantor_map(chain, prefix=50)
        self.assertEqual(len(placement), 50)
        self.assertEqual(placement.pairs[0], (BOTTOM, 0))
        self.assertEqual(placement.pairs[-1], (TOP, 1))
        report = check_placement(chain, placement)
        self.assertTrue(report.ok, report.violations[:3])
        self.assertEqual(report.checked, 50 * 49 // 2)

    def test_unbounded_chains(self):
        for bunch in [lz(), ze()]:
            with self.assertRaises(Unbounded):
                cantor_map(Chain(bunch))

    def test_one_element_chain(self):
        with self.assertRaises(LayerLatError):
            cantor_map(Chain(one_element()))

    def test_misplaced_elements_are_reported(self):
        chain = Chain(s3())
        placement = RationalPlacement(chain, [(BOTTOM, Fraction(0)), (TOP, Fraction(1, 2)), (T, Fraction(1))])
        report = check_placement(chain, placement)
        self.assertFalse(report.ok)
        self.assertIn("the top is not placed at 1", report.violations)


class TestSupExtension(SimpleTestCase):
    def setUp(self):
        self.chain = Chain(zb())
        self.placement = cantor_map(self.chain, prefix=6)

    def test_nothing_below_zero(self):
        self.assertEqual(sup_extend(self.chain, self.placement, Fraction(0), Fraction(1)), 0)

    def test_above_the_top(self):
        self.assertEqual(sup_extend(self.chain, self.placement, Fraction(2), Fraction(2)), 1)

    def test_monotone(self):
        grid = [Fraction(n, 8) for n in range(0, 10)]
        values = {
            (a, b): sup_extend(self.chain, self.placement, a, b, depth=4) for a, b in itertools.product(grid, grid)
        }
        for (a, b), value in values.items():
            self.assertEqual(value, values[(b, a)])
            for a2, b2 in itertools.product(grid, grid):
                if a <= a2 and b <= b2:
                    self.assertLessEqual(value, values[(a2, b2)])

    def test_monotone_on_a_finer_grid(self):
        grid = [Fraction(n, 19) for n in range(20)]
        values = {
            (a, b): sup_extend(self.chain, self.placement, a, b, depth=4) for a, b in itertools.product(grid, grid)
        }
        for (a, b), value in values.items():
            self.assertEqual(value, values[(b, a)])
        for i, j in itertools.product(range(19), range(20)):
            self.assertLessEqual(values[(grid[i], grid[j])], values[(grid[i + 1], grid[j])])
            self.assertLessEqual(values[(grid[j], grid[i])], values[(grid[j], grid[i + 1])])

    def test_monotone_in_depth(self):
        for a, b in [(Fraction(1), Fraction(1)), (Fraction(3, 4), Fraction(7, 8)), (Fraction(1, 2), Fraction(1))]:
            values = [sup_extend(self.chain, self.placement, a, b, depth=depth) for depth in range(12)]
            self.assertEqual(values, sorted(values), (a, b))

    def test_bounded_by_the_product(self):
        one = ChainElement("t", 1)
        placement = cantor_map(self.chain, prefix=10)
        q = placement.value_of(one)
        product = placement.place(self.chain.mul(one, one))
        for depth in [0, 4, 8]:
            self.assertLessEqual(sup_extend(self.chain, placement, q, q, depth=depth), product)

    def test_placement_is_left_alone(self):
        before = list(self.placement.pairs)
        sup_extend(self.chain, self.placement, Fraction(1), Fraction(1), depth=10)
        self.assertEqual(self.placement.pairs, before)


class TestPlacementDocuments(SimpleTestCase):
    def test_round_trip(self):
        chain = Chain(zb())
        placement = cantor_map(chain, prefix=8)
        text = serialize_placement(chain, placement)
        self.assertEqual(text.splitlines()[0], "u:d:e,0,1")
        self.assertEqual(parse_placement(text, chain).pairs, placement.pairs)

    def test_parse_errors(self):
        chain = Chain(s3())
        for text in ["t:e,1\n", "t:e,1,0\n", "u:e,0,1\nt:e,x,2\n", "u:e,1,1\n", "u:d:e,0,1\nt:e,1,2\n", ""]:
            with self.assertRaises(ParseError, msg=text):
                parse_placement(text, chain)
