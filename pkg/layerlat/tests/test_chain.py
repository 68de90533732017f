import itertools

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from layerlat.algebra.bunch import make_bunch, random_bunch
from layerlat.algebra.chain import (
    Chain,
    ChainElement,
    constants,
    elem_compare,
    enumerate_elements,
    is_bounded,
    mul,
    negate,
    residuum,
    zeta,
)
from layerlat.algebra.ogroup import E, Ordering, Rat
from layerlat.exceptions import CoverMissing, LayerLatError, ParseError, TypeMismatch
from layerlat.oracle import check_chain_laws
from layerlat.tests.fixtures import FIXTURES, lz, lz2, one_element, s3, ze, zb

BOTTOM = ChainElement("u", E, True)
T = ChainElement("t", E)
TOP = ChainElement("u", E)


def prefix_of(chain, count=40):
    return list(itertools.islice(chain.enumerate_elements(), count))


class TestChainOrder(SimpleTestCase):
    def setUp(self):
        self.s3 = Chain(s3())
        self.zb = Chain(zb())

    def test_zeta_discards_the_dot(self):
        self.assertEqual(zeta(self.s3, "u", "u", BOTTOM), E)
        self.assertEqual(zeta(self.zb, "t", "u", ChainElement("t", 5)), E)
        self.assertEqual(zeta(self.zb, "t", "t", ChainElement("t", 5)), 5)

    def test_s3_order(self):
        self.assertIs(elem_compare(self.s3, BOTTOM, T), Ordering.LT)
        self.assertIs(elem_compare(self.s3, T, TOP), Ordering.LT)
        self.assertIs(elem_compare(self.s3, TOP, TOP), Ordering.EQ)
        self.assertEqual(self.s3.elements(), [BOTTOM, T, TOP])

    def test_lower_layer_sits_between_the_dotted_and_undotted_copies(self):
        for n in [-3, 0, 8]:
            x = ChainElement("t", n)
            self.assertTrue(self.zb.lt(BOTTOM, x))
            self.assertTrue(self.zb.lt(x, TOP))
        self.assertTrue(self.zb.lt(ChainElement("t", -1), ChainElement("t", 0)))

    def test_only_lower_layers_sit_between_a_dotted_copy_and_its_original(self):
        chain = Chain(lz())
        x, dotted = ChainElement("u", 4), ChainElement("u", 4, True)
        self.assertTrue(chain.lt(dotted, x))
        between = [z for z in prefix_of(chain, 200) if chain.lt(dotted, z) and chain.lt(z, x)]
        self.assertEqual(between, [ChainElement("t", 4)])

    def test_sort(self):
        chain = Chain(lz())
        elements = prefix_of(chain, 30)
        ordered = chain.sort(elements)
        for x, y in zip(ordered, ordered[1:]):
            self.assertTrue(chain.lt(x, y))


class TestChainOperations(SimpleTestCase):
    def test_unit(self):
        for build in FIXTURES.values():
            chain = Chain(build())
            t, _ = constants(chain)
            for x in prefix_of(chain, 20):
                self.assertEqual(mul(chain, t, x), x)

    def test_s3_product(self):
        chain = Chain(s3())
        self.assertEqual(mul(chain, BOTTOM, TOP), BOTTOM)
        self.assertEqual(mul(chain, TOP, TOP), TOP)
        self.assertEqual(mul(chain, BOTTOM, BOTTOM), BOTTOM)

    def test_dotted_higher_operand(self):
        chain = Chain(zb())
        self.assertEqual(mul(chain, ChainElement("t", 3), BOTTOM), BOTTOM)
        self.assertEqual(mul(chain, ChainElement("t", 3), TOP), TOP)
        self.assertEqual(mul(chain, ChainElement("t", 3), ChainElement("t", -5)), ChainElement("t", -2))

    def test_product_outside_the_subgroup_is_undotted(self):
        chain = Chain(lz2())
        self.assertEqual(mul(chain, ChainElement("u", 3), ChainElement("u", 2, True)), ChainElement("u", 5))
        self.assertEqual(mul(chain, ChainElement("u", 4), ChainElement("u", 2, True)), ChainElement("u", 6, True))
        self.assertEqual(mul(chain, ChainElement("u", 4), ChainElement("u", 2)), ChainElement("u", 6))
        self.assertEqual(mul(chain, ChainElement("t", 1), ChainElement("u", 3)), ChainElement("u", 5))

    def test_negate(self):
        self.assertEqual(negate(Chain(s3()), T), T)
        self.assertEqual(negate(Chain(s3()), TOP), BOTTOM)
        self.assertEqual(negate(Chain(ze()), ChainElement("t", 3)), ChainElement("t", -4))
        self.assertEqual(negate(Chain(lz()), ChainElement("u", 5)), ChainElement("u", -5, True))
        self.assertEqual(negate(Chain(lz2()), ChainElement("u", 5)), ChainElement("u", -5))

    def test_residuum(self):
        chain = Chain(ze())
        self.assertEqual(residuum(chain, ChainElement("t", 2), ChainElement("t", 5)), ChainElement("t", 3))

    def test_constants(self):
        self.assertEqual(constants(Chain(ze())), (ChainElement("t", 0), ChainElement("t", -1)))
        self.assertEqual(constants(Chain(s3())), (T, T))

    def test_negate_needs_a_lower_cover(self):
        # a J-layer over a dense group does not validate
        dense = Chain(make_bunch(["t"], {"t": "J"}, {"t": Rat()}))
        with self.assertRaises(CoverMissing):
            dense.negate(ChainElement("t", dense.bunch.groups["t"].unit()))

    @settings(max_examples=300, deadline=None)
    @given(st.sampled_from(sorted(FIXTURES)), st.integers(0, 59), st.integers(0, 59), st.integers(0, 59))
    def test_adjointness(self, name, i, j, k):
        chain = Chain(FIXTURES[name]())
        elements = prefix_of(chain, 60)
        x, y, z = (elements[n % len(elements)] for n in (i, j, k))
        self.assertEqual(chain.le(chain.mul(x, y), z), chain.le(y, chain.residuum(x, z)))

    @settings(max_examples=300, deadline=None)
    @given(st.sampled_from(sorted(FIXTURES)), st.integers(0, 59), st.integers(0, 59), st.integers(0, 59))
    def test_monoid_laws(self, name, i, j, k):
        chain = Chain(FIXTURES[name]())
        elements = prefix_of(chain, 60)
        x, y, z = (elements[n % len(elements)] for n in (i, j, k))
        self.assertEqual(chain.mul(x, y), chain.mul(y, x))
        self.assertEqual(chain.mul(chain.mul(x, y), z), chain.mul(x, chain.mul(y, z)))
        if chain.le(x, y):
            self.assertTrue(chain.le(chain.mul(x, z), chain.mul(y, z)))
        self.assertEqual(chain.negate(chain.negate(x)), x)

    def test_law_checker_on_fixtures(self):
        for name, build in FIXTURES.items():
            report = check_chain_laws(Chain(build()), samples=10_000, seed=1)
            self.assertTrue(report.passed, f"{name}: {report.failures[:3]}")

    def test_law_checker_on_random_bunches(self):
        for seed in range(20):
            report = check_chain_laws(Chain(random_bunch(seed)), samples=10_000, seed=seed)
            self.assertTrue(report.passed, f"seed {seed}: {report.failures[:3]}")

    def test_law_checker_is_exhaustive_on_small_chains(self):
        report = check_chain_laws(Chain(s3()))
        self.assertTrue(report.exhaustive)
        self.assertEqual(report.checked, 27)


class TestChainElements(SimpleTestCase):
    def test_enumeration(self):
        self.assertEqual(list(enumerate_elements(Chain(s3()))), [T, TOP, BOTTOM])
        self.assertEqual(
            prefix_of(Chain(zb()), 4),
            [ChainElement("t", 0), TOP, BOTTOM, ChainElement("t", 1)],
        )
        elements = prefix_of(Chain(lz2()), 100)
        self.assertEqual(len(set(elements)), len(elements))
        self.assertTrue(all(x.g % 2 == 0 for x in elements if x.dotted))

    def test_elements_of_infinite_chains(self):
        with self.assertRaises(LayerLatError):
            Chain(zb()).elements()

    def test_bounded(self):
        bounds = is_bounded(Chain(zb()))
        self.assertTrue(bounds)
        self.assertEqual((bounds.top, bounds.bottom), (TOP, BOTTOM))
        self.assertFalse(is_bounded(Chain(lz())))
        self.assertFalse(is_bounded(Chain(ze())))
        only = is_bounded(Chain(one_element()))
        self.assertTrue(only)
        self.assertEqual(only.top, only.bottom)

    def test_text_encoding(self):
        chain = Chain(lz2())
        self.assertEqual(chain.parse_element("u:d:4"), ChainElement("u", 4, True))
        self.assertEqual(chain.format_element(ChainElement("u", 4, True)), "u:d:4")
        self.assertEqual(chain.format_element(ChainElement("t", -3)), "t:-3")
        for text in ["u:d:3", "t:d:0", "v:1", "u", "u:1/2"]:
            with self.assertRaises(ParseError, msg=text):
                chain.parse_element(text)

    def test_check(self):
        chain = Chain(lz2())
        chain.check(ChainElement("u", 2, True))
        with self.assertRaises(TypeMismatch):
            chain.check(ChainElement("u", 3, True))
        with self.assertRaises(TypeMismatch):
            chain.check(ChainElement("t", E))
