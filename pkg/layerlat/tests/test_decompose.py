import json

from django.test import SimpleTestCase

from layerlat.algebra.bunch import LayerClass, validate
from layerlat.algebra.chain import Chain, ChainElement
from layerlat.algebra.ogroup import E
from layerlat.constructions.decompose import (
    CayleyTable,
    brute_residuum,
    chain_table,
    chain_window,
    decompose_table,
    parse_table,
    recover_bunch_samples,
    roundtrip_table,
    serialize_table,
    serialize_window,
)
from layerlat.exceptions import AxiomFailure, NotInvolutive, ParseError, RoundTripMismatch
from layerlat.oracle import enumerate_finite_chains
from layerlat.tests.fixtures import lz2, read_fixture, s3, zb

S3_TABLE = CayleyTable(3, [[0, 0, 0], [0, 1, 2], [0, 2, 2]], unit=1, falsum=1)
EVEN_TABLE = CayleyTable(2, [[0, 0], [0, 1]], unit=1, falsum=0)
ONE_TABLE = CayleyTable(1, [[0]], unit=0, falsum=0)


class TestCayleyTables(SimpleTestCase):
    def test_parse(self):
        self.assertEqual(parse_table(read_fixture("s3.csv")), S3_TABLE)
        self.assertEqual(parse_table(serialize_table(EVEN_TABLE)), EVEN_TABLE)

    def test_parse_errors(self):
        invalid = {
            "": 1,
            "3,1\n": 1,
            "2,1,5\n0,0\n0,1\n": 1,
            "2,1,0\n0,0\n": 2,
            "2,1,0\n0,0\n0,x\n": 3,
            "2,1,0\n0,0\n0,2\n": 3,
            "2,1,0\n0,0\n0,1,1\n": 3,
        }
        for text, line in invalid.items():
            try:
                parse_table(text)
                self.fail(f"Expected ParseError for {text!r}")
            except ParseError as e:
                self.assertEqual(e.line, line, text)

    def test_brute_residuum(self):
        self.assertEqual(brute_residuum(S3_TABLE, 2, 1), 0)
        self.assertEqual(brute_residuum(S3_TABLE, 0, 0), 2)
        self.assertEqual(S3_TABLE.neg(2), 0)
        self.assertEqual(EVEN_TABLE.neg(1), 0)


class TestDecomposition(SimpleTestCase):
    def test_s3(self):
        result = decompose_table(S3_TABLE)
        self.assertEqual(result.bunch, s3())
        self.assertEqual(
            result.layer_assignment,
            {0: ChainElement("u", E, True), 1: ChainElement("t", E), 2: ChainElement("u", E)},
        )
        self.assertEqual(result.skeleton_indices, {"t": 1, "u": 2})

    def test_even_two_element_chain(self):
        result = decompose_table(EVEN_TABLE)
        self.assertEqual(result.bunch.skeleton, ("t",))
        self.assertIs(result.bunch.class_of("t"), LayerClass.I)
        witness = roundtrip_table(EVEN_TABLE, result)
        self.assertEqual(witness.bijection, {0: ChainElement("t", E, True), 1: ChainElement("t", E)})

    def test_one_element_chain(self):
        result = decompose_table(ONE_TABLE)
        self.assertEqual(result.bunch.skeleton, ("t",))
        self.assertIs(result.bunch.class_of("t"), LayerClass.O)

    def test_five_element_chain(self):
        (table,) = enumerate_finite_chains(5)
        result = decompose_table(table)
        self.assertEqual(result.bunch.skeleton, ("t", "u1", "u2"))
        self.assertEqual(result.layer_assignment[0], ChainElement("u2", E, True))
        self.assertEqual(result.layer_assignment[4], ChainElement("u2", E))
        self.assertTrue(validate(result.bunch).ok)

    def test_round_trip_of_every_small_chain(self):
        for n in range(1, 8):
            for table in enumerate_finite_chains(n):
                witness = roundtrip_table(table)
                self.assertEqual(witness.cells, n * n)
                self.assertEqual(chain_table(Chain(decompose_table(table).bunch))[0], table)

    def test_tables_that_are_not_chains(self):
        # top * bottom = top leaves top -> bottom undefined
        broken = CayleyTable(3, [[0, 0, 2], [0, 1, 2], [2, 2, 2]], unit=1, falsum=1)
        with self.assertRaises(AxiomFailure):
            decompose_table(broken)
        # the constant f = bottom is not an involution here
        not_involutive = CayleyTable(3, [[0, 0, 0], [0, 1, 2], [0, 2, 2]], unit=1, falsum=0)
        with self.assertRaises(NotInvolutive):
            decompose_table(not_involutive)

    def test_round_trip_mismatch(self):
        result = decompose_table(S3_TABLE)
        result.layer_assignment[0], result.layer_assignment[2] = (
            result.layer_assignment[2],
            result.layer_assignment[0],
        )
        try:
            roundtrip_table(S3_TABLE, result)
            self.fail("Expected RoundTripMismatch")
        except RoundTripMismatch as e:
            self.assertEqual(len(e.cell), 2)


class TestChainTables(SimpleTestCase):
    def test_chain_table(self):
        table, elements = chain_table(Chain(s3()))
        self.assertEqual(table, S3_TABLE)
        self.assertEqual(elements[1], ChainElement("t", E))

    def test_window(self):
        chain = Chain(zb())
        window = chain_window(chain, 5)
        self.assertEqual(len(window.elements), 5)
        self.assertEqual(window.elements[0], ChainElement("u", E, True))
        self.assertEqual(window.elements[-1], ChainElement("u", E))
        self.assertEqual(window.covering_edges()[0], (0, 1))
        # t:1 * t:1 = t:2 is outside the window
        one = window.elements.index(ChainElement("t", 1))
        self.assertIsNone(window.product[one][one])

    def test_window_exports(self):
        chain = Chain(zb())
        window = chain_window(chain, 4)
        document = json.loads(serialize_window(chain, window, "json"))
        self.assertEqual(document["elements"], ["u:d:e", "t:0", "t:1", "u:e"])
        dot = serialize_window(chain, window, "dot")
        self.assertIn('"t:0" -> "t:1";', dot)
        rows = serialize_window(chain, window, "csv").splitlines()
        self.assertEqual(rows[0], ",u:d:e,t:0,t:1,u:e")
        self.assertEqual(rows[2], "t:0,u:d:e,t:0,t:1,u:e")


class TestBunchRecovery(SimpleTestCase):
    def test_exhaustive_on_s3(self):
        report = recover_bunch_samples(Chain(s3()))
        self.assertTrue(report.passed, report.failures)
        self.assertTrue(report.exhaustive)
        self.assertEqual(report.checked, 3)

    def test_sampled(self):
        for bunch in [zb(), lz2()]:
            report = recover_bunch_samples(Chain(bunch), samples=1000)
            self.assertTrue(report.passed, report.failures[:3])
            self.assertFalse(report.exhaustive)
            self.assertEqual(report.checked, 1000)
