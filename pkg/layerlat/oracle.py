"""
Brute-force ground truth: FL_e axioms checked exhaustively on Cayley tables,
the finite odd and even involutive chains found by backtracking, and a law
checker for symbolic chains.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

from layerlat.algebra.bunch import Bunch, LayerClass, make_bunch
from layerlat.algebra.chain import Chain, ChainElement
from layerlat.algebra.ogroup import Ordering, Trivial, UnitMap, Whole
from layerlat.conf import ENUMERATION_CEILING, get_setting
from layerlat.constructions.decompose import CayleyTable, brute_residuum, chain_table
from layerlat.exceptions import (
    AxiomFailure,
    BoundExceeded,
    NotInvolutive,
    NotOddOrEven,
    NotResiduated,
)
from layerlat.mixins import SamplingMixin

logger = logging.getLogger(__name__)


@dataclass
class AxiomViolation:
    axiom: str
    message: str
    witness: Tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"{self.axiom}: {self.message} at {self.witness}"


_FAILURES = {
    "involution": NotInvolutive,
    "type": NotOddOrEven,
}


@dataclass
class AxiomReport:
    violations: List[AxiomViolation] = field(default_factory=list)
    chain_type: Optional[str] = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms_failed(self) -> List[str]:
        return sorted({v.axiom for v in self.violations})

    def raise_for_failure(self) -> None:
        if self.violations:
            first = self.violations[0]
            raise _FAILURES.get(first.axiom, AxiomFailure)(str(first), first.witness)


def check_flea_axioms(tbl: CayleyTable) -> AxiomReport:
    """
    Exhaustive check of a table against the axioms of an odd or even
    involutive FL_e-chain. The carrier order is the index order, so totality
    holds by construction.
    """
    report = AxiomReport()
    n, p = tbl.n, tbl.product

    def violation(axiom: str, message: str, *witness: int) -> None:
        report.violations.append(AxiomViolation(axiom, message, witness))

    if len(p) != n or any(len(row) != n for row in p):
        violation("range", f"the product table is not {n}x{n}")
        return report
    for x, y in itertools.product(range(n), repeat=2):
        if not 0 <= p[x][y] < n:
            violation("range", "product index out of range", x, y)
    if not (0 <= tbl.unit < n and 0 <= tbl.falsum < n):
        violation("range", "constant index out of range")
    if not report.ok:
        return report

    t = tbl.unit
    for x in range(n):
        if p[t][x] != x or p[x][t] != x:
            violation("unit", "t is not neutral", x)
    for x, y in itertools.combinations(range(n), 2):
        if p[x][y] != p[y][x]:
            violation("commutativity", "x*y != y*x", x, y)
    for x, y, z in itertools.product(range(n), repeat=3):
        if p[p[x][y]][z] != p[x][p[y][z]]:
            violation("associativity", "(x*y)*z != x*(y*z)", x, y, z)
            break
    for x in range(n):
        for y in range(n - 1):
            if p[x][y] > p[x][y + 1]:
                violation("monotonicity", "x*y > x*y' for y < y'", x, y, y + 1)

    residuated = True
    for x, z in itertools.product(range(n), repeat=2):
        try:
            brute_residuum(tbl, x, z)
        except NotResiduated:
            residuated = False
            violation("residuation", "max{v : x*v <= z} does not exist", x, z)
    if not residuated:
        return report

    for x in range(n):
        if tbl.neg(tbl.neg(x)) != x:
            violation("involution", "neg(neg(x)) != x", x)

    if tbl.falsum == t:
        report.chain_type = "Odd"
    elif tbl.falsum == t - 1:
        report.chain_type = "Even"
    else:
        violation("type", "f is neither t nor the lower cover of t", tbl.falsum, t)

    if report.violations:
        logger.debug("table of size %d fails %s", n, report.axioms_failed())
    return report


# Enumeration of small chains


def _search(n: int, t: int) -> Iterator[List[List[int]]]:
    neg = [n - 1 - x for x in range(n)]
    p: List[List[Optional[int]]] = [[None] * n for _ in range(n)]
    for x in range(n):
        p[t][x] = p[x][t] = x
    cells = [(x, y) for x in range(n) for y in range(x, n) if t not in (x, y)]

    def consistent(x: int, y: int) -> bool:
        # x*y <= z iff x*neg(z) <= neg(y), for either orientation of the cell
        for a, b in ((x, y), (y, x)):
            value = p[a][b]
            for z in range(n):
                other = p[a][neg[z]]
                if other is None:
                    continue
                if (value <= z) != (other <= neg[b]):
                    return False
        return True

    def monotone(x: int, y: int) -> bool:
        for a, b in ((x, y), (y, x)):
            for nb in (b - 1, b + 1):
                if 0 <= nb < n and p[a][nb] is not None:
                    if (nb < b and p[a][nb] > p[a][b]) or (nb > b and p[a][nb] < p[a][b]):
                        return False
        return True

    def associative() -> bool:
        return all(
            p[p[x][y]][z] == p[x][p[y][z]]
            for x, y, z in itertools.product(range(n), repeat=3)
        )

    def extend(position: int) -> Iterator[List[List[int]]]:
        if position == len(cells):
            if associative():
                yield [list(row) for row in p]
            return
        x, y = cells[position]
        low = max(
            p[x][y - 1] if y > 0 and p[x][y - 1] is not None else 0,
            p[x - 1][y] if x > 0 and p[x - 1][y] is not None else 0,
        )
        for value in range(low, n):
            p[x][y] = p[y][x] = value
            if monotone(x, y) and consistent(x, y):
                yield from extend(position + 1)
        p[x][y] = p[y][x] = None

    yield from extend(0)


def enumerate_finite_chains(n: int) -> List[CayleyTable]:
    """
    Every odd or even involutive FL_e-chain on n elements. The residual
    complement of a finite chain is order reversing, hence i -> n-1-i, which
    fixes t: odd chains need odd n and even chains need even n.
    """
    bound = min(get_setting("LAYERLAT_ENUMERATION_BOUND"), ENUMERATION_CEILING)
    if n > bound:
        raise BoundExceeded(f"enumeration is limited to {bound} elements, got {n}")
    if n < 1:
        return []

    if n % 2:
        t = falsum = (n - 1) // 2
    else:
        t = n // 2
        falsum = t - 1
    tables = [CayleyTable(n, product, t, falsum) for product in _search(n, t)]
    logger.info("found %d chains with %d elements", len(tables), n)
    return tables


def finite_bunches(n: int) -> List[Bunch]:
    """
    The valid bunches with trivial layer groups whose chain has n elements:
    t in the O or I class, every other layer in I
    """
    bunches = []
    for size in range(1, n + 1):
        labels = ["t"] + [f"u{i}" for i in range(1, size)]
        if size == 2:
            labels = ["t", "u"]
        for least_class in (LayerClass.O, LayerClass.I):
            carrier = 2 * size - 1 if least_class is LayerClass.O else 2 * size
            if carrier != n:
                continue
            groups = {u: Trivial() for u in labels}
            partition = {u: LayerClass.I for u in labels}
            partition["t"] = least_class
            bunches.append(
                make_bunch(
                    labels,
                    partition,
                    groups,
                    subgroups={
                        u: Whole(groups[u]) for u in labels if partition[u] is LayerClass.I
                    },
                    steps={(a, b): UnitMap(groups[a], groups[b]) for a, b in zip(labels, labels[1:])},
                )
            )
    return bunches


def reconstructed_tables(n: int) -> List[CayleyTable]:
    return [chain_table(Chain(b))[0] for b in finite_bunches(n)]


# Laws of symbolic chains


@dataclass
class LawReport:
    checked: int = 0
    exhaustive: bool = False
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


class ChainLawChecker(SamplingMixin):
    """
    FL_e laws on sampled triples of chain elements; exhaustive on finite
    chains small enough for the sample count
    """

    def __init__(self, chain: Chain, samples: Optional[int] = None, seed=None) -> None:
        self.chain = chain
        self.samples = samples
        self.seed = seed
        self.report = LawReport()

    def get_samples(self) -> int:
        if self.samples is not None:
            return self.samples
        return get_setting("LAYERLAT_LAW_SAMPLES")

    def population(self) -> List[ChainElement]:
        if self.chain.is_finite():
            return self.chain.elements()
        return self.prefix(self.chain.enumerate_elements(), self.get_window())

    def fail(self, law: str, *elements: ChainElement) -> None:
        texts = ", ".join(self.chain.format_element(x) for x in elements)
        if len(self.report.failures) < 20:
            self.report.failures.append(f"{law} fails at ({texts})")

    def run(self) -> LawReport:
        c = self.chain
        population = self.population()
        triples, exhaustive = self.sample_tuples(population, 3)
        self.report.exhaustive = exhaustive and c.is_finite()
        t, f = c.constants()

        for x, y, z in triples:
            self.report.checked += 1
            xy = c.elem_compare(x, y)
            if xy is not c.elem_compare(y, x).reverse():
                self.fail("antisymmetry", x, y)
            if (xy is Ordering.EQ) != (x == y):
                self.fail("trichotomy", x, y)
            if c.le(x, y) and c.le(y, z) and not c.le(x, z):
                self.fail("transitivity", x, y, z)

            product = c.mul(x, y)
            if product != c.mul(y, x):
                self.fail("commutativity", x, y)
            if c.mul(product, z) != c.mul(x, c.mul(y, z)):
                self.fail("associativity", x, y, z)
            if c.mul(t, x) != x:
                self.fail("unit", x)
            if c.le(x, y) and not c.le(c.mul(x, z), c.mul(y, z)):
                self.fail("monotonicity", x, y, z)
            if c.le(product, z) != c.le(y, c.residuum(x, z)):
                self.fail("adjointness", x, y, z)
            if c.negate(c.negate(x)) != x:
                self.fail("involution", x)

        self.check_type(population, t, f)
        logger.debug("checked %d triples on %s", self.report.checked, c)
        return self.report

    def check_type(self, population: List[ChainElement], t: ChainElement, f: ChainElement) -> None:
        c = self.chain
        if c.chain_type().is_odd:
            if f != t:
                self.fail("odd type", f)
            return
        if not c.lt(f, t):
            self.fail("even type", f, t)
        for x in population:
            if c.lt(f, x) and c.lt(x, t):
                self.fail("f is the lower cover of t", x)


def check_chain_laws(chain: Chain, samples: Optional[int] = None, seed=None) -> LawReport:
    return ChainLawChecker(chain, samples=samples, seed=seed).run()
