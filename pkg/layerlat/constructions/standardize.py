"""
Placement of a bounded chain into the rationals of [0, 1] and a lower
approximation of the sup-extended product on the placed points.

Only rational approximations are computed; the real-valued completion is not
represented.
"""

import csv
import io
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from layerlat.algebra.chain import Boundedness, Chain, ChainElement
from layerlat.conf import get_setting
from layerlat.decorators import bounded_chain_required
from layerlat.exceptions import LayerLatError, ParseError

logger = logging.getLogger(__name__)


@dataclass
class RationalPlacement:
    """
    Elements in ascending chain order together with their rationals
    """

    chain: Chain
    pairs: List[Tuple[ChainElement, Fraction]] = field(default_factory=list)

    def __post_init__(self):
        self._values: Dict[ChainElement, Fraction] = dict(self.pairs)

    def __contains__(self, x: ChainElement) -> bool:
        return x in self._values

    def __len__(self) -> int:
        return len(self.pairs)

    def value_of(self, x: ChainElement) -> Fraction:
        return self._values[x]

    def elements(self) -> List[ChainElement]:
        return [x for x, _ in self.pairs]

    def copy(self) -> "RationalPlacement":
        return RationalPlacement(self.chain, list(self.pairs))

    def place(self, x: ChainElement) -> Fraction:
        """
        Put x at the midpoint of its placed neighbours; x lies strictly
        between the placed bottom and top
        """
        if x in self._values:
            return self._values[x]
        position = next(
            (i for i, (placed, _) in enumerate(self.pairs) if self.chain.lt(x, placed)),
            len(self.pairs),
        )
        low = self.pairs[position - 1][1]
        high = self.pairs[position][1]
        value = (low + high) / 2
        self.pairs.insert(position, (x, value))
        self._values[x] = value
        return value

    def lower_estimate(self, x: ChainElement) -> Fraction:
        """
        The rational of the greatest placed element below or equal to x
        """
        if x in self._values:
            return self._values[x]
        below = [value for placed, value in self.pairs if self.chain.le(placed, x)]
        return max(below, default=Fraction(0))


@bounded_chain_required
def cantor_map(c: Chain, prefix: Optional[int] = None, bounds: Boundedness = None) -> RationalPlacement:
    """
    bottom -> 0, top -> 1, then every further enumerated element at the
    midpoint of its current neighbours, until `prefix` elements are placed
    """
    if bounds.top == bounds.bottom:
        raise LayerLatError("the one-element chain has no placement in [0, 1]")
    prefix = prefix or get_setting("LAYERLAT_SAMPLES")
    placement = RationalPlacement(c, [(bounds.bottom, Fraction(0)), (bounds.top, Fraction(1))])
    for x in c.enumerate_elements():
        if len(placement) >= prefix:
            break
        placement.place(x)
    logger.debug("placed %d elements of %s", len(placement), c)
    return placement


def sup_extend(
    c: Chain,
    placement: RationalPlacement,
    a: Fraction,
    b: Fraction,
    depth: Optional[int] = None,
) -> Fraction:
    """
    Lower approximation of sup{q(x*y) : q(x) < a, q(y) < b}. First the products
    of placed pairs are placed, at most `depth` of them, walking the pairs in
    a fixed order; then the sup is taken over the placed points, estimating
    unplaced products from below. The placement argument is not modified.
    """
    depth = get_setting("LAYERLAT_SUP_DEPTH") if depth is None else depth
    extended = placement.copy()
    snapshot = extended.elements()
    placed = 0
    for x, y in itertools.combinations_with_replacement(snapshot, 2):
        if placed >= depth:
            break
        product = c.mul(x, y)
        if product not in extended:
            extended.place(product)
            placed += 1

    best = Fraction(0)
    lows = [x for x in extended.elements() if extended.value_of(x) < a]
    highs = [y for y in extended.elements() if extended.value_of(y) < b]
    for x in lows:
        for y in highs:
            best = max(best, extended.lower_estimate(c.mul(x, y)))
    return best


@dataclass
class PlacementReport:
    checked: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_placement(c: Chain, placement: RationalPlacement) -> PlacementReport:
    """
    Strict order preservation, pinned endpoints and order reversal by the
    residual complement on the placed set
    """
    report = PlacementReport()
    bounds = c.is_bounded()
    if bounds:
        if bounds.bottom in placement and placement.value_of(bounds.bottom) != 0:
            report.violations.append("the bottom is not placed at 0")
        if bounds.top in placement and placement.value_of(bounds.top) != 1:
            report.violations.append("the top is not placed at 1")

    for (x, qx), (y, qy) in itertools.combinations(placement.pairs, 2):
        report.checked += 1
        if c.lt(x, y) != (qx < qy) or c.lt(y, x) != (qy < qx):
            report.violations.append(
                f"{c.format_element(x)} and {c.format_element(y)} are placed out of order"
            )
        nx, ny = c.negate(x), c.negate(y)
        if c.lt(x, y) and not c.lt(ny, nx):
            report.violations.append(f"negation does not reverse {c.format_element(x)} < {c.format_element(y)}")
        if nx in placement and ny in placement and (qx < qy) != (placement.value_of(ny) < placement.value_of(nx)):
            report.violations.append(
                f"the placed negations of {c.format_element(x)}, {c.format_element(y)} are not reversed"
            )
    return report


def serialize_placement(c: Chain, placement: RationalPlacement) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for x, q in placement.pairs:
        writer.writerow([c.format_element(x), q.numerator, q.denominator])
    return buffer.getvalue()


def parse_placement(text: str, c: Chain) -> RationalPlacement:
    pairs = []
    for line, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row:
            continue
        if len(row) != 3:
            raise ParseError("expected 'element,numerator,denominator'", line=line)
        x = c.parse_element(row[0], field="element")
        try:
            q = Fraction(int(row[1]), int(row[2]))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"invalid rational {row[1]}/{row[2]}", line=line) from None
        pairs.append((x, q))
    pairs.sort(key=lambda pair: pair[1])
    bounds = c.is_bounded()
    if not bounds:
        raise ParseError("only a bounded chain has a placement")
    if not pairs or pairs[0] != (bounds.bottom, 0):
        raise ParseError(f"the bottom {c.format_element(bounds.bottom)} must be placed at 0")
    if pairs[-1] != (bounds.top, 1):
        raise ParseError(f"the top {c.format_element(bounds.top)} must be placed at 1")
    return RationalPlacement(c, pairs)
