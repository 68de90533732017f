"""
Group representation of finite involutive FL_e-chains given by their Cayley
table, the reconstruction round trip, and identity checks that recover a
bunch from its own (possibly infinite) chain.
"""

import csv
import io
import itertools
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from layerlat.algebra.bunch import Bunch, LayerClass, make_bunch
from layerlat.algebra.chain import Chain, ChainElement
from layerlat.algebra.ogroup import E, Trivial, UnitMap, Whole
from layerlat.exceptions import (
    AxiomFailure,
    LayerLatError,
    NotResiduated,
    ParseError,
    RoundTripMismatch,
)
from layerlat.mixins import SamplingMixin

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CayleyTable:
    """
    A finite chain given extensionally: the carrier is 0 < 1 < ... < n-1 and
    product[i][j] is the index of the product of i and j
    """

    n: int
    product: Tuple[Tuple[int, ...], ...]
    unit: int
    falsum: int

    def __post_init__(self):
        object.__setattr__(self, "product", tuple(tuple(row) for row in self.product))

    def mul(self, x: int, y: int) -> int:
        return self.product[x][y]

    def neg(self, x: int) -> int:
        return brute_residuum(self, x, self.falsum)

    def is_idempotent(self, x: int) -> bool:
        return self.product[x][x] == x


def parse_table(text: str) -> CayleyTable:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows:
        raise ParseError("empty table", line=1)

    def integers(row: List[str], line: int) -> List[int]:
        try:
            return [int(cell.strip()) for cell in row]
        except ValueError:
            raise ParseError(f"expected integers, got {row}", line=line) from None

    header = integers(rows[0], 1)
    if len(header) != 3:
        raise ParseError("the first line is 'n,unit_index,falsum_index'", line=1)
    n, unit, falsum = header
    if n < 1:
        raise ParseError("a chain has at least one element", line=1, field="n")
    for name, index in (("unit", unit), ("falsum", falsum)):
        if not 0 <= index < n:
            raise ParseError(f"{name} index {index} is out of range", line=1, field=name)
    if len(rows) != n + 1:
        raise ParseError(f"expected {n} product rows, got {len(rows) - 1}", line=len(rows))

    product = []
    for line, row in enumerate(rows[1:], start=2):
        cells = integers(row, line)
        if len(cells) != n:
            raise ParseError(f"expected {n} entries, got {len(cells)}", line=line)
        for cell in cells:
            if not 0 <= cell < n:
                raise ParseError(f"product index {cell} is out of range", line=line)
        product.append(cells)
    return CayleyTable(n, product, unit, falsum)


def serialize_table(tbl: CayleyTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([tbl.n, tbl.unit, tbl.falsum])
    writer.writerows(tbl.product)
    return buffer.getvalue()


def brute_residuum(tbl: CayleyTable, x: int, z: int) -> int:
    """
    max{v : x*v <= z}, by scanning the row of x
    """
    candidates = [v for v in range(tbl.n) if tbl.product[x][v] <= z]
    if not candidates:
        raise NotResiduated(f"no v with {x}*v <= {z}")
    return max(candidates)


# Decomposition


@dataclass
class DecompositionResult:
    bunch: Bunch
    layer_assignment: Dict[int, ChainElement]
    skeleton_indices: Dict[str, int] = field(default_factory=dict)


def _skeleton_labels(count: int) -> List[str]:
    if count == 1:
        return ["t"]
    if count == 2:
        return ["t", "u"]
    return ["t"] + [f"u{i}" for i in range(1, count)]


def decompose_table(tbl: CayleyTable) -> DecompositionResult:
    """
    The bunch of layer groups of a finite odd or even involutive FL_e-chain.
    Raises the first axiom failure found by the oracle.
    """
    from layerlat.oracle import check_flea_axioms

    check_flea_axioms(tbl).raise_for_failure()

    t, f = tbl.unit, tbl.falsum
    positive_idempotents = sorted({brute_residuum(tbl, x, x) for x in range(tbl.n)})
    if positive_idempotents[0] != t:
        raise AxiomFailure(f"the least positive idempotent is {positive_idempotents[0]}, not t", (t,))
    labels = _skeleton_labels(len(positive_idempotents))
    label_of = dict(zip(positive_idempotents, labels))

    partition = {}
    for u, label in label_of.items():
        if u == t:
            if f == t:
                partition[label] = LayerClass.O
            else:
                partition[label] = LayerClass.I if tbl.is_idempotent(f) else LayerClass.J
        else:
            partition[label] = LayerClass.I if tbl.is_idempotent(tbl.neg(u)) else LayerClass.J

    assignment: Dict[int, ChainElement] = {}
    for u, label in label_of.items():
        layer = [x for x in range(tbl.n) if brute_residuum(tbl, x, x) == u]
        if partition[label] is LayerClass.I:
            neg_u = tbl.neg(u)
            subgroup = [x for x in layer if tbl.mul(x, neg_u) < x]
            dotted = {tbl.mul(x, neg_u) for x in subgroup}
            group = [x for x in layer if x not in dotted]
        else:
            subgroup, dotted, group = [], set(), layer

        # a finite abelian o-group is trivial
        if group != [u]:
            raise AxiomFailure(f"layer {label} has group carrier {group}, expected [{u}]", tuple(group))
        if partition[label] is LayerClass.J:
            raise AxiomFailure(f"layer {label} would be in the J class with a trivial group", (u,))
        if partition[label] is LayerClass.I and subgroup != [u]:
            raise AxiomFailure(f"layer {label} has subgroup carrier {subgroup}", tuple(subgroup))

        _check_layer_operations(tbl, partition[label], u, label)
        assignment[u] = ChainElement(label, E)
        for x in dotted:
            assignment[x] = ChainElement(label, E, True)

    for u in positive_idempotents:
        for v in positive_idempotents:
            # the transition u -> v is multiplication by v
            if u < v and tbl.mul(v, u) != v:
                raise AxiomFailure(f"{v}*{u} = {tbl.mul(v, u)}, the transition does not land on {v}", (u, v))

    if len(assignment) != tbl.n:
        missing = sorted(set(range(tbl.n)) - set(assignment))
        raise AxiomFailure(f"elements {missing} belong to no layer", tuple(missing))

    groups = {label: Trivial() for label in labels}
    bunch = make_bunch(
        labels,
        partition,
        groups,
        subgroups={
            label: Whole(groups[label])
            for label in labels
            if partition[label] is LayerClass.I
        },
        steps={
            (a, b): UnitMap(groups[a], groups[b]) for a, b in zip(labels, labels[1:])
        },
    )
    logger.debug("decomposed a %d-element table into %s", tbl.n, bunch)
    return DecompositionResult(
        bunch=bunch,
        layer_assignment=assignment,
        skeleton_indices={label: u for u, label in label_of.items()},
    )


def _check_layer_operations(tbl: CayleyTable, layer_class: LayerClass, u: int, label: str) -> None:
    if layer_class is LayerClass.I:
        # ((u*u) -> u) -> u
        product = brute_residuum(tbl, brute_residuum(tbl, tbl.mul(u, u), u), u)
    else:
        product = tbl.mul(u, u)
    if product != u:
        raise AxiomFailure(f"the group operation of layer {label} does not fix its unit", (u,))
    if brute_residuum(tbl, u, u) != u:
        raise AxiomFailure(f"the unit of layer {label} is not its own inverse", (u,))


@dataclass
class RoundTripWitness:
    bijection: Dict[int, ChainElement]
    cells: int


def roundtrip_table(tbl: CayleyTable, result: Optional[DecompositionResult] = None) -> RoundTripWitness:
    """
    Rebuild the chain of the decomposed bunch and compare it cell by cell with
    the table
    """
    result = result or decompose_table(tbl)
    chain = Chain(result.bunch)
    image = result.layer_assignment

    elements = chain.elements()
    if len(elements) != tbl.n or set(elements) != set(image.values()):
        raise RoundTripMismatch(
            f"the reconstruction has {len(elements)} elements, the table {tbl.n}"
        )

    cells = 0
    for i in range(tbl.n):
        for j in range(tbl.n):
            cells += 1
            if i < j and not chain.lt(image[i], image[j]):
                raise RoundTripMismatch(f"order differs at ({i},{j})", (i, j))
            expected = image[tbl.mul(i, j)]
            actual = chain.mul(image[i], image[j])
            if actual != expected:
                raise RoundTripMismatch(
                    f"product differs at ({i},{j}): {chain.format_element(actual)} != "
                    f"{chain.format_element(expected)}",
                    (i, j),
                )

    t, f = chain.constants()
    if t != image[tbl.unit]:
        raise RoundTripMismatch("the unit is not preserved", (tbl.unit,))
    if f != image[tbl.falsum]:
        raise RoundTripMismatch("the falsum is not preserved", (tbl.falsum,))
    return RoundTripWitness(bijection=dict(image), cells=cells)


# Tables of bunch-generated chains


def chain_table(c: Chain) -> Tuple[CayleyTable, List[ChainElement]]:
    """
    The Cayley table of a finite chain and the element of each index
    """
    elements = c.elements()
    index = {x: i for i, x in enumerate(elements)}
    product = [[index[c.mul(x, y)] for y in elements] for x in elements]
    t, f = c.constants()
    return CayleyTable(len(elements), product, index[t], index[f]), elements


@dataclass
class ChainWindow:
    """
    The first enumerated elements of a chain, sorted, and their products;
    cells whose product leaves the window hold None
    """

    elements: List[ChainElement]
    product: List[List[Optional[int]]]

    def covering_edges(self) -> List[Tuple[int, int]]:
        return [(i, i + 1) for i in range(len(self.elements) - 1)]


def chain_window(c: Chain, limit: int) -> ChainWindow:
    elements = c.sort(itertools.islice(c.enumerate_elements(), limit))
    index = {x: i for i, x in enumerate(elements)}
    product = [[index.get(c.mul(x, y)) for y in elements] for x in elements]
    return ChainWindow(elements, product)


def serialize_window(c: Chain, window: ChainWindow, output_format: str = "csv") -> str:
    texts = [c.format_element(x) for x in window.elements]
    if output_format == "json":
        document = {"elements": texts, "product": window.product}
        return json.dumps(document, indent=2) + "\n"
    if output_format == "dot":
        lines = ["digraph chain {"]
        lines += [f'  "{texts[i]}" -> "{texts[j]}";' for i, j in window.covering_edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"
    if output_format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([""] + texts)
        for text, row in zip(texts, window.product):
            writer.writerow([text] + ["" if cell is None else texts[cell] for cell in row])
        return buffer.getvalue()
    raise LayerLatError(f"unknown format {output_format!r}")


# Identity checks on symbolic chains


@dataclass
class RecoveryReport:
    checked: int = 0
    exhaustive: bool = False
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


class BunchRecovery(SamplingMixin):
    """
    Re-reads the decomposition equations as identities on the chain of a
    bunch: layers are the level sets of x -> x, H_u is recovered from the
    u-invertible elements and multiplication by v realizes the transitions
    """

    def __init__(self, chain: Chain, samples: Optional[int] = None, seed=None) -> None:
        self.chain = chain
        self.samples = samples
        self.seed = seed
        self.report = RecoveryReport()

    def population(self) -> List[ChainElement]:
        if self.chain.is_finite():
            self.report.exhaustive = True
            return self.chain.elements()
        self.report.exhaustive = False
        return self.prefix(self.chain.enumerate_elements(), max(self.get_samples(), 1))

    def fail(self, identity: str, x: ChainElement, detail: str = "") -> None:
        text = self.chain.format_element(x)
        self.report.failures.append(f"{identity} fails at {text}{': ' + detail if detail else ''}")

    def run(self) -> RecoveryReport:
        c = self.chain
        b = c.bunch
        for x in self.population():
            self.report.checked += 1
            u = x.layer
            group = b.groups[u]
            unit = ChainElement(u, group.unit())

            if c.residuum(x, x) != unit:
                self.fail("x -> x = u", x, c.format_element(c.residuum(x, x)))

            if b.class_of(u) is LayerClass.I:
                self.check_subgroup(x, unit)

            for v in b.skeleton[b.index(u):]:
                idempotent = ChainElement(v, b.groups[v].unit())
                if v == u:
                    expected = x
                else:
                    expected = ChainElement(v, c.zeta(u, v, x))
                if c.mul(idempotent, x) != expected:
                    self.fail(f"{v} * x realizes the transition {u} -> {v}", x)

        logger.debug("recovered %s on %d elements", b, self.report.checked)
        return self.report

    def check_subgroup(self, x: ChainElement, unit: ChainElement) -> None:
        c = self.chain
        in_h = not x.dotted and c.bunch.subgroups[x.layer].member(x.g)
        neg_u = c.negate(unit)
        if c.lt(c.mul(x, neg_u), x) != in_h:
            self.fail("x * neg(u) < x iff x is in H_u", x)
        if in_h:
            inverse = ChainElement(x.layer, c.bunch.groups[x.layer].inv(x.g))
            if c.mul(x, inverse) != unit:
                self.fail("x is u-invertible", x)
            if c.mul(x, neg_u) != ChainElement(x.layer, x.g, True):
                self.fail("x * neg(u) is the dotted copy of x", x)
        if x.dotted and c.zeta(x.layer, x.layer, x) != x.g:
            self.fail("the dotted copy recovers its original", x)


def recover_bunch_samples(c: Chain, samples: Optional[int] = None, seed=None) -> RecoveryReport:
    return BunchRecovery(c, samples=samples, seed=seed).run()
