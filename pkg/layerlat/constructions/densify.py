"""
Densification of odd chains: new layers are inserted into the skeleton just
above or just below an existing one, and gaps between two elements are filled
by the copy the insertion creates.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple

from layerlat.algebra.bunch import Bunch, LayerClass, make_bunch
from layerlat.algebra.chain import Chain, ChainElement
from layerlat.algebra.ogroup import Identity, Whole
from layerlat.conf import get_setting
from layerlat.constructions.embed import EmbeddingSpec, identity_embedding
from layerlat.decorators import odd_chain_required
from layerlat.exceptions import LayerClassError, LeastLayerError, NotLess

logger = logging.getLogger(__name__)


def fresh_label(b: Bunch, v: str, sign: str) -> str:
    for k in itertools.count(1):
        label = f"{v}{sign}{k}"
        if label not in b.skeleton:
            return label


@dataclass(frozen=True)
class InsertionReceipt:
    source: Bunch
    new_bunch: Bunch
    new_layer: str
    iota: EmbeddingSpec

    def witness_maker(self, y: Any, dotted: bool = False) -> ChainElement:
        """
        The copy of y in the new layer
        """
        return ChainElement(self.new_layer, y, dotted)


def _insert(b: Bunch, v: str, position: int, label: str, steps: Dict[Tuple[str, str], Any]) -> Bunch:
    skeleton = list(b.skeleton)
    skeleton.insert(position, label)
    partition = dict(b.partition)
    partition[label] = LayerClass.I
    groups = dict(b.groups)
    groups[label] = b.groups[v]
    subgroups = dict(b.subgroups)
    subgroups[label] = Whole(groups[label])
    return make_bunch(skeleton, partition, groups, subgroups, steps)


def insert_above(b: Bunch, v: str) -> InsertionReceipt:
    index = b.index(v)
    if b.class_of(v) is LayerClass.J:
        raise LayerClassError(f"cannot insert above {v}, it is in the J class")

    label = fresh_label(b, v, "+")
    steps = dict(b.steps)
    steps[(v, label)] = Identity(b.groups[v])
    if index + 1 < len(b.skeleton):
        above = b.skeleton[index + 1]
        steps[(label, above)] = steps.pop((v, above))

    new_bunch = _insert(b, v, index + 1, label, steps)
    logger.debug("inserted %s above %s", label, v)
    return InsertionReceipt(b, new_bunch, label, identity_embedding(b, new_bunch))


def insert_below(b: Bunch, v: str) -> InsertionReceipt:
    index = b.index(v)
    if index == 0:
        raise LeastLayerError(f"cannot insert below the least layer {v}")
    if _proper_subgroup(b, v):
        # the identity copy below v would leave H_v
        raise LayerClassError(f"cannot insert below {v}, its layer subgroup is proper")

    label = fresh_label(b, v, "-")
    below = b.skeleton[index - 1]
    steps = dict(b.steps)
    steps[(below, label)] = steps.pop((below, v))
    steps[(label, v)] = Identity(b.groups[v])

    new_bunch = _insert(b, v, index, label, steps)
    logger.debug("inserted %s below %s", label, v)
    return InsertionReceipt(b, new_bunch, label, identity_embedding(b, new_bunch))


def _proper_subgroup(b: Bunch, v: str) -> bool:
    subgroup = b.subgroup_of(v)
    return subgroup is not None and not subgroup.is_whole()


def _preimage(b: Bunch, u: str, v: str, g: Any) -> Any:
    """
    An element of G_u sent to g by the transition u -> v, searched in the
    first elements of G_u
    """
    transition = b.transition(u, v)
    window = get_setting("LAYERLAT_SAMPLE_WINDOW")
    for h in itertools.islice(b.groups[u].elements(), window):
        if transition(h) == g:
            return h
    raise LayerClassError(
        f"cannot fill the gap at {b.groups[v].format(g)} in {v}, its layer subgroup is proper "
        f"and no preimage lies in the first {window} elements of G_{u}"
    )


@dataclass(frozen=True)
class GapFillResult:
    case_tag: str
    receipt: InsertionReceipt
    witness: ChainElement
    x: ChainElement
    y: ChainElement

    @property
    def chain(self) -> Chain:
        return Chain(self.receipt.new_bunch)


@odd_chain_required
def fill_gap(c: Chain, x: ChainElement, y: ChainElement) -> GapFillResult:
    """
    Extend the bunch so that an element lies strictly between x < y. The case
    split follows whether the images of x and y in the group of the higher
    layer are strictly ordered or equal.
    """
    c.check(x)
    c.check(y)
    if not c.lt(x, y):
        raise NotLess(f"{c.format_element(x)} is not below {c.format_element(y)}")

    b = c.bunch
    u, v = x.layer, y.layer
    w = b.join(u, v)
    images_equal = c.zeta(u, w, x) == c.zeta(v, w, y)

    if not images_equal:
        if y.dotted:
            tag, receipt = "1c", insert_above(b, v)
            witness = receipt.witness_maker(y.g, dotted=True)
        elif v == b.least and u == b.least:
            tag, receipt = "1a", insert_above(b, v)
            witness = receipt.witness_maker(x.g)
        elif v == b.least:
            # x lies in a higher layer, its image is below y there
            tag, receipt = "1a", insert_above(b, v)
            witness = receipt.witness_maker(y.g, dotted=True)
        elif not _proper_subgroup(b, v):
            tag, receipt = "1b", insert_below(b, v)
            witness = receipt.witness_maker(y.g)
        else:
            # copy x just above its own layer, its image stays below y
            tag, receipt = "1b", insert_above(b, u)
            witness = receipt.witness_maker(x.g)
    elif b.lt(u, v):
        if not _proper_subgroup(b, v):
            tag, receipt = "2a", insert_below(b, v)
            witness = receipt.witness_maker(y.g)
        else:
            tag, receipt = "2a", insert_above(b, u)
            witness = receipt.witness_maker(x.g)
    elif u == v:
        if not _proper_subgroup(b, v):
            tag, receipt = "2b", insert_below(b, v)
            witness = receipt.witness_maker(y.g)
        else:
            # x is dotted, so v is an I layer above the least one
            below = b.skeleton[b.index(v) - 1]
            h = _preimage(b, below, v, y.g)
            tag, receipt = "2b", insert_above(b, below)
            witness = receipt.witness_maker(h)
    elif not _proper_subgroup(b, u):
        tag, receipt = "2c", insert_below(b, u)
        witness = receipt.witness_maker(x.g, dotted=True)
    else:
        tag, receipt = "2c", insert_above(b, v)
        witness = receipt.witness_maker(y.g, dotted=True)

    logger.info(
        "case %s: %s < %s < %s",
        tag,
        c.format_element(x),
        Chain(receipt.new_bunch).format_element(witness),
        c.format_element(y),
    )
    return GapFillResult(tag, receipt, witness, x, y)


# Driver


@dataclass(frozen=True)
class TraceRecord:
    case_tag: str
    inserted_layer: str
    layer_class: LayerClass
    x: str
    y: str
    witness: str

    def to_json(self) -> Dict[str, str]:
        return {
            "case_tag": self.case_tag,
            "inserted_layer": self.inserted_layer,
            "layer_class": self.layer_class.value,
            "x": self.x,
            "y": self.y,
            "witness": self.witness,
        }


@odd_chain_required
def densify_pass(
    c: Chain,
    ordered: List[ChainElement],
    pairs: Iterable[Tuple[ChainElement, ChainElement]],
) -> Tuple[Chain, List[TraceRecord]]:
    """
    Fill the gap of every pair x < y with no element of `ordered` strictly
    between them. `ordered` is the sorted list of materialized elements, the
    witnesses are inserted into it in place.
    """
    current = c
    trace: List[TraceRecord] = []
    for x, y in pairs:
        i, j = ordered.index(x), ordered.index(y)
        if j - i > 1:
            continue
        result = fill_gap(current, x, y)
        current = result.chain
        ordered.insert(j, result.witness)
        trace.append(
            TraceRecord(
                case_tag=result.case_tag,
                inserted_layer=result.receipt.new_layer,
                layer_class=current.bunch.class_of(result.receipt.new_layer),
                x=current.format_element(x),
                y=current.format_element(y),
                witness=current.format_element(result.witness),
            )
        )
    return current, trace


@odd_chain_required
def densify_driver(c: Chain, prefix: Optional[int] = None, rounds: int = 1) -> Tuple[Bunch, List[TraceRecord]]:
    """
    Separate every pair of the first `prefix` enumerated elements, `rounds`
    times over. Each pass works on the elements materialized when it starts;
    witnesses join the materialized set.
    """
    prefix = prefix or get_setting("LAYERLAT_SAMPLES")
    current = c
    ordered = current.sort(itertools.islice(c.enumerate_elements(), prefix))
    trace: List[TraceRecord] = []

    for round_number in range(rounds):
        snapshot = list(ordered)
        current, records = densify_pass(current, ordered, itertools.combinations(snapshot, 2))
        trace.extend(records)
        logger.info("densify round %d: %d insertions", round_number + 1, len(records))
    return current.bunch, trace


def trace_to_json(trace: List[TraceRecord]) -> List[Dict[str, str]]:
    return [record.to_json() for record in trace]


def preserves_idempotent_symmetry(trace: List[TraceRecord], source: Optional[Bunch] = None) -> bool:
    """
    Every inserted layer is in the I class and, when the source bunch is
    given, the source has no J-layer
    """
    if source is not None and source.layers_of(LayerClass.J):
        return False
    return all(LayerClass(record.layer_class) is LayerClass.I for record in trace)


def is_extension(small: Bunch, big: Bunch, samples: Optional[int] = None) -> bool:
    """
    Whether `big` extends `small`: the skeleton of `small` sits inside that of
    `big` in the same order with the same least layer, classes, groups and
    subgroups, and the transitions agree on enumerated samples
    """
    samples = samples or get_setting("LAYERLAT_SAMPLES")
    if not set(small.skeleton) <= set(big.skeleton) or small.least != big.least:
        return False
    if sorted(small.skeleton, key=big.index) != list(small.skeleton):
        return False
    for u in small.skeleton:
        if small.partition[u] != big.partition[u] or small.groups[u] != big.groups[u]:
            return False
        if small.subgroups.get(u) != big.subgroups.get(u):
            return False
    for u, v in itertools.combinations(small.skeleton, 2):
        here, there = small.transition(u, v), big.transition(u, v)
        for g in itertools.islice(small.groups[u].elements(), samples):
            if here(g) != there(g):
                return False
    return True


def preserves_bounds(source: Bunch, extended: Bunch) -> bool:
    """
    The extension keeps the greatest layer, hence the top and the bottom of a
    bounded chain
    """
    if source.greatest != extended.greatest:
        return False
    return Chain(source).is_bounded() == Chain(extended).is_bounded()
