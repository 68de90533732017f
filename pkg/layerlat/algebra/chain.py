"""
The involutive FL_e-chain of a bunch of layer groups.

Elements are triples (layer, group element, dotted). Dotted elements exist
only in I-layers, as companions of the members of the layer subgroup. A dotted
element sits below its undotted original and below the lower-layer elements
with the same image.
"""

import functools
import logging
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, List, Optional, Tuple

from layerlat.algebra.bunch import Bunch, BunchType, LayerClass
from layerlat.algebra.ogroup import Ordering
from layerlat.algebra.text import split_element
from layerlat.exceptions import (
    CoverMissing,
    LayerLatError,
    LayerOrderError,
    ParseError,
    TypeMismatch,
)

logger = logging.getLogger(__name__)

_MISSING = object()


@dataclass(frozen=True)
class ChainElement:
    layer: str
    g: Any
    dotted: bool = False

    def undotted(self) -> "ChainElement":
        return ChainElement(self.layer, self.g)


@dataclass(frozen=True)
class Boundedness:
    bounded: bool
    top: Optional[ChainElement] = None
    bottom: Optional[ChainElement] = None

    def __bool__(self) -> bool:
        return self.bounded


class Chain:
    """
    Order, product, residual complement and residuum of the chain of a
    validated bunch
    """

    def __init__(self, bunch: Bunch) -> None:
        self.bunch = bunch

    def __repr__(self) -> str:
        return f"Chain({self.bunch})"

    # elements

    def check(self, x: ChainElement) -> None:
        b = self.bunch
        group = b.group_of(x.layer)
        if not group.contains(x.g):
            raise TypeMismatch(f"{x.g!r} is not an element of G_{x.layer} = {group}")
        if x.dotted:
            if b.class_of(x.layer) is not LayerClass.I:
                raise TypeMismatch(f"layer {x.layer} has no dotted elements")
            if not b.subgroups[x.layer].member(x.g):
                raise TypeMismatch(
                    f"{group.format(x.g)} is not in H_{x.layer}, it has no dotted copy"
                )

    def parse_element(self, text: str, field: str = None) -> ChainElement:
        layer, dotted, g_text = split_element(text, field=field)
        if layer not in self.bunch.skeleton:
            raise ParseError(f"unknown layer {layer!r}", field=field)
        x = ChainElement(layer, self.bunch.groups[layer].parse(g_text, field), dotted)
        try:
            self.check(x)
        except TypeMismatch as e:
            raise ParseError(str(e), field=field) from e
        return x

    def format_element(self, x: ChainElement) -> str:
        g = self.bunch.groups[x.layer].format(x.g)
        return f"{x.layer}:d:{g}" if x.dotted else f"{x.layer}:{g}"

    def is_finite(self) -> bool:
        return self.bunch.is_finite()

    def chain_type(self) -> BunchType:
        return self.bunch.bunch_type()

    # operations

    def zeta(self, u: str, v: str, x: ChainElement) -> Any:
        """
        Extension of the transition u -> v to L_u: the dot is discarded
        """
        if x.layer != u:
            raise LayerOrderError(f"{x} does not belong to layer {u}")
        return self.bunch.transition(u, v)(x.g)

    def _lift(self, x: ChainElement, w: str) -> Any:
        return self.bunch.transition(x.layer, w)(x.g)

    def elem_compare(self, x: ChainElement, y: ChainElement) -> Ordering:
        if x == y:
            return Ordering.EQ
        b = self.bunch
        w = b.join(x.layer, y.layer)
        outcome = b.groups[w].compare(self._lift(x, w), self._lift(y, w))
        if outcome is not Ordering.EQ:
            return outcome
        return Ordering.LT if self._below_on_tie(x, y) else Ordering.GT

    def _below_on_tie(self, x: ChainElement, y: ChainElement) -> bool:
        b = self.bunch
        u, v = x.layer, y.layer
        if b.lt(u, v):
            return not y.dotted
        if u == v:
            return b.class_of(u) is LayerClass.I and x.dotted and not y.dotted
        return b.class_of(u) is LayerClass.I and x.dotted

    def lt(self, x: ChainElement, y: ChainElement) -> bool:
        return self.elem_compare(x, y) is Ordering.LT

    def le(self, x: ChainElement, y: ChainElement) -> bool:
        return self.elem_compare(x, y) is not Ordering.GT

    def sort(self, elements: Iterable[ChainElement]) -> List[ChainElement]:
        return sorted(elements, key=functools.cmp_to_key(self.elem_compare))

    def mul(self, x: ChainElement, y: ChainElement) -> ChainElement:
        b = self.bunch
        u, v = x.layer, y.layer
        w = b.join(u, v)
        p = b.groups[w].op(self._lift(x, w), self._lift(y, w))
        in_i = b.class_of(w) is LayerClass.I

        if u != v:
            higher = x if w == u else y
            dotted = in_i and higher.dotted
        elif in_i:
            subgroup = b.subgroups[w]
            both_in_h = all(
                not z.dotted and subgroup.member(z.g) for z in (x, y)
            )
            dotted = subgroup.member(p) and not both_in_h
        else:
            dotted = False
        return ChainElement(w, p, dotted)

    def negate(self, x: ChainElement) -> ChainElement:
        """
        The residual complement
        """
        b = self.bunch
        u = x.layer
        group = b.groups[u]
        inverse = group.inv(x.g)
        layer_class = b.class_of(u)

        if layer_class is LayerClass.I and not x.dotted and b.subgroups[u].member(x.g):
            return ChainElement(u, inverse, True)
        if layer_class is LayerClass.J and not x.dotted:
            below = group.cover_down(inverse)
            if below is None:
                raise CoverMissing(f"G_{u} = {group} has no lower cover of {group.format(inverse)}")
            return ChainElement(u, below)
        return ChainElement(u, inverse)

    def residuum(self, x: ChainElement, y: ChainElement) -> ChainElement:
        return self.negate(self.mul(x, self.negate(y)))

    def constants(self) -> Tuple[ChainElement, ChainElement]:
        t_layer = self.bunch.least
        t = ChainElement(t_layer, self.bunch.groups[t_layer].unit())
        return t, self.negate(t)

    def is_bounded(self) -> Boundedness:
        b = self.bunch
        top_layer = b.greatest
        group = b.groups[top_layer]
        if not group.is_trivial():
            return Boundedness(False)
        if b.class_of(top_layer) is LayerClass.I:
            return Boundedness(
                True,
                top=ChainElement(top_layer, group.unit()),
                bottom=ChainElement(top_layer, group.unit(), True),
            )
        if len(b.skeleton) == 1:
            # the one-element chain
            only = ChainElement(top_layer, group.unit())
            return Boundedness(True, top=only, bottom=only)
        return Boundedness(False)

    def enumerate_elements(self) -> Iterator[ChainElement]:
        """
        Every element once: one element of each layer per round, dotted
        copies right after their originals
        """
        b = self.bunch
        active = [(u, iter(b.groups[u].elements())) for u in b.skeleton]
        while active:
            still_active = []
            for u, stream in active:
                g = next(stream, _MISSING)
                if g is _MISSING:
                    continue
                still_active.append((u, stream))
                yield ChainElement(u, g)
                if b.class_of(u) is LayerClass.I and b.subgroups[u].member(g):
                    yield ChainElement(u, g, True)
            active = still_active

    def elements(self) -> List[ChainElement]:
        """
        The whole carrier in ascending order; finite chains only
        """
        if not self.is_finite():
            raise LayerLatError("the chain is infinite")
        return self.sort(self.enumerate_elements())


# Operation-style access


def zeta(c: Chain, u: str, v: str, x: ChainElement) -> Any:
    return c.zeta(u, v, x)


def elem_compare(c: Chain, x: ChainElement, y: ChainElement) -> Ordering:
    return c.elem_compare(x, y)


def mul(c: Chain, x: ChainElement, y: ChainElement) -> ChainElement:
    return c.mul(x, y)


def negate(c: Chain, x: ChainElement) -> ChainElement:
    return c.negate(x)


def residuum(c: Chain, x: ChainElement, y: ChainElement) -> ChainElement:
    return c.residuum(x, y)


def constants(c: Chain) -> Tuple[ChainElement, ChainElement]:
    return c.constants()


def is_bounded(c: Chain) -> Boundedness:
    return c.is_bounded()


def enumerate_elements(c: Chain) -> Iterator[ChainElement]:
    return c.enumerate_elements()
