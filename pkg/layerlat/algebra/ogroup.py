"""
Decidable abelian o-groups, o-homomorphisms and subgroups.

The families are closed: groups are built from Trivial, Int, Rat and the
binary lexicographic product Lex; homomorphisms and subgroups from the small
constructor sets below. Elements are plain Python values: the Trivial unit
`E`, `int`, `fractions.Fraction` and 2-tuples for Lex.
"""

import enum
import itertools
import logging
import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, List, Optional, Tuple

from layerlat.algebra.text import split_pair
from layerlat.exceptions import ParseError, TypeMismatch

logger = logging.getLogger(__name__)


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1

    @classmethod
    def of(cls, difference) -> "Ordering":
        if difference < 0:
            return cls.LT
        if difference > 0:
            return cls.GT
        return cls.EQ

    def reverse(self) -> "Ordering":
        return Ordering(-self.value)


class Unit(enum.Enum):
    """
    The single element of the trivial group
    """

    E = "e"

    def __repr__(self) -> str:
        return "E"


E = Unit.E

_INT_RE = re.compile(r"^-?\d+$")
_RAT_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


class OGroup(ABC):
    """
    A decidable abelian totally ordered group
    """

    @abstractmethod
    def contains(self, x: Any) -> bool:
        ...

    @abstractmethod
    def unit(self) -> Any:
        ...

    @abstractmethod
    def _op(self, x: Any, y: Any) -> Any:
        ...

    @abstractmethod
    def _inv(self, x: Any) -> Any:
        ...

    @abstractmethod
    def _compare(self, x: Any, y: Any) -> Ordering:
        ...

    @abstractmethod
    def _cover_up(self, x: Any) -> Optional[Any]:
        ...

    @abstractmethod
    def elements(self) -> Iterator[Any]:
        """
        Every element exactly once, in the declared deterministic order
        """

    @abstractmethod
    def is_discrete(self) -> bool:
        ...

    @abstractmethod
    def is_trivial(self) -> bool:
        ...

    @abstractmethod
    def parse(self, text: str, field: str = None) -> Any:
        ...

    @abstractmethod
    def format(self, x: Any) -> str:
        ...

    @abstractmethod
    def to_json(self) -> Any:
        ...

    def check(self, *elements: Any) -> None:
        for x in elements:
            if not self.contains(x):
                raise TypeMismatch(f"{x!r} is not an element of {self}")

    def op(self, x: Any, y: Any) -> Any:
        self.check(x, y)
        return self._op(x, y)

    def inv(self, x: Any) -> Any:
        self.check(x)
        return self._inv(x)

    def compare(self, x: Any, y: Any) -> Ordering:
        self.check(x, y)
        return self._compare(x, y)

    def cover_up(self, x: Any) -> Optional[Any]:
        self.check(x)
        return self._cover_up(x)

    def cover_down(self, x: Any) -> Optional[Any]:
        # x_down = (x^-1 up)^-1 in an o-group
        self.check(x)
        above = self._cover_up(self._inv(x))
        return None if above is None else self._inv(above)

    def lt(self, x: Any, y: Any) -> bool:
        return self.compare(x, y) is Ordering.LT


@dataclass(frozen=True)
class Trivial(OGroup):
    def contains(self, x: Any) -> bool:
        return x is E

    def unit(self) -> Any:
        return E

    def _op(self, x, y):
        return E

    def _inv(self, x):
        return E

    def _compare(self, x, y) -> Ordering:
        return Ordering.EQ

    def _cover_up(self, x):
        return None

    def elements(self) -> Iterator[Any]:
        yield E

    def is_discrete(self) -> bool:
        return False

    def is_trivial(self) -> bool:
        return True

    def parse(self, text: str, field: str = None) -> Any:
        if text.strip() != "e":
            raise ParseError(f"expected 'e', got {text!r}", field=field)
        return E

    def format(self, x) -> str:
        return "e"

    def to_json(self):
        return "trivial"

    def __str__(self) -> str:
        return "Trivial"


@dataclass(frozen=True)
class Int(OGroup):
    def contains(self, x: Any) -> bool:
        return isinstance(x, int) and not isinstance(x, bool)

    def unit(self) -> Any:
        return 0

    def _op(self, x, y):
        return x + y

    def _inv(self, x):
        return -x

    def _compare(self, x, y) -> Ordering:
        return Ordering.of(x - y)

    def _cover_up(self, x):
        return x + 1

    def elements(self) -> Iterator[Any]:
        yield 0
        for k in itertools.count(1):
            yield k
            yield -k

    def is_discrete(self) -> bool:
        return True

    def is_trivial(self) -> bool:
        return False

    def parse(self, text: str, field: str = None) -> Any:
        text = text.strip()
        if not _INT_RE.match(text):
            raise ParseError(f"expected an integer, got {text!r}", field=field)
        return int(text)

    def format(self, x) -> str:
        return str(x)

    def to_json(self):
        return "int"

    def __str__(self) -> str:
        return "Int"


def calkin_wilf() -> Iterator[Fraction]:
    """
    The positive rationals, each once, in Calkin-Wilf order
    """
    q = Fraction(1)
    while True:
        yield q
        q = 1 / (2 * math.floor(q) - q + 1)


@dataclass(frozen=True)
class Rat(OGroup):
    def contains(self, x: Any) -> bool:
        return isinstance(x, Fraction)

    def unit(self) -> Any:
        return Fraction(0)

    def _op(self, x, y):
        return x + y

    def _inv(self, x):
        return -x

    def _compare(self, x, y) -> Ordering:
        return Ordering.of(x - y)

    def _cover_up(self, x):
        return None

    def elements(self) -> Iterator[Any]:
        yield Fraction(0)
        for q in calkin_wilf():
            yield q
            yield -q

    def is_discrete(self) -> bool:
        return False

    def is_trivial(self) -> bool:
        return False

    def parse(self, text: str, field: str = None) -> Any:
        match = _RAT_RE.match(text.strip())
        if not match:
            raise ParseError(f"expected a rational 'p/q', got {text!r}", field=field)
        numerator, denominator = match.groups()
        if denominator is not None and int(denominator) == 0:
            raise ParseError(f"zero denominator in {text!r}", field=field)
        return Fraction(int(numerator), int(denominator or 1))

    def format(self, x) -> str:
        return f"{x.numerator}/{x.denominator}"

    def to_json(self):
        return "rat"

    def __str__(self) -> str:
        return "Rat"


_MISSING = object()


class _LazyStream:
    """
    Random access into a (possibly finite) iterator, materialized on demand
    """

    def __init__(self, iterator: Iterator[Any]) -> None:
        self.iterator = iterator
        self.cache: List[Any] = []
        self.exhausted = False

    def get(self, index: int) -> Any:
        while len(self.cache) <= index and not self.exhausted:
            try:
                self.cache.append(next(self.iterator))
            except StopIteration:
                self.exhausted = True
        if index < len(self.cache):
            return self.cache[index]
        return _MISSING


def dovetail(left: Iterator[Any], right: Iterator[Any]) -> Iterator[Tuple[Any, Any]]:
    """
    Diagonal dovetailing of two streams: (l0,r0), (l1,r0), (l0,r1), (l2,r0), ...
    Terminates when both streams are finite.
    """
    lefts, rights = _LazyStream(left), _LazyStream(right)
    for diagonal in itertools.count():
        for i in range(diagonal, -1, -1):
            a = lefts.get(i)
            if a is _MISSING:
                continue
            b = rights.get(diagonal - i)
            if b is _MISSING:
                continue
            yield (a, b)
        if (
            lefts.exhausted
            and rights.exhausted
            and diagonal >= len(lefts.cache) + len(rights.cache)
        ):
            return


@dataclass(frozen=True)
class Lex(OGroup):
    left: OGroup
    right: OGroup

    def contains(self, x: Any) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == 2
            and self.left.contains(x[0])
            and self.right.contains(x[1])
        )

    def unit(self) -> Any:
        return (self.left.unit(), self.right.unit())

    def _op(self, x, y):
        return (self.left._op(x[0], y[0]), self.right._op(x[1], y[1]))

    def _inv(self, x):
        return (self.left._inv(x[0]), self.right._inv(x[1]))

    def _compare(self, x, y) -> Ordering:
        first = self.left._compare(x[0], y[0])
        if first is not Ordering.EQ:
            return first
        return self.right._compare(x[1], y[1])

    def _cover_up(self, x):
        if not self.right.is_trivial():
            above = self.right._cover_up(x[1])
            return None if above is None else (x[0], above)
        above = self.left._cover_up(x[0])
        return None if above is None else (above, x[1])

    def elements(self) -> Iterator[Any]:
        return dovetail(self.left.elements(), self.right.elements())

    def is_discrete(self) -> bool:
        if not self.right.is_trivial():
            return self.right.is_discrete()
        return self.left.is_discrete()

    def is_trivial(self) -> bool:
        return self.left.is_trivial() and self.right.is_trivial()

    def parse(self, text: str, field: str = None) -> Any:
        first, second = split_pair(text, field=field)
        return (self.left.parse(first, field), self.right.parse(second, field))

    def format(self, x) -> str:
        return f"({self.left.format(x[0])},{self.right.format(x[1])})"

    def to_json(self):
        return {"lex": [self.left.to_json(), self.right.to_json()]}

    def __str__(self) -> str:
        return f"Lex({self.left},{self.right})"


def parse_group(obj: Any, field: str = None) -> OGroup:
    if obj == "trivial":
        return Trivial()
    if obj == "int":
        return Int()
    if obj == "rat":
        return Rat()
    if isinstance(obj, dict) and set(obj) == {"lex"}:
        factors = obj["lex"]
        if not (isinstance(factors, list) and len(factors) == 2):
            raise ParseError("'lex' takes exactly two groups", field=field)
        return Lex(
            parse_group(factors[0], f"{field}.lex[0]"),
            parse_group(factors[1], f"{field}.lex[1]"),
        )
    raise ParseError(f"unknown group {obj!r}", field=field)


# Homomorphisms


class Hom(ABC):
    """
    An order-preserving group homomorphism `source -> target`. Concrete
    classes expose `source` and `target` attributes.
    """

    source: OGroup
    target: OGroup

    def __call__(self, x: Any) -> Any:
        self.source.check(x)
        return self._apply(x)

    def apply(self, x: Any) -> Any:
        return self(x)

    @abstractmethod
    def _apply(self, x: Any) -> Any:
        ...

    @abstractmethod
    def to_json(self) -> Any:
        ...

    def is_constant(self) -> bool:
        """
        True when the map is structurally known to send everything to the unit
        """
        return False

    def _require(self, condition: bool, message: str) -> None:
        if not condition:
            raise TypeMismatch(f"{type(self).__name__}: {message}")


@dataclass(frozen=True)
class UnitMap(Hom):
    source: OGroup
    target: OGroup

    def _apply(self, x):
        return self.target.unit()

    def to_json(self):
        return "unit"

    def is_constant(self) -> bool:
        return True


@dataclass(frozen=True)
class Identity(Hom):
    source: OGroup
    target: OGroup = None

    def __post_init__(self):
        if self.target is None:
            object.__setattr__(self, "target", self.source)
        self._require(self.source == self.target, f"{self.source} != {self.target}")

    def _apply(self, x):
        return x

    def to_json(self):
        return "id"

    def is_constant(self) -> bool:
        return self.source.is_trivial()


@dataclass(frozen=True)
class ScaleInt(Hom):
    k: int
    source: OGroup = field(default_factory=Int)
    target: OGroup = field(default_factory=Int)

    def __post_init__(self):
        self._require(isinstance(self.k, int) and self.k > 0, "k must be positive")
        self._require(
            self.source == Int() and self.target == Int(), "maps Int to Int"
        )

    def _apply(self, x):
        return self.k * x

    def to_json(self):
        return {"scale_int": self.k}


@dataclass(frozen=True)
class IntToRat(Hom):
    source: OGroup = field(default_factory=Int)
    target: OGroup = field(default_factory=Rat)

    def __post_init__(self):
        self._require(
            self.source == Int() and self.target == Rat(), "maps Int to Rat"
        )

    def _apply(self, x):
        return Fraction(x)

    def to_json(self):
        return "int_to_rat"


@dataclass(frozen=True)
class InjectFirst(Hom):
    source: OGroup
    target: OGroup

    def __post_init__(self):
        self._require(
            isinstance(self.target, Lex) and self.target.left == self.source,
            f"target must be Lex({self.source},_)",
        )

    def _apply(self, x):
        return (x, self.target.right.unit())

    def to_json(self):
        return "inject_first"


@dataclass(frozen=True)
class ProjectFirst(Hom):
    source: OGroup
    target: OGroup

    def __post_init__(self):
        self._require(
            isinstance(self.source, Lex) and self.source.left == self.target,
            f"source must be Lex({self.target},_)",
        )

    def _apply(self, x):
        return x[0]

    def to_json(self):
        return "project_first"


@dataclass(frozen=True)
class Compose(Hom):
    outer: Hom
    inner: Hom

    def __post_init__(self):
        if self.outer.source != self.inner.target:
            raise TypeMismatch(
                f"cannot compose {self.outer.to_json()} after {self.inner.to_json()}: "
                f"{self.inner.target} != {self.outer.source}"
            )

    @property
    def source(self) -> OGroup:
        return self.inner.source

    @property
    def target(self) -> OGroup:
        return self.outer.target

    def _apply(self, x):
        return self.outer._apply(self.inner._apply(x))

    def to_json(self):
        return {"compose": [self.outer.to_json(), self.inner.to_json()]}

    def is_constant(self) -> bool:
        return self.outer.is_constant() or self.inner.is_constant()


def hom_compose(outer: Hom, inner: Hom) -> Hom:
    """
    outer after inner. Identities are absorbed so that long chains of steps
    stay shallow.
    """
    if isinstance(inner, Identity):
        if outer.source != inner.target:
            raise TypeMismatch(f"{inner.target} != {outer.source}")
        return outer
    if isinstance(outer, Identity):
        if outer.source != inner.target:
            raise TypeMismatch(f"{inner.target} != {outer.source}")
        return inner
    return Compose(outer, inner)


_SIMPLE_HOMS = {
    "unit": lambda source, target: UnitMap(source, target),
    "id": lambda source, target: Identity(source, target),
    "int_to_rat": lambda source, target: IntToRat(source, target),
    "inject_first": lambda source, target: InjectFirst(source, target),
    "project_first": lambda source, target: ProjectFirst(source, target),
}


def _codomain(expr: Any, source: Optional[OGroup]) -> Optional[OGroup]:
    if source is None:
        return None
    if expr == "id":
        return source
    if expr == "int_to_rat":
        return Rat()
    if expr == "project_first":
        return source.left if isinstance(source, Lex) else None
    if isinstance(expr, dict) and "scale_int" in expr:
        return Int()
    if isinstance(expr, dict) and "compose" in expr:
        outer, inner = expr["compose"]
        return _codomain(outer, _codomain(inner, source))
    return None


def _domain(expr: Any, target: Optional[OGroup]) -> Optional[OGroup]:
    if target is None:
        return None
    if expr == "id":
        return target
    if expr == "int_to_rat":
        return Int()
    if expr == "inject_first":
        return target.left if isinstance(target, Lex) else None
    if isinstance(expr, dict) and "scale_int" in expr:
        return Int()
    if isinstance(expr, dict) and "compose" in expr:
        outer, inner = expr["compose"]
        return _domain(inner, _domain(outer, target))
    return None


def parse_hom(expr: Any, source: OGroup, target: OGroup, field: str = None) -> Hom:
    """
    Build a Hom from its JSON expression; source and target come from the
    layers the hom connects, intermediate groups of compositions are inferred
    """
    try:
        if isinstance(expr, str) and expr in _SIMPLE_HOMS:
            return _SIMPLE_HOMS[expr](source, target)
        if isinstance(expr, dict) and set(expr) == {"scale_int"}:
            k = expr["scale_int"]
            if not isinstance(k, int) or isinstance(k, bool):
                raise ParseError("scale_int takes a positive integer", field=field)
            return ScaleInt(k, source, target)
        if isinstance(expr, dict) and set(expr) == {"compose"}:
            parts = expr["compose"]
            if not (isinstance(parts, list) and len(parts) == 2):
                raise ParseError("'compose' takes [outer, inner]", field=field)
            outer, inner = parts
            middle = _codomain(inner, source) or _domain(outer, target)
            if middle is None:
                raise ParseError(
                    "cannot infer the intermediate group of the composition",
                    field=field,
                )
            return Compose(
                parse_hom(outer, middle, target, f"{field}.compose[0]"),
                parse_hom(inner, source, middle, f"{field}.compose[1]"),
            )
    except TypeMismatch as e:
        raise ParseError(str(e), field=field) from e
    raise ParseError(f"unknown hom {expr!r}", field=field)


@dataclass
class HomCheckReport:
    hom: Hom
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def sample_pairs(group: OGroup, samples: int) -> Iterator[Tuple[Any, Any]]:
    """
    At least `samples` pairs (fewer only for finite groups) built from an
    enumeration prefix of the group
    """
    width = max(2, math.isqrt(max(samples, 1) - 1) + 1)
    prefix = list(itertools.islice(group.elements(), width))
    return itertools.product(prefix, prefix)


def hom_check(h: Hom, samples: int) -> HomCheckReport:
    """
    Check unit, op, inverse and order preservation on sampled pairs
    """
    report = HomCheckReport(h)
    source, target = h.source, h.target
    if h(source.unit()) != target.unit():
        report.failures.append(f"unit maps to {target.format(h(source.unit()))}")

    for x, y in sample_pairs(source, samples):
        report.checked += 1
        hx, hy = h(x), h(y)
        if h(source.op(x, y)) != target.op(hx, hy):
            report.failures.append(
                f"h({source.format(x)}*{source.format(y)}) != h(x)*h(y)"
            )
        if h(source.inv(x)) != target.inv(hx):
            report.failures.append(f"h({source.format(x)}^-1) != h(x)^-1")
        if (
            source.compare(x, y) is not Ordering.GT
            and target.compare(hx, hy) is Ordering.GT
        ):
            report.failures.append(
                f"order not preserved on {source.format(x)} <= {source.format(y)}"
            )
        if len(report.failures) > 10:
            break

    if report.failures:
        logger.debug("hom %s failed: %s", h.to_json(), report.failures[0])
    return report


# Subgroups


class Subgroup(ABC):
    ambient: OGroup

    def member(self, x: Any) -> bool:
        self.ambient.check(x)
        return self._member(x)

    @abstractmethod
    def _member(self, x: Any) -> bool:
        ...

    @abstractmethod
    def to_json(self) -> Any:
        ...

    def is_whole(self) -> bool:
        return False


@dataclass(frozen=True)
class Whole(Subgroup):
    ambient: OGroup

    def _member(self, x):
        return True

    def to_json(self):
        return "whole"

    def is_whole(self) -> bool:
        return True


@dataclass(frozen=True)
class IntMultiples(Subgroup):
    ambient: OGroup
    k: int

    def __post_init__(self):
        if self.ambient != Int():
            raise TypeMismatch("int_multiples lives in Int")
        if not isinstance(self.k, int) or self.k <= 0:
            raise TypeMismatch("int_multiples takes a positive integer")

    def _member(self, x):
        return x % self.k == 0

    def to_json(self):
        return {"int_multiples": self.k}

    def is_whole(self) -> bool:
        return self.k == 1


@dataclass(frozen=True)
class IntInRat(Subgroup):
    ambient: OGroup

    def __post_init__(self):
        if self.ambient != Rat():
            raise TypeMismatch("int_in_rat lives in Rat")

    def _member(self, x):
        return x.denominator == 1

    def to_json(self):
        return "int_in_rat"


@dataclass(frozen=True)
class FirstZero(Subgroup):
    ambient: OGroup

    def __post_init__(self):
        if not isinstance(self.ambient, Lex):
            raise TypeMismatch("first_zero lives in a Lex group")

    def _member(self, x):
        return x[0] == self.ambient.left.unit()

    def to_json(self):
        return "first_zero"

    def is_whole(self) -> bool:
        return self.ambient.left.is_trivial()


def parse_subgroup(obj: Any, ambient: OGroup, field: str = None) -> Subgroup:
    try:
        if obj == "whole":
            return Whole(ambient)
        if obj == "int_in_rat":
            return IntInRat(ambient)
        if obj == "first_zero":
            return FirstZero(ambient)
        if isinstance(obj, dict) and set(obj) == {"int_multiples"}:
            return IntMultiples(ambient, obj["int_multiples"])
    except TypeMismatch as e:
        raise ParseError(str(e), field=field) from e
    raise ParseError(f"unknown subgroup {obj!r}", field=field)


# Operation-style access


def g_compare(G: OGroup, x: Any, y: Any) -> Ordering:
    return G.compare(x, y)


def g_op(G: OGroup, x: Any, y: Any) -> Any:
    return G.op(x, y)


def g_inv(G: OGroup, x: Any) -> Any:
    return G.inv(x)


def g_unit(G: OGroup) -> Any:
    return G.unit()


def g_cover_up(G: OGroup, x: Any) -> Optional[Any]:
    return G.cover_up(x)


def g_cover_down(G: OGroup, x: Any) -> Optional[Any]:
    return G.cover_down(x)


def g_enumerate(G: OGroup) -> Iterator[Any]:
    return G.elements()


def hom_apply(h: Hom, x: Any) -> Any:
    return h(x)


def sub_member(S: Subgroup, x: Any) -> bool:
    return S.member(x)
