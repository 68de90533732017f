"""
Bunches of layer groups: a direct system of abelian o-groups over a finite
totally ordered skeleton, with a partition of the skeleton and subgroups for
the I-class layers.
"""

import enum
import json
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple

from django.core.exceptions import ValidationError

from layerlat.algebra.ogroup import (
    Compose,
    FirstZero,
    Hom,
    Identity,
    Int,
    IntInRat,
    IntMultiples,
    IntToRat,
    InjectFirst,
    Lex,
    OGroup,
    ProjectFirst,
    Rat,
    ScaleInt,
    Subgroup,
    Trivial,
    UnitMap,
    Whole,
    hom_check,
    hom_compose,
    parse_group,
    parse_hom,
    parse_subgroup,
)
from layerlat.exceptions import LayerOrderError, ParseError, UnknownLayer
from layerlat.mixins import SamplingMixin

logger = logging.getLogger(__name__)


class LayerClass(str, enum.Enum):
    O = "O"  # noqa: E741
    J = "J"
    I = "I"  # noqa: E741


class BunchType(str, enum.Enum):
    ODD = "Odd"
    EVEN_NON_IDEM_F = "EvenNonIdemF"
    EVEN_IDEM_F = "EvenIdemF"

    @property
    def is_odd(self) -> bool:
        return self is BunchType.ODD


_TYPE_OF_CLASS = {
    LayerClass.O: BunchType.ODD,
    LayerClass.J: BunchType.EVEN_NON_IDEM_F,
    LayerClass.I: BunchType.EVEN_IDEM_F,
}


@dataclass(frozen=True)
class Bunch:
    skeleton: Tuple[str, ...]
    partition: Mapping[str, LayerClass]
    groups: Mapping[str, OGroup]
    subgroups: Mapping[str, Subgroup]
    steps: Mapping[Tuple[str, str], Hom]
    _transitions: Dict[Tuple[str, str], Hom] = field(
        default_factory=dict, compare=False, repr=False
    )

    @property
    def least(self) -> str:
        return self.skeleton[0]

    @property
    def greatest(self) -> str:
        return self.skeleton[-1]

    def index(self, layer: str) -> int:
        try:
            return self.skeleton.index(layer)
        except ValueError:
            raise UnknownLayer(layer) from None

    def le(self, u: str, v: str) -> bool:
        return self.index(u) <= self.index(v)

    def lt(self, u: str, v: str) -> bool:
        return self.index(u) < self.index(v)

    def join(self, u: str, v: str) -> str:
        return v if self.le(u, v) else u

    def class_of(self, layer: str) -> LayerClass:
        self.index(layer)
        return LayerClass(self.partition[layer])

    def group_of(self, layer: str) -> OGroup:
        self.index(layer)
        return self.groups[layer]

    def subgroup_of(self, layer: str) -> Optional[Subgroup]:
        self.index(layer)
        return self.subgroups.get(layer)

    def layers_of(self, layer_class: LayerClass) -> List[str]:
        return [u for u in self.skeleton if self.partition.get(u) == layer_class]

    def covering_pairs(self) -> List[Tuple[str, str]]:
        return list(zip(self.skeleton, self.skeleton[1:]))

    def transition(self, u: str, v: str) -> Hom:
        """
        The transition u -> v: the identity for u = v, otherwise the
        composition of the consecutive steps from u up to v
        """
        i, j = self.index(u), self.index(v)
        if i > j:
            raise LayerOrderError(f"{u} is above {v} in the skeleton")
        key = (u, v)
        if key not in self._transitions:
            hom: Hom = Identity(self.groups[u])
            for a, b in zip(self.skeleton[i:j], self.skeleton[i + 1:j + 1]):
                hom = hom_compose(self.steps[(a, b)], hom)
            self._transitions[key] = hom
        return self._transitions[key]

    def bunch_type(self) -> BunchType:
        return _TYPE_OF_CLASS[self.class_of(self.least)]

    def is_finite(self) -> bool:
        return all(self.groups[u].is_trivial() for u in self.skeleton)

    def validate(self, samples: Optional[int] = None, seed: Optional[int] = None):
        return BunchValidator(self, samples=samples, seed=seed).validate()

    def full_clean(self, samples: Optional[int] = None) -> None:
        """
        Raise one ValidationError listing every violation
        """
        report = self.validate(samples=samples)
        if not report.ok:
            raise ValidationError([str(v) for v in report.violations])

    def to_json(self) -> Dict[str, Any]:
        return {
            "skeleton": list(self.skeleton),
            "partition": {u: self.partition[u].value for u in self.skeleton},
            "groups": {u: self.groups[u].to_json() for u in self.skeleton},
            "subgroups": {
                u: self.subgroups[u].to_json()
                for u in self.skeleton
                if u in self.subgroups
            },
            "steps": {
                f"{u}->{v}": self.steps[(u, v)].to_json()
                for u, v in self.covering_pairs()
                if (u, v) in self.steps
            },
        }

    def __str__(self) -> str:
        classes = ", ".join(f"{u}:{self.partition[u].value}" for u in self.skeleton)
        return f"Bunch({classes})"


def make_bunch(
    skeleton,
    partition: Mapping[str, Any],
    groups: Mapping[str, OGroup],
    subgroups: Optional[Mapping[str, Subgroup]] = None,
    steps: Optional[Mapping[Tuple[str, str], Hom]] = None,
) -> Bunch:
    return Bunch(
        skeleton=tuple(skeleton),
        partition={u: LayerClass(c) for u, c in partition.items()},
        groups=dict(groups),
        subgroups=dict(subgroups or {}),
        steps=dict(steps or {}),
    )


def bunch_type(b: Bunch) -> BunchType:
    return b.bunch_type()


def transition(b: Bunch, u: str, v: str) -> Hom:
    return b.transition(u, v)


# Validation


@dataclass
class Violation:
    clause: str
    message: str

    def __str__(self) -> str:
        return f"({self.clause}) {self.message}"


@dataclass
class ClauseCheck:
    clause: str
    method: str  # "structural", "exact" or "sampled"
    detail: str = ""


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)
    checks: List[ClauseCheck] = field(default_factory=list)
    samples: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> List[str]:
        lines = ["ok" if self.ok else "invalid"]
        for check in self.checks:
            detail = f" ({check.detail})" if check.detail else ""
            lines.append(f"  {check.clause}: {check.method}{detail}")
        for violation in self.violations:
            lines.append(f"  violation {violation}")
        return lines


class BunchValidator(SamplingMixin):
    """
    Checks the skeleton, partition, (D1), (D2), (G1), (G2) and (G3). Each
    validate_* method raises ValidationError; validate() collects them
    """

    def __init__(self, bunch: Bunch, samples: Optional[int] = None, seed=None) -> None:
        self.bunch = bunch
        self.samples = samples
        self.seed = seed
        self.report = ValidationReport()

    def validate(self) -> ValidationReport:
        self.report.samples = self.get_samples()
        structure = [
            self.validate_skeleton,
            self.validate_partition,
            self.validate_groups,
            self.validate_subgroups,
            self.validate_steps,
        ]
        for check in structure:
            self._run(check)
        if not self.report.ok:
            # the clauses below need a structurally complete bunch
            return self.report

        for check in [
            self.validate_subgroup_index,
            self.validate_g1,
            self.validate_homs,
            self.validate_d1,
            self.validate_d2,
            self.validate_g2,
            self.validate_g3,
        ]:
            self._run(check)

        logger.debug("validated %s: %d violations", self.bunch, len(self.report.violations))
        return self.report

    def _run(self, check) -> None:
        clause = check.__name__.replace("validate_", "").upper()
        try:
            check()
        except ValidationError as e:
            for message in e.messages:
                self.report.violations.append(Violation(clause, message))

    def _record(self, clause: str, method: str, detail: str = "") -> None:
        self.report.checks.append(ClauseCheck(clause, method, detail))

    def validate_skeleton(self) -> None:
        skeleton = self.bunch.skeleton
        errors = []
        if not skeleton:
            errors.append("the skeleton is empty")
        if len(set(skeleton)) != len(skeleton):
            errors.append("skeleton labels are not distinct")
        for label in skeleton:
            if not isinstance(label, str) or not label or ":" in label or "->" in label:
                errors.append(f"invalid layer label {label!r}")
        if errors:
            raise ValidationError(errors)

    def validate_partition(self) -> None:
        b = self.bunch
        errors = [f"layer {u} has no class" for u in b.skeleton if u not in b.partition]
        errors += [f"{u} is not a skeleton layer" for u in b.partition if u not in b.skeleton]
        if errors:
            raise ValidationError(errors)

    def validate_groups(self) -> None:
        b = self.bunch
        errors = [f"layer {u} has no group" for u in b.skeleton if u not in b.groups]
        if errors:
            raise ValidationError(errors)

    def validate_subgroups(self) -> None:
        b = self.bunch
        errors = []
        for u in b.layers_of(LayerClass.I):
            if u not in b.subgroups:
                errors.append(f"I-layer {u} has no subgroup")
            elif b.subgroups[u].ambient != b.groups.get(u):
                errors.append(f"subgroup of {u} does not live in its layer group")
        if errors:
            raise ValidationError(errors)

    def validate_subgroup_index(self) -> None:
        b = self.bunch
        extra = [u for u in b.subgroups if b.partition.get(u) != LayerClass.I]
        if extra:
            raise ValidationError(
                [f"subgroups are indexed by I-layers only, {u} is not one" for u in extra]
            )

    def validate_steps(self) -> None:
        b = self.bunch
        errors = []
        pairs = b.covering_pairs()
        for u, v in pairs:
            step = b.steps.get((u, v))
            if step is None:
                errors.append(f"missing step {u}->{v}")
            elif step.source != b.groups.get(u) or step.target != b.groups.get(v):
                errors.append(f"step {u}->{v} is not a map {b.groups.get(u)} -> {b.groups.get(v)}")
        for pair in b.steps:
            if pair not in pairs:
                errors.append(f"{pair[0]}->{pair[1]} is not a covering pair")
        if errors:
            raise ValidationError(errors)

    def validate_g1(self) -> None:
        b = self.bunch
        self._record("G1", "structural")
        extra = [u for u in b.layers_of(LayerClass.O) if u != b.least]
        if extra:
            raise ValidationError(
                [f"only the least layer may be in the O class, not {u}" for u in extra]
            )

    def validate_homs(self) -> None:
        errors = []
        for (u, v), step in self.bunch.steps.items():
            report = hom_check(step, self.get_samples())
            if not report.passed:
                errors.append(f"step {u}->{v} is not an o-homomorphism: {report.failures[0]}")
        self._record("HOMS", "sampled", f"{self.get_samples()} pairs per step")
        if errors:
            raise ValidationError(errors)

    def validate_d1(self) -> None:
        # transition(u, u) is built as the identity
        self._record("D1", "structural", "identity by construction")

    def validate_d2(self) -> None:
        b = self.bunch
        errors = []
        skeleton = b.skeleton
        for i, u in enumerate(skeleton):
            elements = self.prefix(b.groups[u].elements())
            for j in range(i, len(skeleton)):
                for k in range(j, len(skeleton)):
                    v, w = skeleton[j], skeleton[k]
                    direct = b.transition(u, w)
                    first, second = b.transition(u, v), b.transition(v, w)
                    for x in elements:
                        if direct(x) != second(first(x)):
                            errors.append(
                                f"transition {u}->{w} differs from {v}->{w} after {u}->{v} "
                                f"at {b.groups[u].format(x)}"
                            )
                            break
        self._record("D2", "sampled", "composed on demand, re-verified on samples")
        if errors:
            raise ValidationError(errors)

    def validate_g2(self) -> None:
        b = self.bunch
        errors = []
        for u in b.layers_of(LayerClass.J):
            group = b.groups[u]
            if group.is_trivial() or not group.is_discrete():
                errors.append(f"G_{u} must be discrete, {group} has no covers")
                continue
            below = group.cover_down(group.unit())
            for v in b.skeleton[b.index(u) + 1:]:
                hom = b.transition(u, v)
                if hom(group.unit()) != hom(below):
                    errors.append(
                        f"transition {u}->{v} separates the unit of G_{u} from its lower cover"
                    )
        self._record("G2", "exact", "discreteness structural, unit cover evaluated")
        if errors:
            raise ValidationError(errors)

    def validate_g3(self) -> None:
        b = self.bunch
        errors = []
        methods = set()
        for v in b.layers_of(LayerClass.I):
            subgroup = b.subgroups[v]
            for u in b.skeleton[: b.index(v)]:
                hom = b.transition(u, v)
                if subgroup.is_whole() or hom.is_constant():
                    methods.add("structural")
                    continue
                methods.add("sampled")
                for x in self.prefix(b.groups[u].elements()):
                    image = hom(x)
                    if not subgroup.member(image):
                        errors.append(
                            f"transition {u}->{v} maps {b.groups[u].format(x)} to "
                            f"{b.groups[v].format(image)} outside H_{v}"
                        )
                        break
        self._record("G3", "+".join(sorted(methods)) or "structural")
        if errors:
            raise ValidationError(errors)


def validate(b: Bunch, samples: Optional[int] = None, seed=None) -> ValidationReport:
    return b.validate(samples=samples, seed=seed)


# Serialization


def _line_of(text: str, key: str) -> Optional[int]:
    needle = json.dumps(key)
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def parse_bunch(text: str) -> Bunch:
    """
    Parse a bunch document. Rejects documents that are not structurally
    complete; the algebraic clauses are left to validate()
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno) from e

    if not isinstance(document, dict):
        raise ParseError("a bunch document is a JSON object", line=1)

    def fail(message: str, field_name: str, key: str = None) -> ParseError:
        return ParseError(message, line=_line_of(text, key or field_name), field=field_name)

    for name in ("skeleton", "partition", "groups", "subgroups", "steps"):
        if name not in document:
            if name == "subgroups":
                document[name] = {}
                continue
            raise fail(f"missing field {name!r}", name)
        if name != "skeleton" and not isinstance(document[name], dict):
            raise fail(f"{name} must be a JSON object", name)

    skeleton = document["skeleton"]
    if not isinstance(skeleton, list) or not skeleton:
        raise fail("skeleton must be a nonempty list of layer names", "skeleton")
    for label in skeleton:
        if not isinstance(label, str) or not label or ":" in label or "->" in label:
            raise fail(f"invalid layer label {label!r}", "skeleton")
    if len(set(skeleton)) != len(skeleton):
        raise fail("skeleton labels must be distinct", "skeleton")

    partition = {}
    for u in skeleton:
        value = document["partition"].get(u)
        if value not in ("O", "J", "I"):
            raise fail(f"class of {u} must be one of O, J, I", f"partition.{u}", u)
        partition[u] = LayerClass(value)

    groups = {}
    for u in skeleton:
        if u not in document["groups"]:
            raise fail(f"layer {u} has no group", f"groups.{u}", "groups")
        try:
            groups[u] = parse_group(document["groups"][u], f"groups.{u}")
        except ParseError as e:
            e.line = _line_of(text, "groups")
            raise

    subgroups = {}
    for u in skeleton:
        if partition[u] is LayerClass.I:
            if u not in document["subgroups"]:
                raise fail(f"I-layer {u} has no subgroup", f"subgroups.{u}", "subgroups")
            try:
                subgroups[u] = parse_subgroup(
                    document["subgroups"][u], groups[u], f"subgroups.{u}"
                )
            except ParseError as e:
                e.line = _line_of(text, "subgroups")
                raise
        elif u in document["subgroups"]:
            raise fail(f"{u} is not an I-layer", f"subgroups.{u}", "subgroups")

    steps = {}
    pairs = list(zip(skeleton, skeleton[1:]))
    raw_steps = document["steps"]
    for key in raw_steps:
        u, sep, v = key.partition("->")
        if not sep or (u, v) not in pairs:
            raise fail(f"{key!r} is not a covering pair", f"steps.{key}", key)
    for u, v in pairs:
        key = f"{u}->{v}"
        if key not in raw_steps:
            raise fail(f"missing step {key}", f"steps.{key}", "steps")
        try:
            steps[(u, v)] = parse_hom(raw_steps[key], groups[u], groups[v], f"steps.{key}")
        except ParseError as e:
            e.line = _line_of(text, key)
            raise

    return make_bunch(skeleton, partition, groups, subgroups, steps)


def serialize_bunch(b: Bunch) -> str:
    return json.dumps(b.to_json(), indent=2) + "\n"


# Random valid bunches

_DISCRETE_GROUPS = [Int(), Lex(Int(), Int()), Lex(Rat(), Int())]
_GROUPS = [Trivial(), Int(), Rat(), Lex(Int(), Int()), Lex(Int(), Rat()), Lex(Rat(), Int())]


def _subgroup_choices(group: OGroup) -> List[Subgroup]:
    choices: List[Subgroup] = [Whole(group)]
    if group == Int():
        choices += [IntMultiples(group, 2), IntMultiples(group, 3)]
    elif group == Rat():
        choices.append(IntInRat(group))
    elif isinstance(group, Lex) and not group.left.is_trivial():
        choices.append(FirstZero(group))
    return choices


def candidate_homs(source: OGroup, target: OGroup) -> Iterator[Hom]:
    """
    Every DSL hom source -> target with small parameters
    """
    yield UnitMap(source, target)
    if source == target:
        yield Identity(source)
    if source == Int() and target == Int():
        for k in (2, 3, 6):
            yield ScaleInt(k)
    if source == Int() and target == Rat():
        yield IntToRat()
        yield Compose(IntToRat(), ScaleInt(2))
    if isinstance(target, Lex) and target.left == source:
        yield InjectFirst(source, target)
        if source == Int():
            yield Compose(InjectFirst(source, target), ScaleInt(2))
    if isinstance(source, Lex) and source.left == target:
        yield ProjectFirst(source, target)


def lands_in(hom: Hom, subgroup: Subgroup) -> bool:
    """
    Structural sufficient condition for the image of hom to lie in subgroup
    """
    if subgroup.is_whole() or hom.is_constant():
        return True
    if isinstance(subgroup, IntMultiples) and isinstance(hom, ScaleInt):
        return hom.k % subgroup.k == 0
    if isinstance(subgroup, IntInRat):
        return isinstance(hom, IntToRat) or (
            isinstance(hom, Compose) and isinstance(hom.outer, IntToRat)
        )
    return False


def random_bunch(seed: int, max_layers: int = 4) -> Bunch:
    """
    A seeded random valid bunch over the constructor families
    """
    rng = random.Random(seed)
    size = rng.randint(1, max_layers)
    skeleton = ["t"] + [f"u{i}" for i in range(1, size)]

    partition, groups, subgroups = {}, {}, {}
    for u in skeleton:
        if u == "t":
            layer_class = rng.choice([LayerClass.O, LayerClass.J, LayerClass.I])
        else:
            layer_class = rng.choice([LayerClass.J, LayerClass.I, LayerClass.I])
        partition[u] = layer_class
        if layer_class is LayerClass.J:
            groups[u] = rng.choice(_DISCRETE_GROUPS)
        else:
            groups[u] = rng.choice(_GROUPS)
        if layer_class is LayerClass.I:
            subgroups[u] = rng.choice(_subgroup_choices(groups[u]))

    steps = {}
    for u, v in zip(skeleton, skeleton[1:]):
        candidates = list(candidate_homs(groups[u], groups[v]))
        if partition[u] is LayerClass.J:
            below = groups[u].cover_down(groups[u].unit())
            candidates = [h for h in candidates if h(below) == groups[v].unit()]
        if v in subgroups:
            candidates = [h for h in candidates if lands_in(h, subgroups[v])]
        steps[(u, v)] = rng.choice(candidates)

    return make_bunch(skeleton, partition, groups, subgroups, steps)
