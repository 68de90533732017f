"""
Embeddings between chains, described layer by layer and checked through the
layer groups.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional

from layerlat.algebra.bunch import Bunch, LayerClass
from layerlat.algebra.chain import Chain, ChainElement
from layerlat.algebra.ogroup import Hom, Identity, parse_hom
from layerlat.exceptions import ParseError, TypeMismatch
from layerlat.mixins import SamplingMixin

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmbeddingSpec:
    skeleton_map: Mapping[str, str]
    layer_maps: Mapping[str, Hom]

    def element_map(self, x: ChainElement) -> ChainElement:
        return ChainElement(self.skeleton_map[x.layer], self.layer_maps[x.layer](x.g), x.dotted)

    def __call__(self, x: ChainElement) -> ChainElement:
        return self.element_map(x)

    def to_json(self) -> Dict[str, Any]:
        return {
            "skeleton_map": dict(self.skeleton_map),
            "layer_maps": {u: h.to_json() for u, h in self.layer_maps.items()},
        }


def identity_embedding(source: Bunch, target: Optional[Bunch] = None) -> EmbeddingSpec:
    """
    The coordinatewise identity of a bunch into an extension of it
    """
    target = target or source
    return EmbeddingSpec(
        skeleton_map={u: u for u in source.skeleton},
        layer_maps={u: Identity(source.groups[u], target.groups[u]) for u in source.skeleton},
    )


def parse_embedding(text: str, source: Bunch, target: Bunch) -> EmbeddingSpec:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno) from e
    if not isinstance(document, dict):
        raise ParseError("an embedding document is a JSON object", line=1)

    skeleton_map = document.get("skeleton_map")
    layer_maps = document.get("layer_maps")
    if not isinstance(skeleton_map, dict):
        raise ParseError("skeleton_map must be a JSON object", field="skeleton_map")
    if not isinstance(layer_maps, dict):
        raise ParseError("layer_maps must be a JSON object", field="layer_maps")

    homs = {}
    for u in source.skeleton:
        v = skeleton_map.get(u)
        if v not in target.skeleton:
            raise ParseError(f"{u} must map to a target layer, got {v!r}", field=f"skeleton_map.{u}")
        if u not in layer_maps:
            raise ParseError(f"missing layer map for {u}", field=f"layer_maps.{u}")
        homs[u] = parse_hom(layer_maps[u], source.groups[u], target.groups[v], f"layer_maps.{u}")
    return EmbeddingSpec(skeleton_map={u: skeleton_map[u] for u in source.skeleton}, layer_maps=homs)


def serialize_embedding(e: EmbeddingSpec) -> str:
    return json.dumps(e.to_json(), indent=2) + "\n"


@dataclass
class ClauseResult:
    clause: str
    method: str = "proved"
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        line = f"{self.clause}: {status} ({self.method})"
        if self.failures:
            line += f" {self.failures[0]}"
        return line


@dataclass
class EmbeddingReport:
    clauses: List[ClauseResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(clause.passed for clause in self.clauses)

    def clause(self, name: str) -> ClauseResult:
        return next(c for c in self.clauses if c.clause == name)

    def lines(self) -> List[str]:
        return ["ok" if self.ok else "not an embedding"] + [f"  {c}" for c in self.clauses]


class EmbeddingChecker(SamplingMixin):
    """
    Decides whether a layerwise description induces an embedding: the
    skeleton map is an order embedding preserving the least layer and the
    classes, the layer maps commute with the transitions, respect the layer
    subgroups and the covers of the units of J-layers. The induced element
    map is checked directly as well.
    """

    def __init__(self, source: Chain, target: Chain, spec: EmbeddingSpec, samples=None, seed=None) -> None:
        self.source = source
        self.target = target
        self.spec = spec
        self.samples = samples
        self.seed = seed
        self.report = EmbeddingReport()

    @property
    def exhaustive(self) -> bool:
        return self.source.is_finite() and self.target.is_finite()

    @property
    def method(self) -> str:
        return "proved" if self.exhaustive else "tested"

    def check_types(self) -> None:
        src, dst = self.source.bunch, self.target.bunch
        for u in src.skeleton:
            v = self.spec.skeleton_map.get(u)
            if v is None or v not in dst.skeleton:
                raise TypeMismatch(f"layer {u} is not mapped to a target layer")
            hom = self.spec.layer_maps.get(u)
            if hom is None or hom.source != src.groups[u] or hom.target != dst.groups[v]:
                raise TypeMismatch(f"the layer map of {u} is not a map G_{u} -> G'_{v}")

    def group_samples(self, layer: str) -> List[Any]:
        return self.prefix(self.source.bunch.groups[layer].elements())

    def run(self) -> EmbeddingReport:
        self.check_types()
        order_preserving = self.check_e1()
        if order_preserving:
            self.check_e2a()
        else:
            self.report.clauses.append(
                ClauseResult("E2a", self.method, ["not checked, the skeleton map is not monotone"])
            )
        self.check_e2b()
        self.check_e2c()
        self.check_elements()
        logger.debug("embedding check: %s", [str(c) for c in self.report.clauses])
        return self.report

    def check_e1(self) -> bool:
        src, dst = self.source.bunch, self.target.bunch
        phi = self.spec.skeleton_map
        result = ClauseResult("E1", "proved")
        monotone = True
        for u, v in zip(src.skeleton, src.skeleton[1:]):
            if not dst.lt(phi[u], phi[v]):
                monotone = False
                result.failures.append(f"{u} < {v} but {phi[u]} is not below {phi[v]}")
        if phi[src.least] != dst.least:
            result.failures.append(f"the least layer {src.least} maps to {phi[src.least]}")
        for u in src.skeleton:
            if src.class_of(u) is not dst.class_of(phi[u]):
                result.failures.append(
                    f"{u} is in {src.class_of(u).value} but {phi[u]} is in {dst.class_of(phi[u]).value}"
                )
        self.report.clauses.append(result)
        return monotone

    def check_e2a(self) -> None:
        src, dst = self.source.bunch, self.target.bunch
        phi, iota = self.spec.skeleton_map, self.spec.layer_maps
        result = ClauseResult("E2a", self.method)
        for i, u in enumerate(src.skeleton):
            samples = self.group_samples(u)
            for v in src.skeleton[i + 1:]:
                there = dst.transition(phi[u], phi[v])
                for g in samples:
                    if iota[v](src.transition(u, v)(g)) != there(iota[u](g)):
                        result.failures.append(
                            f"the square {u} -> {v} does not commute at {src.groups[u].format(g)}"
                        )
                        break
        self.report.clauses.append(result)

    def check_e2b(self) -> None:
        src, dst = self.source.bunch, self.target.bunch
        phi, iota = self.spec.skeleton_map, self.spec.layer_maps
        result = ClauseResult("E2b", self.method)
        for u in src.layers_of(LayerClass.I):
            if dst.class_of(phi[u]) is not LayerClass.I:
                continue
            for g in self.group_samples(u):
                if src.subgroups[u].member(g) != dst.subgroups[phi[u]].member(iota[u](g)):
                    result.failures.append(
                        f"membership in H_{u} is not preserved at {src.groups[u].format(g)}"
                    )
                    break
        self.report.clauses.append(result)

    def check_e2c(self) -> None:
        src, dst = self.source.bunch, self.target.bunch
        phi, iota = self.spec.skeleton_map, self.spec.layer_maps
        result = ClauseResult("E2c", "proved")
        for u in src.layers_of(LayerClass.J):
            group, image_group = src.groups[u], dst.groups[phi[u]]
            below = group.cover_down(group.unit())
            expected = image_group.cover_down(image_group.unit())
            if expected is None or iota[u](below) != expected:
                result.failures.append(
                    f"the lower cover of the unit of G_{u} does not map to the lower cover of the unit"
                )
        self.report.clauses.append(result)

    def check_elements(self) -> None:
        src, dst = self.source, self.target
        result = ClauseResult("elements")
        if src.is_finite():
            population = src.elements()
        else:
            population = self.prefix(src.enumerate_elements(), self.get_window())
        pairs, covered = self.sample_tuples(population, 2)
        result.method = "proved" if self.exhaustive and covered else "tested"

        for x in population:
            try:
                dst.check(self.spec(x))
            except TypeMismatch as e:
                result.failures.append(f"{src.format_element(x)} has no image: {e}")
        if result.failures:
            self.report.clauses.append(result)
            return

        t, f = src.constants()
        if (self.spec(t), self.spec(f)) != dst.constants():
            result.failures.append("the constants are not preserved")
        for x, y in pairs:
            ex, ey = self.spec(x), self.spec(y)
            if src.elem_compare(x, y) is not dst.elem_compare(ex, ey):
                result.failures.append(
                    f"order differs on {src.format_element(x)}, {src.format_element(y)}"
                )
            if self.spec(src.mul(x, y)) != dst.mul(ex, ey):
                result.failures.append(
                    f"product differs on {src.format_element(x)}, {src.format_element(y)}"
                )
            if len(result.failures) > 10:
                break
        self.report.clauses.append(result)


def check_embedding(
    src: Chain,
    dst: Chain,
    e: EmbeddingSpec,
    samples: Optional[int] = None,
    seed=None,
) -> EmbeddingReport:
    return EmbeddingChecker(src, dst, e, samples=samples, seed=seed).run()
