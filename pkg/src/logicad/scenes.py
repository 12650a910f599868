"""Core scene model: objects, scenario rule specs, classification and sampling.

A scene is a structured set of object instances plus optional scenario
context (e.g. the text label the rope color has to match).  Each scenario
declares two rule aspects; a scene is normal iff both rule predicates hold.
Capture conditions only affect rendering downstream, never the logical
state.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

MUTATION_ATTEMPTS = 1000


class Aspect(enum.Enum):
    QUANTITY = "quantity"
    LENGTH = "length"
    TYPE = "type"
    PLACEMENT = "placement"
    RELATION = "relation"


class Condition(enum.Enum):
    WHITE_BG = "white_bg"
    CABLE_BG = "cable_bg"
    MESH_BG = "mesh_bg"
    LOWLIGHT_CD = "lowlight_cd"
    BLURRY_CD = "blurry_cd"


class Label(enum.Enum):
    NORMAL = "normal"
    SINGLE_A = "singleA"
    SINGLE_B = "singleB"
    DUAL = "dual"


ANOMALY_LABELS = (Label.SINGLE_A, Label.SINGLE_B, Label.DUAL)


class SceneError(ValueError):
    """Malformed scene or unknown scenario."""


class GenerationError(RuntimeError):
    """Targeted anomaly could not be realized within the attempt bound."""


@dataclass(frozen=True)
class ObjectInstance:
    category: str
    color: Optional[str] = None
    length_class: Optional[str] = None
    region: Optional[str] = None
    order_index: Optional[int] = None


@dataclass(frozen=True)
class Scene:
    scenario_id: str
    objects: tuple[ObjectInstance, ...]
    context: tuple[tuple[str, str], ...] = ()
    condition: Condition = Condition.WHITE_BG

    def context_value(self, key: str) -> str:
        for k, v in self.context:
            if k == key:
                return v
        raise KeyError(key)

    def with_condition(self, condition: Condition) -> "Scene":
        return Scene(self.scenario_id, self.objects, self.context, condition)


@dataclass(frozen=True)
class ScenarioSpec:
    """One scenario: its aspect pair, vocabularies, layout and rule predicates.

    ``rule_a``/``rule_b`` return True when the rule is satisfied.  They are
    total over well-formed scenes; the empty-scene degenerate case is
    handled centrally in :func:`check_rules` (both rules count as violated).
    ``mutators`` map each aspect to a single rule-breaking edit used by
    targeted anomaly sampling.
    """

    scenario_id: str
    aspects: tuple[Aspect, Aspect]
    vocab: dict[str, tuple[str, ...]]
    layout: tuple[str, ...]
    rule_a: Callable[[Scene], bool]
    rule_b: Callable[[Scene], bool]
    sampler: Callable[[np.random.Generator], Scene]
    mutators: dict[Aspect, Callable[[Scene, np.random.Generator], Scene]] = field(
        default_factory=dict
    )


def validate_scene(scene: Scene, spec: ScenarioSpec) -> None:
    if scene.scenario_id != spec.scenario_id:
        raise SceneError(
            f"scene scenario {scene.scenario_id!r} does not match spec "
            f"{spec.scenario_id!r}"
        )
    categories = spec.vocab.get("category", ())
    colors = spec.vocab.get("color", ())
    lengths = spec.vocab.get("length", ())
    seen_order: set[int] = set()
    for obj in scene.objects:
        if obj.category not in categories:
            raise SceneError(f"unknown category {obj.category!r} in {spec.scenario_id}")
        if obj.color is not None and colors and obj.color not in colors:
            raise SceneError(f"unknown color {obj.color!r} in {spec.scenario_id}")
        if obj.length_class is not None and lengths and obj.length_class not in lengths:
            raise SceneError(
                f"unknown length class {obj.length_class!r} in {spec.scenario_id}"
            )
        if obj.region is not None and obj.region not in spec.layout:
            raise SceneError(f"unknown region {obj.region!r} in {spec.scenario_id}")
        if obj.order_index is not None:
            key = (obj.region, obj.order_index)
            if key in seen_order:
                raise SceneError(f"duplicate order index {key} in {spec.scenario_id}")
            seen_order.add(key)


def check_rules(scene: Scene, spec: ScenarioSpec) -> set[Aspect]:
    """Return the subset of the spec's two aspects whose rule the scene violates."""
    validate_scene(scene, spec)
    if not scene.objects:
        # An empty tray satisfies no manufacturing rule.
        return set(spec.aspects)
    violated = set()
    if not spec.rule_a(scene):
        violated.add(spec.aspects[0])
    if not spec.rule_b(scene):
        violated.add(spec.aspects[1])
    return violated


def classify(scene: Scene, spec: ScenarioSpec) -> Label:
    violated = check_rules(scene, spec)
    if not violated:
        return Label.NORMAL
    if violated == {spec.aspects[0]}:
        return Label.SINGLE_A
    if violated == {spec.aspects[1]}:
        return Label.SINGLE_B
    return Label.DUAL


def sample_normal(spec: ScenarioSpec, rng: np.random.Generator) -> Scene:
    return spec.sampler(rng)


def sample_anomaly(
    spec: ScenarioSpec, target: Label, rng: np.random.Generator
) -> Scene:
    """Sample a scene whose classification is exactly ``target``.

    Constructive mutation of a normal scene followed by a classify check;
    rejection-sampled because a second edit can accidentally repair or
    extend the first one.
    """
    if target == Label.NORMAL:
        raise ValueError("target must be an anomaly label")
    if target == Label.SINGLE_A:
        aspects = (spec.aspects[0],)
    elif target == Label.SINGLE_B:
        aspects = (spec.aspects[1],)
    else:
        aspects = spec.aspects
    for _ in range(MUTATION_ATTEMPTS):
        scene = spec.sampler(rng)
        for aspect in aspects:
            scene = spec.mutators[aspect](scene, rng)
        if classify(scene, spec) == target:
            return scene
    raise GenerationError(
        f"could not realize {target.value} for {spec.scenario_id} "
        f"within {MUTATION_ATTEMPTS} attempts"
    )


@dataclass(frozen=True)
class SplitCounts:
    train_normal: int
    test_normal: int
    single_a: int
    single_b: int
    dual: int

    @property
    def test_anomaly(self) -> int:
        return self.single_a + self.single_b + self.dual

    def validate(self) -> None:
        for name in ("train_normal", "test_normal", "single_a", "single_b", "dual"):
            if getattr(self, name) < 0:
                raise ValueError(f"negative count for {name}")


@dataclass(frozen=True)
class TaskSample:
    sample_id: str
    split: str  # "train" | "test"
    label: Label
    scene: Scene


@dataclass(frozen=True)
class TaskScenes:
    task_id: str
    scenario_id: str
    condition: Condition
    samples: tuple[TaskSample, ...]

    def split(self, split: str, *labels: Label) -> list[TaskSample]:
        wanted = set(labels) if labels else None
        return [
            s
            for s in self.samples
            if s.split == split and (wanted is None or s.label in wanted)
        ]


def task_id_for(scenario_id: str, condition: Condition) -> str:
    return f"{scenario_id}-{condition.value}"


def build_task(
    spec: ScenarioSpec,
    condition: Condition,
    counts: SplitCounts,
    seed: int,
) -> TaskScenes:
    """Generate the labelled scene collection for one (scenario, condition) task."""
    counts.validate()
    rng = np.random.default_rng(seed)
    samples: list[TaskSample] = []

    def add(split: str, label: Label, scene: Scene, index: int) -> None:
        sample_id = f"{split}-{label.value}-{index:04d}"
        samples.append(TaskSample(sample_id, split, label, scene.with_condition(condition)))

    for i in range(counts.train_normal):
        add("train", Label.NORMAL, sample_normal(spec, rng), i)
    for i in range(counts.test_normal):
        add("test", Label.NORMAL, sample_normal(spec, rng), i)
    for label, n in (
        (Label.SINGLE_A, counts.single_a),
        (Label.SINGLE_B, counts.single_b),
        (Label.DUAL, counts.dual),
    ):
        for i in range(n):
            add("test", label, sample_anomaly(spec, label, rng), i)
    return TaskScenes(
        task_id_for(spec.scenario_id, condition), spec.scenario_id, condition,
        tuple(samples),
    )


def _object_to_json(obj: ObjectInstance) -> dict:
    out: dict = {"category": obj.category}
    if obj.color is not None:
        out["color"] = obj.color
    if obj.length_class is not None:
        out["length_class"] = obj.length_class
    if obj.region is not None:
        out["region"] = obj.region
    if obj.order_index is not None:
        out["order_index"] = obj.order_index
    return out


def _object_from_json(data: dict) -> ObjectInstance:
    return ObjectInstance(
        category=data["category"],
        color=data.get("color"),
        length_class=data.get("length_class"),
        region=data.get("region"),
        order_index=data.get("order_index"),
    )


def scene_record(task_id: str, split: str, label: Label, scene: Scene) -> str:
    """One line of the scene file (field names are part of the contract)."""
    payload = {
        "task_id": task_id,
        "scenario": scene.scenario_id,
        "condition": scene.condition.value,
        "split": split,
        "label": label.value,
        "scene": {
            "objects": [_object_to_json(o) for o in scene.objects],
            "context": {k: v for k, v in scene.context},
        },
    }
    return json.dumps(payload, sort_keys=True)


def parse_scene_record(line: str) -> tuple[str, str, Label, Scene]:
    data = json.loads(line)
    scene = Scene(
        scenario_id=data["scenario"],
        objects=tuple(_object_from_json(o) for o in data["scene"]["objects"]),
        context=tuple(sorted(data["scene"]["context"].items())),
        condition=Condition(data["condition"]),
    )
    return data["task_id"], data["split"], Label(data["label"]), scene
