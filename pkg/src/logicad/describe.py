"""Rendering scenes into logic-focused texts, and parsing texts back.

The built-in renderer stands in for a frozen image-to-text model: one text
per scene, produced from the scenario's template grammar.  Capture
conditions degrade the text linguistically (dropped optional clauses,
corrupted decorative adjectives, paraphrase variation) without ever
changing the logical label of the underlying scene.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .scenes import Condition, Scene
from .templates import TemplateGrammar, get_grammar

DEFAULT_SYSTEM_TOKENS = ("<|im_start|>", "<|im_end|>", "<s>", "</s>",
                         "[INST]", "[/INST]", "assistant:", "Assistant:")

# Above this the renderer samples uniformly among paraphrase variants;
# below it only the canonical variant is used.
PARAPHRASE_THRESHOLD = 0.01


class NormalizeError(ValueError):
    """Text is empty after cleanup."""


class ParseError(ValueError):
    """Text does not match any template skeleton of the scenario."""


class RenderError(ValueError):
    """Scene attributes fall outside the template grammar."""


@dataclass(frozen=True)
class DescriptionText:
    text: str
    source: str = "rendered"  # "rendered" | "external"
    scene_ref: Optional[str] = None

    def __post_init__(self):
        if not self.text:
            raise NormalizeError("empty description text")


@dataclass(frozen=True)
class AttributeRecord:
    scenario_id: str
    skeleton: str                       # "<variant>/<clause mask>"
    slots: tuple[tuple[str, str], ...]  # (name, value) in template order

    def slot_map(self) -> dict[str, str]:
        return dict(self.slots)


@dataclass(frozen=True)
class RenderConfig:
    paraphrase_temperature: float = 0.0
    omission_prob: float = 0.0
    corruption_prob: float = 0.0

    def __post_init__(self):
        if self.paraphrase_temperature < 0:
            raise ValueError("paraphrase_temperature must be >= 0")
        for name in ("omission_prob", "corruption_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


# Per-condition renderer degradation.  White BG is clean by definition;
# background clutter corrupts decorative adjectives and varies phrasing;
# low light / blur additionally drop optional clauses.  These values are
# benchmark configuration, not measured ground truth.
CONDITION_RENDER_DEFAULTS: dict[Condition, RenderConfig] = {
    Condition.WHITE_BG: RenderConfig(0.0, 0.0, 0.0),
    Condition.CABLE_BG: RenderConfig(0.9, 0.0, 0.05),
    Condition.MESH_BG: RenderConfig(0.9, 0.0, 0.05),
    Condition.LOWLIGHT_CD: RenderConfig(0.9, 0.15, 0.05),
    Condition.BLURRY_CD: RenderConfig(0.9, 0.15, 0.05),
}


def normalize(raw: str, system_tokens: tuple[str, ...] = DEFAULT_SYSTEM_TOKENS) -> DescriptionText:
    """Strip system-token markers, collapse whitespace runs, trim the ends."""
    text = raw
    for marker in system_tokens:
        text = text.replace(marker, " ")
    text = re.sub(r"\s+", " ", text).strip()
    if not text:
        raise NormalizeError("text is empty after cleanup")
    return DescriptionText(text)


def render_record(grammar: TemplateGrammar, skeleton: str,
                  slots: dict[str, str]) -> str:
    """Deterministically rebuild the text for a (skeleton, slots) pair."""
    variant, mask = grammar.decode_skeleton(skeleton)
    parts = []
    for clause, included in zip(grammar.variants[variant], mask):
        if included:
            parts.append(clause.template.format(**slots))
    return " ".join(parts)


def render(scene: Scene, cfg: RenderConfig, rng: np.random.Generator,
           grammar: Optional[TemplateGrammar] = None) -> DescriptionText:
    """Render one scene into one text under the given degradation config."""
    grammar = grammar or get_grammar(scene.scenario_id)
    slots = grammar.scene_slots(scene)
    for name, value in slots.items():
        slot_def = grammar.slots.get(name)
        if slot_def is None or value not in slot_def.values:
            raise RenderError(
                f"value {value!r} for slot {name!r} is outside the "
                f"{grammar.scenario_id} template grammar"
            )
    if cfg.paraphrase_temperature > PARAPHRASE_THRESHOLD:
        variant = int(rng.integers(len(grammar.variants)))
    else:
        variant = 0
    mask = tuple(
        (not clause.optional) or (cfg.omission_prob == 0.0)
        or (rng.random() >= cfg.omission_prob)
        for clause in grammar.variants[variant]
    )
    if cfg.corruption_prob > 0.0:
        for name, slot_def in grammar.slots.items():
            if slot_def.corruptible and rng.random() < cfg.corruption_prob:
                others = [v for v in slot_def.values if v != slots[name]]
                slots[name] = others[int(rng.integers(len(others)))]
    text = render_record(grammar, grammar.skeleton_id(variant, mask), slots)
    return DescriptionText(text, source="rendered")


def _variant_regex(grammar: TemplateGrammar, variant: int,
                   mask: tuple[bool, ...]) -> re.Pattern:
    pieces = []
    for clause, included in zip(grammar.variants[variant], mask):
        if not included:
            continue
        pattern = ""
        pos = 0
        for m in re.finditer(r"\{(\w+)\}", clause.template):
            pattern += re.escape(clause.template[pos:m.start()])
            slot = grammar.slots[m.group(1)]
            alternation = "|".join(re.escape(v) for v in
                                   sorted(slot.values, key=len, reverse=True))
            pattern += f"(?P<{slot.name}>{alternation})"
            pos = m.end()
        pattern += re.escape(clause.template[pos:])
        pieces.append(pattern)
    return re.compile("".join([re.escape(" ").join(pieces)]))


def parse(text: DescriptionText | str, grammar: TemplateGrammar) -> AttributeRecord:
    """Parse a rendered text back into its (skeleton, slots) record.

    Tries every paraphrase variant and clause-inclusion mask; an
    unparseable text raises rather than yielding a partial record.
    """
    raw = text.text if isinstance(text, DescriptionText) else text
    if not raw:
        raise ParseError("cannot parse an empty text")
    for variant in range(len(grammar.variants)):
        for mask in grammar.clause_masks(variant):
            regex = _variant_regex(grammar, variant, mask)
            m = regex.fullmatch(raw)
            if m is None:
                continue
            skeleton = grammar.skeleton_id(variant, mask)
            ordered = grammar.slots_in_skeleton(skeleton)
            return AttributeRecord(
                scenario_id=grammar.scenario_id,
                skeleton=skeleton,
                slots=tuple((name, m.group(name)) for name in ordered),
            )
    raise ParseError(
        f"text does not match any {grammar.scenario_id} template: {raw!r}"
    )


@dataclass(frozen=True)
class DecodeParams:
    temperature: float = 0.001
    top_p: float = 0.95
    max_tokens: int = 512


class BackendError(RuntimeError):
    """External description backend unreachable or returned nothing usable."""


class FileDescriptionBackend:
    """Pre-generated descriptions keyed by image reference.

    The file uses the description line format
    ``{task_id, sample_id, split, label, text}``; lookups key on sample_id.
    """

    def __init__(self, path):
        self._records: dict[str, str] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                self._records[rec["sample_id"]] = rec["text"]

    def describe(self, image_ref: str, prompt: str, decode: DecodeParams) -> str:
        try:
            return self._records[image_ref]
        except KeyError:
            raise BackendError(f"no stored description for {image_ref!r}") from None


class HttpDescriptionBackend:
    """Chat-style request/response endpoint.

    Request body: ``{prompt, image_ref, temperature, top_p, max_tokens}``;
    response body: ``{text}``.
    """

    def __init__(self, url: str, timeout: float = 30.0):
        self.url = url
        self.timeout = timeout

    def describe(self, image_ref: str, prompt: str, decode: DecodeParams) -> str:
        import requests

        try:
            resp = requests.post(
                self.url,
                json={
                    "prompt": prompt,
                    "image_ref": image_ref,
                    "temperature": decode.temperature,
                    "top_p": decode.top_p,
                    "max_tokens": decode.max_tokens,
                },
                timeout=self.timeout,
            )
            resp.raise_for_status()
        except Exception as exc:  # noqa: BLE001 - network failures vary widely
            raise BackendError(f"description backend unreachable: {exc}") from exc
        return resp.json().get("text", "")


@dataclass(frozen=True)
class ExternalDescription:
    description: DescriptionText
    truncated: bool = False


def fetch_external(image_ref: str, prompt: str, decode: DecodeParams,
                   backend) -> ExternalDescription:
    """Fetch a description from a configured backend and normalize it.

    A response longer than ``decode.max_tokens`` whitespace tokens is
    truncated and flagged.  The caller is responsible for using the same
    prompt string for train and test splits.
    """
    raw = backend.describe(image_ref, prompt, decode)
    if not raw or not raw.strip():
        raise BackendError(f"backend returned an empty description for {image_ref!r}")
    normalized = normalize(raw)
    tokens = normalized.text.split(" ")
    truncated = len(tokens) > decode.max_tokens
    if truncated:
        normalized = DescriptionText(" ".join(tokens[: decode.max_tokens]),
                                     source="external")
    else:
        normalized = DescriptionText(normalized.text, source="external")
    return ExternalDescription(normalized, truncated=truncated)


def description_record(task_id: str, sample_id: str, split: str, label: str,
                       text: str) -> str:
    """One line of the description file."""
    return json.dumps(
        {"task_id": task_id, "sample_id": sample_id, "split": split,
         "label": label, "text": text},
        sort_keys=True,
    )


def parse_description_record(line: str) -> dict:
    return json.loads(line)
