"""Contradiction-based negative synthesis via replacement-only slot edits.

One negative per positive: parse the positive, replace one or two editable
slot values with pool values that genuinely contradict them, and re-render
on the identical skeleton.  ``validate_negative`` checks the constraints
mechanically (structure preserved, replacement-only, at least one real
contradiction, token budget respected).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .scenes import Aspect
from .describe import AttributeRecord, DescriptionText, ParseError, parse, render_record
from .scenarios import NUMBER_WORDS, word_number
from .templates import EQUIVALENT_TOKENS, SlotDef, TemplateGrammar

# "at least one" contradiction per the synthesis constraints; a second edit
# with small probability adds hardness without changing structure.
EDIT_COUNT_PROBS = ((1, 0.7), (2, 0.3))
COUNT_EDIT_WINDOW = 2  # count replacements stay within +/- this of the truth


class SynthesisError(ValueError):
    """No contradiction is possible for any slot of the positive."""


@dataclass(frozen=True)
class ContradictionEdit:
    slot_name: str
    old_value: str
    new_value: str
    aspect: Optional[Aspect]


@dataclass(frozen=True)
class NegativeValidation:
    skeleton_preserved: bool
    replacement_only: bool
    contradiction_present: bool
    token_budget_ok: bool
    differing_slots: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return (self.skeleton_preserved and self.replacement_only
                and self.contradiction_present and self.token_budget_ok)


def _is_count_slot(slot: SlotDef) -> bool:
    return all(v in NUMBER_WORDS for v in slot.values)


def contradiction_pool(slot: SlotDef, current: str) -> list[str]:
    """Values that genuinely contradict ``current`` for this slot."""
    equivalents = EQUIVALENT_TOKENS.get(current, frozenset())
    pool = [v for v in slot.values if v != current and v not in equivalents]
    if _is_count_slot(slot) and current in NUMBER_WORDS:
        truth = word_number(current)
        pool = [v for v in pool if abs(word_number(v) - truth) <= COUNT_EDIT_WINDOW]
    return pool


def synthesize_negative(
    pos: DescriptionText | str,
    grammar: TemplateGrammar,
    rng: np.random.Generator,
) -> tuple[DescriptionText, list[ContradictionEdit]]:
    """Build one contradictory negative text for a positive description."""
    record = parse(pos, grammar)
    slot_map = dict(record.slots)
    editable = [
        name for name, _ in record.slots
        if grammar.slots[name].editable and contradiction_pool(
            grammar.slots[name], slot_map[name])
    ]
    if not editable:
        raise SynthesisError(
            f"no editable slot with a non-empty contradiction pool in "
            f"{grammar.scenario_id} positive"
        )
    u = rng.random()
    n_edits = 1
    acc = 0.0
    for count, prob in EDIT_COUNT_PROBS:
        acc += prob
        if u < acc:
            n_edits = count
            break
    n_edits = min(n_edits, len(editable))
    chosen = list(rng.choice(len(editable), size=n_edits, replace=False))
    edits = []
    for idx in sorted(int(i) for i in chosen):
        name = editable[idx]
        slot = grammar.slots[name]
        pool = contradiction_pool(slot, slot_map[name])
        new_value = pool[int(rng.integers(len(pool)))]
        edits.append(ContradictionEdit(name, slot_map[name], new_value, slot.aspect))
        slot_map[name] = new_value
    text = render_record(grammar, record.skeleton, slot_map)
    return DescriptionText(text, source="rendered"), edits


def _token_count(text: str) -> int:
    return len(text.split())


def validate_negative(
    pos: DescriptionText | str,
    neg: DescriptionText | str,
    grammar: TemplateGrammar,
    token_budget: float = 0.10,
) -> NegativeValidation:
    """Check the synthesis constraints; failures land in the report, not errors."""
    pos_raw = pos.text if isinstance(pos, DescriptionText) else pos
    neg_raw = neg.text if isinstance(neg, DescriptionText) else neg
    try:
        pos_rec = parse(pos_raw, grammar)
        neg_rec = parse(neg_raw, grammar)
    except ParseError:
        return NegativeValidation(False, False, False, False)

    skeleton_ok = pos_rec.skeleton == neg_rec.skeleton
    pos_names = [n for n, _ in pos_rec.slots]
    neg_names = [n for n, _ in neg_rec.slots]
    replacement_only = pos_names == neg_names

    differing = []
    contradiction = False
    if replacement_only:
        pos_map = dict(pos_rec.slots)
        neg_map = dict(neg_rec.slots)
        for name in pos_names:
            if pos_map[name] != neg_map[name]:
                differing.append(name)
                if neg_map[name] in contradiction_pool(
                    grammar.slots[name], pos_map[name]
                ):
                    contradiction = True

    n_pos = _token_count(pos_raw)
    n_neg = _token_count(neg_raw)
    token_ok = abs(n_neg - n_pos) <= token_budget * n_pos

    return NegativeValidation(
        skeleton_preserved=skeleton_ok,
        replacement_only=replacement_only,
        contradiction_present=bool(differing) and contradiction,
        token_budget_ok=token_ok,
        differing_slots=tuple(differing),
    )


def pair_record(task_id: str, sample_id: str, pos_text: str, neg_text: str,
                edits: list[ContradictionEdit]) -> str:
    """One line of the negative-pair file."""
    import json

    return json.dumps(
        {
            "task_id": task_id,
            "sample_id": sample_id,
            "pos_text": pos_text,
            "neg_text": neg_text,
            "edits": [
                {
                    "slot": e.slot_name,
                    "old": e.old_value,
                    "new": e.new_value,
                    "aspect": e.aspect.value if e.aspect else None,
                }
                for e in edits
            ],
        },
        sort_keys=True,
    )


def parse_pair_record(line: str) -> dict:
    import json

    return json.loads(line)
