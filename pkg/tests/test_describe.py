"""Renderer and parser: canonical texts, degradation behavior, round-trips."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logicad.describe import (
    CONDITION_RENDER_DEFAULTS,
    DescriptionText,
    NormalizeError,
    ParseError,
    RenderConfig,
    RenderError,
    normalize,
    parse,
    render,
    render_record,
)
from logicad.scenarios import SCENARIOS, get_scenario
from logicad.scenes import Condition, ObjectInstance, Scene, sample_normal
from logicad.templates import get_grammar

CLEAN = RenderConfig(0.0, 0.0, 0.0)


def _canonical_scene(scenario_id):
    return sample_normal(get_scenario(scenario_id), np.random.default_rng(0))


def test_canonical_fruits_text_is_pinned():
    text = render(_canonical_scene("fruits"), CLEAN, np.random.default_rng(0))
    assert text.text == (
        "There are three oranges and two kiwis. "
        "The total number of items is five."
    )


def test_clean_rendering_is_deterministic_and_variant_zero():
    for scenario_id in sorted(SCENARIOS):
        scene = _canonical_scene(scenario_id)
        texts = {
            render(scene, CLEAN, np.random.default_rng(seed)).text
            for seed in range(5)
        }
        assert len(texts) == 1
        record = parse(texts.pop(), get_grammar(scenario_id))
        variant, mask = get_grammar(scenario_id).decode_skeleton(record.skeleton)
        assert variant == 0
        assert all(mask)


def test_same_rng_stream_gives_identical_noisy_renders():
    scene = _canonical_scene("tools")
    cfg = CONDITION_RENDER_DEFAULTS[Condition.LOWLIGHT_CD]
    a = render(scene, cfg, np.random.default_rng(123)).text
    b = render(scene, cfg, np.random.default_rng(123)).text
    assert a == b


def test_omission_frequency_matches_configured_probability():
    scene = _canonical_scene("sticks")
    grammar = get_grammar("sticks")
    cfg = RenderConfig(0.0, 0.3, 0.0)
    optional_idx = [i for i, c in enumerate(grammar.variants[0]) if c.optional]
    assert optional_idx, "sticks variant 0 needs optional clauses for this check"
    included = np.zeros(len(optional_idx))
    n = 1000
    rng = np.random.default_rng(99)
    for _ in range(n):
        record = parse(render(scene, cfg, rng).text, grammar)
        _, mask = grammar.decode_skeleton(record.skeleton)
        for j, i in enumerate(optional_idx):
            included[j] += mask[i]
    for frequency in included / n:
        assert abs(frequency - 0.7) < 0.05


def test_certain_corruption_flips_every_decorative_slot():
    scene = _canonical_scene("sticks")
    grammar = get_grammar("sticks")
    clean_slots = grammar.scene_slots(scene)
    text = render(scene, RenderConfig(0.0, 0.0, 1.0), np.random.default_rng(5))
    record = parse(text.text, grammar)
    seen_corruptible = 0
    for name, value in record.slots:
        slot = grammar.slots[name]
        if slot.corruptible:
            seen_corruptible += 1
            assert value != clean_slots[name]
        else:
            assert value == clean_slots[name]
    assert seen_corruptible > 0


def test_zero_corruption_never_touches_slots():
    scene = _canonical_scene("cookies")
    grammar = get_grammar("cookies")
    clean_slots = grammar.scene_slots(scene)
    rng = np.random.default_rng(17)
    for _ in range(20):
        record = parse(render(scene, RenderConfig(0.9, 0.2, 0.0), rng).text,
                       grammar)
        for name, value in record.slots:
            assert value == clean_slots[name]


def test_paraphrase_temperature_selects_variants():
    scene = _canonical_scene("balls")
    grammar = get_grammar("balls")
    rng = np.random.default_rng(31)
    variants = set()
    for _ in range(60):
        record = parse(render(scene, RenderConfig(0.9, 0.0, 0.0), rng).text,
                       grammar)
        variants.add(grammar.decode_skeleton(record.skeleton)[0])
    assert variants == set(range(len(grammar.variants)))
    # at/below the threshold only the canonical phrasing appears
    for _ in range(10):
        record = parse(render(scene, RenderConfig(0.01, 0.0, 0.0), rng).text,
                       grammar)
        assert grammar.decode_skeleton(record.skeleton)[0] == 0


@pytest.mark.parametrize("scenario_id", sorted(SCENARIOS))
def test_round_trip_identity_on_every_skeleton(scenario_id):
    grammar = get_grammar(scenario_id)
    slots = grammar.scene_slots(_canonical_scene(scenario_id))
    for variant in range(len(grammar.variants)):
        for mask in grammar.clause_masks(variant):
            skeleton = grammar.skeleton_id(variant, mask)
            text = render_record(grammar, skeleton, slots)
            record = parse(text, grammar)
            assert record.skeleton == skeleton
            assert render_record(grammar, record.skeleton,
                                 record.slot_map()) == text


@pytest.mark.parametrize("scenario_id", sorted(SCENARIOS))
def test_round_trip_identity_under_noisy_rendering(scenario_id):
    spec = get_scenario(scenario_id)
    grammar = get_grammar(scenario_id)
    rng = np.random.default_rng(47)
    cfg = RenderConfig(0.9, 0.2, 0.3)
    for _ in range(25):
        text = render(sample_normal(spec, rng), cfg, rng, grammar).text
        record = parse(text, grammar)
        assert render_record(grammar, record.skeleton, record.slot_map()) == text


def test_render_rejects_values_outside_the_grammar():
    objects = (
        ObjectInstance("tape", color="purple", length_class="long", order_index=0),
        ObjectInstance("tape", color="red", length_class="short", order_index=1),
    )
    with pytest.raises(RenderError):
        render(Scene("tapes", objects), CLEAN, np.random.default_rng(0))


def test_parse_rejects_unmatched_text():
    grammar = get_grammar("fruits")
    with pytest.raises(ParseError):
        parse("There are plenty of fruits on the tray.", grammar)
    with pytest.raises(ParseError):
        parse("", grammar)


def test_normalize_strips_system_tokens_and_whitespace():
    raw = "<|im_start|>assistant: There are  three oranges.\n\n<|im_end|> "
    assert normalize(raw).text == "There are three oranges."


def test_normalize_rejects_empty_results():
    with pytest.raises(NormalizeError):
        normalize("  <s>  </s> ")
    with pytest.raises(NormalizeError):
        DescriptionText("")


@given(st.text(alphabet=st.characters(codec="ascii"), min_size=0, max_size=80))
@settings(max_examples=100, deadline=None)
def test_normalize_is_idempotent(raw):
    try:
        once = normalize(raw)
    except NormalizeError:
        return
    assert normalize(once.text).text == once.text


def test_render_config_validates_probabilities():
    with pytest.raises(ValueError):
        RenderConfig(omission_prob=1.5)
    with pytest.raises(ValueError):
        RenderConfig(corruption_prob=-0.1)
    with pytest.raises(ValueError):
        RenderConfig(paraphrase_temperature=-1.0)


def test_condition_defaults_keep_white_background_clean():
    cfg = CONDITION_RENDER_DEFAULTS[Condition.WHITE_BG]
    assert (cfg.paraphrase_temperature, cfg.omission_prob, cfg.corruption_prob) \
        == (0.0, 0.0, 0.0)
    for condition in (Condition.CABLE_BG, Condition.MESH_BG):
        cfg = CONDITION_RENDER_DEFAULTS[condition]
        assert cfg.omission_prob == 0.0
        assert cfg.corruption_prob == 0.05
    for condition in (Condition.LOWLIGHT_CD, Condition.BLURRY_CD):
        cfg = CONDITION_RENDER_DEFAULTS[condition]
        assert cfg.omission_prob == 0.15
        assert cfg.corruption_prob == 0.05
