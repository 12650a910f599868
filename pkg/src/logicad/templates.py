"""Slot-grammar templates that turn scenes into logic-focused texts.

Every scenario ships one grammar with three paraphrase variants.  A variant
is a sequence of clauses; a clause is a format string over named slots plus
an "optional" flag (optional clauses can be dropped by condition-dependent
omission).  Slot values are single tokens, so a filled template can be
parsed back exactly by matching slot vocabularies.

The skeleton of a text is ``"{variant}/{clause mask}"``; re-rendering a
parsed (skeleton, slots) pair reproduces the text byte for byte.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Optional

from .scenes import Aspect, Scene
from . import scenarios
from .scenarios import SCENARIO_VIEWS, number_word


@dataclass(frozen=True)
class SlotDef:
    name: str
    values: tuple[str, ...]
    aspect: Optional[Aspect] = None
    editable: bool = True        # may carry a contradiction edit
    corruptible: bool = False    # decorative adjective, target of corruption
    default: Optional[str] = None

    def __post_init__(self):
        if self.default is None:
            object.__setattr__(self, "default", self.values[0])


@dataclass(frozen=True)
class Clause:
    template: str
    optional: bool = False

    def slot_names(self) -> list[str]:
        return re.findall(r"\{(\w+)\}", self.template)


@dataclass(frozen=True)
class TemplateGrammar:
    scenario_id: str
    slots: dict[str, SlotDef]
    variants: tuple[tuple[Clause, ...], ...]
    scene_slots: Callable[[Scene], dict[str, str]]

    def skeleton_id(self, variant: int, mask: tuple[bool, ...]) -> str:
        return f"{variant}/" + "".join("1" if m else "0" for m in mask)

    def decode_skeleton(self, skeleton: str) -> tuple[int, tuple[bool, ...]]:
        variant_s, mask_s = skeleton.split("/")
        return int(variant_s), tuple(ch == "1" for ch in mask_s)

    def clause_masks(self, variant: int):
        """All clause-inclusion masks (mandatory clauses always included)."""
        choices = [
            (True, False) if clause.optional else (True,)
            for clause in self.variants[variant]
        ]
        return itertools.product(*choices)

    def slots_in_skeleton(self, skeleton: str) -> list[str]:
        variant, mask = self.decode_skeleton(skeleton)
        names: list[str] = []
        for clause, included in zip(self.variants[variant], mask):
            if included:
                names.extend(clause.slot_names())
        return names


_NUM = tuple(number_word(n) for n in range(0, 13))
_LOW_NUM = ("zero", "one", "two")

# Small table of tokens that are logically equivalent and therefore never
# count as a contradiction (kept for external-backend texts; the built-in
# vocabularies avoid synonyms).
EQUIVALENT_TOKENS: dict[str, frozenset[str]] = {
    "kiwis": frozenset({"kiwifruits"}),
    "kiwifruits": frozenset({"kiwis"}),
}


def _plural_fruit(category: str) -> str:
    return {"orange": "oranges", "kiwi": "kiwis", "apple": "apples",
            "lemon": "lemons", "banana": "bananas"}[category]


_FRUIT_PLURALS = tuple(_plural_fruit(c) for c in scenarios._FRUIT_TYPES)


def _decor(name: str, values: tuple[str, ...]) -> SlotDef:
    """Decorative adjective slot: corruption target, never a contradiction edit."""
    return SlotDef(name, values, editable=False, corruptible=True)


def _fruits_slots(scene: Scene) -> dict[str, str]:
    view = SCENARIO_VIEWS["fruits"](scene)
    return {
        "count_a": number_word(view["count_a"]),
        "type_a": _plural_fruit(view["cat_a"]),
        "count_b": number_word(view["count_b"]),
        "type_b": _plural_fruit(view["cat_b"]),
        "total": number_word(view["count_a"] + view["count_b"]),
        "decor_bowl": "ceramic",
        "decor_towel": "striped",
        "decor_board": "bamboo",
        "decor_knife": "steel",
        "decor_peeler": "plastic",
        "decor_scale": "digital",
        "decor_basket": "wicker",
        "decor_net": "mesh",
    }


FRUITS_GRAMMAR = TemplateGrammar(
    scenario_id="fruits",
    slots={
        "count_a": SlotDef("count_a", _NUM, Aspect.QUANTITY),
        "type_a": SlotDef("type_a", _FRUIT_PLURALS, Aspect.TYPE),
        "count_b": SlotDef("count_b", _NUM, Aspect.QUANTITY),
        "type_b": SlotDef("type_b", _FRUIT_PLURALS, Aspect.TYPE),
        "total": SlotDef("total", _NUM, Aspect.QUANTITY),
        "decor_bowl": _decor("decor_bowl", ("ceramic", "white", "wooden",
                                            "deep", "wide", "glazed")),
        "decor_towel": _decor("decor_towel", ("striped", "folded", "damp",
                                              "cotton", "checkered", "gray")),
        "decor_board": _decor("decor_board", ("bamboo", "scratched", "oiled",
                                              "thick", "pale", "worn")),
        "decor_knife": _decor("decor_knife", ("steel", "small", "serrated",
                                              "sharp", "dull", "clean")),
        "decor_peeler": _decor("decor_peeler", ("plastic", "swivel", "green",
                                                "cheap", "sturdy", "wet")),
        "decor_scale": _decor("decor_scale", ("digital", "kitchen", "round",
                                              "zeroed", "compact", "old")),
        "decor_basket": _decor("decor_basket", ("wicker", "woven", "lidded",
                                                "brown", "airy", "squat")),
        "decor_net": _decor("decor_net", ("mesh", "produce", "knotted",
                                          "orange", "fine", "stretchy")),
    },
    variants=(
        # The first variant is the clean canonical phrasing; background props
        # only surface in the alternates used under degraded conditions.
        (
            Clause("There are {count_a} {type_a} and {count_b} {type_b}."),
            Clause("The total number of items is {total}.", optional=True),
        ),
        (
            Clause("The tray holds {count_a} {type_a} and {count_b} {type_b}."),
            Clause("Altogether there are {total} items.", optional=True),
            Clause("A {decor_bowl} bowl sits on a {decor_towel} towel behind "
                   "the tray, near a {decor_peeler} peeler and a "
                   "{decor_scale} scale."),
            Clause("A {decor_board} board and a {decor_knife} knife rest "
                   "beside it.", optional=True),
            Clause("A {decor_basket} basket and a {decor_net} net hang "
                   "above."),
        ),
        (
            Clause("I can see {count_a} {type_a} together with {count_b} {type_b}."),
            Clause("In total the item count is {total}.", optional=True),
            Clause("Behind them a {decor_bowl} bowl rests on a {decor_towel} "
                   "towel, close to a {decor_peeler} peeler and a "
                   "{decor_scale} scale."),
            Clause("Next to it lie a {decor_board} board and a {decor_knife} "
                   "knife.", optional=True),
            Clause("A {decor_basket} basket and a {decor_net} net hang "
                   "above."),
        ),
    ),
    scene_slots=_fruits_slots,
)


_STICK_DECOR = ("wooden", "plastic", "painted", "polished", "smooth", "matte")
_LEN3 = ("long", "short", "similar")


def _sticks_slots(scene: Scene) -> dict[str, str]:
    view = SCENARIO_VIEWS["sticks"](scene)
    return {
        "count_blue": number_word(view["count_blue"]),
        "count_red": number_word(view["count_red"]),
        "len_blue": view["len_blue"],
        "len_red": view["len_red"],
        "decor_sticks": "wooden",
        "decor_tray": "metal",
        "decor_marker": "black",
        "decor_cloth": "cotton",
        "decor_clip": "bent",
        "decor_band": "rubber",
        "decor_tag": "lime",
        "decor_ring": "brass",
        "decor_pin": "push",
    }


STICKS_GRAMMAR = TemplateGrammar(
    scenario_id="sticks",
    slots={
        "count_blue": SlotDef("count_blue", _NUM, Aspect.QUANTITY),
        "count_red": SlotDef("count_red", _NUM, Aspect.QUANTITY),
        "len_blue": SlotDef("len_blue", _LEN3, Aspect.LENGTH),
        "len_red": SlotDef("len_red", _LEN3, Aspect.LENGTH),
        "decor_sticks": _decor("decor_sticks", _STICK_DECOR),
        "decor_tray": _decor("decor_tray", ("metal", "white", "gray",
                                            "shallow", "wide", "round")),
        "decor_marker": _decor("decor_marker", ("black", "silver", "yellow",
                                                "square", "plastic", "folded")),
        "decor_cloth": _decor("decor_cloth", ("cotton", "checked", "plain",
                                              "striped", "pale", "coarse")),
        "decor_clip": _decor("decor_clip", ("bent", "small", "shiny",
                                            "steel", "flat", "dark")),
        "decor_band": _decor("decor_band", ("rubber", "elastic", "paper",
                                            "twisted", "broad", "loose")),
        "decor_tag": _decor("decor_tag", ("lime", "tied", "printed",
                                          "curled", "small", "torn")),
        "decor_ring": _decor("decor_ring", ("brass", "split", "keyed",
                                            "thin", "rusted", "wide")),
        "decor_pin": _decor("decor_pin", ("push", "safety", "bright",
                                          "long", "blunt", "glass")),
    },
    variants=(
        (
            Clause("There are {count_blue} blue {decor_sticks} sticks and "
                   "{count_red} red sticks."),
            Clause("The blue sticks are {len_blue} and the red sticks are "
                   "{len_red}.", optional=True),
            Clause("The sticks rest on a {decor_tray} tray next to a "
                   "{decor_marker} marker, a {decor_band} band, and a "
                   "{decor_tag} tag."),
            Clause("A {decor_cloth} cloth and a {decor_clip} clip lie "
                   "nearby.", optional=True),
            Clause("A {decor_ring} ring and a {decor_pin} pin complete the "
                   "kit."),
        ),
        (
            Clause("The image shows {count_blue} blue {decor_sticks} sticks "
                   "with {count_red} red sticks."),
            Clause("By relative length the blue sticks are {len_blue} while "
                   "the red sticks are {len_red}.", optional=True),
            Clause("They rest on a {decor_tray} tray beside a {decor_marker} "
                   "marker, a {decor_band} band, and a {decor_tag} tag."),
            Clause("Nearby lie a {decor_cloth} cloth and a {decor_clip} "
                   "clip.", optional=True),
            Clause("A {decor_ring} ring and a {decor_pin} pin complete the "
                   "kit."),
        ),
        (
            Clause("A set of {count_blue} blue {decor_sticks} sticks and "
                   "{count_red} red sticks is present."),
            Clause("In comparison the blue sticks are {len_blue} and the red "
                   "sticks are {len_red}.", optional=True),
            Clause("Beneath them sits a {decor_tray} tray with a "
                   "{decor_marker} marker, a {decor_band} band, and a "
                   "{decor_tag} tag alongside."),
            Clause("Off to the side sit a {decor_cloth} cloth and a "
                   "{decor_clip} clip.", optional=True),
            Clause("A {decor_ring} ring and a {decor_pin} pin complete the "
                   "kit."),
        ),
    ),
    scene_slots=_sticks_slots,
)


_TOOL_DECOR = ("steel", "shiny", "small", "heavy", "standard", "gray")
_BINS_LMR = ("left", "middle", "right")


def _tools_slots(scene: Scene) -> dict[str, str]:
    view = SCENARIO_VIEWS["tools"](scene)
    total = sum(view[f"count_{c}"] for c in ("bolt", "washer", "nut"))
    return {
        "count_bolt": number_word(view["count_bolt"]),
        "region_bolt": view["region_bolt"],
        "count_washer": number_word(view["count_washer"]),
        "region_washer": view["region_washer"],
        "count_nut": number_word(view["count_nut"]),
        "region_nut": view["region_nut"],
        "total_tools": number_word(total),
        "decor_tools": "steel",
        "decor_bench": "scuffed",
        "decor_lamp": "angled",
        "decor_rag": "oily",
        "decor_box": "red",
        "decor_vise": "blue",
        "decor_chart": "wall",
        "decor_drawer": "shallow",
        "decor_hammer": "claw",
    }


TOOLS_GRAMMAR = TemplateGrammar(
    scenario_id="tools",
    slots={
        "count_bolt": SlotDef("count_bolt", _NUM, Aspect.QUANTITY),
        "region_bolt": SlotDef("region_bolt", _BINS_LMR, Aspect.PLACEMENT),
        "count_washer": SlotDef("count_washer", _NUM, Aspect.QUANTITY),
        "region_washer": SlotDef("region_washer", _BINS_LMR, Aspect.PLACEMENT),
        "count_nut": SlotDef("count_nut", _NUM, Aspect.QUANTITY),
        "region_nut": SlotDef("region_nut", _BINS_LMR, Aspect.PLACEMENT),
        "total_tools": SlotDef("total_tools", _NUM, Aspect.QUANTITY),
        "decor_tools": _decor("decor_tools", _TOOL_DECOR),
        "decor_bench": _decor("decor_bench", ("scuffed", "clean", "broad",
                                              "pine", "painted", "low")),
        "decor_lamp": _decor("decor_lamp", ("angled", "bright", "dim",
                                            "tall", "clamped", "old")),
        "decor_rag": _decor("decor_rag", ("oily", "torn", "folded",
                                          "blue", "rough", "damp")),
        "decor_box": _decor("decor_box", ("red", "dented", "latched",
                                          "stacked", "empty", "heavy")),
        "decor_vise": _decor("decor_vise", ("blue", "mounted", "greased",
                                            "open", "large", "iron")),
        "decor_chart": _decor("decor_chart", ("wall", "torn", "laminated",
                                              "faded", "taped", "metric")),
        "decor_drawer": _decor("decor_drawer", ("shallow", "locked", "oiled",
                                                "wide", "lower", "wooden")),
        "decor_hammer": _decor("decor_hammer", ("claw", "rubber", "worn",
                                                "small", "balanced", "black")),
    },
    variants=(
        (
            Clause("There are {count_bolt} {decor_tools} bolts in the "
                   "{region_bolt} bin, {count_washer} washers in the "
                   "{region_washer} bin, and {count_nut} nuts in the "
                   "{region_nut} bin."),
            Clause("In total there are {total_tools} tools on the desk.",
                   optional=True),
            Clause("The bins sit on a {decor_bench} bench under a "
                   "{decor_lamp} lamp, by a {decor_vise} vise and a "
                   "{decor_chart} chart."),
            Clause("A {decor_rag} rag hangs over a {decor_box} box at the "
                   "edge.", optional=True),
            Clause("A {decor_drawer} drawer below stores a {decor_hammer} "
                   "hammer."),
        ),
        (
            Clause("The {region_bolt} bin holds {count_bolt} {decor_tools} "
                   "bolts, the {region_washer} bin holds {count_washer} "
                   "washers, and the {region_nut} bin holds {count_nut} nuts."),
            Clause("The desk carries {total_tools} tools altogether.",
                   optional=True),
            Clause("Everything stands on a {decor_bench} bench lit by a "
                   "{decor_lamp} lamp, with a {decor_vise} vise and a "
                   "{decor_chart} chart close by."),
            Clause("At the edge a {decor_rag} rag covers a {decor_box} "
                   "box.", optional=True),
            Clause("A {decor_drawer} drawer below stores a {decor_hammer} "
                   "hammer."),
        ),
        (
            Clause("I can see {count_bolt} {decor_tools} bolts in the "
                   "{region_bolt} bin, {count_washer} washers in the "
                   "{region_washer} bin, plus {count_nut} nuts in the "
                   "{region_nut} bin."),
            Clause("Counting everything there are {total_tools} tools.",
                   optional=True),
            Clause("Below the bins runs a {decor_bench} bench with a "
                   "{decor_lamp} lamp above, plus a {decor_vise} vise and a "
                   "{decor_chart} chart."),
            Clause("Beside them a {decor_rag} rag rests on a {decor_box} "
                   "box.", optional=True),
            Clause("A {decor_drawer} drawer below stores a {decor_hammer} "
                   "hammer."),
        ),
    ),
    scene_slots=_tools_slots,
)


_COOKIE_DECOR = ("baked", "sugar", "crunchy", "glazed", "plain", "soft")


def _cookies_slots(scene: Scene) -> dict[str, str]:
    view = SCENARIO_VIEWS["cookies"](scene)
    return {
        "count_square": number_word(view["count_square"]),
        "color_square": view["color_square"],
        "count_round": number_word(view["count_round"]),
        "color_round": view["color_round"],
        "decor_cookies": "baked",
        "decor_table": "marble",
        "decor_napkin": "paper",
        "decor_jar": "glass",
        "decor_mug": "ceramic",
        "decor_tray2": "silver",
        "decor_cloth2": "lace",
        "decor_teapot": "iron",
        "decor_doily": "crochet",
    }


COOKIES_GRAMMAR = TemplateGrammar(
    scenario_id="cookies",
    slots={
        "count_square": SlotDef("count_square", _NUM, Aspect.QUANTITY),
        "color_square": SlotDef("color_square", scenarios._COOKIE_COLORS,
                                Aspect.RELATION),
        "count_round": SlotDef("count_round", _NUM, Aspect.QUANTITY),
        "color_round": SlotDef("color_round", scenarios._COOKIE_COLORS,
                               Aspect.RELATION),
        "decor_cookies": _decor("decor_cookies", _COOKIE_DECOR),
        "decor_table": _decor("decor_table", ("marble", "tiled", "waxed",
                                              "narrow", "oak", "spotless")),
        "decor_napkin": _decor("decor_napkin", ("paper", "linen", "creased",
                                                "printed", "thin", "bright")),
        "decor_jar": _decor("decor_jar", ("glass", "corked", "tall",
                                          "labeled", "amber", "dusty")),
        "decor_mug": _decor("decor_mug", ("ceramic", "chipped", "green",
                                          "steaming", "plain", "squat")),
        "decor_tray2": _decor("decor_tray2", ("silver", "engraved", "oval",
                                              "polished", "scuffed", "deep")),
        "decor_cloth2": _decor("decor_cloth2", ("lace", "ivory", "pressed",
                                                "floral", "hemmed", "soft")),
        "decor_teapot": _decor("decor_teapot", ("iron", "floral", "warm",
                                                "enamel", "spotted", "short")),
        "decor_doily": _decor("decor_doily", ("crochet", "round", "starched",
                                              "vintage", "cream", "frilly")),
    },
    variants=(
        (
            Clause("There are {count_square} {color_square} cookies on the "
                   "square dish and {count_round} {color_round} cookies on "
                   "the round dish."),
            Clause("The cookies look {decor_cookies}.", optional=True),
            Clause("Both dishes stand on a {decor_table} table beside a "
                   "{decor_napkin} napkin, a {decor_tray2} tray, and a "
                   "{decor_cloth2} cloth."),
            Clause("A {decor_jar} jar and a {decor_mug} mug sit further "
                   "back.", optional=True),
            Clause("A {decor_teapot} teapot waits on a {decor_doily} "
                   "doily."),
        ),
        (
            Clause("The square dish carries {count_square} {color_square} "
                   "cookies while the round dish carries {count_round} "
                   "{color_round} cookies."),
            Clause("All of the cookies appear {decor_cookies}.", optional=True),
            Clause("A {decor_table} table holds the dishes along with a "
                   "{decor_napkin} napkin, a {decor_tray2} tray, and a "
                   "{decor_cloth2} cloth."),
            Clause("Further back stand a {decor_jar} jar and a {decor_mug} "
                   "mug.", optional=True),
            Clause("A {decor_teapot} teapot waits on a {decor_doily} "
                   "doily."),
        ),
        (
            Clause("I can see {count_square} {color_square} cookies on the "
                   "square dish plus {count_round} {color_round} cookies on "
                   "the round dish."),
            Clause("Each cookie seems {decor_cookies}.", optional=True),
            Clause("Under the dishes is a {decor_table} table with a "
                   "{decor_napkin} napkin, a {decor_tray2} tray, and a "
                   "{decor_cloth2} cloth."),
            Clause("Behind them rest a {decor_jar} jar and a {decor_mug} "
                   "mug.", optional=True),
            Clause("A {decor_teapot} teapot waits on a {decor_doily} "
                   "doily."),
        ),
    ),
    scene_slots=_cookies_slots,
)


_TAPE_DECOR = ("adhesive", "glossy", "new", "wide", "narrow", "dusty")


def _tapes_slots(scene: Scene) -> dict[str, str]:
    view = SCENARIO_VIEWS["tapes"](scene)
    return {
        "len_first": view["len_first"],
        "color_first": view["color_first"],
        "len_second": view["len_second"],
        "color_second": view["color_second"],
        "decor_tapes": "adhesive",
        "decor_desk": "walnut",
        "decor_ruler": "clear",
        "decor_pad": "yellow",
        "decor_cup": "tin",
        "decor_stand": "wire",
        "decor_folder": "manila",
        "decor_shade": "green",
        "decor_tin": "biscuit",
    }


TAPES_GRAMMAR = TemplateGrammar(
    scenario_id="tapes",
    slots={
        "len_first": SlotDef("len_first", _LEN3, Aspect.LENGTH),
        "color_first": SlotDef("color_first", scenarios._TAPE_COLORS, Aspect.TYPE),
        "len_second": SlotDef("len_second", _LEN3, Aspect.LENGTH),
        "color_second": SlotDef("color_second", scenarios._TAPE_COLORS,
                                Aspect.TYPE),
        "decor_tapes": _decor("decor_tapes", _TAPE_DECOR),
        "decor_desk": _decor("decor_desk", ("walnut", "laminate", "tidy",
                                            "slim", "corner", "bare")),
        "decor_ruler": _decor("decor_ruler", ("clear", "metal", "bendy",
                                              "marked", "short", "cracked")),
        "decor_pad": _decor("decor_pad", ("yellow", "lined", "spiral",
                                          "thick", "open", "fresh")),
        "decor_cup": _decor("decor_cup", ("tin", "pen", "leaning",
                                          "full", "black", "round")),
        "decor_stand": _decor("decor_stand", ("wire", "angled", "chrome",
                                              "weighted", "bare", "tall")),
        "decor_folder": _decor("decor_folder", ("manila", "stuffed", "crisp",
                                                "labeled", "ragged", "flat")),
        "decor_shade": _decor("decor_shade", ("green", "banker", "domed",
                                              "frosted", "pleated", "dark")),
        "decor_tin": _decor("decor_tin", ("biscuit", "square", "painted",
                                          "rattling", "shut", "shallow")),
    },
    variants=(
        (
            Clause("There is a {len_first} {color_first} tape and a "
                   "{len_second} {color_second} tape on the desk."),
            Clause("Both tapes are {decor_tapes}.", optional=True),
            Clause("The desk itself is {decor_desk} and a {decor_ruler} "
                   "ruler lies across it, next to a {decor_stand} stand and "
                   "a {decor_folder} folder."),
            Clause("A {decor_pad} pad and a {decor_cup} cup occupy the far "
                   "corner.", optional=True),
            Clause("A lamp with a {decor_shade} shade lights a {decor_tin} "
                   "tin."),
        ),
        (
            Clause("The desk shows a {len_first} {color_first} tape next to a "
                   "{len_second} {color_second} tape."),
            Clause("The two tapes look {decor_tapes}.", optional=True),
            Clause("It is a {decor_desk} desk crossed by a {decor_ruler} "
                   "ruler, holding a {decor_stand} stand and a "
                   "{decor_folder} folder too."),
            Clause("In the far corner sit a {decor_pad} pad and a "
                   "{decor_cup} cup.", optional=True),
            Clause("A lamp with a {decor_shade} shade lights a {decor_tin} "
                   "tin."),
        ),
        (
            Clause("A {len_first} {color_first} tape lies beside a "
                   "{len_second} {color_second} tape."),
            Clause("Each tape appears {decor_tapes}.", optional=True),
            Clause("Beneath them stretches a {decor_desk} desk with a "
                   "{decor_ruler} ruler on top, plus a {decor_stand} stand "
                   "and a {decor_folder} folder."),
            Clause("Toward the corner rest a {decor_pad} pad and a "
                   "{decor_cup} cup.", optional=True),
            Clause("A lamp with a {decor_shade} shade lights a {decor_tin} "
                   "tin."),
        ),
    ),
    scene_slots=_tapes_slots,
)


_STATIONERY_DECOR = ("new", "used", "clean", "branded", "cheap", "classic")
_LEN2 = ("long", "short")
_ORDER2 = ("eraser", "pencil")


def _stationery_slots(scene: Scene) -> dict[str, str]:
    view = SCENARIO_VIEWS["stationery"](scene)
    return {k: view[k] for k in (
        "len_left_pencil", "len_left_eraser", "order_left",
        "len_right_pencil", "len_right_eraser", "order_right",
    )} | {
        "decor_stationery": "new",
        "decor_shelf": "white",
        "decor_stapler": "gray",
        "decor_tape": "clear",
        "decor_note": "pink",
        "decor_hook2": "plastic",
        "decor_sign": "printed",
        "decor_pegs": "wooden",
        "decor_tub": "clear",
    }


STATIONERY_GRAMMAR = TemplateGrammar(
    scenario_id="stationery",
    slots={
        "len_left_pencil": SlotDef("len_left_pencil", _LEN2, Aspect.LENGTH),
        "len_left_eraser": SlotDef("len_left_eraser", _LEN2, Aspect.LENGTH),
        "order_left": SlotDef("order_left", _ORDER2, Aspect.PLACEMENT),
        "len_right_pencil": SlotDef("len_right_pencil", _LEN2, Aspect.LENGTH),
        "len_right_eraser": SlotDef("len_right_eraser", _LEN2, Aspect.LENGTH),
        "order_right": SlotDef("order_right", _ORDER2, Aspect.PLACEMENT),
        "decor_stationery": _decor("decor_stationery", _STATIONERY_DECOR),
        "decor_shelf": _decor("decor_shelf", ("white", "steel", "slanted",
                                              "narrow", "high", "dusty")),
        "decor_stapler": _decor("decor_stapler", ("gray", "heavy", "mini",
                                                  "open", "orange", "worn")),
        "decor_tape": _decor("decor_tape", ("clear", "brown", "masking",
                                            "double", "thin", "fresh")),
        "decor_note": _decor("decor_note", ("pink", "sticky", "curled",
                                            "blank", "square", "bright")),
        "decor_hook2": _decor("decor_hook2", ("plastic", "white", "bent",
                                              "screwed", "double", "small")),
        "decor_sign": _decor("decor_sign", ("printed", "handwritten", "taped",
                                            "tilted", "framed", "yellowed")),
        "decor_pegs": _decor("decor_pegs", ("wooden", "spring", "striped",
                                            "mixed", "stubby", "spare")),
        "decor_tub": _decor("decor_tub", ("clear", "stacked", "lidless",
                                          "deep", "cracked", "blue")),
    },
    variants=(
        (
            Clause("The left bin holds a {len_left_pencil} black pencil and a "
                   "{len_left_eraser} blue eraser with the {order_left} "
                   "placed first."),
            Clause("The right bin holds a {len_right_pencil} red pencil and a "
                   "{len_right_eraser} red eraser with the {order_right} "
                   "placed first."),
            Clause("All of the items look {decor_stationery}.", optional=True),
            Clause("Both bins hang from a {decor_shelf} shelf near a "
                   "{decor_stapler} stapler, a {decor_hook2} hook, and a "
                   "{decor_sign} sign."),
            Clause("A roll of {decor_tape} tape and a {decor_note} note sit "
                   "above.", optional=True),
            Clause("Some {decor_pegs} pegs fill a {decor_tub} tub at the "
                   "end."),
        ),
        (
            Clause("In the left bin there is a {len_left_pencil} black pencil "
                   "and a {len_left_eraser} blue eraser, the {order_left} "
                   "coming first."),
            Clause("In the right bin there is a {len_right_pencil} red pencil "
                   "and a {len_right_eraser} red eraser, the {order_right} "
                   "coming first."),
            Clause("Every item appears {decor_stationery}.", optional=True),
            Clause("A {decor_shelf} shelf carries both bins with a "
                   "{decor_stapler} stapler, a {decor_hook2} hook, and a "
                   "{decor_sign} sign alongside."),
            Clause("Above them rest a roll of {decor_tape} tape and a "
                   "{decor_note} note.", optional=True),
            Clause("Some {decor_pegs} pegs fill a {decor_tub} tub at the "
                   "end."),
        ),
        (
            Clause("The left bin contains a {len_left_pencil} black pencil "
                   "plus a {len_left_eraser} blue eraser where the "
                   "{order_left} sits first."),
            Clause("The right bin contains a {len_right_pencil} red pencil "
                   "plus a {len_right_eraser} red eraser where the "
                   "{order_right} sits first."),
            Clause("The items seem {decor_stationery}.", optional=True),
            Clause("Underneath runs a {decor_shelf} shelf that also holds a "
                   "{decor_stapler} stapler, a {decor_hook2} hook, and a "
                   "{decor_sign} sign."),
            Clause("Nearby lie a roll of {decor_tape} tape and a "
                   "{decor_note} note.", optional=True),
            Clause("Some {decor_pegs} pegs fill a {decor_tub} tub at the "
                   "end."),
        ),
    ),
    scene_slots=_stationery_slots,
)


_ROPE_DECOR = ("braided", "coiled", "thick", "thin", "frayed", "waxed")
_ROPE_LEN = ("similar", "longer", "shorter")
_ROPE_LEN_WORD = {"similar": "similar", "long": "longer", "short": "shorter"}


def _ropes_slots(scene: Scene) -> dict[str, str]:
    view = SCENARIO_VIEWS["ropes"](scene)
    return {
        "rope_len": _ROPE_LEN_WORD[view["rope_len"]],
        "rope_color": view["rope_color"],
        "label_color": view["label_color"],
        "decor_ropes": "braided",
        "decor_hook": "brass",
        "decor_board": "cork",
        "decor_bag": "canvas",
        "decor_knot": "loose",
        "decor_shelfr": "metal",
        "decor_bucket": "green",
    }


ROPES_GRAMMAR = TemplateGrammar(
    scenario_id="ropes",
    slots={
        "rope_len": SlotDef("rope_len", _ROPE_LEN, Aspect.LENGTH),
        "rope_color": SlotDef("rope_color", scenarios._ROPE_COLORS,
                              Aspect.RELATION),
        "label_color": SlotDef("label_color", scenarios._ROPE_COLORS,
                               Aspect.RELATION),
        "decor_ropes": _decor("decor_ropes", _ROPE_DECOR),
        "decor_hook": _decor("decor_hook", ("brass", "rusty", "double",
                                            "bolted", "curved", "sturdy")),
        "decor_board": _decor("decor_board", ("cork", "pegged", "framed",
                                              "leaning", "rough", "long")),
        "decor_bag": _decor("decor_bag", ("canvas", "zipped", "bulging",
                                          "khaki", "slack", "patched")),
        "decor_knot": _decor("decor_knot", ("loose", "tight", "double",
                                            "simple", "neat", "tangled")),
        "decor_shelfr": _decor("decor_shelfr", ("metal", "slim", "welded",
                                                "gray", "long", "bare")),
        "decor_bucket": _decor("decor_bucket", ("green", "dented", "plastic",
                                                "upside", "stained", "deep")),
    },
    variants=(
        (
            Clause("The {decor_ropes} rope is {rope_len} in length compared "
                   "to the reference stick."),
            Clause("The rope is {rope_color} and the label says {label_color}."),
            Clause("A reference stick lies next to the rope.", optional=True),
            Clause("The rope hangs from a {decor_hook} hook on a "
                   "{decor_board} board, over a {decor_shelfr} shelf and a "
                   "{decor_bucket} bucket."),
            Clause("A {decor_bag} bag rests below and the end carries a "
                   "{decor_knot} knot.", optional=True),
        ),
        (
            Clause("Compared to the reference stick the {decor_ropes} rope "
                   "is {rope_len} in length."),
            Clause("The rope color is {rope_color} while the label reads "
                   "{label_color}."),
            Clause("The reference stick sits beside the rope.", optional=True),
            Clause("A {decor_hook} hook fixed to a {decor_board} board "
                   "carries the rope, above a {decor_shelfr} shelf and a "
                   "{decor_bucket} bucket."),
            Clause("Below it sits a {decor_bag} bag and the end shows a "
                   "{decor_knot} knot.", optional=True),
        ),
        (
            Clause("Relative to the reference stick the {decor_ropes} rope "
                   "appears {rope_len} in length."),
            Clause("The rope shows {rope_color} and the label states "
                   "{label_color}."),
            Clause("Next to the rope lies the reference stick.", optional=True),
            Clause("It is suspended from a {decor_hook} hook set into a "
                   "{decor_board} board, past a {decor_shelfr} shelf and a "
                   "{decor_bucket} bucket."),
            Clause("Underneath waits a {decor_bag} bag and the tail ends in "
                   "a {decor_knot} knot.", optional=True),
        ),
    ),
    scene_slots=_ropes_slots,
)


_BLOCK_DECOR = ("wooden", "colorful", "stacked", "small", "large", "plastic")
_BINS_TMB = ("top", "middle", "bottom")


def _blocks_slots(scene: Scene) -> dict[str, str]:
    view = SCENARIO_VIEWS["blocks"](scene)
    return {k: view[k] for k in (
        "shape_a", "region_a", "shape_b", "region_b", "shape_c", "region_c",
    )} | {
        "decor_blocks": "wooden",
        "decor_rack": "beige",
        "decor_label": "printed",
        "decor_crate": "slatted",
        "decor_floor": "concrete",
        "decor_cart": "steel",
        "decor_poster": "safety",
        "decor_pallet": "oak",
        "decor_cone": "traffic",
    }


BLOCKS_GRAMMAR = TemplateGrammar(
    scenario_id="blocks",
    slots={
        "shape_a": SlotDef("shape_a", scenarios._BLOCK_SHAPES, Aspect.TYPE),
        "region_a": SlotDef("region_a", _BINS_TMB, Aspect.PLACEMENT),
        "shape_b": SlotDef("shape_b", scenarios._BLOCK_SHAPES, Aspect.TYPE),
        "region_b": SlotDef("region_b", _BINS_TMB, Aspect.PLACEMENT),
        "shape_c": SlotDef("shape_c", scenarios._BLOCK_SHAPES, Aspect.TYPE),
        "region_c": SlotDef("region_c", _BINS_TMB, Aspect.PLACEMENT),
        "decor_blocks": _decor("decor_blocks", _BLOCK_DECOR),
        "decor_rack": _decor("decor_rack", ("beige", "welded", "tiered",
                                            "mobile", "squat", "bolted")),
        "decor_label": _decor("decor_label", ("printed", "peeling", "taped",
                                              "laminated", "faded", "crooked")),
        "decor_crate": _decor("decor_crate", ("slatted", "stamped", "pale",
                                              "upturned", "sturdy", "rough")),
        "decor_floor": _decor("decor_floor", ("concrete", "swept", "gridded",
                                              "sealed", "speckled", "matte")),
        "decor_cart": _decor("decor_cart", ("steel", "wheeled", "parked",
                                            "loaded", "narrow", "squeaky")),
        "decor_poster": _decor("decor_poster", ("safety", "peeled", "glossy",
                                                "pinned", "large", "dated")),
        "decor_pallet": _decor("decor_pallet", ("oak", "chipped", "stacked",
                                                "blue", "flat", "heavy")),
        "decor_cone": _decor("decor_cone", ("traffic", "striped", "toppled",
                                            "bright", "small", "dirty")),
    },
    variants=(
        (
            Clause("Two {shape_a} blocks are in the {region_a} bin, two "
                   "{shape_b} blocks are in the {region_b} bin, and two "
                   "{shape_c} blocks are in the {region_c} bin."),
            Clause("The blocks appear {decor_blocks}.", optional=True),
            Clause("The bins belong to a {decor_rack} rack with a "
                   "{decor_label} label, near a {decor_cart} cart and a "
                   "{decor_poster} poster."),
            Clause("A {decor_crate} crate waits on the {decor_floor} "
                   "floor.", optional=True),
            Clause("A {decor_pallet} pallet and a {decor_cone} cone flank "
                   "the aisle."),
        ),
        (
            Clause("The {region_a} bin shows two {shape_a} blocks, the "
                   "{region_b} bin shows two {shape_b} blocks, and the "
                   "{region_c} bin shows two {shape_c} blocks."),
            Clause("All of the blocks look {decor_blocks}.", optional=True),
            Clause("A {decor_rack} rack carrying a {decor_label} label "
                   "holds the bins, beside a {decor_cart} cart and a "
                   "{decor_poster} poster."),
            Clause("On the {decor_floor} floor stands a {decor_crate} "
                   "crate.", optional=True),
            Clause("A {decor_pallet} pallet and a {decor_cone} cone flank "
                   "the aisle."),
        ),
        (
            Clause("I can see two {shape_a} blocks in the {region_a} bin, two "
                   "{shape_b} blocks in the {region_b} bin, plus two "
                   "{shape_c} blocks in the {region_c} bin."),
            Clause("Every block seems {decor_blocks}.", optional=True),
            Clause("The bins slot into a {decor_rack} rack marked by a "
                   "{decor_label} label, close to a {decor_cart} cart and a "
                   "{decor_poster} poster."),
            Clause("Next to it a {decor_crate} crate sits on the "
                   "{decor_floor} floor.", optional=True),
            Clause("A {decor_pallet} pallet and a {decor_cone} cone flank "
                   "the aisle."),
        ),
    ),
    scene_slots=_blocks_slots,
)


_DISH_DECOR = ("gray", "bamboo", "striped", "woven", "rubber", "folded")
# Order matters for mean-pooled encoders, so position and item are fused into
# one token per slot.
_DISH_POS_VALUES = {
    word: tuple(f"{word}_{item}" for item in scenarios._DISH_ITEMS
                + scenarios._DISH_INTRUDERS)
    for word in ("first", "second", "third")
}


def _dishes_slots(scene: Scene) -> dict[str, str]:
    items = SCENARIO_VIEWS["dishes"](scene)["items"]
    words = ("first", "second", "third")
    return {
        f"pos_{w}": f"{w}_{item}" for w, item in zip(words, items)
    } | {
        "decor_dishes": "gray",
        "decor_runner": "linen",
        "decor_candle": "white",
        "decor_vase": "slender",
        "decor_chair": "oak",
        "decor_pitcher": "glass",
        "decor_coaster": "round",
        "decor_salt": "glass",
        "decor_trivet": "iron",
    }


DISHES_GRAMMAR = TemplateGrammar(
    scenario_id="dishes",
    slots={
        "pos_first": SlotDef("pos_first", _DISH_POS_VALUES["first"], Aspect.TYPE),
        "pos_second": SlotDef("pos_second", _DISH_POS_VALUES["second"],
                              Aspect.TYPE),
        "pos_third": SlotDef("pos_third", _DISH_POS_VALUES["third"], Aspect.TYPE),
        "decor_dishes": _decor("decor_dishes", _DISH_DECOR),
        "decor_runner": _decor("decor_runner", ("linen", "red", "quilted",
                                                "long", "fringed", "ironed")),
        "decor_candle": _decor("decor_candle", ("white", "lit", "stubby",
                                                "scented", "tilted", "waxy")),
        "decor_vase": _decor("decor_vase", ("slender", "blue", "etched",
                                            "empty", "squat", "shiny")),
        "decor_chair": _decor("decor_chair", ("oak", "padded", "pushed",
                                              "carved", "plain", "high")),
        "decor_pitcher": _decor("decor_pitcher", ("glass", "frosted", "tall",
                                                  "full", "handled", "clay")),
        "decor_coaster": _decor("decor_coaster", ("round", "cork", "slate",
                                                  "woven", "thin", "spare")),
        "decor_salt": _decor("decor_salt", ("glass", "twin", "capped",
                                            "crystal", "half", "plain")),
        "decor_trivet": _decor("decor_trivet", ("iron", "tiled", "square",
                                                "heat", "braided", "worn")),
    },
    variants=(
        (
            Clause("From left to right the arrangement is {pos_first}, then "
                   "{pos_second}, then {pos_third}."),
            Clause("The items rest on a {decor_dishes} mat.", optional=True),
            Clause("A {decor_runner} runner and a {decor_candle} candle "
                   "decorate the table, joined by a {decor_pitcher} pitcher "
                   "and a {decor_coaster} coaster."),
            Clause("A {decor_vase} vase stands behind a {decor_chair} "
                   "chair.", optional=True),
            Clause("A {decor_salt} shaker rests on a {decor_trivet} "
                   "trivet."),
        ),
        (
            Clause("Scanning left to right the layout reads {pos_first}, "
                   "{pos_second}, {pos_third}."),
            Clause("Underneath the items lies a {decor_dishes} mat.",
                   optional=True),
            Clause("The table is decorated with a {decor_runner} runner and "
                   "a {decor_candle} candle, plus a {decor_pitcher} pitcher "
                   "and a {decor_coaster} coaster."),
            Clause("Behind a {decor_chair} chair stands a {decor_vase} "
                   "vase.", optional=True),
            Clause("A {decor_salt} shaker rests on a {decor_trivet} "
                   "trivet."),
        ),
        (
            Clause("Left to right the order is {pos_first} followed by "
                   "{pos_second} followed by {pos_third}."),
            Clause("A {decor_dishes} mat sits under the items.", optional=True),
            Clause("Along the table run a {decor_runner} runner and a "
                   "{decor_candle} candle, with a {decor_pitcher} pitcher "
                   "and a {decor_coaster} coaster between."),
            Clause("A {decor_chair} chair fronts a {decor_vase} vase at "
                   "the back.", optional=True),
            Clause("A {decor_salt} shaker rests on a {decor_trivet} "
                   "trivet."),
        ),
    ),
    scene_slots=_dishes_slots,
)


_BALL_DECOR = ("rubber", "bouncy", "matte", "glossy", "new", "worn")


def _balls_slots(scene: Scene) -> dict[str, str]:
    view = SCENARIO_VIEWS["balls"](scene)
    out = {}
    for short in ("tl", "tr", "bl", "br"):
        out[f"n_{short}"] = number_word(view[f"n_{short}"])
        out[f"c_{short}"] = view[f"c_{short}"]
    out["decor_balls"] = "rubber"
    out["decor_case"] = "padded"
    out["decor_lid"] = "hinged"
    out["decor_strap"] = "nylon"
    out["decor_tag"] = "paper"
    out["decor_foam"] = "gray"
    out["decor_latch"] = "chrome"
    out["decor_pump"] = "hand"
    out["decor_mesh"] = "drawstring"
    return out


BALLS_GRAMMAR = TemplateGrammar(
    scenario_id="balls",
    slots={
        "n_tl": SlotDef("n_tl", _LOW_NUM, Aspect.PLACEMENT),
        "c_tl": SlotDef("c_tl", scenarios._BALL_COLORS, Aspect.RELATION),
        "n_tr": SlotDef("n_tr", _LOW_NUM, Aspect.PLACEMENT),
        "c_tr": SlotDef("c_tr", scenarios._BALL_COLORS, Aspect.RELATION),
        "n_bl": SlotDef("n_bl", _LOW_NUM, Aspect.PLACEMENT),
        "c_bl": SlotDef("c_bl", scenarios._BALL_COLORS, Aspect.RELATION),
        "n_br": SlotDef("n_br", _LOW_NUM, Aspect.PLACEMENT),
        "c_br": SlotDef("c_br", scenarios._BALL_COLORS, Aspect.RELATION),
        "decor_balls": _decor("decor_balls", _BALL_DECOR),
        "decor_case": _decor("decor_case", ("padded", "molded", "aluminum",
                                            "scuffed", "latching", "slim")),
        "decor_lid": _decor("decor_lid", ("hinged", "foam", "raised",
                                          "snapped", "ribbed", "loose")),
        "decor_strap": _decor("decor_strap", ("nylon", "woven", "buckled",
                                              "frayed", "elastic", "wide")),
        "decor_tag": _decor("decor_tag", ("paper", "laminated", "numbered",
                                          "tied", "bent", "orange")),
        "decor_foam": _decor("decor_foam", ("gray", "dense", "cut",
                                            "eggshell", "soft", "thick")),
        "decor_latch": _decor("decor_latch", ("chrome", "spring", "stiff",
                                              "twin", "snapped", "tiny")),
        "decor_pump": _decor("decor_pump", ("hand", "mini", "red",
                                            "foot", "spent", "metal")),
        "decor_mesh": _decor("decor_mesh", ("drawstring", "black", "coarse",
                                            "netted", "light", "roomy")),
    },
    variants=(
        (
            Clause("The top left compartment holds {n_tl} {c_tl} balls, the "
                   "top right holds {n_tr} {c_tr} balls, the bottom left "
                   "holds {n_bl} {c_bl} balls, and the bottom right holds "
                   "{n_br} {c_br} balls."),
            Clause("The balls look {decor_balls}.", optional=True),
            Clause("The {decor_case} case opens with a {decor_lid} lid "
                   "over {decor_foam} foam and a {decor_latch} latch."),
            Clause("A {decor_strap} strap and a {decor_tag} tag hang from "
                   "the handle.", optional=True),
            Clause("A {decor_pump} pump sits in a {decor_mesh} mesh "
                   "pocket."),
        ),
        (
            Clause("In the case there are {n_tl} {c_tl} balls top left, "
                   "{n_tr} {c_tr} balls top right, {n_bl} {c_bl} balls "
                   "bottom left, and {n_br} {c_br} balls bottom right."),
            Clause("All of the balls appear {decor_balls}.", optional=True),
            Clause("It is a {decor_case} case under a {decor_lid} lid, "
                   "lined with {decor_foam} foam and shut by a "
                   "{decor_latch} latch."),
            Clause("From the handle hang a {decor_strap} strap and a "
                   "{decor_tag} tag.", optional=True),
            Clause("A {decor_pump} pump sits in a {decor_mesh} mesh "
                   "pocket."),
        ),
        (
            Clause("The case shows {n_tl} {c_tl} balls in the top left, "
                   "{n_tr} {c_tr} balls in the top right, {n_bl} {c_bl} "
                   "balls in the bottom left, plus {n_br} {c_br} balls in "
                   "the bottom right."),
            Clause("Every ball seems {decor_balls}.", optional=True),
            Clause("The whole {decor_case} case closes with a {decor_lid} "
                   "lid, {decor_foam} foam inside and a {decor_latch} latch "
                   "in front."),
            Clause("Its handle carries a {decor_strap} strap and a "
                   "{decor_tag} tag.", optional=True),
            Clause("A {decor_pump} pump sits in a {decor_mesh} mesh "
                   "pocket."),
        ),
    ),
    scene_slots=_balls_slots,
)


GRAMMARS: dict[str, TemplateGrammar] = {
    g.scenario_id: g
    for g in (STICKS_GRAMMAR, FRUITS_GRAMMAR, TOOLS_GRAMMAR, COOKIES_GRAMMAR,
              TAPES_GRAMMAR, STATIONERY_GRAMMAR, ROPES_GRAMMAR, BLOCKS_GRAMMAR,
              DISHES_GRAMMAR, BALLS_GRAMMAR)
}


def get_grammar(scenario_id: str) -> TemplateGrammar:
    try:
        return GRAMMARS[scenario_id]
    except KeyError:
        raise KeyError(f"no template grammar for scenario {scenario_id!r}") from None
