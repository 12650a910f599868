"""The ten built-in scenarios: vocabularies, rules, samplers and mutators.

Each scenario pairs two rule aspects.  Samplers construct normal scenes;
mutators apply one rule-breaking edit for a given aspect and are combined
with rejection sampling by ``scenes.sample_anomaly`` to hit a target label
exactly.

Object lists are constructed in a fixed, semantically meaningful order
(groups are contiguous runs; ``order_index`` is globally unique where order
matters), which keeps serialization reproducible.
"""

from __future__ import annotations

import numpy as np

from .scenes import Aspect, ObjectInstance, Scene, ScenarioSpec, SplitCounts

MAX_COUNT = 6  # upper bound for any per-group object count

NUMBER_WORDS = (
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve",
)


def number_word(n: int) -> str:
    return NUMBER_WORDS[n]


def word_number(w: str) -> int:
    return NUMBER_WORDS.index(w)


def _pick(rng: np.random.Generator, options):
    options = list(options)
    if not options:
        raise ValueError("empty option pool")
    return options[int(rng.integers(len(options)))]


def _bump(rng: np.random.Generator, count: int, lo: int = 0, hi: int = MAX_COUNT) -> int:
    deltas = [d for d in (-1, 1) if lo <= count + d <= hi]
    return count + _pick(rng, deltas)


# ---------------------------------------------------------------------------
# Sticks (Quantity + Length): two long blue sticks and one short red stick.
# ---------------------------------------------------------------------------

_STICK_CANON = {"blue": ("long", 2), "red": ("short", 1)}


def _sticks_view(scene: Scene) -> dict:
    view = {}
    for color, (canon_len, _) in _STICK_CANON.items():
        group = [o for o in scene.objects if o.color == color]
        view[f"count_{color}"] = len(group)
        view[f"len_{color}"] = group[0].length_class if group else canon_len
    return view


def _sticks_build(view: dict) -> Scene:
    objects = []
    order = 0
    for color in ("blue", "red"):
        for _ in range(view[f"count_{color}"]):
            objects.append(
                ObjectInstance("stick", color=color,
                               length_class=view[f"len_{color}"], order_index=order)
            )
            order += 1
    return Scene("sticks", tuple(objects))


def _sticks_sample(rng: np.random.Generator) -> Scene:
    return _sticks_build(
        {"count_blue": 2, "len_blue": "long", "count_red": 1, "len_red": "short"}
    )


def _sticks_rule_q(scene: Scene) -> bool:
    view = _sticks_view(scene)
    return view["count_blue"] == 2 and view["count_red"] == 1


def _sticks_rule_l(scene: Scene) -> bool:
    for color, (canon_len, _) in _STICK_CANON.items():
        if any(
            o.length_class != canon_len for o in scene.objects if o.color == color
        ):
            return False
    return True


def _sticks_mut_q(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _sticks_view(scene)
    color = _pick(rng, ("blue", "red"))
    view[f"count_{color}"] = _bump(rng, view[f"count_{color}"])
    return _sticks_build(view)


def _sticks_mut_l(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _sticks_view(scene)
    populated = [c for c in ("blue", "red") if view[f"count_{c}"] > 0]
    color = _pick(rng, populated or ["blue"])
    canon_len = _STICK_CANON[color][0]
    view[f"len_{color}"] = _pick(
        rng, [v for v in ("long", "short", "similar") if v != canon_len]
    )
    return _sticks_build(view)


STICKS = ScenarioSpec(
    scenario_id="sticks",
    aspects=(Aspect.QUANTITY, Aspect.LENGTH),
    vocab={
        "category": ("stick",),
        "color": ("blue", "red"),
        "length": ("long", "short", "similar"),
    },
    layout=(),
    rule_a=_sticks_rule_q,
    rule_b=_sticks_rule_l,
    sampler=_sticks_sample,
    mutators={Aspect.QUANTITY: _sticks_mut_q, Aspect.LENGTH: _sticks_mut_l},
)


# ---------------------------------------------------------------------------
# Fruits (Quantity + Type): three oranges and two kiwifruits.
# ---------------------------------------------------------------------------

_FRUIT_TYPES = ("orange", "kiwi", "apple", "lemon", "banana")


def _runs(scene: Scene, key) -> list[tuple]:
    """Contiguous runs of equal key over the ordered object list."""
    runs: list[tuple] = []
    for obj in scene.objects:
        k = key(obj)
        if runs and runs[-1][0] == k:
            runs[-1] = (k, runs[-1][1] + 1)
        else:
            runs.append((k, 1))
    return runs


def _fruits_view(scene: Scene) -> dict:
    runs = _runs(scene, lambda o: o.category)
    view = {"count_a": 0, "cat_a": "orange", "count_b": 0, "cat_b": "kiwi"}
    if len(runs) >= 1:
        view["cat_a"], view["count_a"] = runs[0]
    if len(runs) >= 2:
        view["cat_b"], view["count_b"] = runs[1]
    return view


def _fruits_build(view: dict) -> Scene:
    objects = []
    order = 0
    for side in ("a", "b"):
        for _ in range(view[f"count_{side}"]):
            objects.append(ObjectInstance(view[f"cat_{side}"], order_index=order))
            order += 1
    return Scene("fruits", tuple(objects))


def _fruits_sample(rng: np.random.Generator) -> Scene:
    return _fruits_build({"count_a": 3, "cat_a": "orange", "count_b": 2, "cat_b": "kiwi"})


def _fruits_rule_q(scene: Scene) -> bool:
    runs = _runs(scene, lambda o: o.category)
    return len(runs) == 2 and runs[0][1] == 3 and runs[1][1] == 2


def _fruits_rule_t(scene: Scene) -> bool:
    runs = _runs(scene, lambda o: o.category)
    return len(runs) == 2 and runs[0][0] == "orange" and runs[1][0] == "kiwi"


def _fruits_mut_q(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _fruits_view(scene)
    side = _pick(rng, ("a", "b"))
    view[f"count_{side}"] = _bump(rng, view[f"count_{side}"], lo=1)
    return _fruits_build(view)


def _fruits_mut_t(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _fruits_view(scene)
    side = _pick(rng, ("a", "b"))
    other = view["cat_b" if side == "a" else "cat_a"]
    view[f"cat_{side}"] = _pick(
        rng, [c for c in _FRUIT_TYPES if c not in (view[f"cat_{side}"], other)]
    )
    return _fruits_build(view)


FRUITS = ScenarioSpec(
    scenario_id="fruits",
    aspects=(Aspect.QUANTITY, Aspect.TYPE),
    vocab={"category": _FRUIT_TYPES},
    layout=(),
    rule_a=_fruits_rule_q,
    rule_b=_fruits_rule_t,
    sampler=_fruits_sample,
    mutators={Aspect.QUANTITY: _fruits_mut_q, Aspect.TYPE: _fruits_mut_t},
)


# ---------------------------------------------------------------------------
# Tools (Quantity + Placement): two bolts/washers/nuts in left/middle/right bins.
# ---------------------------------------------------------------------------

_TOOL_CANON = {"bolt": "left", "washer": "middle", "nut": "right"}


def _tools_view(scene: Scene) -> dict:
    view = {}
    for cat, canon_region in _TOOL_CANON.items():
        group = [o for o in scene.objects if o.category == cat]
        view[f"count_{cat}"] = len(group)
        view[f"region_{cat}"] = group[0].region if group else canon_region
    return view


def _tools_build(view: dict) -> Scene:
    objects = []
    order = 0
    for cat in _TOOL_CANON:
        for _ in range(view[f"count_{cat}"]):
            objects.append(
                ObjectInstance(cat, region=view[f"region_{cat}"], order_index=order)
            )
            order += 1
    return Scene("tools", tuple(objects))


def _tools_sample(rng: np.random.Generator) -> Scene:
    return _tools_build(
        {f"count_{c}": 2 for c in _TOOL_CANON}
        | {f"region_{c}": r for c, r in _TOOL_CANON.items()}
    )


def _tools_rule_q(scene: Scene) -> bool:
    view = _tools_view(scene)
    return all(view[f"count_{c}"] == 2 for c in _TOOL_CANON)


def _tools_rule_p(scene: Scene) -> bool:
    return all(
        o.region == _TOOL_CANON[o.category] for o in scene.objects
    )


def _tools_mut_q(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _tools_view(scene)
    cat = _pick(rng, list(_TOOL_CANON))
    view[f"count_{cat}"] = _bump(rng, view[f"count_{cat}"])
    return _tools_build(view)


def _tools_mut_p(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _tools_view(scene)
    populated = [c for c in _TOOL_CANON if view[f"count_{c}"] > 0]
    cat = _pick(rng, populated or list(_TOOL_CANON))
    view[f"region_{cat}"] = _pick(
        rng, [r for r in ("left", "middle", "right") if r != _TOOL_CANON[cat]]
    )
    return _tools_build(view)


TOOLS = ScenarioSpec(
    scenario_id="tools",
    aspects=(Aspect.QUANTITY, Aspect.PLACEMENT),
    vocab={"category": ("bolt", "washer", "nut")},
    layout=("left", "middle", "right"),
    rule_a=_tools_rule_q,
    rule_b=_tools_rule_p,
    sampler=_tools_sample,
    mutators={Aspect.QUANTITY: _tools_mut_q, Aspect.PLACEMENT: _tools_mut_p},
)


# ---------------------------------------------------------------------------
# Cookies (Quantity + Relation): two yellow cookies on the square dish, one
# black cookie on the round dish.
# ---------------------------------------------------------------------------

_COOKIE_CANON = {"square_dish": ("yellow", 2), "round_dish": ("black", 1)}
_COOKIE_COLORS = ("yellow", "black", "white", "brown", "pink")


def _cookies_view(scene: Scene) -> dict:
    view = {}
    for dish, (canon_color, _) in _COOKIE_CANON.items():
        short = dish.split("_")[0]
        group = [o for o in scene.objects if o.region == dish]
        view[f"count_{short}"] = len(group)
        view[f"color_{short}"] = group[0].color if group else canon_color
    return view


def _cookies_build(view: dict) -> Scene:
    objects = []
    order = 0
    for dish in _COOKIE_CANON:
        short = dish.split("_")[0]
        for _ in range(view[f"count_{short}"]):
            objects.append(
                ObjectInstance("cookie", color=view[f"color_{short}"],
                               region=dish, order_index=order)
            )
            order += 1
    return Scene("cookies", tuple(objects))


def _cookies_sample(rng: np.random.Generator) -> Scene:
    return _cookies_build(
        {"count_square": 2, "color_square": "yellow",
         "count_round": 1, "color_round": "black"}
    )


def _cookies_rule_q(scene: Scene) -> bool:
    view = _cookies_view(scene)
    return view["count_square"] == 2 and view["count_round"] == 1


def _cookies_rule_r(scene: Scene) -> bool:
    return all(
        o.color == _COOKIE_CANON[o.region][0]
        for o in scene.objects
        if o.region in _COOKIE_CANON
    )


def _cookies_mut_q(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _cookies_view(scene)
    short = _pick(rng, ("square", "round"))
    view[f"count_{short}"] = _bump(rng, view[f"count_{short}"])
    return _cookies_build(view)


def _cookies_mut_r(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _cookies_view(scene)
    populated = [s for s in ("square", "round") if view[f"count_{s}"] > 0]
    short = _pick(rng, populated or ["square"])
    canon_color = _COOKIE_CANON[f"{short}_dish"][0]
    view[f"color_{short}"] = _pick(
        rng, [c for c in _COOKIE_COLORS if c != canon_color]
    )
    return _cookies_build(view)


COOKIES = ScenarioSpec(
    scenario_id="cookies",
    aspects=(Aspect.QUANTITY, Aspect.RELATION),
    vocab={"category": ("cookie",), "color": _COOKIE_COLORS},
    layout=("square_dish", "round_dish"),
    rule_a=_cookies_rule_q,
    rule_b=_cookies_rule_r,
    sampler=_cookies_sample,
    mutators={Aspect.QUANTITY: _cookies_mut_q, Aspect.RELATION: _cookies_mut_r},
)


# ---------------------------------------------------------------------------
# Tapes (Length + Type): a long green tape and a short red tape, length judged
# by relative comparison of the two.
# ---------------------------------------------------------------------------

_TAPE_CANON = (("long", "green"), ("short", "red"))
_TAPE_COLORS = ("green", "red", "blue", "yellow", "black")


def _tapes_view(scene: Scene) -> dict:
    tapes = sorted(scene.objects, key=lambda o: o.order_index or 0)
    view = {}
    for i, word in enumerate(("first", "second")):
        if i < len(tapes):
            view[f"len_{word}"] = tapes[i].length_class
            view[f"color_{word}"] = tapes[i].color
        else:
            view[f"len_{word}"], view[f"color_{word}"] = _TAPE_CANON[i]
    return view


def _tapes_build(view: dict) -> Scene:
    objects = tuple(
        ObjectInstance("tape", color=view[f"color_{w}"],
                       length_class=view[f"len_{w}"], order_index=i)
        for i, w in enumerate(("first", "second"))
    )
    return Scene("tapes", objects)


def _tapes_sample(rng: np.random.Generator) -> Scene:
    return _tapes_build(
        {"len_first": "long", "color_first": "green",
         "len_second": "short", "color_second": "red"}
    )


def _tapes_rule_l(scene: Scene) -> bool:
    if len(scene.objects) != 2:
        return False
    view = _tapes_view(scene)
    return view["len_first"] == "long" and view["len_second"] == "short"


def _tapes_rule_t(scene: Scene) -> bool:
    if len(scene.objects) != 2:
        return False
    view = _tapes_view(scene)
    return view["color_first"] == "green" and view["color_second"] == "red"


def _tapes_mut_l(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _tapes_view(scene)
    i = int(rng.integers(2))
    word = ("first", "second")[i]
    view[f"len_{word}"] = _pick(
        rng, [v for v in ("long", "short", "similar") if v != _TAPE_CANON[i][0]]
    )
    return _tapes_build(view)


def _tapes_mut_t(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _tapes_view(scene)
    i = int(rng.integers(2))
    word = ("first", "second")[i]
    view[f"color_{word}"] = _pick(
        rng, [c for c in _TAPE_COLORS if c != _TAPE_CANON[i][1]]
    )
    return _tapes_build(view)


TAPES = ScenarioSpec(
    scenario_id="tapes",
    aspects=(Aspect.LENGTH, Aspect.TYPE),
    vocab={"category": ("tape",), "color": _TAPE_COLORS,
           "length": ("long", "short", "similar")},
    layout=(),
    rule_a=_tapes_rule_l,
    rule_b=_tapes_rule_t,
    sampler=_tapes_sample,
    mutators={Aspect.LENGTH: _tapes_mut_l, Aspect.TYPE: _tapes_mut_t},
)


# ---------------------------------------------------------------------------
# Stationery (Length + Placement): long black pencil + long blue eraser in the
# left bin, short red pencil + short red eraser in the right bin; the eraser
# sits left of (before) the pencil within each bin.
# ---------------------------------------------------------------------------

_STATIONERY_CANON = {
    ("left_bin", "pencil"): ("black", "long"),
    ("left_bin", "eraser"): ("blue", "long"),
    ("right_bin", "pencil"): ("red", "short"),
    ("right_bin", "eraser"): ("red", "short"),
}


def _stationery_view(scene: Scene) -> dict:
    view = {}
    for (bin_, cat), (_, canon_len) in _STATIONERY_CANON.items():
        side = bin_.split("_")[0]
        found = [o for o in scene.objects if o.region == bin_ and o.category == cat]
        view[f"len_{side}_{cat}"] = found[0].length_class if found else canon_len
    for side, bin_ in (("left", "left_bin"), ("right", "right_bin")):
        items = sorted(
            (o for o in scene.objects if o.region == bin_),
            key=lambda o: o.order_index or 0,
        )
        view[f"order_{side}"] = items[0].category if items else "eraser"
    return view


def _stationery_build(view: dict) -> Scene:
    objects = []
    order = 0
    for side, bin_ in (("left", "left_bin"), ("right", "right_bin")):
        first = view[f"order_{side}"]
        cats = (first, "pencil" if first == "eraser" else "eraser")
        for cat in cats:
            color = _STATIONERY_CANON[(bin_, cat)][0]
            objects.append(
                ObjectInstance(cat, color=color,
                               length_class=view[f"len_{side}_{cat}"],
                               region=bin_, order_index=order)
            )
            order += 1
    return Scene("stationery", tuple(objects))


def _stationery_sample(rng: np.random.Generator) -> Scene:
    view = {f"len_{s}_{c}": _STATIONERY_CANON[(f"{s}_bin", c)][1]
            for s in ("left", "right") for c in ("pencil", "eraser")}
    view |= {"order_left": "eraser", "order_right": "eraser"}
    return _stationery_build(view)


def _stationery_rule_l(scene: Scene) -> bool:
    if len(scene.objects) != 4:
        return False
    view = _stationery_view(scene)
    return all(
        view[f"len_{bin_.split('_')[0]}_{cat}"] == canon_len
        for (bin_, cat), (_, canon_len) in _STATIONERY_CANON.items()
    )


def _stationery_rule_p(scene: Scene) -> bool:
    if len(scene.objects) != 4:
        return False
    view = _stationery_view(scene)
    return view["order_left"] == "eraser" and view["order_right"] == "eraser"


def _stationery_mut_l(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _stationery_view(scene)
    side = _pick(rng, ("left", "right"))
    cat = _pick(rng, ("pencil", "eraser"))
    canon_len = _STATIONERY_CANON[(f"{side}_bin", cat)][1]
    view[f"len_{side}_{cat}"] = "short" if canon_len == "long" else "long"
    return _stationery_build(view)


def _stationery_mut_p(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _stationery_view(scene)
    side = _pick(rng, ("left", "right"))
    view[f"order_{side}"] = "pencil"
    return _stationery_build(view)


STATIONERY = ScenarioSpec(
    scenario_id="stationery",
    aspects=(Aspect.LENGTH, Aspect.PLACEMENT),
    vocab={"category": ("pencil", "eraser"), "color": ("black", "blue", "red"),
           "length": ("long", "short")},
    layout=("left_bin", "right_bin"),
    rule_a=_stationery_rule_l,
    rule_b=_stationery_rule_p,
    sampler=_stationery_sample,
    mutators={Aspect.LENGTH: _stationery_mut_l, Aspect.PLACEMENT: _stationery_mut_p},
)


# ---------------------------------------------------------------------------
# Ropes (Length + Relation): rope length similar to the reference stick, rope
# color matching the text label.
# ---------------------------------------------------------------------------

_ROPE_COLORS = ("red", "blue", "green", "yellow", "white")


def _ropes_view(scene: Scene) -> dict:
    label = dict(scene.context).get("label", "red")
    if scene.objects:
        rope = scene.objects[0]
        return {"rope_len": rope.length_class, "rope_color": rope.color,
                "label_color": label}
    return {"rope_len": "similar", "rope_color": label, "label_color": label}


def _ropes_build(view: dict) -> Scene:
    rope = ObjectInstance("rope", color=view["rope_color"],
                          length_class=view["rope_len"], order_index=0)
    return Scene("ropes", (rope,), context=(("label", view["label_color"]),))


def _ropes_sample(rng: np.random.Generator) -> Scene:
    color = _pick(rng, _ROPE_COLORS)
    return _ropes_build({"rope_len": "similar", "rope_color": color,
                         "label_color": color})


def _ropes_rule_l(scene: Scene) -> bool:
    return all(o.length_class == "similar" for o in scene.objects)


def _ropes_rule_r(scene: Scene) -> bool:
    label = dict(scene.context).get("label")
    return all(o.color == label for o in scene.objects)


def _ropes_mut_l(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _ropes_view(scene)
    view["rope_len"] = _pick(rng, ("long", "short"))
    return _ropes_build(view)


def _ropes_mut_r(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _ropes_view(scene)
    view["rope_color"] = _pick(
        rng, [c for c in _ROPE_COLORS if c != view["label_color"]]
    )
    return _ropes_build(view)


ROPES = ScenarioSpec(
    scenario_id="ropes",
    aspects=(Aspect.LENGTH, Aspect.RELATION),
    vocab={"category": ("rope",), "color": _ROPE_COLORS,
           "length": ("similar", "long", "short")},
    layout=(),
    rule_a=_ropes_rule_l,
    rule_b=_ropes_rule_r,
    sampler=_ropes_sample,
    mutators={Aspect.LENGTH: _ropes_mut_l, Aspect.RELATION: _ropes_mut_r},
)


# ---------------------------------------------------------------------------
# Blocks (Type + Placement): two circle/triangle/square blocks in the
# top/middle/bottom bins.
# ---------------------------------------------------------------------------

_BLOCK_SHAPES = ("circle", "triangle", "square", "star", "hexagon")
_BLOCK_CANON = (("circle", "top"), ("triangle", "middle"), ("square", "bottom"))


def _blocks_groups(scene: Scene) -> list[tuple[str, str, int]]:
    runs = _runs(scene, lambda o: (o.category, o.region))
    return [(cat, region, n) for (cat, region), n in runs]


def _blocks_view(scene: Scene) -> dict:
    groups = _blocks_groups(scene)
    view = {}
    for i, slot in enumerate(("a", "b", "c")):
        if i < len(groups):
            view[f"shape_{slot}"], view[f"region_{slot}"] = groups[i][:2]
        else:
            view[f"shape_{slot}"], view[f"region_{slot}"] = _BLOCK_CANON[i]
    return view


def _blocks_build(view: dict) -> Scene:
    objects = []
    order = 0
    for slot in ("a", "b", "c"):
        for _ in range(2):
            objects.append(
                ObjectInstance(view[f"shape_{slot}"],
                               region=view[f"region_{slot}"], order_index=order)
            )
            order += 1
    return Scene("blocks", tuple(objects))


def _blocks_sample(rng: np.random.Generator) -> Scene:
    view = {}
    for slot, (shape, region) in zip(("a", "b", "c"), _BLOCK_CANON):
        view[f"shape_{slot}"], view[f"region_{slot}"] = shape, region
    return _blocks_build(view)


def _blocks_valid_groups(scene: Scene) -> bool:
    groups = _blocks_groups(scene)
    return len(groups) == 3 and all(n == 2 for _, _, n in groups)


def _blocks_rule_t(scene: Scene) -> bool:
    if not _blocks_valid_groups(scene):
        return False
    groups = _blocks_groups(scene)
    return all(g[0] == canon[0] for g, canon in zip(groups, _BLOCK_CANON))


def _blocks_rule_p(scene: Scene) -> bool:
    if not _blocks_valid_groups(scene):
        return False
    groups = _blocks_groups(scene)
    return all(g[1] == canon[1] for g, canon in zip(groups, _BLOCK_CANON))


def _blocks_mut_t(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _blocks_view(scene)
    i = int(rng.integers(3))
    slot = ("a", "b", "c")[i]
    view[f"shape_{slot}"] = _pick(
        rng, [s for s in _BLOCK_SHAPES if s != _BLOCK_CANON[i][0]]
    )
    return _blocks_build(view)


def _blocks_mut_p(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _blocks_view(scene)
    i = int(rng.integers(3))
    slot = ("a", "b", "c")[i]
    view[f"region_{slot}"] = _pick(
        rng, [r for r in ("top", "middle", "bottom") if r != _BLOCK_CANON[i][1]]
    )
    return _blocks_build(view)


BLOCKS = ScenarioSpec(
    scenario_id="blocks",
    aspects=(Aspect.TYPE, Aspect.PLACEMENT),
    vocab={"category": _BLOCK_SHAPES},
    layout=("top", "middle", "bottom"),
    rule_a=_blocks_rule_t,
    rule_b=_blocks_rule_p,
    sampler=_blocks_sample,
    mutators={Aspect.TYPE: _blocks_mut_t, Aspect.PLACEMENT: _blocks_mut_p},
)


# ---------------------------------------------------------------------------
# Dishes (Type + Relation): a fork, a plate, and a spoon in left-to-right order.
# ---------------------------------------------------------------------------

_DISH_ITEMS = ("fork", "plate", "spoon")
_DISH_INTRUDERS = ("knife", "cup")
_DISH_RANK = {item: i for i, item in enumerate(_DISH_ITEMS)}


def _dishes_items(scene: Scene) -> list[str]:
    return [o.category for o in sorted(scene.objects, key=lambda o: o.order_index or 0)]


def _dishes_build(items: list[str]) -> Scene:
    return Scene(
        "dishes",
        tuple(ObjectInstance(cat, order_index=i) for i, cat in enumerate(items)),
    )


def _dishes_sample(rng: np.random.Generator) -> Scene:
    return _dishes_build(list(_DISH_ITEMS))


def _dishes_rule_t(scene: Scene) -> bool:
    items = _dishes_items(scene)
    return sorted(items) == sorted(_DISH_ITEMS)


def _dishes_rule_r(scene: Scene) -> bool:
    if len(scene.objects) != 3:
        return False
    ranks = [_DISH_RANK[c] for c in _dishes_items(scene) if c in _DISH_RANK]
    return ranks == sorted(ranks)


def _dishes_mut_t(scene: Scene, rng: np.random.Generator) -> Scene:
    items = _dishes_items(scene)
    i = int(rng.integers(len(items)))
    items[i] = _pick(rng, _DISH_INTRUDERS)
    return _dishes_build(items)


def _dishes_mut_r(scene: Scene, rng: np.random.Generator) -> Scene:
    items = _dishes_items(scene)
    while True:
        perm = rng.permutation(len(items))
        if list(perm) != list(range(len(items))):
            break
    return _dishes_build([items[j] for j in perm])


DISHES = ScenarioSpec(
    scenario_id="dishes",
    aspects=(Aspect.TYPE, Aspect.RELATION),
    vocab={"category": _DISH_ITEMS + _DISH_INTRUDERS},
    layout=(),
    rule_a=_dishes_rule_t,
    rule_b=_dishes_rule_r,
    sampler=_dishes_sample,
    mutators={Aspect.TYPE: _dishes_mut_t, Aspect.RELATION: _dishes_mut_r},
)


# ---------------------------------------------------------------------------
# Balls (Placement + Relation): one ball per compartment of a 2x2 case, orange
# in the top row and white in the bottom row.
# ---------------------------------------------------------------------------

_BALL_REGIONS = ("top_left", "top_right", "bottom_left", "bottom_right")
_BALL_COLORS = ("orange", "white", "green", "purple")
_BALL_ROW_COLOR = {"top": "orange", "bottom": "white"}


def _ball_row(region: str) -> str:
    return region.split("_")[0]


def _balls_view(scene: Scene) -> dict:
    view = {}
    for region in _BALL_REGIONS:
        short = {"top_left": "tl", "top_right": "tr",
                 "bottom_left": "bl", "bottom_right": "br"}[region]
        group = [o for o in scene.objects if o.region == region]
        view[f"n_{short}"] = len(group)
        view[f"c_{short}"] = (
            group[0].color if group else _BALL_ROW_COLOR[_ball_row(region)]
        )
    return view


def _balls_build(view: dict) -> Scene:
    objects = []
    order = 0
    for region, short in zip(_BALL_REGIONS, ("tl", "tr", "bl", "br")):
        for _ in range(view[f"n_{short}"]):
            objects.append(
                ObjectInstance("ball", color=view[f"c_{short}"],
                               region=region, order_index=order)
            )
            order += 1
    return Scene("balls", tuple(objects))


def _balls_sample(rng: np.random.Generator) -> Scene:
    view = {}
    for region, short in zip(_BALL_REGIONS, ("tl", "tr", "bl", "br")):
        view[f"n_{short}"] = 1
        view[f"c_{short}"] = _BALL_ROW_COLOR[_ball_row(region)]
    return _balls_build(view)


def _balls_rule_p(scene: Scene) -> bool:
    counts = {r: 0 for r in _BALL_REGIONS}
    for o in scene.objects:
        counts[o.region] += 1
    return all(n == 1 for n in counts.values())


def _balls_rule_r(scene: Scene) -> bool:
    return all(
        o.color == _BALL_ROW_COLOR[_ball_row(o.region)] for o in scene.objects
    )


def _balls_mut_p(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _balls_view(scene)
    row = _pick(rng, ("t", "b"))
    src, dst = (f"{row}l", f"{row}r") if rng.integers(2) else (f"{row}r", f"{row}l")
    if view[f"n_{src}"] == 0:
        src, dst = dst, src
    view[f"n_{src}"] -= 1
    view[f"n_{dst}"] += 1
    return _balls_build(view)


def _balls_mut_r(scene: Scene, rng: np.random.Generator) -> Scene:
    view = _balls_view(scene)
    populated = [s for s in ("tl", "tr", "bl", "br") if view[f"n_{s}"] > 0]
    short = _pick(rng, populated or ["tl"])
    row = "top" if short.startswith("t") else "bottom"
    view[f"c_{short}"] = _pick(
        rng, [c for c in _BALL_COLORS if c != _BALL_ROW_COLOR[row]]
    )
    return _balls_build(view)


BALLS = ScenarioSpec(
    scenario_id="balls",
    aspects=(Aspect.PLACEMENT, Aspect.RELATION),
    vocab={"category": ("ball",), "color": _BALL_COLORS},
    layout=_BALL_REGIONS,
    rule_a=_balls_rule_p,
    rule_b=_balls_rule_r,
    sampler=_balls_sample,
    mutators={Aspect.PLACEMENT: _balls_mut_p, Aspect.RELATION: _balls_mut_r},
)


SCENARIOS: dict[str, ScenarioSpec] = {
    spec.scenario_id: spec
    for spec in (STICKS, FRUITS, TOOLS, COOKIES, TAPES,
                 STATIONERY, ROPES, BLOCKS, DISHES, BALLS)
}

SCENARIO_VIEWS = {
    "sticks": _sticks_view,
    "fruits": _fruits_view,
    "tools": _tools_view,
    "cookies": _cookies_view,
    "tapes": _tapes_view,
    "stationery": _stationery_view,
    "ropes": _ropes_view,
    "blocks": _blocks_view,
    "dishes": lambda s: {"items": _dishes_items(s)},
    "balls": _balls_view,
}

# Per-task split sizes: train normal / test normal / single-A / single-B / dual.
DEFAULT_SPLIT_COUNTS: dict[str, SplitCounts] = {
    "sticks": SplitCounts(50, 50, 48, 48, 8),
    "fruits": SplitCounts(50, 50, 48, 44, 8),
    "tools": SplitCounts(50, 50, 52, 50, 8),
    "cookies": SplitCounts(50, 50, 50, 50, 6),
    "tapes": SplitCounts(50, 50, 50, 50, 10),
    "stationery": SplitCounts(50, 50, 50, 50, 10),
    "ropes": SplitCounts(50, 50, 48, 50, 12),
    "blocks": SplitCounts(50, 50, 52, 50, 8),
    "dishes": SplitCounts(50, 50, 48, 48, 15),
    "balls": SplitCounts(50, 50, 48, 48, 12),
}


def get_scenario(scenario_id: str) -> ScenarioSpec:
    try:
        return SCENARIOS[scenario_id]
    except KeyError:
        raise KeyError(f"unknown scenario {scenario_id!r}") from None
