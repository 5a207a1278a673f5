"""Object counting over a narrated scene.

The generator picks items from the bundled category vocabulary, narrates
them ("I have three apples, a violin, and two drums."), and asks for the
total in one category. The narration is designed to parse back exactly:
quantities render as "a"/"an" or a number word, item nouns pluralize
regularly, and the scene lists every item once.

Answers verify as integers; digit strings and the spelled-out words
zero through twenty are both accepted.
"""

from __future__ import annotations

import re
from typing import Any, Dict, List, Optional, Tuple

from ..corpus import load_categories, pluralize
from ..errors import ParamError, PayloadError
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64

NUMBER_WORDS = (
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
)
_WORD_TO_NUM = {w: i for i, w in enumerate(NUMBER_WORDS)}


def object_counting_generate(
    num_items: int, num_categories: int, max_qty: int, seed: int
) -> Tuple[Dict[str, Any], int]:
    if num_categories < 2:
        raise ParamError(f"num_categories must be >= 2, got {num_categories}")
    if num_items < num_categories:
        raise ParamError("need at least one item per category")
    if not 1 <= max_qty <= 20:
        raise ParamError(f"max_qty must be in [1, 20], got {max_qty}")
    vocab = load_categories()
    if num_categories > len(vocab):
        raise ParamError(f"only {len(vocab)} categories available")
    rng = SplitMix64(seed)
    cats = rng.sample(sorted(vocab), num_categories)
    pool_size = sum(len(vocab[c]) for c in cats)
    if num_items > pool_size:
        raise ParamError(f"num_items {num_items} exceeds vocabulary pool {pool_size}")
    # one item per category first so every category is non-empty in the scene
    chosen: List[Tuple[str, str]] = []
    for cat in cats:
        chosen.append((rng.choice(vocab[cat]), cat))
    rest = [(item, cat) for cat in cats for item in vocab[cat]
            if (item, cat) not in chosen]
    chosen += rng.sample(rest, num_items - num_categories)
    rng.shuffle(chosen)
    items = [[name, cat, rng.randint(1, max_qty)] for name, cat in chosen]
    query = rng.choice(cats)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "task": "object_counting",
        "items": items,
        "query": query,
    }
    return payload, category_count(payload)


def category_count(payload: Dict[str, Any]) -> int:
    try:
        return sum(qty for _, cat, qty in payload["items"] if cat == payload["query"])
    except (KeyError, TypeError, ValueError):
        raise PayloadError("malformed object_counting payload") from None


def _phrase(name: str, qty: int) -> str:
    if qty == 1:
        article = "an" if name[0] in "aeiou" else "a"
        return f"{article} {name}"
    return f"{NUMBER_WORDS[qty]} {pluralize(name)}"


def render_scene(payload: Dict[str, Any]) -> str:
    phrases = [_phrase(name, qty) for name, _, qty in payload["items"]]
    if len(phrases) == 1:
        listing = phrases[0]
    elif len(phrases) == 2:
        listing = f"{phrases[0]} and {phrases[1]}"
    else:
        listing = ", ".join(phrases[:-1]) + f", and {phrases[-1]}"
    return f"I have {listing}."


def parse_scene(text: str) -> List[Tuple[str, int]]:
    """Inverse of render_scene: recover (singular name, quantity) pairs."""
    m = re.fullmatch(r"I have (.+)\.", text.strip())
    if not m:
        raise ValueError("scene text does not match the narration shape")
    singular = {}
    for items in load_categories().values():
        for item in items:
            singular[pluralize(item)] = item
            singular[item] = item
    out = []
    for chunk in re.split(r",\s*(?:and\s+)?|\s+and\s+", m.group(1)):
        qty_word, _, noun = chunk.partition(" ")
        if qty_word in ("a", "an"):
            qty = 1
        elif qty_word in _WORD_TO_NUM:
            qty = _WORD_TO_NUM[qty_word]
        else:
            raise ValueError(f"unknown quantity word {qty_word!r}")
        if noun not in singular:
            raise ValueError(f"unknown item noun {noun!r}")
        out.append((singular[noun], qty))
    return out


def verify_object_counting(payload: Dict[str, Any], candidate: Any) -> bool:
    truth = category_count(payload)
    return (
        isinstance(candidate, int)
        and not isinstance(candidate, bool)
        and candidate == truth
    )


def render_object_counting(payload: Dict[str, Any]) -> str:
    return (
        render_scene(payload)
        + f" How many {payload['query']} do I have? Respond with a single number."
    )


def _parse_count(payload: Dict[str, Any], text: str) -> Optional[int]:
    s = text.strip().rstrip(".").lower()
    if s.isdigit():
        return int(s)
    return _WORD_TO_NUM.get(s)


SCHEMA = ParamSchema((
    ParamSpec("num_items", "int", 2, 15, easy=4, hard=10),
    ParamSpec("num_categories", "int", 2, 6, easy=2, hard=4),
    ParamSpec("max_qty", "int", 1, 20, easy=5, hard=9),
))

DESCRIPTOR = TaskDescriptor(
    id="object_counting",
    schema=SCHEMA,
    generate=lambda params, seed: object_counting_generate(
        params["num_items"], params["num_categories"], params["max_qty"], seed
    ),
    verify=verify_object_counting,
    render=render_object_counting,
    parse_answer=_parse_count,
    serialize_answer=str,
    easy_excluded=True,
)
