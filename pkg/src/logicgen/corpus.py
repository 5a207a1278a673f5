"""Loaders for the bundled text resources.

Two files ship inside the package:

* ``data/words.txt`` — one lowercase a-z word per line, LF endings.
  Used for cipher plaintexts and word-sorting instances.
* ``data/categories.txt`` — ``category name: item, item, ...`` per line.
  Items are singular nouns whose plural is regular (-s / -es / -ies),
  so counting scenes can be rendered and parsed back exactly.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from typing import Dict, Tuple

_WORD_RE = re.compile(r"[a-z]+\Z")


def _read_data(name: str) -> str:
    return resources.files("logicgen").joinpath("data", name).read_text("utf-8")


@lru_cache(maxsize=None)
def load_words() -> Tuple[str, ...]:
    """Word corpus as a tuple, in file order (sorted, deduplicated)."""
    words = tuple(line for line in _read_data("words.txt").splitlines() if line)
    for w in words:
        if not _WORD_RE.match(w):
            raise ValueError(f"corpus word {w!r} is not lowercase a-z")
    if len(words) != len(set(words)):
        raise ValueError("corpus contains duplicate words")
    return words


@lru_cache(maxsize=None)
def load_categories() -> Dict[str, Tuple[str, ...]]:
    """Category vocabulary: plural category name -> singular item names."""
    out: Dict[str, Tuple[str, ...]] = {}
    for line in _read_data("categories.txt").splitlines():
        if not line.strip():
            continue
        name, _, items = line.partition(":")
        out[name.strip()] = tuple(w.strip() for w in items.split(",") if w.strip())
    return out


def pluralize(noun: str) -> str:
    # vocabulary guarantees regular plurals, so three rules suffice
    if noun.endswith(("s", "x", "z", "ch", "sh")):
        return noun + "es"
    if noun.endswith("y") and noun[-2] not in "aeiou":
        return noun[:-1] + "ies"
    return noun + "s"
