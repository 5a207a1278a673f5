"""Cryptarithms: letters stand for digits in a column addition.

Payload schema (version 1):
    task: "cryptarithm"
    addends: uppercase words
    total: uppercase word (their sum)

Every letter is a distinct digit, identical letters share one digit, and
no multi-digit number starts with 0. Emitted puzzles have exactly one
satisfying letter-to-digit mapping (checked by column backtracking).
"""

from __future__ import annotations

import re
from typing import Any, Dict, List, Optional, Tuple

from ..errors import GenerationExhausted, ParamError, PayloadError, SearchBudgetExceeded
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64

RETRY_BUDGET = 1000
DEFAULT_NODE_BUDGET = 10_000_000
_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
_PAIR_RE = re.compile(r"([A-Za-z])\s*[=:]\s*(\d)")


def _check_payload(payload: Dict[str, Any]) -> Tuple[List[str], str]:
    try:
        addends = list(payload["addends"])
        total = payload["total"]
    except (KeyError, TypeError):
        raise PayloadError("cryptarithm payload missing addends/total") from None
    words = addends + [total]
    if len(addends) < 2 or any(not w or not w.isalpha() or not w.isupper() for w in words):
        raise PayloadError("cryptarithm words must be uppercase alphabetic, 2+ addends")
    letters = {ch for w in words for ch in w}
    if len(letters) > 10:
        raise PayloadError("more than 10 distinct letters cannot map to distinct digits")
    return addends, total


def count_solutions(addends: List[str], total: str, limit: int,
                    node_budget: int = DEFAULT_NODE_BUDGET,
                    solutions: Optional[List[Dict[str, int]]] = None) -> int:
    """Column-by-column backtracking count of digit assignments, capped."""
    words = addends + [total]
    width = len(total)
    if any(len(w) > width for w in addends):
        return 0  # an addend longer than the total can never sum to it
    leading = {w[0] for w in words if len(w) > 1}
    # column c holds the 10^c digits: reversed word positions
    cols: List[List[str]] = []
    for c in range(width):
        cols.append([w[len(w) - 1 - c] for w in addends if c < len(w)])
    total_rev = total[::-1]

    assign: Dict[str, int] = {}
    used = [False] * 10
    count = 0
    nodes = 0

    def fill_column(c: int, carry: int, pending: List[str]) -> None:
        nonlocal count, nodes
        if count >= limit:
            return
        # assign any still-free letters appearing in this column
        for i, letter in enumerate(pending):
            if letter not in assign:
                for d in range(10):
                    if used[d] or (d == 0 and letter in leading):
                        continue
                    nodes += 1
                    if nodes > node_budget:
                        raise SearchBudgetExceeded(f"cryptarithm counter exceeded {node_budget} nodes")
                    assign[letter] = d
                    used[d] = True
                    fill_column(c, carry, pending[i + 1 :])
                    used[d] = False
                    del assign[letter]
                    if count >= limit:
                        return
                return
        s = sum(assign[ch] for ch in cols[c]) + carry
        if assign[total_rev[c]] != s % 10:
            return
        if c + 1 == width:
            if s // 10 == 0:
                count += 1
                if solutions is not None:
                    solutions.append(dict(assign))
            return
        fill_column(c + 1, s // 10, _column_letters(c + 1))

    def _column_letters(c: int) -> List[str]:
        seen = []
        for ch in cols[c] + [total_rev[c]]:
            if ch not in seen:
                seen.append(ch)
        return seen

    fill_column(0, 0, _column_letters(0))
    return count


def cryptarithm_generate(num_addends: int, word_len: int, seed: int) -> Tuple[Dict[str, Any], Dict[str, int]]:
    if num_addends < 2:
        raise ParamError(f"num_addends {num_addends} must be at least 2")
    if word_len < 1:
        raise ParamError(f"word_len {word_len} must be positive")
    rng = SplitMix64(seed)
    for _ in range(RETRY_BUDGET):
        # draw digits from a small palette: repeated letters cross-constrain
        # many columns at once, which is what makes unique puzzles common
        # enough to find by rejection sampling
        palette = rng.sample(range(10), 4 + rng.below(2))
        nonzero = [d for d in palette if d]
        if not nonzero:
            continue
        values = []
        for _ in range(num_addends):
            if word_len > 1:
                digits = [nonzero[rng.below(len(nonzero))]]
            else:
                digits = [palette[rng.below(len(palette))]]
            digits += [palette[rng.below(len(palette))] for _ in range(word_len - 1)]
            values.append(int("".join(map(str, digits))))
        total_value = sum(values)
        digit_chars = sorted({ch for v in values + [total_value] for ch in str(v)})
        letters = rng.sample(list(_ALPHABET), len(digit_chars))
        mapping = dict(zip(digit_chars, letters))
        addends = ["".join(mapping[ch] for ch in str(v)) for v in values]
        total = "".join(mapping[ch] for ch in str(total_value))
        if count_solutions(addends, total, limit=2) != 1:
            continue
        payload = {
            "schema_version": SCHEMA_VERSION,
            "task": "cryptarithm",
            "addends": addends,
            "total": total,
        }
        reference = {letter: int(digit) for digit, letter in mapping.items()}
        return payload, reference
    raise GenerationExhausted(
        f"cryptarithm addends={num_addends} len={word_len}: no unique puzzle found",
        RETRY_BUDGET,
    )


def verify_cryptarithm(payload: Dict[str, Any], candidate: Any) -> bool:
    addends, total = _check_payload(payload)
    if not isinstance(candidate, dict):
        raise PayloadError("candidate is not a letter-to-digit mapping")
    letters = {ch for w in addends + [total] for ch in w}
    mapping = {}
    for k, v in candidate.items():
        if not isinstance(k, str) or len(k) != 1:
            return False
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v <= 9:
            return False
        mapping[k.upper()] = v
    if set(mapping) != letters or len(set(mapping.values())) != len(mapping):
        return False
    for w in addends + [total]:
        if len(w) > 1 and mapping[w[0]] == 0:
            return False
    as_num = lambda w: int("".join(str(mapping[ch]) for ch in w))
    return sum(as_num(w) for w in addends) == as_num(total)


def parse_mapping(text: str) -> Optional[Dict[str, int]]:
    """Parse "A=1, B=2" style mappings; duplicates or stray text reject."""
    if not isinstance(text, str):
        return None
    pairs = _PAIR_RE.findall(text)
    leftover = _PAIR_RE.sub("", text)
    if re.sub(r"[\s,;]+", "", leftover):
        return None
    if not pairs:
        return None
    mapping: Dict[str, int] = {}
    for letter, digit in pairs:
        letter = letter.upper()
        if letter in mapping:
            return None
        mapping[letter] = int(digit)
    return mapping


def serialize_mapping(mapping: Dict[str, int]) -> str:
    return ",".join(f"{k}={mapping[k]}" for k in sorted(mapping))


def render_cryptarithm(payload: Dict[str, Any]) -> str:
    addends, total = _check_payload(payload)
    equation = " + ".join(addends) + " = " + total
    return "\n".join([
        f"Solve this cryptarithm: {equation}",
        "Each letter stands for a single digit (0-9). Identical letters mean "
        "the same digit, different letters mean different digits, and no "
        "multi-digit number starts with 0. The addition must hold.",
        "",
        "Give the digit for every letter as a comma-separated list of "
        "letter=digit pairs, e.g. A=1,B=2.",
    ])


SCHEMA = ParamSchema((
    ParamSpec("num_addends", "int", 2, 4, easy=2, hard=3),
    ParamSpec("word_len", "int", 1, 8, easy=3, hard=6),
))

DESCRIPTOR = TaskDescriptor(
    id="cryptarithm",
    schema=SCHEMA,
    generate=lambda params, seed: cryptarithm_generate(
        params["num_addends"], params["word_len"], seed
    ),
    verify=verify_cryptarithm,
    render=render_cryptarithm,
    parse_answer=lambda payload, text: parse_mapping(text),
    serialize_answer=serialize_mapping,
)
