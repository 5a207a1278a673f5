"""Word sorting under a permuted alphabet.

Two renderings share the machinery (param ``mistake``):

* ``mistake=0`` — sort the given words; answer is the full sorted sequence.
* ``mistake=1`` — the prompt shows a purported step-by-step sorted order
  with exactly one wrong entry; answer is that step's 1-based number.

Collation: compare letter ranks under the permuted alphabet; a word
precedes every longer word that extends it (tuple-of-ranks ordering).
"""

from __future__ import annotations

import re
import string
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..corpus import load_words
from ..errors import ParamError, PayloadError
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64


def wordsort_order(words: Sequence[str], alphabet: str) -> List[str]:
    if sorted(alphabet) != sorted(string.ascii_lowercase):
        raise PayloadError("alphabet must be a permutation of the 26 lowercase letters")
    rank = {ch: i for i, ch in enumerate(alphabet)}
    try:
        return sorted(words, key=lambda w: tuple(rank[ch] for ch in w))
    except KeyError as exc:
        raise PayloadError(f"word contains a letter outside the alphabet: {exc}") from None


def _sample_instance(num_words: int, rng: SplitMix64) -> Tuple[List[str], str]:
    if num_words < 2:
        raise ParamError(f"num_words must be >= 2, got {num_words}")
    corpus = load_words()
    if num_words > len(corpus):
        raise ParamError(f"num_words {num_words} exceeds corpus size {len(corpus)}")
    words = rng.sample(corpus, num_words)
    alphabet = list(string.ascii_lowercase)
    rng.shuffle(alphabet)
    return words, "".join(alphabet)


def wordsort_generate(num_words: int, seed: int) -> Tuple[Dict[str, Any], List[str]]:
    rng = SplitMix64(seed)
    words, alphabet = _sample_instance(num_words, rng)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "task": "word_sorting",
        "mistake": 0,
        "words": words,
        "alphabet": alphabet,
    }
    return payload, wordsort_order(words, alphabet)


def wordsort_mistake_generate(num_words: int, seed: int) -> Tuple[Dict[str, Any], int]:
    rng = SplitMix64(seed)
    words, alphabet = _sample_instance(num_words, rng)
    correct = wordsort_order(words, alphabet)
    step = rng.randint(1, num_words)
    # plant a single wrong entry: some other word from the list
    wrong = correct[step - 1]
    while wrong == correct[step - 1]:
        wrong = rng.choice(words)
    claimed = list(correct)
    claimed[step - 1] = wrong
    payload = {
        "schema_version": SCHEMA_VERSION,
        "task": "word_sorting",
        "mistake": 1,
        "words": words,
        "alphabet": alphabet,
        "claimed": claimed,
    }
    return payload, step


def verify_wordsort(payload: Dict[str, Any], candidate: Any) -> bool:
    words, alphabet = payload["words"], payload["alphabet"]
    if payload.get("mistake"):
        correct = wordsort_order(words, alphabet)
        claimed = payload["claimed"]
        truth = next(i for i, (a, b) in enumerate(zip(claimed, correct), start=1) if a != b)
        return isinstance(candidate, int) and not isinstance(candidate, bool) and candidate == truth
    return isinstance(candidate, list) and candidate == wordsort_order(words, alphabet)


def _alphabet_blurb(alphabet: str) -> str:
    return (
        "Use this custom alphabet order (earliest letter sorts first): "
        + " ".join(alphabet)
        + ". Compare words letter by letter under that order; a word comes "
        "before any longer word that begins with it."
    )


def render_wordsort(payload: Dict[str, Any]) -> str:
    if payload.get("mistake"):
        steps = "\n".join(
            f"Step {i}: {w}" for i, w in enumerate(payload["claimed"], start=1)
        )
        return (
            "Someone claims to have sorted these words.\n"
            + _alphabet_blurb(payload["alphabet"])
            + "\n\nWords: "
            + ", ".join(payload["words"])
            + "\n\nClaimed sorted order:\n"
            + steps
            + "\n\nExactly one step shows the wrong word. Respond with that "
            "step's number only."
        )
    return (
        "Sort these words.\n"
        + _alphabet_blurb(payload["alphabet"])
        + "\n\nWords: "
        + ", ".join(payload["words"])
        + "\n\nRespond with the words in sorted order on one line, separated "
        "by single spaces."
    )


def _parse_wordsort(payload: Dict[str, Any], text: str) -> Optional[Union[List[str], int]]:
    s = text.strip()
    if payload.get("mistake"):
        return int(s) if s.isdigit() else None
    tokens = [t.lower() for t in re.split(r"[\s,]+", s) if t]
    if not tokens or any(not t.isalpha() for t in tokens):
        return None
    return tokens


def _serialize_wordsort(value: Any) -> str:
    if isinstance(value, list):
        return " ".join(value)
    return str(value)


SCHEMA = ParamSchema((
    ParamSpec("num_words", "int", 2, 12, easy=4, hard=8),
    ParamSpec("mistake", "int", 0, 1, easy=0, hard=0),
))

DESCRIPTOR = TaskDescriptor(
    id="word_sorting",
    schema=SCHEMA,
    generate=lambda params, seed: (
        wordsort_mistake_generate(params["num_words"], seed)
        if params["mistake"]
        else wordsort_generate(params["num_words"], seed)
    ),
    verify=verify_wordsort,
    render=render_wordsort,
    parse_answer=_parse_wordsort,
    serialize_answer=_serialize_wordsort,
)
