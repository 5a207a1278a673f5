"""Liar-chain deduction task.

Person 0's honesty is stated outright (the anchor); each later person makes
a claim about the person before them. Truth values propagate uniquely down
the chain: person i is truthful exactly when their claim about person i-1
matches person i-1's actual honesty. The question asks about one person.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from ..errors import ParamError, PayloadError
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64

NAMES = (
    "Alice", "Bob", "Carol", "David", "Elena", "Frank", "Grace", "Henry",
    "Irene", "Jamal", "Karen", "Leon", "Maria", "Noah", "Olga", "Peter",
    "Quinn", "Rosa", "Sam", "Tina", "Umar", "Vera", "Walt", "Ximena",
    "Yusuf", "Zoe", "Amir", "Bella", "Chen", "Dara",
)


def propagate(anchor: bool, statements: List[str]) -> List[bool]:
    """Truth value per person; statements[i] is what person i+1 claims
    about person i ("truth" or "lies")."""
    values = [anchor]
    for claim in statements:
        if claim not in ("truth", "lies"):
            raise PayloadError(f"statement must be 'truth' or 'lies', got {claim!r}")
        values.append((claim == "truth") == values[-1])
    return values


def weboflies_generate(num_people: int, seed: int) -> Tuple[Dict[str, Any], str]:
    if num_people < 2:
        raise ParamError(f"num_people must be >= 2, got {num_people}")
    if num_people > len(NAMES):
        raise ParamError(f"num_people {num_people} exceeds name pool {len(NAMES)}")
    rng = SplitMix64(seed)
    names = rng.sample(NAMES, num_people)
    anchor = rng.coin()
    statements = ["truth" if rng.coin() else "lies" for _ in range(num_people - 1)]
    query = rng.below(num_people)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "task": "web_of_lies",
        "names": names,
        "anchor": anchor,
        "statements": statements,
        "query": query,
    }
    reference = "yes" if propagate(anchor, statements)[query] else "no"
    return payload, reference


def _payload_truth(payload: Dict[str, Any]) -> str:
    try:
        values = propagate(payload["anchor"], payload["statements"])
        return "yes" if values[payload["query"]] else "no"
    except (KeyError, TypeError, IndexError):
        raise PayloadError("malformed web_of_lies payload") from None


def verify_weboflies(payload: Dict[str, Any], candidate: Any) -> bool:
    return isinstance(candidate, str) and candidate.lower() == _payload_truth(payload)


def render_weboflies(payload: Dict[str, Any]) -> str:
    names = payload["names"]
    lines = [f"{names[0]} {'tells the truth' if payload['anchor'] else 'lies'}."]
    for i, claim in enumerate(payload["statements"], start=1):
        said = "tells the truth" if claim == "truth" else "lies"
        lines.append(f"{names[i]} says {names[i - 1]} {said}.")
    target = names[payload["query"]]
    return (
        "In this group each person either always tells the truth or always "
        "lies.\n\n"
        + "\n".join(lines)
        + f"\n\nDoes {target} tell the truth? Respond with yes or no."
    )


def _parse_yesno(payload: Dict[str, Any], text: str) -> Optional[str]:
    s = text.strip().rstrip(".!").lower()
    return s if s in ("yes", "no") else None


SCHEMA = ParamSchema((
    ParamSpec("num_people", "int", 2, 12, easy=3, hard=8),
))

DESCRIPTOR = TaskDescriptor(
    id="web_of_lies",
    schema=SCHEMA,
    generate=lambda params, seed: weboflies_generate(params["num_people"], seed),
    verify=verify_weboflies,
    render=render_weboflies,
    parse_answer=_parse_yesno,
    serialize_answer=str,
)
