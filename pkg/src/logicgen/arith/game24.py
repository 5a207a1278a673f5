"""Game of 24 (generalized target): combine all numbers into the target.

Payload schema (version 1):
    task: "game_of_24"
    numbers: multiset of integers (sorted list)
    target: integer

An answer is one arithmetic expression using each given number exactly
once; any of + - * / and parentheses; exact rational evaluation.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from ..errors import GenerationExhausted, ParamError, PayloadError
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64
from . import expr

RETRY_BUDGET = 1000


def game24_generate(m: int, target: int, max_value: int, seed: int) -> Tuple[Dict[str, Any], str]:
    if not 2 <= m <= expr.MAX_SEARCH_NUMBERS:
        raise ParamError(f"m {m} outside [2, {expr.MAX_SEARCH_NUMBERS}]")
    if max_value < 1:
        raise ParamError(f"max_value {max_value} must be positive")
    rng = SplitMix64(seed)
    for _ in range(RETRY_BUDGET):
        numbers = sorted(rng.randint(1, max_value) for _ in range(m))
        witness = expr.search(numbers, target, use_all=True)
        if witness is None:
            continue
        payload = {
            "schema_version": SCHEMA_VERSION,
            "task": "game_of_24",
            "numbers": numbers,
            "target": target,
        }
        return payload, expr.to_string(witness)
    raise GenerationExhausted(
        f"game of 24: no solvable multiset of {m} numbers <= {max_value} for target {target}",
        RETRY_BUDGET,
    )


def _check_payload(payload: Dict[str, Any]) -> Tuple[List[int], int]:
    try:
        numbers = list(payload["numbers"])
        target = payload["target"]
    except (KeyError, TypeError):
        raise PayloadError("game of 24 payload missing numbers/target") from None
    if not numbers or any(isinstance(v, bool) or not isinstance(v, int) for v in numbers):
        raise PayloadError("numbers must be a non-empty list of integers")
    return numbers, target


def verify_game24(payload: Dict[str, Any], candidate: Any) -> bool:
    """Candidate expression must use exactly the given multiset and hit target."""
    numbers, target = _check_payload(payload)
    tree = expr.parse(candidate) if isinstance(candidate, str) else None
    if tree is None:
        return False
    if sorted(expr.leaves(tree)) != sorted(numbers):
        return False
    return expr.evaluate(tree) == target


def render_game24(payload: Dict[str, Any]) -> str:
    numbers, target = _check_payload(payload)
    return "\n".join([
        f"Using the numbers {', '.join(map(str, numbers))}, each exactly once, "
        f"build an arithmetic expression that equals {target}.",
        "You may use addition (+), subtraction (-), multiplication (*), "
        "division (/), and parentheses. Intermediate results may be fractions. "
        "Do not use any other numbers.",
        "",
        f"Give a single expression that evaluates to {target}.",
    ])


SCHEMA = ParamSchema((
    ParamSpec("m", "int", 2, 6, easy=4, hard=6),
    ParamSpec("target", "int", 1, 1000, easy=24, hard=24),
    ParamSpec("max_value", "int", 1, 100, easy=9, hard=13),
))

DESCRIPTOR = TaskDescriptor(
    id="game_of_24",
    schema=SCHEMA,
    generate=lambda params, seed: game24_generate(
        params["m"], params["target"], params["max_value"], seed
    ),
    verify=verify_game24,
    render=render_game24,
    parse_answer=lambda payload, text: text.strip() or None,
    serialize_answer=str,
)
