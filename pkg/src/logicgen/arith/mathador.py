"""Mathador round: hit the target from five dice, everything at most once.

Payload schema (version 1):
    task: "mathador"
    numbers: the five dice values (sorted list)
    target: integer in 1..99

Rules: build one expression from a subset of the numbers (each number at
most once) where each of + - * / appears at most once, evaluating exactly
to the target. Dice follow the tabletop set (d4, d6, d8, d12, d20);
generation rerolls until the target is reachable but not itself rolled.
"""

from __future__ import annotations

from typing import Any, Dict, List, Tuple

from ..errors import GenerationExhausted, PayloadError
from ..registry import SCHEMA_VERSION, ParamSchema, TaskDescriptor
from ..rng import SplitMix64
from . import expr

RETRY_BUDGET = 1000
DICE = (4, 6, 8, 12, 20)


def mathador_generate(seed: int) -> Tuple[Dict[str, Any], str]:
    rng = SplitMix64(seed)
    for _ in range(RETRY_BUDGET):
        numbers = sorted(rng.randint(1, faces) for faces in DICE)
        target = rng.randint(1, 99)
        if target in numbers:
            continue
        witness = expr.search(numbers, target, use_all=False, each_op_once=True)
        if witness is None:
            continue
        payload = {
            "schema_version": SCHEMA_VERSION,
            "task": "mathador",
            "numbers": numbers,
            "target": target,
        }
        return payload, expr.to_string(witness)
    raise GenerationExhausted("mathador: no solvable roll found", RETRY_BUDGET)


def _check_payload(payload: Dict[str, Any]) -> Tuple[List[int], int]:
    try:
        numbers = list(payload["numbers"])
        target = payload["target"]
    except (KeyError, TypeError):
        raise PayloadError("mathador payload missing numbers/target") from None
    if not numbers or any(isinstance(v, bool) or not isinstance(v, int) for v in numbers):
        raise PayloadError("numbers must be a non-empty list of integers")
    return numbers, target


def _multiset_within(sub: List[int], full: List[int]) -> bool:
    pool = list(full)
    for v in sub:
        if v in pool:
            pool.remove(v)
        else:
            return False
    return True


def verify_mathador(payload: Dict[str, Any], candidate: Any) -> bool:
    numbers, target = _check_payload(payload)
    tree = expr.parse(candidate) if isinstance(candidate, str) else None
    if tree is None:
        return False
    if not _multiset_within(expr.leaves(tree), numbers):
        return False
    ops = expr.operators(tree)
    if len(ops) != len(set(ops)):
        return False
    return expr.evaluate(tree) == target


def render_mathador(payload: Dict[str, Any]) -> str:
    numbers, target = _check_payload(payload)
    return "\n".join([
        f"Mathador round: the dice rolled {', '.join(map(str, numbers))} and the "
        f"target is {target}.",
        "Build one arithmetic expression that equals the target. You may use "
        "each rolled number at most once (you do not have to use them all), "
        "and each of the four operations +, -, *, / at most once. Parentheses "
        "are allowed.",
        "",
        f"Give a single expression that evaluates to {target}.",
    ])


SCHEMA = ParamSchema(())

DESCRIPTOR = TaskDescriptor(
    id="mathador",
    schema=SCHEMA,
    generate=lambda params, seed: mathador_generate(seed),
    verify=verify_mathador,
    render=render_mathador,
    parse_answer=lambda payload, text: text.strip() or None,
    serialize_answer=str,
)
