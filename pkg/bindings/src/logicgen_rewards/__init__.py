"""Scoring facade for RL training loops.

String-in/string-out wrappers around the core verify/reward machinery:
extract the final answer from a raw response, score one response, or score
a whole rollout batch. Inputs are plain strings (instances travel as JSON)
so the surface stays small and version-stable.

All functions are stateless and safe to call from multiple threads; the
task registry is built once at import and never mutated afterwards.
"""

from __future__ import annotations

import json
from typing import List, Optional, Sequence, Tuple

from logicgen import (
    LogicGenError,
    PayloadError,
    __version__ as _core_version,
    check_format,
    compute_reward,
    default_registry,
)

__version__ = _core_version  # mirrors the core package
__all__ = ["BatchItemError", "py_extract_answer", "py_reward", "py_reward_batch", "__version__"]

_REGISTRY = default_registry()


class BatchItemError(ValueError):
    """A batch item was structurally unusable; ``index`` names the culprit."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"item {index}: {reason}")
        self.index = index


def _load_payload(task: str, instance_json: str) -> dict:
    if not isinstance(task, str):
        raise TypeError(f"task must be a string, got {type(task).__name__}")
    if not isinstance(instance_json, str):
        raise TypeError(f"instance_json must be a JSON string, got {type(instance_json).__name__}")
    _REGISTRY.get(task)  # unknown task raises here
    try:
        payload = json.loads(instance_json)
    except ValueError as exc:
        raise PayloadError(f"instance_json is not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise PayloadError("instance payload must be a JSON object")
    if payload.get("task") != task:
        raise PayloadError(
            f"payload names task {payload.get('task')!r}, expected {task!r}"
        )
    # every genuine instance renders (that is how its prompt was built), so
    # rendering doubles as a full structural check of the payload fields
    try:
        _REGISTRY.get(task).render(payload)
    except LogicGenError:
        raise
    except Exception as exc:
        raise PayloadError(f"payload does not match the {task} schema: {exc}") from exc
    return payload


def py_reward(task: str, instance_json: str, response: str) -> int:
    """Binary reward for one raw model response.

    Returns 1 iff the response carries well-formed think/answer tags AND
    the extracted answer satisfies the task rules — identical to the core
    reward on the same inputs. Unknown tasks and malformed instance
    payloads raise; malformed *responses* are simply wrong (0).
    """
    payload = _load_payload(task, instance_json)
    return compute_reward(_REGISTRY, task, payload, response).reward


def py_reward_batch(items: Sequence[Tuple[str, str, str]]) -> List[int]:
    """Score a batch of (task, instance_json, response) triples.

    Order-preserving and elementwise equal to :func:`py_reward`. The batch
    must be nonempty; the first structurally broken item aborts the whole
    call with a :class:`BatchItemError` naming its index.
    """
    seq = list(items)
    if not seq:
        raise ValueError("py_reward_batch: empty batch")
    rewards: List[int] = []
    for i, item in enumerate(seq):
        try:
            task, instance_json, response = item
        except (TypeError, ValueError):
            raise BatchItemError(i, "expected a (task, instance_json, response) triple") from None
        try:
            rewards.append(py_reward(task, instance_json, response))
        except Exception as exc:
            raise BatchItemError(i, str(exc)) from exc
    return rewards


def py_extract_answer(response: str) -> Optional[str]:
    """Trimmed content of the final answer tag, or None.

    Matches the core format check exactly: the answer text is only
    extracted when both tag pairs are present, and the last answer pair
    wins. Never raises.
    """
    return check_format(response).answer_text
