"""Think/answer text protocol, binary reward, and evaluation metrics.

The reward is strictly binary: 1 iff the response carries both tag pairs
and the extracted answer verifies against the task rules, 0 otherwise.
No partial credit, no length terms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

from .registry import Payload, Registry

_THINK_RE = re.compile(r"<think>(.*?)</think>", re.DOTALL)
_ANSWER_RE = re.compile(r"<answer>(.*?)</answer>", re.DOTALL)

#: Self-correction phrases counted by reflection_ratio (matched as
#: case-insensitive substrings, no stemming).
REFLECTION_PHRASES = (
    "recheck",
    "rethink",
    "try again",
    "let's correct it",
    "re-evaluate",
    "check again",
    "think again",
)

#: Instruction paragraph prepended to every training prompt.
PROMPT_INSTRUCTION = (
    "Solve the following problem step by step. First, think about the "
    "reasoning process in the mind and then provide the answer. The "
    "reasoning process is enclosed within <think> </think> and the final "
    "answer is enclosed within <answer> </answer> tags, respectively, "
    "i.e., <think> reasoning process here </think> <answer> answer "
    "here</answer>."
)


@dataclass(frozen=True)
class ParsedResponse:
    """Format verdict plus the extracted answer text.

    ``answer_text`` is populated only when the format check passes
    (both tag pairs present); it holds the trimmed content of the LAST
    well-formed answer pair.
    """

    format_ok: bool
    answer_text: Optional[str] = None


@dataclass(frozen=True)
class Verdict:
    format_ok: bool
    correct: bool
    reward: int  # 1 iff format_ok and correct


def extract_answer_text(text: str) -> Optional[str]:
    """Trimmed content of the last <answer> pair, independent of format."""
    matches = _ANSWER_RE.findall(text)
    if not matches:
        return None
    return matches[-1].strip()


def check_format(text: str) -> ParsedResponse:
    """Format check: at least one well-nested pair of each tag.

    Tag matching is case-sensitive and exact. Never raises on arbitrary
    input; malformed text simply yields ``format_ok=False``.
    """
    if not isinstance(text, str):
        return ParsedResponse(format_ok=False)
    has_think = _THINK_RE.search(text) is not None
    answers = _ANSWER_RE.findall(text)
    if has_think and answers:
        return ParsedResponse(format_ok=True, answer_text=answers[-1].strip())
    return ParsedResponse(format_ok=False)


def compute_reward(registry: Registry, task: str, payload: Payload, response: str) -> Verdict:
    """Binary reward: 1 iff format holds and the parsed answer verifies.

    Correctness is judged on the last answer-tag content even when the
    format check fails, so the (format, correct) combinations are all
    observable; only format AND correct earns the reward.
    """
    desc = registry.get(task)
    parsed = check_format(response)
    answer_text = extract_answer_text(response) if isinstance(response, str) else None
    correct = False
    if answer_text is not None:
        try:
            candidate = desc.parse_answer(payload, answer_text)
        except Exception:
            candidate = None
        if candidate is not None:
            try:
                correct = bool(desc.verify(payload, candidate))
            except Exception:
                correct = False
    reward = 1 if (parsed.format_ok and correct) else 0
    return Verdict(format_ok=parsed.format_ok, correct=correct, reward=reward)


def avg_at_k(rewards: Sequence[int]) -> Fraction:
    """Mean reward over k attempts at one instance, as an exact rational."""
    if not rewards:
        raise ValueError("avg_at_k: empty attempt set")
    return Fraction(sum(rewards), len(rewards))


def pass_at_k(rewards: Sequence[int]) -> int:
    """1 iff any of the k attempts succeeded."""
    if not rewards:
        raise ValueError("pass_at_k: empty attempt set")
    return 1 if any(r == 1 for r in rewards) else 0


def reflection_ratio(responses: Sequence[str]) -> Fraction:
    """Fraction of responses containing at least one reflection phrase."""
    if not responses:
        raise ValueError("reflection_ratio: empty response list")
    hits = 0
    for text in responses:
        low = text.lower()
        if any(p in low for p in REFLECTION_PHRASES):
            hits += 1
    return Fraction(hits, len(responses))


def render_training_prompt(problem_text: str, duplicate_instruction: bool = False) -> str:
    """Wrap a problem statement with the tag-protocol instruction.

    ``duplicate_instruction=True`` repeats the instruction paragraph twice
    back-to-back; the default emits a single copy.
    """
    instruction = PROMPT_INSTRUCTION
    if duplicate_instruction:
        instruction = instruction + "\n\n" + PROMPT_INSTRUCTION
    if not problem_text:
        return instruction
    return instruction + "\n\n" + problem_text
