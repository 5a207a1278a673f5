"""Bracket-sequence tasks.

Two tasks share one generator:

* ``dyck_language`` — show the first ``prefix_cut`` characters of a balanced
  sequence, ask for the minimal closing completion.
* ``dyck_language_errors`` — corrupt a balanced sequence and ask for the
  1-based index of the first character at which it becomes invalid.  An
  otherwise-clean sequence left unclosed at the end is "invalid at index
  length+1"; the prompt states that convention.  With ``as_steps=1`` the
  same question is rendered as a step-by-step transcript with one wrong
  step (the end marker becomes step length+1).
"""

from __future__ import annotations

from typing import Any, Dict, Optional, Tuple

from ..errors import GenerationExhausted, ParamError
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64

RETRY_BUDGET = 1000

PAIRS = ("()", "[]", "{}", "<>")
_OPEN = {p[0]: p[1] for p in PAIRS}
_CLOSE = {p[1]: p[0] for p in PAIRS}
_ALL_CHARS = "".join(PAIRS)


def open_stack(sequence: str) -> Optional[str]:
    """Unmatched openers of a valid prefix, bottom-up; None if invalid."""
    stack = []
    for ch in sequence:
        if ch in _OPEN:
            stack.append(ch)
        elif ch in _CLOSE:
            if not stack or stack[-1] != _CLOSE[ch]:
                return None
            stack.pop()
        else:
            return None
    return "".join(stack)


def is_balanced(sequence: str) -> bool:
    return open_stack(sequence) == ""


def minimal_completion(prefix: str) -> str:
    """Shortest suffix that balances the prefix: matched closers, innermost first."""
    stack = open_stack(prefix)
    if stack is None:
        raise ParamError("prefix is not balanced-extendable")
    return "".join(_OPEN[ch] for ch in reversed(stack))


def first_violation(sequence: str) -> Optional[int]:
    """1-based index of the first char with no valid continuation.

    A closer that mismatches (or underflows) the stack violates at its own
    position; a sequence that ends with openers pending violates at
    len+1. Balanced input returns None.
    """
    stack = []
    for i, ch in enumerate(sequence, start=1):
        if ch in _OPEN:
            stack.append(ch)
        elif ch in _CLOSE:
            if not stack or stack[-1] != _CLOSE[ch]:
                return i
            stack.pop()
        else:
            return i
    return len(sequence) + 1 if stack else None


def random_balanced(length: int, max_depth: int, kinds: int, rng: SplitMix64) -> str:
    """Random balanced sequence of exactly `length` chars over `kinds` bracket
    kinds, nesting depth <= max_depth with the bound attained at least once."""
    if length < 2 or length % 2:
        raise ParamError(f"length must be even and >= 2, got {length}")
    if not 1 <= kinds <= 4:
        raise ParamError(f"kinds must be in [1, 4], got {kinds}")
    if not 1 <= max_depth <= length // 2:
        raise ParamError(
            f"max_depth {max_depth} infeasible for length {length} "
            f"(needs 1 <= max_depth <= length/2)"
        )
    out = []
    stack = []
    reached = False
    remaining = length
    while remaining:
        depth = len(stack)
        # a move is legal if the rest can still close everything and,
        # if the depth bound is not yet attained, still climb to it
        def ok(d: int, hit: bool) -> bool:
            r = remaining - 1
            if d > r:
                return False
            return hit or r >= 2 * max_depth - d

        can_open = depth < max_depth and ok(depth + 1, reached or depth + 1 == max_depth)
        can_close = depth > 0 and ok(depth - 1, reached)
        if can_open and (not can_close or rng.coin()):
            ch = PAIRS[rng.below(kinds)][0]
            stack.append(ch)
            out.append(ch)
            reached = reached or len(stack) == max_depth
        else:
            assert can_close
            out.append(_OPEN[stack.pop()])
        remaining -= 1
    return "".join(out)


def dyck_generate(
    length: int, max_depth: int, kinds: int, prefix_cut: int, seed: int
) -> Tuple[Dict[str, Any], str]:
    """Completion instance: payload carries the prefix, reference is the
    minimal closing suffix. Prefers prefixes with at least one open bracket;
    falls back to a balanced cut only if the parameters force it."""
    if not 0 < prefix_cut < length:
        raise ParamError(f"prefix_cut must be in (0, {length}), got {prefix_cut}")
    rng = SplitMix64(seed)
    prefix = ""
    for _ in range(RETRY_BUDGET):
        sequence = random_balanced(length, max_depth, kinds, rng)
        prefix = sequence[:prefix_cut]
        if open_stack(prefix):
            break
    payload = {
        "schema_version": SCHEMA_VERSION,
        "task": "dyck_language",
        "prefix": prefix,
        "kinds": kinds,
    }
    return payload, minimal_completion(prefix)


def dyck_corrupt(sequence: str, num_errors: int, seed: int) -> Tuple[str, int]:
    """Replace num_errors positions so the sequence becomes invalid; returns
    (corrupted, 1-based first-violation index, end-of-string = len+1)."""
    if not is_balanced(sequence):
        raise ParamError("dyck_corrupt needs a balanced input sequence")
    if not 1 <= num_errors <= len(sequence):
        raise ParamError(f"num_errors must be in [1, {len(sequence)}], got {num_errors}")
    alphabet = "".join(p for p in PAIRS if p[0] in sequence or p[1] in sequence)
    rng = SplitMix64(seed)
    for _ in range(RETRY_BUDGET):
        chars = list(sequence)
        for pos in rng.sample(range(len(sequence)), num_errors):
            repl = chars[pos]
            while repl == chars[pos]:
                repl = alphabet[rng.below(len(alphabet))]
            chars[pos] = repl
        corrupted = "".join(chars)
        idx = first_violation(corrupted)
        if idx is not None:
            return corrupted, idx
    raise ParamError(f"could not invalidate sequence {sequence!r} with {num_errors} errors")


def _spaced(s: str) -> str:
    return " ".join(s)


def _kinds_note(kinds: int) -> str:
    shown = ", ".join(f"{p[0]} {p[1]}" for p in PAIRS[:kinds])
    return f"The sequence uses the bracket pairs: {shown}."


# --- completion task -------------------------------------------------------

def verify_completion(payload: Dict[str, Any], candidate: Any) -> bool:
    if not isinstance(candidate, str):
        return False
    prefix = payload["prefix"]
    stack = open_stack(prefix)
    if stack is None:
        return False
    return len(candidate) == len(stack) and is_balanced(prefix + candidate)


def render_completion(payload: Dict[str, Any]) -> str:
    return (
        "Complete the rest of this bracket sequence so that all brackets close "
        "properly. "
        + _kinds_note(payload["kinds"])
        + " Respond with exactly the closing brackets that are still needed, in "
        "order, and nothing else.\n\n"
        f"Sequence so far: {_spaced(payload['prefix'])}"
    )


def _parse_brackets(payload: Dict[str, Any], text: str) -> Optional[str]:
    s = "".join(text.split())
    if any(ch not in _ALL_CHARS for ch in s):
        return None
    return s


SCHEMA_COMPLETION = ParamSchema((
    ParamSpec("length", "int", 2, 60, easy=8, hard=26),
    ParamSpec("max_depth", "int", 1, 30, easy=3, hard=8),
    ParamSpec("kinds", "int", 1, 4, easy=2, hard=3),
    ParamSpec("prefix_cut", "int", 1, 59, easy=5, hard=17),
))

DESCRIPTOR_COMPLETION = TaskDescriptor(
    id="dyck_language",
    schema=SCHEMA_COMPLETION,
    generate=lambda params, seed: dyck_generate(
        params["length"], params["max_depth"], params["kinds"], params["prefix_cut"], seed
    ),
    verify=verify_completion,
    render=render_completion,
    parse_answer=_parse_brackets,
    serialize_answer=_spaced,
)


# --- first-error task ------------------------------------------------------

def errors_generate(
    length: int, max_depth: int, kinds: int, num_errors: int, as_steps: int, seed: int
) -> Tuple[Dict[str, Any], int]:
    if as_steps not in (0, 1):
        raise ParamError(f"as_steps must be 0 or 1, got {as_steps}")
    if num_errors > length:
        raise ParamError(f"num_errors {num_errors} exceeds length {length}")
    rng = SplitMix64(seed)
    sequence = random_balanced(length, max_depth, kinds, rng)
    corrupted, idx = dyck_corrupt(sequence, num_errors, rng.next_u64())
    payload = {
        "schema_version": SCHEMA_VERSION,
        "task": "dyck_language_errors",
        "sequence": corrupted,
        "kinds": kinds,
        "as_steps": as_steps,
    }
    return payload, idx


def verify_errors(payload: Dict[str, Any], candidate: Any) -> bool:
    truth = first_violation(payload["sequence"])
    return isinstance(candidate, int) and not isinstance(candidate, bool) and candidate == truth


def render_errors(payload: Dict[str, Any]) -> str:
    seq = payload["sequence"]
    n = len(seq)
    if payload.get("as_steps"):
        steps = [f"Step {i}: write {ch}" for i, ch in enumerate(seq, start=1)]
        steps.append(f"Step {n + 1}: declare the sequence complete and balanced")
        return (
            "Someone builds a bracket sequence one character at a time and then "
            "declares it finished. "
            + _kinds_note(payload["kinds"])
            + " At least one step is wrong.\n\n"
            + "\n".join(steps)
            + "\n\nWhich step is the first mistake - the first step after which "
            "the sequence can no longer be completed to a balanced one (or the "
            "final declaration, if that is the first wrong claim)? Respond with "
            "the step number only."
        )
    return (
        "This bracket sequence is invalid. "
        + _kinds_note(payload["kinds"])
        + " Find the first character at which it goes wrong: the earliest "
        "position such that no way of continuing from there could balance the "
        "sequence. If every character is consistent but brackets are left open "
        f"at the end, answer {n + 1} (one past the last position). Respond with "
        "the 1-based position number only.\n\n"
        f"Sequence: {_spaced(seq)}"
    )


def _parse_index(payload: Dict[str, Any], text: str) -> Optional[int]:
    s = text.strip()
    if not s.isdigit():
        return None
    return int(s)


SCHEMA_ERRORS = ParamSchema((
    ParamSpec("length", "int", 2, 60, easy=8, hard=24),
    ParamSpec("max_depth", "int", 1, 30, easy=3, hard=7),
    ParamSpec("kinds", "int", 1, 4, easy=2, hard=3),
    ParamSpec("num_errors", "int", 1, 60, easy=1, hard=2, harder_when_larger=False),
    ParamSpec("as_steps", "int", 0, 1, easy=0, hard=0),
))

DESCRIPTOR_ERRORS = TaskDescriptor(
    id="dyck_language_errors",
    schema=SCHEMA_ERRORS,
    generate=lambda params, seed: errors_generate(
        params["length"], params["max_depth"], params["kinds"],
        params["num_errors"], params["as_steps"], seed
    ),
    verify=verify_errors,
    render=render_errors,
    parse_answer=_parse_index,
    serialize_answer=str,
)
