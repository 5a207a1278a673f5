"""Task registry: difficulty-parameter schemas, seeding, and dispatch.

A task plugin is a :class:`TaskDescriptor` bundling its parameter schema,
generator, verifier, prompt renderer, and the answer text grammar. The
registry is immutable after startup; generation and verification are pure,
so everything here is safe to call from multiple threads.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

from .errors import ParamError, PayloadError, RegistrationError, UnknownTaskError

ParamValue = Union[int, Fraction]
Params = Dict[str, ParamValue]
Payload = Dict[str, Any]

_TASK_ID_RE = re.compile(r"^[a-z0-9_]+$")
_WS_RE = re.compile(r"\s+")

#: Version stamped into every payload and dataset record.
SCHEMA_VERSION = 1


def normalize_prompt(text: str) -> str:
    """Trim and collapse whitespace runs to single spaces."""
    return _WS_RE.sub(" ", text).strip()


def prompt_id(prompt: str) -> str:
    """Content id: lowercase hex SHA-256 of the normalized prompt."""
    return hashlib.sha256(normalize_prompt(prompt).encode("utf-8")).hexdigest()


def derive_seed(master_seed: int, task: str, index: int) -> int:
    """Per-instance seed: low 64 bits of SHA-256(master || task || index).

    master_seed and index are encoded as fixed-width 8-byte big-endian
    integers around the UTF-8 task name, so seeds are reproducible
    independent of generation order.
    """
    h = hashlib.sha256()
    h.update((master_seed & ((1 << 64) - 1)).to_bytes(8, "big"))
    h.update(task.encode("utf-8"))
    h.update((index & ((1 << 64) - 1)).to_bytes(8, "big"))
    return int.from_bytes(h.digest()[-8:], "big")


@dataclass(frozen=True)
class ParamSpec:
    """One difficulty parameter: bounds, presets, and its monotone direction.

    ``harder_when_larger`` records whether increasing the value is intended
    to increase difficulty (used for documentation and ladder sanity checks,
    not enforced at generation time).
    """

    name: str
    kind: str  # "int" | "rational"
    min: ParamValue
    max: ParamValue
    easy: ParamValue
    hard: ParamValue
    harder_when_larger: bool = True

    def __post_init__(self):
        if self.kind not in ("int", "rational"):
            raise ParamError(f"{self.name}: unknown kind {self.kind!r}")
        for label, v in (("easy", self.easy), ("hard", self.hard)):
            if not (self.min <= v <= self.max):
                raise ParamError(f"{self.name}: default-{label} {v} outside [{self.min}, {self.max}]")

    def check(self, value: ParamValue) -> ParamValue:
        if self.kind == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ParamError(f"{self.name}: expected integer, got {value!r}")
        else:
            if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
                raise ParamError(f"{self.name}: expected integer or rational, got {value!r}")
            value = Fraction(value)
        if not (self.min <= value <= self.max):
            raise ParamError(f"{self.name}: {value} outside [{self.min}, {self.max}]")
        return value


@dataclass(frozen=True)
class ParamSchema:
    """Ordered parameter declarations for one task."""

    specs: Tuple[ParamSpec, ...]

    def names(self) -> List[str]:
        return [s.name for s in self.specs]

    def validate(self, params: Mapping[str, ParamValue]) -> Params:
        """Check completeness and ranges; returns params in schema order."""
        unknown = set(params) - {s.name for s in self.specs}
        if unknown:
            raise ParamError(f"unknown parameter(s): {sorted(unknown)}")
        out: Params = {}
        for spec in self.specs:
            if spec.name not in params:
                raise ParamError(f"missing parameter: {spec.name}")
            out[spec.name] = spec.check(params[spec.name])
        return out

    def easy_params(self) -> Params:
        return {s.name: s.easy for s in self.specs}

    def hard_params(self) -> Params:
        return {s.name: s.hard for s in self.specs}


@dataclass(frozen=True)
class Instance:
    """One generated puzzle with its self-verifying reference answer."""

    task: str
    params: Params
    seed: int
    payload: Payload
    reference_answer: Any
    prompt: str
    id: str


@dataclass(frozen=True)
class TaskDescriptor:
    """A registered task plugin.

    ``generate(params, seed)`` returns ``(payload, reference_answer)`` and
    must be a pure function of its arguments. ``verify(payload, candidate)``
    accepts any structurally valid candidate, not only the reference.
    ``parse_answer(payload, text)`` maps model answer text to the task's
    canonical answer value (None when unparseable or structurally wrong for
    this payload, e.g. a grid of the wrong shape); ``serialize_answer`` is
    its inverse on canonical values.
    """

    id: str
    schema: ParamSchema
    generate: Callable[[Params, int], Tuple[Payload, Any]]
    verify: Callable[[Payload, Any], bool]
    render: Callable[[Payload], str]
    parse_answer: Callable[[Payload, str], Optional[Any]]
    serialize_answer: Callable[[Any], str]
    easy_excluded: bool = False

    def __post_init__(self):
        if not _TASK_ID_RE.match(self.id):
            raise RegistrationError(f"task id {self.id!r} must match [a-z0-9_]+")


class Registry:
    """Ordered collection of task descriptors; immutable once populated."""

    def __init__(self):
        self._tasks: Dict[str, TaskDescriptor] = {}

    def register(self, descriptor: TaskDescriptor) -> "Registry":
        if descriptor.id in self._tasks:
            raise RegistrationError(f"task {descriptor.id!r} already registered")
        self._tasks[descriptor.id] = descriptor
        return self

    def list_tasks(self) -> List[str]:
        return list(self._tasks)

    def __contains__(self, task: str) -> bool:
        return task in self._tasks

    def get(self, task: str) -> TaskDescriptor:
        try:
            return self._tasks[task]
        except KeyError:
            raise UnknownTaskError(f"unknown task: {task!r}") from None

    def generate_instance(self, task: str, params: Mapping[str, ParamValue], seed: int) -> Instance:
        """Generate one instance; deterministic in (task, params, seed)."""
        desc = self.get(task)
        checked = desc.schema.validate(params)
        payload, reference = desc.generate(checked, seed)
        if not desc.verify(payload, reference):
            raise PayloadError(f"{task}: generated reference answer failed verification")
        prompt = desc.render(payload)
        return Instance(
            task=task,
            params=checked,
            seed=seed,
            payload=payload,
            reference_answer=reference,
            prompt=prompt,
            id=prompt_id(prompt),
        )

    def verify_answer(self, task: str, payload: Payload, candidate: Any) -> bool:
        """True iff the candidate satisfies all task rules against payload."""
        desc = self.get(task)
        return desc.verify(payload, candidate)


def params_to_jsonable(params: Params) -> Dict[str, Any]:
    """Rationals serialize as exact "p/q" strings; ints stay ints."""
    out: Dict[str, Any] = {}
    for k, v in params.items():
        if isinstance(v, Fraction):
            out[k] = int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        else:
            out[k] = v
    return out


def params_from_jsonable(data: Mapping[str, Any]) -> Params:
    out: Params = {}
    for k, v in data.items():
        if isinstance(v, str):
            num, _, den = v.partition("/")
            out[k] = Fraction(int(num), int(den)) if den else Fraction(int(num))
        elif isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParamError(f"{k}: cannot decode parameter value {v!r}")
        elif isinstance(v, float):
            out[k] = Fraction(v).limit_denominator(10**6)
        else:
            out[k] = v
    return out
