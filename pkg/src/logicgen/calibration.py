"""Difficulty calibration against model endpoints.

The dual-bound procedure sweeps one parameter axis over a declared ladder
of levels, samples k completions per generated instance, scores them with
the binary reward, and derives two bounds:

* upper bound — the highest level a strong reasoning model still solves at
  least once in k attempts (pass@k > 0), scanned in ascending order with an
  early stop after `patience` consecutive all-zero levels;
* lower bound — the lowest level where a chat model's average pass rate r
  falls strictly inside (0, 0.5).

Endpoints speak the common JSON chat-completions protocol. The API key is
read from an environment variable at request time and never stored,
serialized, or logged. Any object with a ``complete(prompt) -> str`` method
can stand in for the HTTP client, which is how the test suite scripts
deterministic endpoint behavior.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import requests

from .errors import CalibrationTransportError, ParamError
from .protocol import avg_at_k, compute_reward, pass_at_k, render_training_prompt
from .registry import Registry, derive_seed, params_to_jsonable

DEFAULT_N_INSTANCES = 10
DEFAULT_K_UPPER = 10
DEFAULT_K_ESTIMATE = 8
PATIENCE = 2


class AttemptTimeout(Exception):
    """One completion request timed out; the attempt scores 0 and is flagged."""


@dataclass(frozen=True)
class ModelEndpointConfig:
    base_url: str
    model_name: str
    api_key_env: str = "MODEL_API_KEY"
    temperature: float = 1.0
    max_tokens: int = 2048
    request_timeout_s: int = 60
    max_retries: int = 3
    parallelism: int = 1

    def __post_init__(self):
        if self.parallelism < 1:
            raise ParamError("parallelism must be >= 1")

    def to_jsonable(self) -> Dict[str, Any]:
        # the key itself is intentionally absent: only the env var name ships
        return {
            "base_url": self.base_url,
            "model_name": self.model_name,
            "api_key_env": self.api_key_env,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
            "request_timeout_s": self.request_timeout_s,
            "max_retries": self.max_retries,
            "parallelism": self.parallelism,
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "ModelEndpointConfig":
        allowed = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - allowed
        if unknown:
            raise ParamError(f"unknown endpoint config fields: {sorted(unknown)}")
        if "base_url" not in data or "model_name" not in data:
            raise ParamError("endpoint config needs base_url and model_name")
        return cls(**data)


@dataclass(frozen=True)
class DifficultyLadder:
    """One swept parameter axis; all other params pinned by `fixed`."""

    task: str
    axis: str
    levels: Tuple[Any, ...]
    fixed: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.levels:
            raise ParamError("ladder needs at least one level")
        for a, b in zip(self.levels, self.levels[1:]):
            if not b > a:
                raise ParamError("ladder levels must be strictly increasing")

    def params_at(self, level: Any) -> Dict[str, Any]:
        params = dict(self.fixed)
        params[self.axis] = level
        return params

    def validate(self, registry: Registry) -> None:
        schema = registry.get(self.task).schema
        if self.axis not in schema.names():
            raise ParamError(f"{self.task} has no parameter {self.axis!r}")
        for level in self.levels:
            schema.validate(self.params_at(level))


class HTTPChatClient:
    """Minimal chat-completions client with retry/backoff.

    Retries transient transport failures (connection errors, HTTP 429/5xx)
    with exponential backoff plus jitter, capped at max_retries. A request
    timeout is not retried: it surfaces as AttemptTimeout so the caller can
    score the attempt 0. Auth comes from the configured environment
    variable; nothing secret is ever attached to exceptions or logs.
    """

    def __init__(self, config: ModelEndpointConfig, session=None, sleep=time.sleep):
        self.config = config
        self.model_name = config.model_name
        self.parallelism = config.parallelism
        self._session = session or requests.Session()
        self._sleep = sleep

    def _headers(self) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.config.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def complete(self, prompt: str) -> str:
        cfg = self.config
        url = cfg.base_url.rstrip("/") + "/chat/completions"
        body = {
            "model": cfg.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": cfg.temperature,
            "max_tokens": cfg.max_tokens,
        }
        last_error = "no attempt made"
        for attempt in range(cfg.max_retries + 1):
            try:
                resp = self._session.post(
                    url, json=body, headers=self._headers(), timeout=cfg.request_timeout_s
                )
            except requests.Timeout:
                raise AttemptTimeout(f"request timed out after {cfg.request_timeout_s}s")
            except requests.RequestException as exc:
                last_error = f"connection failure: {type(exc).__name__}"
            else:
                if resp.status_code == 200:
                    try:
                        return resp.json()["choices"][0]["message"]["content"]
                    except (ValueError, KeyError, IndexError, TypeError):
                        raise CalibrationTransportError(
                            "malformed completion response body"
                        ) from None
                if resp.status_code in (429,) or resp.status_code >= 500:
                    last_error = f"HTTP {resp.status_code}"
                else:
                    raise CalibrationTransportError(f"HTTP {resp.status_code} from endpoint")
            if attempt < cfg.max_retries:
                self._sleep(min(30.0, 0.5 * 2 ** attempt) * (1 + random.random()))
        raise CalibrationTransportError(
            f"endpoint unreachable after {cfg.max_retries + 1} attempts ({last_error})"
        )


@dataclass(frozen=True)
class LevelResult:
    level: Any
    n_instances: int
    k: int
    rewards: Tuple[Tuple[int, ...], ...]  # [instance][attempt]
    avg: Fraction
    pass_rate: Fraction  # fraction of instances with any success
    timeouts: int

    def to_jsonable(self) -> Dict[str, Any]:
        level = self.level
        if isinstance(level, Fraction):
            level = str(level)
        return {
            "level": level,
            "n_instances": self.n_instances,
            "k": self.k,
            "rewards": [list(r) for r in self.rewards],
            "avg": str(self.avg),
            "pass_rate": str(self.pass_rate),
            "timeouts": self.timeouts,
        }


@dataclass
class CalibrationReport:
    task: str
    axis: str
    levels: List[LevelResult] = field(default_factory=list)
    upper_bound_level: Optional[Any] = None
    lower_bound_level: Optional[Any] = None
    upper_bound_model: Optional[str] = None
    lower_bound_model: Optional[str] = None
    non_monotone: bool = False

    def to_jsonable(self) -> Dict[str, Any]:
        return {
            "task": self.task,
            "axis": self.axis,
            "levels": [lv.to_jsonable() for lv in self.levels],
            "upper_bound_level": self.upper_bound_level,
            "lower_bound_level": self.lower_bound_level,
            "upper_bound_model": self.upper_bound_model,
            "lower_bound_model": self.lower_bound_model,
            "non_monotone": self.non_monotone,
        }


def _resolve_client(endpoint, client):
    if client is not None:
        return client
    if endpoint is None:
        raise ParamError("estimate_pass needs an endpoint config or a client")
    return HTTPChatClient(endpoint)


def estimate_pass(
    registry: Registry,
    task: str,
    params: Mapping[str, Any],
    endpoint: Optional[ModelEndpointConfig] = None,
    *,
    client=None,
    n_instances: int = DEFAULT_N_INSTANCES,
    k: int = DEFAULT_K_ESTIMATE,
    master_seed: int = 0,
) -> LevelResult:
    """Generate n_instances, sample k completions each, score binary rewards.

    Every attempt is recorded: a timed-out request scores 0 and increments
    the timeout counter. Transport failures abort with partial results
    attached to the raised CalibrationTransportError.
    """
    if n_instances < 1 or k < 1:
        raise ParamError("n_instances and k must be >= 1")
    client = _resolve_client(endpoint, client)
    instances = [
        registry.generate_instance(task, params, derive_seed(master_seed, task, i))
        for i in range(n_instances)
    ]
    prompts = [render_training_prompt(inst.prompt) for inst in instances]

    rewards = [[0] * k for _ in range(n_instances)]
    # each job owns its (i, j) cell, so threads never contend on a slot
    timed = [[False] * k for _ in range(n_instances)]
    jobs = [(i, j) for i in range(n_instances) for j in range(k)]

    def run_one(idx: Tuple[int, int]) -> None:
        i, j = idx
        try:
            response = client.complete(prompts[i])
        except AttemptTimeout:
            timed[i][j] = True
            return
        verdict = compute_reward(registry, task, instances[i].payload, response)
        rewards[i][j] = verdict.reward

    def finish() -> LevelResult:
        sets = [tuple(row) for row in rewards]
        return LevelResult(
            level=None,
            n_instances=n_instances,
            k=k,
            rewards=tuple(sets),
            avg=sum(avg_at_k(s) for s in sets) / n_instances,
            pass_rate=Fraction(sum(pass_at_k(s) for s in sets), n_instances),
            timeouts=sum(sum(row) for row in timed),
        )

    parallelism = getattr(client, "parallelism", 1)
    try:
        if parallelism <= 1:
            for idx in jobs:
                run_one(idx)
        else:
            with ThreadPoolExecutor(max_workers=parallelism) as pool:
                list(pool.map(run_one, jobs))
        return finish()
    except CalibrationTransportError as exc:
        raise CalibrationTransportError(
            str(exc),
            partial={
                "rewards": [list(r) for r in rewards],
                "timeouts": sum(sum(row) for row in timed),
            },
        ) from None


def find_upper_bound(
    registry: Registry,
    ladder: DifficultyLadder,
    strong_endpoint: Optional[ModelEndpointConfig] = None,
    *,
    client=None,
    n_instances: int = DEFAULT_N_INSTANCES,
    k: int = DEFAULT_K_UPPER,
    master_seed: int = 0,
    patience: int = PATIENCE,
) -> CalibrationReport:
    """Ascending scan for the highest level the strong model ever solves.

    Stops early after `patience` consecutive levels with pass@k == 0. A
    solved level that appears after an unsolved one marks the report
    non-monotone. The bound lands in report.upper_bound_level (None when
    the model solves nothing).
    """
    client = _resolve_client(strong_endpoint, client)
    ladder.validate(registry)
    report = CalibrationReport(task=ladder.task, axis=ladder.axis)
    report.upper_bound_model = getattr(client, "model_name", None)
    zero_streak = 0
    seen_zero = False
    for level in ladder.levels:
        try:
            stats = estimate_pass(
                registry, ladder.task, ladder.params_at(level),
                client=client, n_instances=n_instances, k=k, master_seed=master_seed,
            )
        except CalibrationTransportError as exc:
            raise CalibrationTransportError(str(exc), partial=report) from None
        stats = _with_level(stats, level)
        report.levels.append(stats)
        if stats.pass_rate > 0:
            if seen_zero:
                report.non_monotone = True
            report.upper_bound_level = level
            zero_streak = 0
        else:
            seen_zero = True
            zero_streak += 1
            if zero_streak >= patience:
                break
    return report


def find_lower_bound(
    registry: Registry,
    ladder: DifficultyLadder,
    chat_endpoint: Optional[ModelEndpointConfig] = None,
    *,
    client=None,
    n_instances: int = DEFAULT_N_INSTANCES,
    k: int = DEFAULT_K_ESTIMATE,
    master_seed: int = 0,
) -> CalibrationReport:
    """Ascending scan for the lowest level with average pass rate in (0, 0.5).

    Both inequalities are strict. The scan stops at the first qualifying
    level; report.lower_bound_level is None when no level qualifies.
    """
    client = _resolve_client(chat_endpoint, client)
    ladder.validate(registry)
    report = CalibrationReport(task=ladder.task, axis=ladder.axis)
    report.lower_bound_model = getattr(client, "model_name", None)
    for level in ladder.levels:
        try:
            stats = estimate_pass(
                registry, ladder.task, ladder.params_at(level),
                client=client, n_instances=n_instances, k=k, master_seed=master_seed,
            )
        except CalibrationTransportError as exc:
            raise CalibrationTransportError(str(exc), partial=report) from None
        stats = _with_level(stats, level)
        report.levels.append(stats)
        if 0 < stats.avg < Fraction(1, 2):
            report.lower_bound_level = level
            break
    return report


def _with_level(stats: LevelResult, level: Any) -> LevelResult:
    return LevelResult(
        level=level,
        n_instances=stats.n_instances,
        k=stats.k,
        rewards=stats.rewards,
        avg=stats.avg,
        pass_rate=stats.pass_rate,
        timeouts=stats.timeouts,
    )
