"""Dataset builder: deduplicated JSONL train/val splits plus a manifest.

Builds are deterministic: per-instance seeds come from derive_seed, records
are emitted in config order, and files are written with compact JSON and LF
line endings, so the same config always produces byte-identical output.

Record schema (keys in this order):
    id, task, difficulty, prompt, answer, seed, split, schema_version
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import __version__
from .errors import ContaminationError, GenerationExhausted, ParamError, PayloadError
from .protocol import avg_at_k, pass_at_k, render_training_prompt
from .registry import (
    SCHEMA_VERSION,
    Params,
    Registry,
    normalize_prompt,
    params_from_jsonable,
    params_to_jsonable,
    prompt_id,
    derive_seed,
)

DEFAULT_COUNT = 100
DEFAULT_VAL_PER_TASK = 10

#: Extra instance draws allowed per requested record before the builder
#: declares the task's distinct-instance space exhausted.
DEDUP_RETRY_FACTOR = 20
DEDUP_RETRY_FLOOR = 1000

STATS_CSV_HEADER = ("task", "instances", "avg_at_k", "pass_at_k")

RECORD_KEYS = ("id", "task", "difficulty", "prompt", "answer", "seed", "split", "schema_version")


@dataclass(frozen=True)
class TaskRequest:
    """One config entry: which task, how many records, at what difficulty.

    Difficulty is either an explicit ``params`` map or a preset name; when
    both are absent the build falls back to the config-level preset.
    """

    task: str
    count: int = DEFAULT_COUNT
    params: Optional[Mapping[str, Any]] = None
    preset: Optional[str] = None

    def __post_init__(self):
        if self.count < 1:
            raise ParamError(f"{self.task}: count must be >= 1, got {self.count}")
        if self.params is not None and self.preset is not None:
            raise ParamError(f"{self.task}: give params or a preset, not both")
        if self.preset is not None and self.preset not in ("easy", "hard"):
            raise ParamError(f"{self.task}: unknown preset {self.preset!r}")

    def to_jsonable(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"task": self.task, "count": self.count}
        if self.params is not None:
            out["params"] = dict(self.params)
        if self.preset is not None:
            out["preset"] = self.preset
        return out

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "TaskRequest":
        unknown = set(data) - {"task", "count", "params", "preset"}
        if unknown:
            raise ParamError(f"unknown task-entry key(s): {sorted(unknown)}")
        if "task" not in data:
            raise ParamError("task entry missing 'task'")
        return cls(
            task=data["task"],
            count=data.get("count", DEFAULT_COUNT),
            params=data.get("params"),
            preset=data.get("preset"),
        )


@dataclass(frozen=True)
class BuildConfig:
    """Everything a dataset build depends on.

    An empty ``tasks`` list with a config-level preset means "every
    registered task at that preset" (the easy preset skips tasks flagged
    easy_excluded). ``contamination_file`` points at a benchmark JSONL with
    one {"prompt": ...} object per line; colliding instances are
    regenerated and counted, or abort the build when
    ``fail_on_contamination`` is set.
    """

    master_seed: int = 0
    tasks: Tuple[TaskRequest, ...] = ()
    preset: Optional[str] = None
    output_dir: str = "dataset"
    contamination_file: Optional[str] = None
    fail_on_contamination: bool = False
    duplicate_instruction: bool = False
    val_per_task: int = DEFAULT_VAL_PER_TASK

    def __post_init__(self):
        if isinstance(self.master_seed, bool) or not isinstance(self.master_seed, int):
            raise ParamError("master_seed must be an integer")
        if not 0 <= self.master_seed < 1 << 64:
            raise ParamError("master_seed must fit in u64")
        if self.preset is not None and self.preset not in ("easy", "hard"):
            raise ParamError(f"unknown preset {self.preset!r}")
        if self.val_per_task < 0:
            raise ParamError("val_per_task must be >= 0")
        if not self.tasks and self.preset is None:
            raise ParamError("config needs task entries or a preset")

    def to_jsonable(self) -> Dict[str, Any]:
        return {
            "master_seed": self.master_seed,
            "tasks": [t.to_jsonable() for t in self.tasks],
            "preset": self.preset,
            "output_dir": self.output_dir,
            "contamination_file": self.contamination_file,
            "fail_on_contamination": self.fail_on_contamination,
            "duplicate_instruction": self.duplicate_instruction,
            "val_per_task": self.val_per_task,
        }

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "BuildConfig":
        known = {
            "master_seed", "tasks", "preset", "output_dir", "contamination_file",
            "fail_on_contamination", "duplicate_instruction", "val_per_task",
        }
        unknown = set(data) - known
        if unknown:
            raise ParamError(f"unknown config key(s): {sorted(unknown)}")
        tasks = tuple(TaskRequest.from_jsonable(t) for t in data.get("tasks", ()))
        return cls(
            master_seed=data.get("master_seed", 0),
            tasks=tasks,
            preset=data.get("preset"),
            output_dir=data.get("output_dir", "dataset"),
            contamination_file=data.get("contamination_file"),
            fail_on_contamination=bool(data.get("fail_on_contamination", False)),
            duplicate_instruction=bool(data.get("duplicate_instruction", False)),
            val_per_task=data.get("val_per_task", DEFAULT_VAL_PER_TASK),
        )


def config_hash(config: BuildConfig) -> str:
    """SHA-256 of the canonical config JSON, minus the output directory.

    Excluding output_dir means rebuilding the same data into a different
    directory yields an identical manifest.
    """
    data = config.to_jsonable()
    data.pop("output_dir")
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class TaskPlan:
    """A task entry resolved against the registry: concrete params, count."""

    task: str
    params: Params
    count: int


def resolve_plans(config: BuildConfig, registry: Registry) -> List[TaskPlan]:
    """Expand config entries (and preset defaults) into validated plans."""
    plans: List[TaskPlan] = []
    if config.tasks:
        for entry in config.tasks:
            desc = registry.get(entry.task)
            preset = entry.preset or config.preset
            if entry.params is not None:
                params = desc.schema.validate(params_from_jsonable(entry.params))
            elif preset == "easy":
                if desc.easy_excluded:
                    raise ParamError(f"{entry.task} is excluded from the easy preset")
                params = desc.schema.easy_params()
            elif preset == "hard":
                params = desc.schema.hard_params()
            else:
                raise ParamError(f"{entry.task}: no params given and no preset set")
            if entry.count < config.val_per_task:
                raise ParamError(
                    f"{entry.task}: count {entry.count} < val_per_task {config.val_per_task}"
                )
            plans.append(TaskPlan(entry.task, params, entry.count))
    else:
        for task in registry.list_tasks():
            desc = registry.get(task)
            if config.preset == "easy" and desc.easy_excluded:
                continue
            params = desc.schema.easy_params() if config.preset == "easy" else desc.schema.hard_params()
            if DEFAULT_COUNT < config.val_per_task:
                raise ParamError(f"default count {DEFAULT_COUNT} < val_per_task {config.val_per_task}")
            plans.append(TaskPlan(task, params, DEFAULT_COUNT))
    seen = set()
    for plan in plans:
        if plan.task in seen:
            raise ParamError(f"duplicate task entry: {plan.task}")
        seen.add(plan.task)
    return plans


def load_benchmark_prompts(path) -> set:
    """Normalized prompt set from a benchmark JSONL file ({"prompt": ...} rows)."""
    prompts = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                text = row["prompt"]
            except (json.JSONDecodeError, TypeError, KeyError):
                raise PayloadError(f"{path}:{lineno}: expected a JSON object with a 'prompt' key") from None
            if not isinstance(text, str):
                raise PayloadError(f"{path}:{lineno}: prompt must be a string")
            prompts.add(normalize_prompt(text))
    return prompts


@dataclass(frozen=True)
class BuildResult:
    train_path: str
    val_path: str
    manifest_path: str
    manifest: Dict[str, Any]


def build_dataset(config: BuildConfig, registry: Registry) -> BuildResult:
    """Generate, dedup, contamination-screen, split, and write the dataset.

    Per task, instance seeds are derived at increasing index; an instance
    whose training prompt duplicates an already-kept record (or matches a
    benchmark prompt) is discarded and the index advances, so retries stay
    deterministic. The last ``val_per_task`` records of each task form the
    validation split.
    """
    plans = resolve_plans(config, registry)
    benchmark = load_benchmark_prompts(config.contamination_file) if config.contamination_file else None

    train_records: List[Dict[str, Any]] = []
    val_records: List[Dict[str, Any]] = []
    seen_ids = set()
    per_task_counts: Dict[str, Dict[str, int]] = {}
    contamination_regenerated = 0

    for plan in plans:
        desc = registry.get(plan.task)
        budget = max(DEDUP_RETRY_FLOOR, plan.count * DEDUP_RETRY_FACTOR)
        records: List[Dict[str, Any]] = []
        index = 0
        while len(records) < plan.count:
            if index >= plan.count + budget:
                raise GenerationExhausted(
                    f"{plan.task}: only {len(records)}/{plan.count} unique instances", index
                )
            seed = derive_seed(config.master_seed, plan.task, index)
            index += 1
            inst = registry.generate_instance(plan.task, plan.params, seed)
            prompt = render_training_prompt(inst.prompt, config.duplicate_instruction)
            rid = prompt_id(prompt)
            if rid in seen_ids:
                continue
            if benchmark is not None and normalize_prompt(prompt) in benchmark:
                if config.fail_on_contamination:
                    raise ContaminationError(
                        f"{plan.task}: generated prompt {rid} matches a benchmark prompt"
                    )
                contamination_regenerated += 1
                continue
            seen_ids.add(rid)
            records.append({
                "id": rid,
                "task": plan.task,
                "difficulty": params_to_jsonable(plan.params),
                "prompt": prompt,
                "answer": desc.serialize_answer(inst.reference_answer),
                "seed": seed,
                "split": "train",
                "schema_version": SCHEMA_VERSION,
            })
        n_val = config.val_per_task
        for record in records[len(records) - n_val:] if n_val else []:
            record["split"] = "val"
        train_part = records[: len(records) - n_val] if n_val else records
        val_part = records[len(records) - n_val:] if n_val else []
        train_records.extend(train_part)
        val_records.extend(val_part)
        per_task_counts[plan.task] = {"train": len(train_part), "val": len(val_part)}

    os.makedirs(config.output_dir, exist_ok=True)
    train_path = os.path.join(config.output_dir, "train.jsonl")
    val_path = os.path.join(config.output_dir, "val.jsonl")
    manifest_path = os.path.join(config.output_dir, "manifest.json")
    _write_jsonl(train_path, train_records)
    _write_jsonl(val_path, val_records)

    manifest = {
        "config_hash": config_hash(config),
        "tool_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "per_task_counts": per_task_counts,
        "contamination_checked": benchmark is not None,
        "contamination_regenerated": contamination_regenerated,
    }
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(manifest, sort_keys=True, indent=2, ensure_ascii=False))
        fh.write("\n")
    return BuildResult(train_path, val_path, manifest_path, manifest)


def _write_jsonl(path: str, records: Sequence[Mapping[str, Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")


def read_jsonl(path) -> List[Dict[str, Any]]:
    """All records from a JSONL file; blank lines are skipped."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(json.loads(line))
    return out


def contamination_check(records: Iterable[Mapping[str, Any]], benchmark_file) -> List[Dict[str, Any]]:
    """Records whose normalized prompt exactly equals a benchmark prompt.

    Returns one collision dict per offending record: its id, task, and the
    normalized prompt that matched.
    """
    benchmark = load_benchmark_prompts(benchmark_file)
    collisions = []
    for record in records:
        prompt = record.get("prompt")
        if not isinstance(prompt, str):
            raise PayloadError("record missing 'prompt'")
        normalized = normalize_prompt(prompt)
        if normalized in benchmark:
            collisions.append({
                "id": record.get("id"),
                "task": record.get("task"),
                "prompt": normalized,
            })
    return collisions


@dataclass(frozen=True)
class StatsRow:
    task: str
    instances: int
    avg: Fraction
    pass_rate: Fraction


def stats(results_file) -> Tuple[List[StatsRow], int]:
    """Per-task mean avg@k and pass@k from a results JSONL file.

    Rows look like {"id": ..., "task": ..., "rewards": [0, 1, ...]}.
    Malformed rows (bad JSON, missing keys, empty or non-binary rewards)
    are skipped; the second return value counts them.
    """
    per_task: Dict[str, List[Tuple[Fraction, int]]] = {}
    skipped = 0
    with open(results_file, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                task = row["task"]
                rewards = row["rewards"]
            except (json.JSONDecodeError, TypeError, KeyError):
                skipped += 1
                continue
            if (
                not isinstance(task, str)
                or not isinstance(rewards, list)
                or not rewards
                or any(isinstance(r, bool) or not isinstance(r, int) or r not in (0, 1) for r in rewards)
            ):
                skipped += 1
                continue
            per_task.setdefault(task, []).append((avg_at_k(rewards), pass_at_k(rewards)))
    rows = []
    for task in sorted(per_task):
        entries = per_task[task]
        n = len(entries)
        avg = sum((a for a, _ in entries), Fraction(0)) / n
        pass_rate = Fraction(sum(p for _, p in entries), n)
        rows.append(StatsRow(task=task, instances=n, avg=avg, pass_rate=pass_rate))
    return rows, skipped


def write_stats_csv(rows: Sequence[StatsRow], out_path) -> None:
    """CSV with the fixed header task,instances,avg_at_k,pass_at_k."""
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(STATS_CSV_HEADER) + "\n")
        for row in rows:
            fh.write(f"{row.task},{row.instances},{float(row.avg)},{float(row.pass_rate)}\n")
