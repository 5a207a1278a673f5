"""Command-line front end.

Verbs: gen, verify, reward, calibrate, stats, check-contamination.
Exit codes: 0 success; 1 verification-false (verify/reward single-shot use,
and check-contamination when collisions exist); 2 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, Mapping, Optional, Sequence

from .builtin import default_registry
from .calibration import (
    DifficultyLadder,
    HTTPChatClient,
    ModelEndpointConfig,
    find_lower_bound,
    find_upper_bound,
)
from .dataset import (
    BuildConfig,
    build_dataset,
    contamination_check,
    read_jsonl,
    stats,
    write_stats_csv,
)
from .errors import LogicGenError, ParamError
from .protocol import compute_reward
from .registry import Registry, params_from_jsonable


def _load_json(path) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _read_text(path) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_payload(path, task: str) -> Dict[str, Any]:
    payload = _load_json(path)
    if not isinstance(payload, dict):
        raise ParamError(f"{path}: instance file must hold a JSON object")
    if payload.get("task") != task:
        raise ParamError(f"{path}: payload is for task {payload.get('task')!r}, not {task!r}")
    return payload


def cmd_gen(args) -> int:
    config = BuildConfig.from_jsonable(_load_json(args.config))
    if args.fail_on_contamination:
        config = BuildConfig.from_jsonable({**config.to_jsonable(), "fail_on_contamination": True})
    result = build_dataset(config, default_registry())
    print(json.dumps({
        "train": result.train_path,
        "val": result.val_path,
        "manifest": result.manifest_path,
        "per_task_counts": result.manifest["per_task_counts"],
        "contamination_regenerated": result.manifest["contamination_regenerated"],
    }, ensure_ascii=False))
    return 0


def cmd_verify(args) -> int:
    registry = default_registry()
    desc = registry.get(args.task)
    payload = _load_payload(args.instance, args.task)
    text = _read_text(args.answer)
    try:
        candidate = desc.parse_answer(payload, text.strip())
    except Exception:
        candidate = None
    ok = candidate is not None and bool(desc.verify(payload, candidate))
    print("true" if ok else "false")
    return 0 if ok else 1


def cmd_reward(args) -> int:
    registry = default_registry()
    payload = _load_payload(args.instance, args.task)
    verdict = compute_reward(registry, args.task, payload, _read_text(args.response))
    print(json.dumps({
        "format_ok": verdict.format_ok,
        "correct": verdict.correct,
        "reward": verdict.reward,
    }))
    return 0 if verdict.reward == 1 else 1


def run_calibrate(config: Mapping[str, Any], registry: Registry, client=None) -> Dict[str, Any]:
    """Run upper/lower bound scans described by a calibrate config dict.

    The config carries an endpoint block, the ladder (task, axis, levels,
    fixed params), a mode ("upper", "lower", or "both"), and optional
    n_instances / k / master_seed overrides. A pre-built client (used by
    tests) takes precedence over the endpoint block.
    """
    known = {"endpoint", "task", "axis", "levels", "fixed", "mode",
             "n_instances", "k", "master_seed", "patience"}
    unknown = set(config) - known
    if unknown:
        raise ParamError(f"unknown calibrate key(s): {sorted(unknown)}")
    for key in ("task", "axis", "levels"):
        if key not in config:
            raise ParamError(f"calibrate config missing {key!r}")
    mode = config.get("mode", "both")
    if mode not in ("upper", "lower", "both"):
        raise ParamError(f"unknown mode {mode!r}")
    ladder = DifficultyLadder(
        task=config["task"],
        axis=config["axis"],
        levels=tuple(config["levels"]),
        fixed=params_from_jsonable(config.get("fixed", {})),
    )
    ladder.validate(registry)
    if client is None:
        if "endpoint" not in config:
            raise ParamError("calibrate config missing 'endpoint'")
        client = HTTPChatClient(ModelEndpointConfig.from_jsonable(config["endpoint"]))
    common: Dict[str, Any] = {"client": client, "master_seed": config.get("master_seed", 0)}
    if "n_instances" in config:
        common["n_instances"] = config["n_instances"]
    out: Dict[str, Any] = {}
    if mode in ("upper", "both"):
        kwargs = dict(common)
        if "k" in config:
            kwargs["k"] = config["k"]
        if "patience" in config:
            kwargs["patience"] = config["patience"]
        out["upper"] = find_upper_bound(registry, ladder, **kwargs).to_jsonable()
    if mode in ("lower", "both"):
        kwargs = dict(common)
        if "k" in config:
            kwargs["k"] = config["k"]
        out["lower"] = find_lower_bound(registry, ladder, **kwargs).to_jsonable()
    return out


def cmd_calibrate(args) -> int:
    report = run_calibrate(_load_json(args.config), default_registry())
    print(json.dumps(report, ensure_ascii=False, indent=2))
    return 0


def cmd_stats(args) -> int:
    rows, skipped = stats(args.in_path)
    write_stats_csv(rows, args.out)
    if skipped:
        print(f"warning: skipped {skipped} malformed row(s)", file=sys.stderr)
    print(f"wrote {len(rows)} task row(s) to {args.out}")
    return 0


def cmd_check_contamination(args) -> int:
    records = read_jsonl(args.data)
    collisions = contamination_check(records, args.benchmark)
    for hit in collisions:
        print(json.dumps(hit, ensure_ascii=False))
    print(f"{len(collisions)} collision(s) in {len(records)} record(s)", file=sys.stderr)
    return 1 if collisions else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logicgen",
        description="Generate, verify, and score logic-puzzle datasets.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gen", help="build train/val JSONL files from a config")
    p.add_argument("--config", required=True, help="BuildConfig JSON file")
    p.add_argument("--fail-on-contamination", action="store_true",
                   help="abort the build on any benchmark prompt collision")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check one answer against one instance")
    p.add_argument("--task", required=True)
    p.add_argument("--instance", required=True, help="payload JSON file")
    p.add_argument("--answer", required=True, help="answer text file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reward", help="score one model response (tags + answer)")
    p.add_argument("--task", required=True)
    p.add_argument("--instance", required=True, help="payload JSON file")
    p.add_argument("--response", required=True, help="raw response text file")
    p.set_defaults(func=cmd_reward)

    p = sub.add_parser("calibrate", help="scan a difficulty ladder against an endpoint")
    p.add_argument("--config", required=True, help="calibrate config JSON file")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("stats", help="per-task avg@k / pass@k CSV from results")
    p.add_argument("--in", dest="in_path", required=True, help="results JSONL file")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("check-contamination", help="compare dataset prompts to a benchmark")
    p.add_argument("--data", required=True, help="dataset JSONL file")
    p.add_argument("--benchmark", required=True, help="benchmark JSONL file with prompt keys")
    p.set_defaults(func=cmd_check_contamination)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LogicGenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
