"""Config validation, dataset builds, contamination screening, stats."""

import json
from fractions import Fraction

import pytest

import logicgen
from logicgen.dataset import (
    BuildConfig,
    TaskRequest,
    build_dataset,
    config_hash,
    contamination_check,
    load_benchmark_prompts,
    read_jsonl,
    resolve_plans,
    stats,
    write_stats_csv,
    RECORD_KEYS,
)
from logicgen.errors import (
    ContaminationError,
    GenerationExhausted,
    ParamError,
    PayloadError,
    UnknownTaskError,
)
from logicgen.protocol import PROMPT_INSTRUCTION
from logicgen.registry import prompt_id


def _config(tmp_path, **overrides):
    base = dict(
        master_seed=7,
        tasks=(
            TaskRequest("boolean_expressions", count=12, params={"depth": 3}),
            TaskRequest("web_of_lies", count=12, params={"num_people": 4}),
        ),
        output_dir=str(tmp_path / "out"),
        val_per_task=10,
    )
    base.update(overrides)
    return BuildConfig(**base)


# --- config objects ------------------------------------------------------------

def test_task_request_validation():
    with pytest.raises(ParamError):
        TaskRequest("sudoku", count=0)
    with pytest.raises(ParamError):
        TaskRequest("sudoku", params={"n": 4}, preset="easy")
    with pytest.raises(ParamError):
        TaskRequest("sudoku", preset="medium")
    entry = TaskRequest("sudoku", count=5, preset="hard")
    assert TaskRequest.from_jsonable(entry.to_jsonable()) == entry
    with pytest.raises(ParamError):
        TaskRequest.from_jsonable({"task": "sudoku", "level": 3})
    with pytest.raises(ParamError):
        TaskRequest.from_jsonable({"count": 5})


def test_build_config_validation(tmp_path):
    with pytest.raises(ParamError):
        _config(tmp_path, master_seed=True)
    with pytest.raises(ParamError):
        _config(tmp_path, master_seed=-1)
    with pytest.raises(ParamError):
        _config(tmp_path, master_seed=1 << 64)
    with pytest.raises(ParamError):
        _config(tmp_path, preset="medium")
    with pytest.raises(ParamError):
        _config(tmp_path, val_per_task=-1)
    with pytest.raises(ParamError):
        BuildConfig(master_seed=0, tasks=())
    cfg = _config(tmp_path)
    assert BuildConfig.from_jsonable(cfg.to_jsonable()) == cfg
    with pytest.raises(ParamError):
        BuildConfig.from_jsonable({"preset": "hard", "shuffle": True})


def test_config_hash_ignores_output_dir(tmp_path):
    a = _config(tmp_path, output_dir=str(tmp_path / "a"))
    b = _config(tmp_path, output_dir=str(tmp_path / "b"))
    assert config_hash(a) == config_hash(b)
    assert len(config_hash(a)) == 64
    c = _config(tmp_path, master_seed=8)
    assert config_hash(c) != config_hash(a)


# --- plan resolution --------------------------------------------------------------

def test_resolve_plans_explicit_params(registry, tmp_path):
    plans = resolve_plans(_config(tmp_path), registry)
    assert [(p.task, p.count) for p in plans] == [
        ("boolean_expressions", 12), ("web_of_lies", 12),
    ]
    assert plans[0].params == {"depth": 3}


def test_resolve_plans_presets(registry):
    cfg = BuildConfig(tasks=(
        TaskRequest("sudoku", count=20, preset="easy"),
        TaskRequest("cipher", count=20),
    ), preset="hard", val_per_task=5)
    plans = resolve_plans(cfg, registry)
    assert plans[0].params == registry.get("sudoku").schema.easy_params()
    assert plans[1].params == registry.get("cipher").schema.hard_params()


def test_resolve_plans_errors(registry):
    with pytest.raises(ParamError):
        resolve_plans(BuildConfig(tasks=(
            TaskRequest("minesweeper", count=20, preset="easy"),
        ), val_per_task=0), registry)
    with pytest.raises(ParamError, match="no params given"):
        resolve_plans(BuildConfig(tasks=(TaskRequest("sudoku", count=20),),
                                  val_per_task=0), registry)
    with pytest.raises(ParamError, match="count"):
        resolve_plans(BuildConfig(tasks=(
            TaskRequest("sudoku", count=5, preset="hard"),
        ), val_per_task=10), registry)
    with pytest.raises(ParamError, match="duplicate"):
        resolve_plans(BuildConfig(tasks=(
            TaskRequest("sudoku", count=20, preset="hard"),
            TaskRequest("sudoku", count=20, preset="easy"),
        ), val_per_task=0), registry)
    with pytest.raises(UnknownTaskError):
        resolve_plans(BuildConfig(tasks=(
            TaskRequest("nonogram", count=20, preset="hard"),
        ), val_per_task=0), registry)
    with pytest.raises(ParamError):
        resolve_plans(BuildConfig(tasks=(
            TaskRequest("sudoku", count=20, params={"n": 4, "empties": 99}),
        ), val_per_task=0), registry)


def test_resolve_plans_preset_sweep(registry):
    hard = resolve_plans(BuildConfig(preset="hard"), registry)
    assert [p.task for p in hard] == list(registry.list_tasks())
    assert all(p.count == 100 for p in hard)
    easy = resolve_plans(BuildConfig(preset="easy"), registry)
    excluded = {t for t in registry.list_tasks() if registry.get(t).easy_excluded}
    assert excluded == {"minesweeper", "object_counting"}
    assert [p.task for p in easy] == [t for t in registry.list_tasks() if t not in excluded]


# --- building -----------------------------------------------------------------------

def test_build_split_counts(registry, tmp_path):
    result = build_dataset(_config(tmp_path), registry)
    train = read_jsonl(result.train_path)
    val = read_jsonl(result.val_path)
    assert len(train) == 4 and len(val) == 20
    assert all(r["split"] == "train" for r in train)
    assert all(r["split"] == "val" for r in val)
    assert result.manifest["per_task_counts"] == {
        "boolean_expressions": {"train": 2, "val": 10},
        "web_of_lies": {"train": 2, "val": 10},
    }


def test_record_shape(registry, tmp_path):
    result = build_dataset(_config(tmp_path), registry)
    for record in read_jsonl(result.train_path) + read_jsonl(result.val_path):
        assert tuple(record) == RECORD_KEYS
        assert record["id"] == prompt_id(record["prompt"])
        assert record["schema_version"] == 1
        assert isinstance(record["answer"], str)
        assert isinstance(record["seed"], int)
        assert record["prompt"].startswith(PROMPT_INSTRUCTION)
    train = read_jsonl(result.train_path)
    bools = [r for r in train if r["task"] == "boolean_expressions"]
    assert all(r["difficulty"] == {"depth": 3} for r in bools)


def test_jsonl_is_compact_lf(registry, tmp_path):
    result = build_dataset(_config(tmp_path), registry)
    raw = open(result.train_path, "rb").read()
    assert b"\r" not in raw
    assert raw.endswith(b"\n")
    lines = raw.decode("utf-8").splitlines()
    for line in lines:
        record = json.loads(line)
        assert line == json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def test_build_is_deterministic(registry, tmp_path):
    r1 = build_dataset(_config(tmp_path, output_dir=str(tmp_path / "a")), registry)
    r2 = build_dataset(_config(tmp_path, output_dir=str(tmp_path / "b")), registry)
    assert open(r1.train_path, "rb").read() == open(r2.train_path, "rb").read()
    assert open(r1.val_path, "rb").read() == open(r2.val_path, "rb").read()
    assert r1.manifest == r2.manifest


def test_duplicate_instruction_doubles_prefix(registry, tmp_path):
    single = build_dataset(_config(tmp_path, output_dir=str(tmp_path / "s")), registry)
    doubled = build_dataset(
        _config(tmp_path, output_dir=str(tmp_path / "d"), duplicate_instruction=True),
        registry,
    )
    p1 = read_jsonl(single.train_path)[0]["prompt"]
    p2 = read_jsonl(doubled.train_path)[0]["prompt"]
    assert p1.count(PROMPT_INSTRUCTION) == 1
    assert p2.count(PROMPT_INSTRUCTION) == 2
    assert single.manifest["config_hash"] != doubled.manifest["config_hash"]


def test_dedup_advances_seed_index(registry, tmp_path):
    # depth 0 admits exactly two distinct prompts ("True" / "False")
    cfg = BuildConfig(
        master_seed=0,
        tasks=(TaskRequest("boolean_expressions", count=2, params={"depth": 0}),),
        output_dir=str(tmp_path / "tiny"),
        val_per_task=0,
    )
    result = build_dataset(cfg, registry)
    train = read_jsonl(result.train_path)
    assert len(train) == 2
    assert train[0]["prompt"] != train[1]["prompt"]


def test_dedup_exhaustion(registry, tmp_path):
    cfg = BuildConfig(
        master_seed=0,
        tasks=(TaskRequest("boolean_expressions", count=3, params={"depth": 0}),),
        output_dir=str(tmp_path / "tiny"),
        val_per_task=0,
    )
    with pytest.raises(GenerationExhausted):
        build_dataset(cfg, registry)


def test_val_per_task_zero(registry, tmp_path):
    cfg = _config(tmp_path, val_per_task=0)
    result = build_dataset(cfg, registry)
    assert read_jsonl(result.val_path) == []
    assert len(read_jsonl(result.train_path)) == 24


def test_manifest_contents(registry, tmp_path):
    cfg = _config(tmp_path)
    result = build_dataset(cfg, registry)
    manifest = json.loads(open(result.manifest_path, encoding="utf-8").read())
    assert manifest == result.manifest
    assert manifest["config_hash"] == config_hash(cfg)
    assert manifest["tool_version"] == logicgen.__version__
    assert manifest["schema_version"] == 1
    assert manifest["contamination_checked"] is False
    assert manifest["contamination_regenerated"] == 0
    raw = open(result.manifest_path, encoding="utf-8").read()
    assert raw == json.dumps(manifest, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# --- contamination -------------------------------------------------------------------

def _write_benchmark(path, prompts):
    with open(path, "w", encoding="utf-8") as fh:
        for p in prompts:
            fh.write(json.dumps({"prompt": p}) + "\n")


def test_contamination_regenerates(registry, tmp_path):
    clean = build_dataset(_config(tmp_path, output_dir=str(tmp_path / "clean")), registry)
    planted = read_jsonl(clean.train_path)[0]["prompt"]
    bench = tmp_path / "bench.jsonl"
    _write_benchmark(bench, ["decoy question one", planted, "decoy two"])

    screened = build_dataset(
        _config(tmp_path, output_dir=str(tmp_path / "screened"),
                contamination_file=str(bench)),
        registry,
    )
    assert screened.manifest["contamination_checked"] is True
    assert screened.manifest["contamination_regenerated"] >= 1
    kept = read_jsonl(screened.train_path) + read_jsonl(screened.val_path)
    assert planted not in {r["prompt"] for r in kept}
    assert contamination_check(kept, str(bench)) == []


def test_contamination_fail_fast(registry, tmp_path):
    clean = build_dataset(_config(tmp_path, output_dir=str(tmp_path / "clean")), registry)
    planted = read_jsonl(clean.val_path)[0]["prompt"]
    bench = tmp_path / "bench.jsonl"
    _write_benchmark(bench, [planted])
    with pytest.raises(ContaminationError):
        build_dataset(
            _config(tmp_path, output_dir=str(tmp_path / "strict"),
                    contamination_file=str(bench), fail_on_contamination=True),
            registry,
        )


def test_contamination_is_whitespace_insensitive(registry, tmp_path):
    clean = build_dataset(_config(tmp_path, output_dir=str(tmp_path / "clean")), registry)
    planted = read_jsonl(clean.train_path)[0]["prompt"]
    bench = tmp_path / "bench.jsonl"
    _write_benchmark(bench, ["  " + planted.replace(" ", "  ") + " \n"])
    records = read_jsonl(clean.train_path)
    hits = contamination_check(records, str(bench))
    assert len(hits) == 1
    assert hits[0]["id"] == records[0]["id"]
    assert hits[0]["task"] == records[0]["task"]


def test_contamination_check_rejects_bad_record(tmp_path):
    bench = tmp_path / "bench.jsonl"
    _write_benchmark(bench, ["x"])
    with pytest.raises(PayloadError):
        contamination_check([{"id": "a", "task": "t"}], str(bench))


def test_load_benchmark_prompts(tmp_path):
    path = tmp_path / "b.jsonl"
    path.write_text('{"prompt": "What  is 2+2?"}\n\n{"prompt": "next"}\n', encoding="utf-8")
    prompts = load_benchmark_prompts(str(path))
    assert prompts == {"What is 2+2?", "next"}

    path.write_text("not json\n", encoding="utf-8")
    with pytest.raises(PayloadError, match=":1:"):
        load_benchmark_prompts(str(path))
    path.write_text('{"question": "x"}\n', encoding="utf-8")
    with pytest.raises(PayloadError):
        load_benchmark_prompts(str(path))
    path.write_text('{"prompt": 4}\n', encoding="utf-8")
    with pytest.raises(PayloadError):
        load_benchmark_prompts(str(path))
    path.write_text("[1, 2]\n", encoding="utf-8")
    with pytest.raises(PayloadError):
        load_benchmark_prompts(str(path))


def test_read_jsonl_skips_blanks(tmp_path):
    path = tmp_path / "r.jsonl"
    path.write_text('{"a": 1}\n\n{"b": 2}\n', encoding="utf-8")
    assert read_jsonl(str(path)) == [{"a": 1}, {"b": 2}]


# --- stats ----------------------------------------------------------------------------

def _write_results(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write((row if isinstance(row, str) else json.dumps(row)) + "\n")


def test_stats_per_task(tmp_path):
    path = tmp_path / "results.jsonl"
    _write_results(path, [
        {"id": "a", "task": "sudoku", "rewards": [1, 0, 0, 0]},
        {"id": "b", "task": "sudoku", "rewards": [0, 0, 0, 0]},
        {"id": "c", "task": "cipher", "rewards": [1, 1]},
    ])
    rows, skipped = stats(str(path))
    assert skipped == 0
    assert [r.task for r in rows] == ["cipher", "sudoku"]
    assert rows[0].instances == 1
    assert rows[0].avg == 1 and rows[0].pass_rate == 1
    assert rows[1].instances == 2
    assert rows[1].avg == Fraction(1, 8)
    assert rows[1].pass_rate == Fraction(1, 2)


def test_stats_skips_malformed(tmp_path):
    path = tmp_path / "results.jsonl"
    _write_results(path, [
        {"id": "a", "task": "sudoku", "rewards": [1]},
        "not json at all",
        {"id": "b", "task": "sudoku"},
        {"id": "c", "task": 7, "rewards": [1]},
        {"id": "d", "task": "sudoku", "rewards": []},
        {"id": "e", "task": "sudoku", "rewards": [0.5]},
        {"id": "f", "task": "sudoku", "rewards": [True]},
        {"id": "g", "task": "sudoku", "rewards": [2]},
    ])
    rows, skipped = stats(str(path))
    assert skipped == 7
    assert len(rows) == 1 and rows[0].instances == 1


def test_stats_empty_file(tmp_path):
    path = tmp_path / "results.jsonl"
    path.write_text("", encoding="utf-8")
    rows, skipped = stats(str(path))
    assert rows == [] and skipped == 0


def test_stats_csv_golden(tmp_path):
    path = tmp_path / "results.jsonl"
    _write_results(path, [
        {"id": "a", "task": "sudoku", "rewards": [1, 0, 0, 0]},
        {"id": "c", "task": "cipher", "rewards": [1, 1]},
    ])
    rows, _ = stats(str(path))
    out = tmp_path / "stats.csv"
    write_stats_csv(rows, str(out))
    assert out.read_text(encoding="utf-8") == (
        "task,instances,avg_at_k,pass_at_k\n"
        "cipher,1,1.0,1.0\n"
        "sudoku,1,0.25,1.0\n"
    )
