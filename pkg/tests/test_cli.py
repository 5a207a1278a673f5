"""End-to-end CLI behavior: verbs, exit codes, stdout/stderr shapes."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

import logicgen.cli as cli
from logicgen.calibration import DifficultyLadder
from logicgen.errors import ParamError
from logicgen.registry import derive_seed


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def _instance_files(tmp_path, registry, task="web_of_lies", params=None, seed_idx=0):
    desc = registry.get(task)
    params = desc.schema.validate(params or {"num_people": 4})
    inst = registry.generate_instance(task, params, derive_seed(0, task, seed_idx))
    payload_path = _write(tmp_path / "payload.json", json.dumps(inst.payload))
    answer = desc.serialize_answer(inst.reference_answer)
    return payload_path, answer, inst


# --- verify ----------------------------------------------------------------

def test_verify_true_exit_0(tmp_path, registry, capsys):
    payload_path, answer, _ = _instance_files(tmp_path, registry)
    answer_path = _write(tmp_path / "answer.txt", answer + "\n")
    rc = cli.main(["verify", "--task", "web_of_lies",
                   "--instance", payload_path, "--answer", answer_path])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "true"


def test_verify_false_exit_1(tmp_path, registry, capsys):
    payload_path, answer, _ = _instance_files(tmp_path, registry)
    wrong = "no" if answer == "yes" else "yes"
    answer_path = _write(tmp_path / "answer.txt", wrong)
    rc = cli.main(["verify", "--task", "web_of_lies",
                   "--instance", payload_path, "--answer", answer_path])
    assert rc == 1
    assert capsys.readouterr().out.strip() == "false"


def test_verify_unparseable_exit_1(tmp_path, registry, capsys):
    payload_path, _, _ = _instance_files(tmp_path, registry)
    answer_path = _write(tmp_path / "answer.txt", "perhaps?")
    rc = cli.main(["verify", "--task", "web_of_lies",
                   "--instance", payload_path, "--answer", answer_path])
    assert rc == 1
    assert capsys.readouterr().out.strip() == "false"


def test_verify_task_mismatch_exit_2(tmp_path, registry, capsys):
    payload_path, answer, _ = _instance_files(tmp_path, registry)
    answer_path = _write(tmp_path / "answer.txt", answer)
    rc = cli.main(["verify", "--task", "sudoku",
                   "--instance", payload_path, "--answer", answer_path])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_verify_unknown_task_exit_2(tmp_path, registry, capsys):
    payload_path, answer, _ = _instance_files(tmp_path, registry)
    answer_path = _write(tmp_path / "answer.txt", answer)
    rc = cli.main(["verify", "--task", "nonogram",
                   "--instance", payload_path, "--answer", answer_path])
    assert rc == 2


def test_verify_missing_file_exit_2(tmp_path, capsys):
    rc = cli.main(["verify", "--task", "sudoku",
                   "--instance", str(tmp_path / "nope.json"),
                   "--answer", str(tmp_path / "nope.txt")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


# --- reward ----------------------------------------------------------------

def test_reward_full_credit(tmp_path, registry, capsys):
    payload_path, answer, _ = _instance_files(tmp_path, registry)
    response = f"<think>chain</think><answer>{answer}</answer>"
    response_path = _write(tmp_path / "resp.txt", response)
    rc = cli.main(["reward", "--task", "web_of_lies",
                   "--instance", payload_path, "--response", response_path])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"format_ok": True, "correct": True, "reward": 1}


def test_reward_wrong_answer(tmp_path, registry, capsys):
    payload_path, answer, _ = _instance_files(tmp_path, registry)
    wrong = "no" if answer == "yes" else "yes"
    response_path = _write(tmp_path / "resp.txt",
                           f"<think>t</think><answer>{wrong}</answer>")
    rc = cli.main(["reward", "--task", "web_of_lies",
                   "--instance", payload_path, "--response", response_path])
    assert rc == 1
    out = json.loads(capsys.readouterr().out)
    assert out == {"format_ok": True, "correct": False, "reward": 0}


def test_reward_missing_think_tag(tmp_path, registry, capsys):
    payload_path, answer, _ = _instance_files(tmp_path, registry)
    response_path = _write(tmp_path / "resp.txt", f"<answer>{answer}</answer>")
    rc = cli.main(["reward", "--task", "web_of_lies",
                   "--instance", payload_path, "--response", response_path])
    assert rc == 1
    out = json.loads(capsys.readouterr().out)
    assert out == {"format_ok": False, "correct": True, "reward": 0}


# --- gen ---------------------------------------------------------------------

def _gen_config(tmp_path, **extra):
    config = {
        "master_seed": 3,
        "tasks": [
            {"task": "boolean_expressions", "count": 6, "params": {"depth": 3}},
            {"task": "web_of_lies", "count": 6, "params": {"num_people": 4}},
        ],
        "output_dir": str(tmp_path / "out"),
        "val_per_task": 2,
    }
    config.update(extra)
    return _write(tmp_path / "config.json", json.dumps(config))


def test_gen_writes_dataset(tmp_path, capsys):
    rc = cli.main(["gen", "--config", _gen_config(tmp_path)])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["per_task_counts"] == {
        "boolean_expressions": {"train": 4, "val": 2},
        "web_of_lies": {"train": 4, "val": 2},
    }
    assert summary["contamination_regenerated"] == 0
    train = [json.loads(l) for l in open(summary["train"], encoding="utf-8")]
    assert len(train) == 8


def test_gen_bad_config_key_exit_2(tmp_path, capsys):
    path = _write(tmp_path / "config.json", json.dumps({"preset": "hard", "oops": 1}))
    rc = cli.main(["gen", "--config", path])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_gen_invalid_json_exit_2(tmp_path, capsys):
    path = _write(tmp_path / "config.json", "{not json")
    assert cli.main(["gen", "--config", path]) == 2


def test_gen_fail_on_contamination_flag(tmp_path, registry, capsys):
    rc = cli.main(["gen", "--config", _gen_config(tmp_path)])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    planted = json.loads(open(summary["train"], encoding="utf-8").readline())["prompt"]
    bench = _write(tmp_path / "bench.jsonl", json.dumps({"prompt": planted}) + "\n")

    config2 = _gen_config(tmp_path, output_dir=str(tmp_path / "out2"),
                          contamination_file=bench)
    rc = cli.main(["gen", "--config", config2, "--fail-on-contamination"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err
    # without the flag the collision is regenerated instead
    rc = cli.main(["gen", "--config", config2])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["contamination_regenerated"] >= 1


# --- calibrate -----------------------------------------------------------------

def _calibrate_config(**extra):
    config = {
        "endpoint": {"base_url": "https://api.example.com/v1", "model_name": "m"},
        "task": "web_of_lies",
        "axis": "num_people",
        "levels": [3, 4, 5],
        "mode": "both",
        "n_instances": 3,
        "k": 8,
    }
    config.update(extra)
    return config


def test_run_calibrate_with_client(registry, scripted_client_cls):
    ladder = DifficultyLadder(task="web_of_lies", axis="num_people", levels=(3, 4, 5))
    client = scripted_client_cls(registry, ladder, [1, Fraction(1, 4), 0],
                                 n_instances=3, k=8)
    out = cli.run_calibrate(_calibrate_config(), registry, client=client)
    assert out["upper"]["upper_bound_level"] == 4
    assert out["lower"]["lower_bound_level"] == 4
    assert out["lower"]["levels"][-1]["avg"] == "1/4"


def test_run_calibrate_modes(registry, scripted_client_cls):
    ladder = DifficultyLadder(task="web_of_lies", axis="num_people", levels=(3, 4, 5))
    client = scripted_client_cls(registry, ladder, [1, Fraction(1, 4), 0],
                                 n_instances=3, k=8)
    out = cli.run_calibrate(_calibrate_config(mode="upper"), registry, client=client)
    assert set(out) == {"upper"}


def test_run_calibrate_config_errors(registry):
    with pytest.raises(ParamError):
        cli.run_calibrate(_calibrate_config(mode="sideways"), registry, client=object())
    with pytest.raises(ParamError):
        cli.run_calibrate(_calibrate_config(extra_key=1), registry, client=object())
    bad = _calibrate_config()
    del bad["levels"]
    with pytest.raises(ParamError):
        cli.run_calibrate(bad, registry, client=object())
    no_endpoint = _calibrate_config()
    del no_endpoint["endpoint"]
    with pytest.raises(ParamError, match="endpoint"):
        cli.run_calibrate(no_endpoint, registry)


def test_cmd_calibrate_via_monkeypatch(tmp_path, registry, scripted_client_cls,
                                       monkeypatch, capsys):
    ladder = DifficultyLadder(task="web_of_lies", axis="num_people", levels=(3, 4, 5))
    client = scripted_client_cls(registry, ladder, [1, Fraction(1, 4), 0],
                                 n_instances=3, k=8)
    monkeypatch.setattr(cli, "HTTPChatClient", lambda cfg: client)
    path = _write(tmp_path / "calibrate.json", json.dumps(_calibrate_config()))
    rc = cli.main(["calibrate", "--config", path])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["upper"]["upper_bound_level"] == 4
    assert out["upper"]["upper_bound_model"] == "scripted"


def test_cmd_calibrate_bad_ladder_exit_2(tmp_path, capsys):
    path = _write(tmp_path / "calibrate.json",
                  json.dumps(_calibrate_config(levels=[5, 3])))
    assert cli.main(["calibrate", "--config", path]) == 2


# --- stats ----------------------------------------------------------------------

def test_cmd_stats(tmp_path, capsys):
    results = _write(tmp_path / "results.jsonl", "\n".join([
        json.dumps({"id": "a", "task": "sudoku", "rewards": [1, 0]}),
        "garbage",
    ]) + "\n")
    out_csv = str(tmp_path / "stats.csv")
    rc = cli.main(["stats", "--in", results, "--out", out_csv])
    assert rc == 0
    captured = capsys.readouterr()
    assert "skipped 1" in captured.err
    assert "wrote 1 task row(s)" in captured.out
    content = open(out_csv, encoding="utf-8").read()
    assert content.startswith("task,instances,avg_at_k,pass_at_k\n")
    assert "sudoku,1,0.5,1.0" in content


def test_cmd_stats_missing_input_exit_2(tmp_path):
    assert cli.main(["stats", "--in", str(tmp_path / "nope.jsonl"),
                     "--out", str(tmp_path / "o.csv")]) == 2


# --- check-contamination -----------------------------------------------------------

def test_check_contamination_clean(tmp_path, capsys):
    data = _write(tmp_path / "data.jsonl",
                  json.dumps({"id": "a", "task": "t", "prompt": "unique text"}) + "\n")
    bench = _write(tmp_path / "bench.jsonl", json.dumps({"prompt": "other"}) + "\n")
    rc = cli.main(["check-contamination", "--data", data, "--benchmark", bench])
    assert rc == 0
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "0 collision(s) in 1 record(s)" in captured.err


def test_check_contamination_hits_exit_1(tmp_path, capsys):
    data = _write(tmp_path / "data.jsonl",
                  json.dumps({"id": "a", "task": "t", "prompt": "same  text"}) + "\n")
    bench = _write(tmp_path / "bench.jsonl", json.dumps({"prompt": "same text"}) + "\n")
    rc = cli.main(["check-contamination", "--data", data, "--benchmark", bench])
    assert rc == 1
    captured = capsys.readouterr()
    hit = json.loads(captured.out)
    assert hit == {"id": "a", "task": "t", "prompt": "same text"}
    assert "1 collision(s)" in captured.err


# --- parser / process-level --------------------------------------------------------

def test_missing_verb_is_usage_error():
    with pytest.raises(SystemExit):
        cli.main([])


def test_unknown_verb_is_usage_error():
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])


def test_module_entry_point(tmp_path, registry):
    payload_path, answer, _ = _instance_files(tmp_path, registry)
    answer_path = _write(tmp_path / "answer.txt", answer)
    proc = subprocess.run(
        [sys.executable, "-m", "logicgen.cli", "verify", "--task", "web_of_lies",
         "--instance", payload_path, "--answer", answer_path],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "true"
