"""Acceptance gate: one test per release criterion.

Each test is a single pass/fail line for a headline guarantee of the
package: soundness, uniqueness, reward semantics, metric identities,
preset hygiene, determinism, contamination screening, calibration bounds,
oracle equivalence, and generation throughput.
"""

import hashlib
import json
import re
import string
import time
from fractions import Fraction
from functools import cmp_to_key

import pytest

from logicgen.builtin import default_registry
from logicgen.calibration import DifficultyLadder, find_lower_bound, find_upper_bound
from logicgen.corpus import load_words
from logicgen.dataset import (
    BuildConfig,
    TaskRequest,
    build_dataset,
    contamination_check,
    read_jsonl,
)
from logicgen.formal import boolexpr, dyck, wordsort
from logicgen.arith import expr
from logicgen.protocol import avg_at_k, compute_reward, pass_at_k
from logicgen.registry import derive_seed
from logicgen.grid.counting import csp_count_solutions
from logicgen.rng import SplitMix64

F = Fraction

#: Three pinned difficulty levels per task (low / mid / high), all
#: schema-valid and fast enough for bulk generation.
LEVELS = {
    "sudoku": [
        {"n": 4, "empties": 6}, {"n": 9, "empties": 20}, {"n": 9, "empties": 40},
    ],
    "futoshiki": [
        {"n": 4, "num_inequalities": 4, "empties": 8},
        {"n": 5, "num_inequalities": 6, "empties": 15},
        {"n": 7, "num_inequalities": 10, "empties": 30},
    ],
    "skyscraper": [
        {"n": 3, "givens": 2}, {"n": 4, "givens": 1}, {"n": 5, "givens": 0},
    ],
    "campsite": [
        {"rows": 3, "cols": 3, "num_trees": 2},
        {"rows": 5, "cols": 5, "num_trees": 5},
        {"rows": 7, "cols": 7, "num_trees": 8},
    ],
    "star_placement": [
        {"n": 5, "k": 1}, {"n": 6, "k": 1}, {"n": 8, "k": 2},
    ],
    "numbrix": [
        {"rows": 3, "cols": 3, "num_givens": 4},
        {"rows": 5, "cols": 5, "num_givens": 8},
        {"rows": 7, "cols": 7, "num_givens": 12},
    ],
    "minesweeper": [
        {"rows": 4, "cols": 4, "mines": 2, "revealed_fraction": F(4, 5)},
        {"rows": 6, "cols": 6, "mines": 5, "revealed_fraction": F(7, 10)},
        {"rows": 8, "cols": 8, "mines": 10, "revealed_fraction": F(3, 5)},
    ],
    "game_of_24": [
        {"m": 4, "target": 24, "max_value": 9},
        {"m": 5, "target": 24, "max_value": 11},
        {"m": 6, "target": 24, "max_value": 13},
    ],
    "cryptarithm": [
        {"num_addends": 2, "word_len": 3},
        {"num_addends": 3, "word_len": 4},
        {"num_addends": 3, "word_len": 6},
    ],
    "mathador": [{}, {}, {}],
    "math_path": [
        {"rows": 2, "cols": 2, "blanks": 1},
        {"rows": 2, "cols": 3, "blanks": 2},
        {"rows": 3, "cols": 3, "blanks": 4},
    ],
    "dyck_language": [
        {"length": 8, "max_depth": 3, "kinds": 2, "prefix_cut": 5},
        {"length": 16, "max_depth": 5, "kinds": 2, "prefix_cut": 11},
        {"length": 26, "max_depth": 8, "kinds": 3, "prefix_cut": 17},
    ],
    "dyck_language_errors": [
        {"length": 8, "max_depth": 3, "kinds": 2, "num_errors": 1, "as_steps": 0},
        {"length": 16, "max_depth": 5, "kinds": 2, "num_errors": 1, "as_steps": 1},
        {"length": 24, "max_depth": 7, "kinds": 3, "num_errors": 2, "as_steps": 0},
    ],
    "boolean_expressions": [{"depth": 2}, {"depth": 3}, {"depth": 5}],
    "cipher": [
        {"scheme": 0, "plaintext_len": 5},
        {"scheme": 2, "plaintext_len": 8},
        {"scheme": 3, "plaintext_len": 12},
    ],
    "word_sorting": [
        {"num_words": 4, "mistake": 0},
        {"num_words": 6, "mistake": 1},
        {"num_words": 8, "mistake": 0},
    ],
    "web_of_lies": [
        {"num_people": 3}, {"num_people": 5}, {"num_people": 8},
    ],
    "object_counting": [
        {"num_items": 4, "num_categories": 2, "max_qty": 5},
        {"num_items": 7, "num_categories": 3, "max_qty": 7},
        {"num_items": 10, "num_categories": 4, "max_qty": 9},
    ],
}

GRID_TASKS = (
    "sudoku", "futoshiki", "skyscraper", "campsite",
    "star_placement", "numbrix", "minesweeper",
)


def test_round_trip_soundness_1000_per_task_3_levels_under_5_min(registry):
    assert set(LEVELS) == set(registry.list_tasks())
    budget_s = 300.0
    per_task = 1000
    start = time.monotonic()
    for task, levels in LEVELS.items():
        desc = registry.get(task)
        share = [per_task - 2 * (per_task // 3), per_task // 3, per_task // 3]
        made = 0
        for level, count in zip(levels, share):
            params = desc.schema.validate(level)
            for i in range(count):
                inst = registry.generate_instance(
                    task, params, derive_seed(0, task, made + i)
                )
                assert desc.verify(inst.payload, inst.reference_answer) is True
            made += count
        assert made == per_task
    elapsed = time.monotonic() - start
    assert elapsed < budget_s, f"{elapsed:.1f}s exceeds the {budget_s:.0f}s budget"


@pytest.mark.parametrize("task", GRID_TASKS)
def test_grid_uniqueness_200_sampled_instances(registry, task):
    desc = registry.get(task)
    per_level = (67, 67, 66)
    for level, count in zip(LEVELS[task], per_level):
        params = desc.schema.validate(level)
        for i in range(count):
            inst = registry.generate_instance(task, params, derive_seed(1, task, i))
            assert csp_count_solutions(inst.payload, 2) == 1


def test_reward_truth_table_is_1_0_0_0(registry):
    params = registry.get("web_of_lies").schema.validate({"num_people": 4})
    inst = registry.generate_instance("web_of_lies", params, derive_seed(0, "web_of_lies", 0))
    right = inst.reference_answer
    wrong = "no" if right == "yes" else "yes"
    cases = [
        (f"<think>r</think><answer>{right}</answer>", True, True, 1),
        (f"<think>r</think><answer>{wrong}</answer>", True, False, 0),
        (f"<answer>{right}</answer>", False, True, 0),
        (f"no tags at all {wrong}", False, False, 0),
    ]
    for response, format_ok, correct, reward in cases:
        verdict = compute_reward(registry, "web_of_lies", inst.payload, response)
        assert (verdict.format_ok, verdict.correct, verdict.reward) == (format_ok, correct, reward)


def test_metric_identities_on_10k_attempt_sets():
    rng = SplitMix64(99)
    for _ in range(10_000):
        attempts = [rng.below(2) for _ in range(rng.randint(1, 16))]
        assert avg_at_k(attempts) <= pass_at_k(attempts)
    one_in_eight = [1, 0, 0, 0, 0, 0, 0, 0]
    assert avg_at_k(one_in_eight) == F(1, 8)
    assert pass_at_k(one_in_eight) == 1
    assert avg_at_k([0, 0]) == 0 and pass_at_k([0, 0]) == 0


def test_easy_preset_exclusions_and_val_split(registry, tmp_path):
    config = BuildConfig(
        master_seed=11,
        tasks=tuple(
            TaskRequest(task, count=20, preset="easy")
            for task in registry.list_tasks()
            if not registry.get(task).easy_excluded
        ),
        output_dir=str(tmp_path / "easy"),
        val_per_task=10,
    )
    result = build_dataset(config, registry)
    records = read_jsonl(result.train_path) + read_jsonl(result.val_path)
    built_tasks = {r["task"] for r in records}
    excluded = {t for t in registry.list_tasks() if registry.get(t).easy_excluded}
    assert excluded == {"minesweeper", "object_counting"}
    assert built_tasks == set(registry.list_tasks()) - excluded
    assert built_tasks & excluded == set()
    val = read_jsonl(result.val_path)
    per_task_val = {t: sum(r["task"] == t for r in val) for t in built_tasks}
    assert all(count == 10 for count in per_task_val.values())


def test_determinism_byte_identical_rebuilds(registry, tmp_path):
    def build(out):
        config = BuildConfig(
            master_seed=5,
            tasks=(
                TaskRequest("sudoku", count=15, params={"n": 4, "empties": 6}),
                TaskRequest("cipher", count=15, params={"scheme": 1, "plaintext_len": 6}),
                TaskRequest("web_of_lies", count=15, params={"num_people": 5}),
            ),
            output_dir=str(tmp_path / out),
            val_per_task=5,
        )
        return build_dataset(config, registry)

    first, second = build("a"), build("b")
    for path1, path2 in [
        (first.train_path, second.train_path),
        (first.val_path, second.val_path),
    ]:
        digest1 = hashlib.sha256(open(path1, "rb").read()).hexdigest()
        digest2 = hashlib.sha256(open(path2, "rb").read()).hexdigest()
        assert digest1 == digest2
    assert first.manifest == second.manifest


def test_contamination_zero_false_negatives_on_1k_benchmark(registry, tmp_path):
    config = BuildConfig(
        master_seed=13,
        tasks=(
            TaskRequest("boolean_expressions", count=60, params={"depth": 4}),
            TaskRequest("web_of_lies", count=60, params={"num_people": 6}),
            TaskRequest("cipher", count=60, params={"scheme": 3, "plaintext_len": 8}),
        ),
        output_dir=str(tmp_path / "data"),
        val_per_task=10,
    )
    result = build_dataset(config, registry)
    records = read_jsonl(result.train_path) + read_jsonl(result.val_path)
    planted = records[::2][:100]
    assert len(planted) == 90  # 180 records -> every other one, capped at 100

    bench_path = tmp_path / "benchmark.jsonl"
    with open(bench_path, "w", encoding="utf-8") as fh:
        for i in range(1000 - len(planted)):
            fh.write(json.dumps({"prompt": f"Decoy benchmark question number {i}?"}) + "\n")
        for record in planted:
            # whitespace mangling must not hide a duplicate
            fh.write(json.dumps({"prompt": "  " + record["prompt"].replace(" ", "  ")}) + "\n")
    assert sum(1 for _ in open(bench_path, encoding="utf-8")) == 1000

    hits = contamination_check(records, str(bench_path))
    assert {h["id"] for h in hits} == {r["id"] for r in planted}


def test_calibration_reproduces_hand_computed_bounds_for_5_profiles(
    registry, scripted_client_cls
):
    ladder = DifficultyLadder(task="web_of_lies", axis="num_people", levels=(3, 4, 5, 6, 7))
    n, k = 5, 10
    profiles = [
        # rates per level           upper  scanned  non_mono  lower  scanned
        ([1, F(6, 10), F(3, 10), F(1, 10), 0], 6, 5, False, 5, 3),
        ([0, 0, 0, 0, 0],                None, 2, False, None, 5),
        ([F(5, 10), 0, F(4, 10), 0, 0],     5, 5, True,     5, 3),
        ([1, 1, 1, 1, 1],                   7, 5, False, None, 5),
        ([F(5, 10), F(2, 10), 0, 0, 0],     4, 4, False,    4, 2),
    ]
    for rates, upper, upper_scanned, non_mono, lower, lower_scanned in profiles:
        client = scripted_client_cls(registry, ladder, rates, n_instances=n, k=k)
        report = find_upper_bound(registry, ladder, client=client, n_instances=n, k=k)
        assert report.upper_bound_level == upper
        assert len(report.levels) == upper_scanned
        assert report.non_monotone is non_mono
        assert [lv.avg for lv in report.levels] == [F(r) for r in rates[:upper_scanned]]

        client = scripted_client_cls(registry, ladder, rates, n_instances=n, k=k)
        report = find_lower_bound(registry, ladder, client=client, n_instances=n, k=k)
        assert report.lower_bound_level == lower
        assert len(report.levels) == lower_scanned


def _reduce_pairs(s):
    while True:
        for pair in ("()", "[]", "{}", "<>"):
            if pair in s:
                s = s.replace(pair, "")
                break
        else:
            return s


def _dyck_oracle(s):
    for i in range(1, len(s) + 1):
        if any(ch not in "([{<" for ch in _reduce_pairs(s[:i])):
            return i
    return None if not _reduce_pairs(s) else len(s) + 1


def _frac_eval(text):
    wrapped = re.sub(r"\d+", lambda m: f"F({m.group()})", text)
    try:
        return eval(wrapped, {"F": F, "__builtins__": {}})
    except ZeroDivisionError:
        return None


def _random_tree(rng, size):
    if size <= 1:
        return expr.num(rng.randint(0, 12))
    left = rng.randint(1, size - 1)
    return ("+-*/"[rng.below(4)], _random_tree(rng, left), _random_tree(rng, size - left))


def _cmp_ranks(alphabet):
    rank = {ch: i for i, ch in enumerate(alphabet)}

    def cmp(a, b):
        for x, y in zip(a, b):
            if rank[x] != rank[y]:
                return -1 if rank[x] < rank[y] else 1
        return (len(a) > len(b)) - (len(a) < len(b))

    return cmp


def test_oracle_equivalence_10k_cases_per_family():
    rng = SplitMix64(2025)

    for _ in range(10_000):
        ast = boolexpr._random_expr(rng.below(6), rng)
        assert boolexpr.boolexpr_eval(ast) == eval(boolexpr.to_surface(ast))

    corpus = load_words()
    for _ in range(10_000):
        alphabet = list(string.ascii_lowercase)
        rng.shuffle(alphabet)
        alphabet = "".join(alphabet)
        words = rng.sample(corpus, rng.randint(2, 8))
        expected = sorted(words, key=cmp_to_key(_cmp_ranks(alphabet)))
        assert wordsort.wordsort_order(words, alphabet) == expected

    chars = "()[]{}<>"
    for _ in range(10_000):
        s = "".join(chars[rng.below(8)] for _ in range(rng.randint(0, 24)))
        assert dyck.first_violation(s) == _dyck_oracle(s)
        assert dyck.is_balanced(s) == (_dyck_oracle(s) is None)

    for _ in range(10_000):
        tree = _random_tree(rng, rng.randint(1, 6))
        assert expr.evaluate(tree) == _frac_eval(expr.to_string(tree))


def test_throughput_floor_sudoku_9x9_40_empties(registry):
    desc = registry.get("sudoku")
    params = desc.schema.validate({"n": 9, "empties": 40})
    target, floor, count = 50.0, 25.0, 150
    seen = set()
    start = time.monotonic()
    index = 0
    while len(seen) < count:
        inst = registry.generate_instance("sudoku", params, derive_seed(2, "sudoku", index))
        index += 1
        seen.add(inst.id)
    elapsed = time.monotonic() - start
    rate = count / elapsed
    print(f"\nsudoku 9x9/40: {rate:.0f} unique instances/s (target {target:.0f}/s, floor {floor:.0f}/s)")
    assert rate >= floor, f"{rate:.1f}/s is below the {floor:.0f}/s floor"


def test_primary_package_has_no_binding_dependency():
    import sys

    import logicgen  # noqa: F401

    default_registry()
    assert not any(name.startswith("logicgen_rewards") for name in sys.modules)
