"""The seven grid puzzles: round trips, mutations, and solution counting."""

import copy
from fractions import Fraction

import pytest

from logicgen.errors import ParamError, PayloadError, SearchBudgetExceeded
from logicgen.grid.counting import csp_count_solutions
from logicgen.protocol import compute_reward

GRID_PARAMS = {
    "sudoku": {"n": 4, "empties": 6},
    "futoshiki": {"n": 4, "num_inequalities": 4, "empties": 8},
    "skyscraper": {"n": 4, "givens": 1},
    "campsite": {"rows": 4, "cols": 4, "num_trees": 3},
    "star_placement": {"n": 5, "k": 1},
    "numbrix": {"rows": 4, "cols": 4, "num_givens": 5},
    "minesweeper": {"rows": 5, "cols": 5, "mines": 3, "revealed_fraction": Fraction(7, 10)},
}

GRID_TASKS = tuple(GRID_PARAMS)


def _board_dims(task, payload):
    if task in ("sudoku", "skyscraper", "star_placement"):
        return payload["n"], payload["n"]
    if task == "futoshiki":
        return payload["n"], payload["n"]
    return payload["rows"], payload["cols"]


def _mutate(task, payload, reference):
    """A structurally valid but different candidate; uniqueness makes it wrong."""
    cand = copy.deepcopy(reference)
    if task in ("campsite", "star_placement", "minesweeper"):
        rows, cols = _board_dims(task, payload)
        taken = set(cand)
        for r in range(1, rows + 1):
            for c in range(1, cols + 1):
                if (r, c) not in taken:
                    cand[0] = (r, c)
                    return cand
        raise AssertionError("board full")
    n = max(max(row) for row in cand)
    cand[0][0] = cand[0][0] % n + 1
    return cand


@pytest.mark.parametrize("task", GRID_TASKS)
def test_round_trip_references_verify(registry, task):
    desc = registry.get(task)
    for seed in range(30):
        inst = registry.generate_instance(task, GRID_PARAMS[task], seed)
        assert desc.verify(inst.payload, inst.reference_answer)


@pytest.mark.parametrize("task", GRID_TASKS)
def test_mutated_answers_fail(registry, task):
    desc = registry.get(task)
    for seed in range(10):
        inst = registry.generate_instance(task, GRID_PARAMS[task], seed)
        assert not desc.verify(inst.payload, _mutate(task, inst.payload, inst.reference_answer))


@pytest.mark.parametrize("task", GRID_TASKS)
def test_structural_junk_raises_but_reward_stays_zero(registry, task):
    """verify either rejects (False) or raises the structural error; the
    reward path catches the latter, so junk output can never crash scoring."""
    desc = registry.get(task)
    inst = registry.generate_instance(task, GRID_PARAMS[task], 0)
    for junk in (None, "", 7, [], [[1]], [["x"]], [(1, 1), (1, 1)]):
        try:
            assert desc.verify(inst.payload, junk) is False
        except PayloadError:
            pass
    # wrong-shaped candidates specifically are structural errors
    with pytest.raises(PayloadError):
        desc.verify(inst.payload, 7)
    verdict = compute_reward(
        registry, task, inst.payload, "<think>x</think><answer>garbage</answer>"
    )
    assert verdict.reward == 0 and not verdict.correct


@pytest.mark.parametrize("task", GRID_TASKS)
def test_answer_text_round_trip(registry, task):
    desc = registry.get(task)
    for seed in range(10):
        inst = registry.generate_instance(task, GRID_PARAMS[task], seed)
        text = desc.serialize_answer(inst.reference_answer)
        parsed = desc.parse_answer(inst.payload, text)
        assert parsed is not None
        assert desc.verify(inst.payload, parsed)


@pytest.mark.parametrize("task", GRID_TASKS)
def test_unique_solution_sample(registry, task):
    for seed in range(15):
        inst = registry.generate_instance(task, GRID_PARAMS[task], seed)
        assert csp_count_solutions(inst.payload, 2) == 1


@pytest.mark.parametrize("task", GRID_TASKS)
def test_generation_is_deterministic(registry, task):
    a = registry.generate_instance(task, GRID_PARAMS[task], 1234)
    b = registry.generate_instance(task, GRID_PARAMS[task], 1234)
    assert a.payload == b.payload
    assert a.reference_answer == b.reference_answer
    assert a.prompt == b.prompt


def test_sudoku_payload_structure(registry):
    inst = registry.generate_instance("sudoku", {"n": 9, "empties": 40}, 8)
    givens = inst.payload["givens"]
    assert sum(row.count(0) for row in givens) == 40
    assert inst.payload["box_rows"] * inst.payload["box_cols"] == 9
    # givens agree with the reference solution
    for r in range(9):
        for c in range(9):
            if givens[r][c]:
                assert givens[r][c] == inst.reference_answer[r][c]


def test_sudoku_boxes_enforced(registry):
    desc = registry.get("sudoku")
    inst = registry.generate_instance("sudoku", {"n": 4, "empties": 12}, 2)
    sol = copy.deepcopy(inst.reference_answer)
    # swap two full rows from different box bands: rows and columns stay
    # Latin but the 2x2 boxes break
    sol[1], sol[2] = sol[2], sol[1]
    givens = inst.payload["givens"]
    consistent = all(
        not givens[r][c] or givens[r][c] == sol[r][c] for r in range(4) for c in range(4)
    )
    if consistent:
        assert not desc.verify(inst.payload, sol)


def test_sudoku_empties_capped_by_grid(registry):
    with pytest.raises(ParamError):
        registry.generate_instance("sudoku", {"n": 4, "empties": 17}, 0)


def test_futoshiki_inequalities_hold(registry):
    inst = registry.generate_instance("futoshiki", {"n": 5, "num_inequalities": 6, "empties": 10}, 5)
    sol = inst.reference_answer
    assert len(inst.payload["inequalities"]) == 6
    # convention: [r1,c1,r2,c2] means value(r1,c1) < value(r2,c2)
    for r1, c1, r2, c2 in inst.payload["inequalities"]:
        assert sol[r1 - 1][c1 - 1] < sol[r2 - 1][c2 - 1]
        assert abs(r1 - r2) + abs(c1 - c2) == 1


def test_skyscraper_clues_match_visibility(registry):
    inst = registry.generate_instance("skyscraper", {"n": 4, "givens": 0}, 9)
    sol = inst.reference_answer
    clues = inst.payload["clues"]

    def visible(line):
        best, seen = 0, 0
        for h in line:
            if h > best:
                best, seen = h, seen + 1
        return seen

    n = 4
    for c in range(n):
        col = [sol[r][c] for r in range(n)]
        assert clues["top"][c] == visible(col)
        assert clues["bottom"][c] == visible(col[::-1])
    for r in range(n):
        assert clues["left"][r] == visible(sol[r])
        assert clues["right"][r] == visible(sol[r][::-1])


def test_campsite_counts_and_adjacency(registry):
    inst = registry.generate_instance("campsite", {"rows": 5, "cols": 5, "num_trees": 5}, 4)
    tents = inst.reference_answer
    rows, cols = 5, 5
    row_counts = [0] * rows
    col_counts = [0] * cols
    for r, c in tents:
        row_counts[r - 1] += 1
        col_counts[c - 1] += 1
    assert row_counts == inst.payload["row_counts"]
    assert col_counts == inst.payload["col_counts"]
    # no two tents touch, even diagonally
    for a in tents:
        for b in tents:
            if a != b:
                assert max(abs(a[0] - b[0]), abs(a[1] - b[1])) > 1
    assert len(tents) == len(inst.payload["trees"])


def test_star_placement_row_col_region_counts(registry):
    inst = registry.generate_instance("star_placement", {"n": 6, "k": 1}, 7)
    stars = inst.reference_answer
    regions = inst.payload["regions"]
    n, k = 6, 1
    assert len(stars) == n * k
    for i in range(1, n + 1):
        assert sum(1 for r, c in stars if r == i) == k
        assert sum(1 for r, c in stars if c == i) == k
    region_hits = {}
    for r, c in stars:
        region_hits[regions[r - 1][c - 1]] = region_hits.get(regions[r - 1][c - 1], 0) + 1
    assert all(v == k for v in region_hits.values())
    assert len(region_hits) == n


def test_numbrix_path_is_orthogonal_chain(registry):
    inst = registry.generate_instance("numbrix", {"rows": 5, "cols": 5, "num_givens": 6}, 3)
    sol = inst.reference_answer
    pos = {}
    for r, row in enumerate(sol):
        for c, v in enumerate(row):
            pos[v] = (r, c)
    assert sorted(pos) == list(range(1, 26))
    for v in range(1, 25):
        (r1, c1), (r2, c2) = pos[v], pos[v + 1]
        assert abs(r1 - r2) + abs(c1 - c2) == 1


def test_minesweeper_revealed_counts_consistent(registry):
    params = {"rows": 6, "cols": 6, "mines": 5, "revealed_fraction": Fraction(3, 5)}
    inst = registry.generate_instance("minesweeper", params, 6)
    mines = set(inst.reference_answer)
    assert len(mines) == 5
    for r, c, count in inst.payload["revealed"]:
        assert (r, c) not in mines
        neighbors = sum(
            (r + dr, c + dc) in mines
            for dr in (-1, 0, 1) for dc in (-1, 0, 1) if (dr, dc) != (0, 0)
        )
        assert neighbors == count


def test_count_solutions_rejects_non_grid_payload():
    with pytest.raises(PayloadError):
        csp_count_solutions({"schema_version": 1, "task": "web_of_lies"}, 2)
    with pytest.raises(PayloadError):
        csp_count_solutions({"nope": 1}, 2)


def test_count_solutions_limit_validated(registry):
    inst = registry.generate_instance("sudoku", {"n": 4, "empties": 6}, 0)
    with pytest.raises(ValueError):
        csp_count_solutions(inst.payload, 0)


def test_count_solutions_budget_enforced(registry):
    inst = registry.generate_instance("sudoku", {"n": 9, "empties": 50}, 0)
    with pytest.raises(SearchBudgetExceeded):
        csp_count_solutions(inst.payload, 2, node_budget=3)


def test_count_solutions_sees_multiple(registry):
    # an empty 4x4 sudoku has many completions; limit caps the count
    inst = registry.generate_instance("sudoku", {"n": 4, "empties": 12}, 11)
    payload = dict(inst.payload)
    payload["givens"] = [[0] * 4 for _ in range(4)]
    assert csp_count_solutions(payload, 2) == 2
    assert csp_count_solutions(payload, 5) == 5
