"""Campsite (tents and trees) generator, counter, and verifier.

Rules: place one tent per tree on an orthogonally adjacent cell, tents
pairwise non-adjacent (including diagonals), row and column tent counts
matching the published clues. A tent serves exactly one tree and vice
versa (perfect matching on orthogonal adjacency).

Payload schema (version 1):
    task: "campsite"
    rows, cols
    trees: sorted [r, c] pairs, 1-indexed
    row_counts: tents per row; col_counts: tents per column
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..errors import GenerationExhausted, ParamError, PayloadError, SearchBudgetExceeded
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64
from .answers import Cell, coerce_cells, format_cells, parse_cells
from .sudoku import DEFAULT_NODE_BUDGET, RETRY_BUDGET

_ORTH = ((-1, 0), (1, 0), (0, -1), (0, 1))
_AROUND = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def _check_payload(payload: Dict[str, Any]) -> Tuple[int, int, List[Cell]]:
    try:
        rows, cols = payload["rows"], payload["cols"]
        trees = [tuple(t) for t in payload["trees"]]
        row_counts, col_counts = payload["row_counts"], payload["col_counts"]
    except (KeyError, TypeError):
        raise PayloadError("campsite payload missing rows/cols/trees/counts") from None
    if len(row_counts) != rows or len(col_counts) != cols:
        raise PayloadError("campsite clue vectors do not match dimensions")
    for r, c in trees:
        if not (1 <= r <= rows and 1 <= c <= cols):
            raise PayloadError(f"tree ({r},{c}) outside grid")
    if sum(row_counts) != len(trees) or sum(col_counts) != len(trees):
        raise PayloadError("campsite counts do not sum to the number of trees")
    return rows, cols, trees


def _has_perfect_matching(tents: Sequence[Cell], trees: Sequence[Cell]) -> bool:
    """Kuhn's augmenting-path matching on orthogonal tent-tree adjacency."""
    if len(tents) != len(trees):
        return False
    adj: List[List[int]] = []
    tree_index = {t: i for i, t in enumerate(trees)}
    for r, c in tents:
        adj.append([tree_index[(r + dr, c + dc)]
                    for dr, dc in _ORTH if (r + dr, c + dc) in tree_index])
    match_tree = [-1] * len(trees)

    def try_assign(t: int, seen: List[bool]) -> bool:
        for j in adj[t]:
            if not seen[j]:
                seen[j] = True
                if match_tree[j] == -1 or try_assign(match_tree[j], seen):
                    match_tree[j] = t
                    return True
        return False

    for t in range(len(tents)):
        if not try_assign(t, [False] * len(trees)):
            return False
    return True


def verify_campsite(payload: Dict[str, Any], candidate: Any) -> bool:
    rows, cols, trees = _check_payload(payload)
    tents = coerce_cells(candidate)
    if tents is None:
        raise PayloadError("candidate is not a duplicate-free list of (r,c) cells")
    tree_set = set(trees)
    for r, c in tents:
        if not (1 <= r <= rows and 1 <= c <= cols) or (r, c) in tree_set:
            return False
    tent_set = set(tents)
    for r, c in tents:
        if any((r + dr, c + dc) in tent_set for dr, dc in _AROUND):
            return False
    for r in range(1, rows + 1):
        if sum(1 for tr, _ in tents if tr == r) != payload["row_counts"][r - 1]:
            return False
    for c in range(1, cols + 1):
        if sum(1 for _, tc in tents if tc == c) != payload["col_counts"][c - 1]:
            return False
    return _has_perfect_matching(tents, trees)


def count_payload_solutions(payload: Dict[str, Any], limit: int, node_budget: int = DEFAULT_NODE_BUDGET,
                            solutions: Optional[List[List[Cell]]] = None) -> int:
    """Count distinct tent sets satisfying all clues, capped at limit.

    Candidate tent cells are the non-tree cells orthogonally adjacent to a
    tree (a tent must serve some tree); subsets are enumerated row-major
    with count and adjacency pruning, with the matching rule checked last.
    """
    rows, cols, trees = _check_payload(payload)
    tree_set = set(trees)
    cand: List[Cell] = sorted({
        (r + dr, c + dc)
        for r, c in trees
        for dr, dc in _ORTH
        if 1 <= r + dr <= rows and 1 <= c + dc <= cols and (r + dr, c + dc) not in tree_set
    })
    row_rem = [0] + list(payload["row_counts"])
    col_rem = [0] + list(payload["col_counts"])
    row_avail = [0] * (rows + 1)
    col_avail = [0] * (cols + 1)
    for r, c in cand:
        row_avail[r] += 1
        col_avail[c] += 1

    count = 0
    nodes = 0
    chosen: List[Cell] = []
    chosen_set: set = set()

    def search(i: int) -> None:
        nonlocal count, nodes
        if count >= limit:
            return
        if i == len(cand):
            if not any(row_rem) and not any(col_rem):
                if _has_perfect_matching(chosen, trees):
                    count += 1
                    if solutions is not None:
                        solutions.append(list(chosen))
            return
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded(f"campsite counter exceeded {node_budget} nodes")
        r, c = cand[i]
        row_avail[r] -= 1
        col_avail[c] -= 1
        # branch 1: tent here
        if row_rem[r] > 0 and col_rem[c] > 0 and not any(
            (r + dr, c + dc) in chosen_set for dr, dc in _AROUND
        ):
            row_rem[r] -= 1
            col_rem[c] -= 1
            chosen.append((r, c))
            chosen_set.add((r, c))
            search(i + 1)
            chosen_set.discard((r, c))
            chosen.pop()
            row_rem[r] += 1
            col_rem[c] += 1
        # branch 2: no tent; prune when remaining availability can't meet counts
        if row_rem[r] <= row_avail[r] and col_rem[c] <= col_avail[c]:
            search(i + 1)
        row_avail[r] += 1
        col_avail[c] += 1

    search(0)
    return count


def campsite_generate(rows: int, cols: int, num_trees: int, seed: int) -> Tuple[Dict[str, Any], List[Cell]]:
    cap = ((rows + 1) // 2) * ((cols + 1) // 2)
    if not 1 <= num_trees <= cap:
        raise ParamError(f"num_trees {num_trees} outside [1, {cap}] for {rows}x{cols}")
    rng = SplitMix64(seed)
    cells = [(r, c) for r in range(1, rows + 1) for c in range(1, cols + 1)]
    for _ in range(RETRY_BUDGET):
        order = list(cells)
        rng.shuffle(order)
        tents: List[Cell] = []
        tent_set: set = set()
        for r, c in order:
            if len(tents) == num_trees:
                break
            if not any((r + dr, c + dc) in tent_set for dr, dc in _AROUND):
                tents.append((r, c))
                tent_set.add((r, c))
        if len(tents) < num_trees:
            continue
        trees: List[Cell] = []
        used = set(tent_set)
        ok = True
        for r, c in tents:
            options = [
                (r + dr, c + dc)
                for dr, dc in _ORTH
                if 1 <= r + dr <= rows and 1 <= c + dc <= cols and (r + dr, c + dc) not in used
            ]
            if not options:
                ok = False
                break
            tree = rng.choice(options)
            trees.append(tree)
            used.add(tree)
        if not ok:
            continue
        payload = {
            "schema_version": SCHEMA_VERSION,
            "task": "campsite",
            "rows": rows,
            "cols": cols,
            "trees": [list(t) for t in sorted(trees)],
            "row_counts": [sum(1 for tr, _ in tents if tr == r) for r in range(1, rows + 1)],
            "col_counts": [sum(1 for _, tc in tents if tc == c) for c in range(1, cols + 1)],
        }
        if count_payload_solutions(payload, limit=2) == 1:
            return payload, sorted(tents)
    raise GenerationExhausted(
        f"campsite {rows}x{cols} trees={num_trees} uniqueness unreachable", RETRY_BUDGET
    )


def render_campsite(payload: Dict[str, Any]) -> str:
    rows, cols, trees = _check_payload(payload)
    tree_set = set(trees)
    grid_lines = []
    for r in range(1, rows + 1):
        row = " ".join("T" if (r, c) in tree_set else "." for c in range(1, cols + 1))
        grid_lines.append(f"{row}   row needs {payload['row_counts'][r - 1]} tent(s)")
    lines = [
        f"Solve this {rows}x{cols} Campsite puzzle (tents and trees).",
        "Place one tent for every tree on an empty cell orthogonally adjacent to "
        "its tree, pairing each tree with exactly one tent and each tent with "
        "exactly one tree. No two tents may touch, not even diagonally. The "
        "number of tents in each row and column must match the given counts.",
        "",
        "Grid (T = tree, . = empty):",
        *grid_lines,
        "Column counts (left to right): " + " ".join(map(str, payload["col_counts"])),
        "",
        "Give the tent cells as a comma-separated list of (row,column) pairs, "
        "1-indexed from the top-left, e.g. (1,2),(3,4).",
    ]
    return "\n".join(lines)


SCHEMA = ParamSchema((
    ParamSpec("rows", "int", 2, 8, easy=3, hard=7),
    ParamSpec("cols", "int", 2, 8, easy=3, hard=7),
    ParamSpec("num_trees", "int", 1, 16, easy=2, hard=8),
))

DESCRIPTOR = TaskDescriptor(
    id="campsite",
    schema=SCHEMA,
    generate=lambda params, seed: campsite_generate(
        params["rows"], params["cols"], params["num_trees"], seed
    ),
    verify=verify_campsite,
    render=render_campsite,
    parse_answer=lambda payload, text: parse_cells(text),
    serialize_answer=format_cells,
)
