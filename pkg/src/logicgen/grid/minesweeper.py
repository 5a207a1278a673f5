"""Minesweeper deduction puzzles: revealed counts force the mine layout.

Payload schema (version 1):
    task: "minesweeper"
    rows, cols
    mines: total number of mines
    revealed: sorted [r, c, count] triples, 1-indexed; count = number of
        mines among the 8 neighbors of that (safe) cell

The answer is the set of mine cells. Generation rejects layouts whose
revealed cells leave more than one consistent placement.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Any, Dict, List, Optional, Tuple

from ..errors import GenerationExhausted, ParamError, PayloadError, SearchBudgetExceeded
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64
from .answers import Cell, coerce_cells, format_cells, parse_cells
from .sudoku import DEFAULT_NODE_BUDGET, RETRY_BUDGET

_AROUND = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def _check_payload(payload: Dict[str, Any]) -> Tuple[int, int, int, List[Tuple[int, int, int]]]:
    try:
        rows, cols = payload["rows"], payload["cols"]
        mines = payload["mines"]
        revealed = [tuple(t) for t in payload["revealed"]]
    except (KeyError, TypeError):
        raise PayloadError("minesweeper payload missing rows/cols/mines/revealed") from None
    seen = set()
    for item in revealed:
        if len(item) != 3:
            raise PayloadError(f"revealed entry {item!r} is not (r, c, count)")
        r, c, k = item
        if not (1 <= r <= rows and 1 <= c <= cols):
            raise PayloadError(f"revealed cell ({r},{c}) outside grid")
        if not 0 <= k <= 8:
            raise PayloadError(f"revealed count {k} outside [0, 8]")
        if (r, c) in seen:
            raise PayloadError(f"revealed cell ({r},{c}) duplicated")
        seen.add((r, c))
    if not 0 <= mines <= rows * cols - len(revealed):
        raise PayloadError("mine count inconsistent with revealed cells")
    return rows, cols, mines, revealed


def verify_minesweeper(payload: Dict[str, Any], candidate: Any) -> bool:
    rows, cols, mines, revealed = _check_payload(payload)
    cells = coerce_cells(candidate)
    if cells is None:
        raise PayloadError("candidate is not a duplicate-free list of (r,c) cells")
    if len(cells) != mines:
        return False
    mine_set = set(cells)
    safe = {(r, c) for r, c, _ in revealed}
    for r, c in cells:
        if not (1 <= r <= rows and 1 <= c <= cols) or (r, c) in safe:
            return False
    for r, c, k in revealed:
        if sum((r + dr, c + dc) in mine_set for dr, dc in _AROUND) != k:
            return False
    return True


def count_payload_solutions(payload: Dict[str, Any], limit: int, node_budget: int = DEFAULT_NODE_BUDGET,
                            solutions: Optional[List[List[Cell]]] = None) -> int:
    """Count mine placements consistent with the clues, capped at limit.

    Cells adjacent to a revealed count are branched exhaustively with
    count-feasibility pruning; the remaining unconstrained cells contribute
    a binomial factor choose(free, mines_left). Collecting ``solutions``
    forces full enumeration of the free remainder, so only do that on
    small boards.
    """
    rows, cols, mines, revealed = _check_payload(payload)
    safe = {(r, c) for r, c, _ in revealed}
    constrained: List[Cell] = sorted({
        (r + dr, c + dc)
        for r, c, _ in revealed
        for dr, dc in _AROUND
        if 1 <= r + dr <= rows and 1 <= c + dc <= cols and (r + dr, c + dc) not in safe
    })
    free = [
        (r, c)
        for r in range(1, rows + 1)
        for c in range(1, cols + 1)
        if (r, c) not in safe and (r, c) not in constrained
    ]
    # per-revealed-cell state: required count, mines so far, unassigned neighbors
    req = []
    touching: Dict[Cell, List[int]] = {cell: [] for cell in constrained}
    for i, (r, c, k) in enumerate(revealed):
        nbrs = [
            (r + dr, c + dc)
            for dr, dc in _AROUND
            if (r + dr, c + dc) in touching
        ]
        req.append([k, 0, len(nbrs)])
        for cell in nbrs:
            touching[cell].append(i)

    count = 0
    nodes = 0
    chosen: List[Cell] = []

    def emit(mines_left: int) -> None:
        nonlocal count
        if solutions is None:
            count += comb(len(free), mines_left)
            return
        # enumerate the free remainder explicitly when collecting layouts
        from itertools import combinations

        for extra in combinations(free, mines_left):
            solutions.append(sorted(chosen + list(extra)))
            count += 1
            if count >= limit:
                return

    def search(i: int, mines_left: int) -> None:
        nonlocal count, nodes
        if count >= limit:
            return
        if mines_left < 0:
            return
        if i == len(constrained):
            if all(cur == k for k, cur, rem in req) and mines_left <= len(free):
                emit(mines_left)
            return
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded(f"minesweeper counter exceeded {node_budget} nodes")
        cell = constrained[i]
        owners = touching[cell]
        for is_mine in (False, True):
            ok = True
            for j in owners:
                k, cur, rem = req[j]
                cur2 = cur + is_mine
                rem2 = rem - 1
                if cur2 > k or cur2 + rem2 < k:
                    ok = False
                req[j][1] = cur2
                req[j][2] = rem2
            if ok:
                if is_mine:
                    chosen.append(cell)
                search(i + 1, mines_left - is_mine)
                if is_mine:
                    chosen.pop()
            for j in owners:
                req[j][1] -= is_mine
                req[j][2] += 1

    search(0, mines)
    return min(count, limit) if solutions is None else count


def _reveal_count(fraction: Fraction, safe_cells: int) -> int:
    return int(fraction * safe_cells)  # floor of the exact rational


def minesweeper_generate(
    rows: int, cols: int, mines: int, revealed_fraction: Fraction, seed: int
) -> Tuple[Dict[str, Any], List[Cell]]:
    if not 1 <= mines <= rows * cols - 1:
        raise ParamError(f"mines {mines} outside [1, {rows * cols - 1}]")
    if not 0 <= revealed_fraction <= 1:
        raise ParamError(f"revealed_fraction {revealed_fraction} outside [0, 1]")
    rng = SplitMix64(seed)
    all_cells = [(r, c) for r in range(1, rows + 1) for c in range(1, cols + 1)]
    n_reveal = _reveal_count(Fraction(revealed_fraction), rows * cols - mines)
    for _ in range(RETRY_BUDGET):
        mine_cells = sorted(rng.sample(all_cells, mines))
        mine_set = set(mine_cells)
        safe_cells = [cell for cell in all_cells if cell not in mine_set]
        reveal = rng.sample(safe_cells, n_reveal)
        revealed = sorted(
            (r, c, sum((r + dr, c + dc) in mine_set for dr, dc in _AROUND))
            for r, c in reveal
        )
        payload = {
            "schema_version": SCHEMA_VERSION,
            "task": "minesweeper",
            "rows": rows,
            "cols": cols,
            "mines": mines,
            "revealed": [list(t) for t in revealed],
        }
        if count_payload_solutions(payload, limit=2) == 1:
            return payload, mine_cells
    raise GenerationExhausted(
        f"minesweeper {rows}x{cols} mines={mines} reveal={n_reveal} uniqueness unreachable",
        RETRY_BUDGET,
    )


def render_minesweeper(payload: Dict[str, Any]) -> str:
    rows, cols, mines, revealed = _check_payload(payload)
    board = {(r, c): str(k) for r, c, k in revealed}
    grid_lines = [
        " ".join(board.get((r, c), "?") for c in range(1, cols + 1))
        for r in range(1, rows + 1)
    ]
    return "\n".join([
        f"Solve this {rows}x{cols} Minesweeper deduction puzzle.",
        f"The board hides exactly {mines} mine(s). Revealed cells show a digit: "
        f"the number of mines among their 8 neighboring cells (revealed cells "
        f"are never mines themselves). Cells marked ? are covered.",
        "",
        *grid_lines,
        "",
        "Find every mine. Give the mine cells as a comma-separated list of "
        "(row,column) pairs, 1-indexed from the top-left, e.g. (1,2),(3,4).",
    ])


SCHEMA = ParamSchema((
    ParamSpec("rows", "int", 2, 9, easy=4, hard=8),
    ParamSpec("cols", "int", 2, 9, easy=4, hard=8),
    ParamSpec("mines", "int", 1, 20, easy=2, hard=10),
    ParamSpec(
        "revealed_fraction", "rational", Fraction(0), Fraction(1),
        easy=Fraction(4, 5), hard=Fraction(3, 5), harder_when_larger=False,
    ),
))

DESCRIPTOR = TaskDescriptor(
    id="minesweeper",
    schema=SCHEMA,
    generate=lambda params, seed: minesweeper_generate(
        params["rows"], params["cols"], params["mines"], params["revealed_fraction"], seed
    ),
    verify=verify_minesweeper,
    render=render_minesweeper,
    parse_answer=lambda payload, text: parse_cells(text),
    serialize_answer=format_cells,
    easy_excluded=True,
)
