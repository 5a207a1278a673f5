"""Sudoku generator, exact solution counter, and verifier.

Payload schema (version 1):
    task: "sudoku"
    n: side length
    box_rows / box_cols: box shape, or null for the Latin-square relaxation
    givens: n rows of n ints, 0 marking an empty cell

Prime side lengths (5, 7) have no box partition; those grids use the
Latin-square relaxation (rows and columns all-different only), recorded in
the payload via null box fields.

The counter runs exhaustive backtracking with naked-single propagation and
minimum-remaining-values branching over bitmask domains; hole digging asks
it whether an alternative solution exists with the dug cell forced away
from its solution value, which is exactly the "count stays below 2" probe.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from ..errors import GenerationExhausted, ParamError, PayloadError, SearchBudgetExceeded
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, Params, TaskDescriptor
from ..rng import SplitMix64
from .answers import coerce_grid, format_grid, parse_grid

RETRY_BUDGET = 1000
DEFAULT_NODE_BUDGET = 10_000_000

#: Standard box shapes for composite side lengths.
BOX_SHAPES = {4: (2, 2), 6: (2, 3), 8: (2, 4), 9: (3, 3)}


def _box_map(n: int, box_rows: Optional[int], box_cols: Optional[int]) -> Optional[List[int]]:
    if box_rows is None and box_cols is None:
        return None
    if not box_rows or not box_cols or box_rows * box_cols != n:
        raise ParamError(f"box {box_rows}x{box_cols} does not tile side {n}")
    per_band = n // box_cols
    return [(r // box_rows) * per_band + (c // box_cols) for r in range(n) for c in range(n)]


def count_solutions(
    n: int,
    box_rows: Optional[int],
    box_cols: Optional[int],
    cells: List[int],
    limit: int,
    exclude: Optional[Tuple[int, int]] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    solutions: Optional[List[List[int]]] = None,
) -> int:
    """Exact number of completions of ``cells`` (flat, 0=empty), capped at limit.

    ``exclude=(idx, v)`` restricts the count to solutions where cell idx
    takes a value other than v. ``solutions`` collects flat solved grids
    (up to limit) when provided.
    """
    full = (1 << n) - 1
    box_of = _box_map(n, box_rows, box_cols)
    row_of = [i // n for i in range(n * n)]
    col_of = [i % n for i in range(n * n)]
    row_used = [0] * n
    col_used = [0] * n
    box_used = [0] * n if box_of is not None else []

    val = list(cells)
    for idx, v in enumerate(val):
        if v:
            bit = 1 << (v - 1)
            r, c = row_of[idx], col_of[idx]
            if row_used[r] & bit or col_used[c] & bit or (box_of is not None and box_used[box_of[idx]] & bit):
                return 0
            row_used[r] |= bit
            col_used[c] |= bit
            if box_of is not None:
                box_used[box_of[idx]] |= bit
    empties = [i for i in range(n * n) if not val[i]]
    ex_idx, ex_bit = (-1, 0)
    if exclude is not None:
        ex_idx = exclude[0]
        ex_bit = 1 << (exclude[1] - 1)
        if val[ex_idx]:
            raise PayloadError("exclusion cell is not empty")

    count = 0
    nodes = 0

    def assign(idx: int, bit: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded(f"sudoku counter exceeded {node_budget} nodes")
        val[idx] = bit.bit_length()
        row_used[row_of[idx]] |= bit
        col_used[col_of[idx]] |= bit
        if box_of is not None:
            box_used[box_of[idx]] |= bit

    def unassign(idx: int) -> None:
        bit = 1 << (val[idx] - 1)
        val[idx] = 0
        row_used[row_of[idx]] &= ~bit
        col_used[col_of[idx]] &= ~bit
        if box_of is not None:
            box_used[box_of[idx]] &= ~bit

    def search() -> None:
        nonlocal count
        trail: List[int] = []
        # Propagate naked singles to a fixpoint, tracking the best branch cell.
        while True:
            progress = False
            best_idx = -1
            best_cand = 0
            best_k = n + 1
            for idx in empties:
                if val[idx]:
                    continue
                used = row_used[row_of[idx]] | col_used[col_of[idx]]
                if box_of is not None:
                    used |= box_used[box_of[idx]]
                cand = full & ~used
                if idx == ex_idx:
                    cand &= ~ex_bit
                k = cand.bit_count()
                if k == 0:
                    for t in reversed(trail):
                        unassign(t)
                    return
                if k == 1:
                    assign(idx, cand)
                    trail.append(idx)
                    progress = True
                elif k < best_k:
                    best_k = k
                    best_idx = idx
                    best_cand = cand
            if not progress:
                break
        if best_idx == -1:
            count += 1
            if solutions is not None:
                solutions.append(list(val))
            for t in reversed(trail):
                unassign(t)
            return
        cand = best_cand
        while cand:
            bit = cand & -cand
            cand ^= bit
            assign(best_idx, bit)
            search()
            unassign(best_idx)
            if count >= limit:
                break
        for t in reversed(trail):
            unassign(t)

    search()
    return count


def random_solution(n: int, box_rows: Optional[int], box_cols: Optional[int], rng: SplitMix64) -> List[int]:
    """Uniformly-seeded solved grid via randomized backtracking."""
    full = (1 << n) - 1
    box_of = _box_map(n, box_rows, box_cols)
    row_used = [0] * n
    col_used = [0] * n
    box_used = [0] * n if box_of is not None else []
    val = [0] * (n * n)

    def search() -> bool:
        best_idx = -1
        best_cand = 0
        best_k = n + 1
        for idx in range(n * n):
            if val[idx]:
                continue
            used = row_used[idx // n] | col_used[idx % n]
            if box_of is not None:
                used |= box_used[box_of[idx]]
            cand = full & ~used
            k = cand.bit_count()
            if k == 0:
                return False
            if k < best_k:
                best_k = k
                best_idx = idx
                best_cand = cand
        if best_idx == -1:
            return True
        bits = []
        cand = best_cand
        while cand:
            bit = cand & -cand
            cand ^= bit
            bits.append(bit)
        rng.shuffle(bits)
        r, c = best_idx // n, best_idx % n
        for bit in bits:
            val[best_idx] = bit.bit_length()
            row_used[r] |= bit
            col_used[c] |= bit
            if box_of is not None:
                box_used[box_of[best_idx]] |= bit
            if search():
                return True
            row_used[r] &= ~bit
            col_used[c] &= ~bit
            if box_of is not None:
                box_used[box_of[best_idx]] &= ~bit
            val[best_idx] = 0
        return False

    if not search():
        raise GenerationExhausted(f"no {n}x{n} solution grid found", 1)
    return val


def dig_holes(
    solution: List[int],
    n: int,
    box_rows: Optional[int],
    box_cols: Optional[int],
    empties: int,
    rng: SplitMix64,
) -> Optional[List[int]]:
    """Remove exactly ``empties`` cells, keeping the solution unique.

    Cells are tried in a seed-shuffled order; a removal stands only when no
    alternative solution exists with that cell forced away from its value.
    Returns None when the order cannot reach the requested hole count.
    """
    cells = list(solution)
    order = list(range(n * n))
    rng.shuffle(order)
    removed = 0
    for idx in order:
        if removed == empties:
            break
        v = cells[idx]
        cells[idx] = 0
        if count_solutions(n, box_rows, box_cols, cells, limit=1, exclude=(idx, v)) == 0:
            removed += 1
        else:
            cells[idx] = v
    return cells if removed == empties else None


def sudoku_generate(
    n: int,
    box_rows: Optional[int],
    box_cols: Optional[int],
    empties: int,
    seed: int,
) -> Tuple[Dict[str, Any], List[List[int]]]:
    """Build a unique-solution puzzle payload plus its reference solution."""
    if box_rows is not None or box_cols is not None:
        _box_map(n, box_rows, box_cols)  # validates shape
    if not 0 <= empties <= n * n - n:
        raise ParamError(f"empties {empties} outside [0, {n * n - n}] for n={n}")
    rng = SplitMix64(seed)
    for attempt in range(1, RETRY_BUDGET + 1):
        solution = random_solution(n, box_rows, box_cols, rng)
        dug = dig_holes(solution, n, box_rows, box_cols, empties, rng)
        if dug is not None:
            payload = {
                "schema_version": SCHEMA_VERSION,
                "task": "sudoku",
                "n": n,
                "box_rows": box_rows,
                "box_cols": box_cols,
                "givens": [dug[r * n : (r + 1) * n] for r in range(n)],
            }
            reference = [solution[r * n : (r + 1) * n] for r in range(n)]
            return payload, reference
    raise GenerationExhausted(f"sudoku n={n} empties={empties} uniqueness unreachable", RETRY_BUDGET)


def _payload_dims(payload: Dict[str, Any]) -> int:
    try:
        n = payload["n"]
        givens = payload["givens"]
    except (KeyError, TypeError):
        raise PayloadError("sudoku payload missing n/givens") from None
    if coerce_grid(givens, n, n) is None:
        raise PayloadError("sudoku givens are not an n x n integer grid")
    return n


def verify_sudoku(payload: Dict[str, Any], candidate: Any) -> bool:
    """All-different rows/cols(/boxes), values 1..n, givens preserved."""
    n = _payload_dims(payload)
    grid = coerce_grid(candidate, n, n)
    if grid is None:
        raise PayloadError(f"candidate is not a {n}x{n} integer grid")
    givens = payload["givens"]
    box_of = _box_map(n, payload.get("box_rows"), payload.get("box_cols"))
    full = set(range(1, n + 1))
    for r in range(n):
        for c in range(n):
            g = givens[r][c]
            if g and grid[r][c] != g:
                return False
            if grid[r][c] not in full:
                return False
    for r in range(n):
        if set(grid[r]) != full:
            return False
    for c in range(n):
        if {grid[r][c] for r in range(n)} != full:
            return False
    if box_of is not None:
        seen: List[set] = [set() for _ in range(n)]
        for idx in range(n * n):
            seen[box_of[idx]].add(grid[idx // n][idx % n])
        if any(s != full for s in seen):
            return False
    return True


def count_payload_solutions(payload: Dict[str, Any], limit: int, node_budget: int = DEFAULT_NODE_BUDGET,
                            solutions: Optional[List[List[int]]] = None) -> int:
    n = _payload_dims(payload)
    flat = [v for row in payload["givens"] for v in row]
    return count_solutions(
        n, payload.get("box_rows"), payload.get("box_cols"), flat, limit,
        node_budget=node_budget, solutions=solutions,
    )


def render_sudoku(payload: Dict[str, Any]) -> str:
    n = payload["n"]
    box_rows, box_cols = payload.get("box_rows"), payload.get("box_cols")
    lines = [f"Solve this {n}x{n} Sudoku puzzle."]
    rule = (
        f"Fill every empty cell (marked 0) with an integer from 1 to {n} so that "
        f"every row and every column contains each number exactly once"
    )
    if box_rows:
        rule += f", and so does every {box_rows}x{box_cols} box (the grid is tiled by {box_rows}-row x {box_cols}-column boxes)"
    lines.append(rule + ".")
    lines.append("")
    lines.append(format_grid(payload["givens"]))
    lines.append("")
    lines.append(f"Give the completed grid as {n} lines of {n} space-separated integers.")
    return "\n".join(lines)


def _registry_generate(params: Params, seed: int):
    n = params["n"]
    shape = BOX_SHAPES.get(n, (None, None))
    return sudoku_generate(n, shape[0], shape[1], params["empties"], seed)


SCHEMA = ParamSchema((
    ParamSpec("n", "int", 4, 9, easy=4, hard=9),
    ParamSpec("empties", "int", 0, 72, easy=6, hard=40),
))

def _parse(payload: Dict[str, Any], text: str):
    n = payload["n"]
    return parse_grid(text, n, n)


DESCRIPTOR = TaskDescriptor(
    id="sudoku",
    schema=SCHEMA,
    generate=_registry_generate,
    verify=verify_sudoku,
    render=render_sudoku,
    parse_answer=_parse,
    serialize_answer=format_grid,
)
