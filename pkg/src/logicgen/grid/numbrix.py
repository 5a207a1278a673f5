"""Numbrix: Hamiltonian numbering of the grid with revealed anchors.

Payload schema (version 1):
    task: "numbrix"
    rows, cols
    givens: rows x cols ints, 0 = hidden; nonzero cells anchor the path

The solution writes 1..rows*cols into the grid so that consecutive
numbers always sit in orthogonally adjacent cells.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from ..errors import GenerationExhausted, ParamError, PayloadError, SearchBudgetExceeded
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64
from .answers import coerce_grid, format_grid, parse_grid
from .sudoku import DEFAULT_NODE_BUDGET, RETRY_BUDGET

_ORTH = ((-1, 0), (1, 0), (0, -1), (0, 1))


def random_ham_path(rows: int, cols: int, rng: SplitMix64, max_restarts: int = 400) -> Optional[List[int]]:
    """Random Hamiltonian path as a flat value grid, or None on a dead run.

    Greedy Warnsdorff walk (fewest onward moves, random tie-break, with an
    occasional random step for variety) restarted from scratch when it
    strands itself; no backtracking. Grid graphs are Warnsdorff-friendly,
    so a handful of restarts almost always suffices.
    """
    n_cells = rows * cols
    neighbors_of: List[List[int]] = []
    for idx in range(n_cells):
        r, c = idx // cols, idx % cols
        neighbors_of.append([
            (r + dr) * cols + (c + dc)
            for dr, dc in _ORTH
            if 0 <= r + dr < rows and 0 <= c + dc < cols
        ])
    for _ in range(max_restarts):
        visited = bytearray(n_cells)
        cur = rng.below(n_cells)
        visited[cur] = 1
        path = [cur]
        while len(path) < n_cells:
            options = [nb for nb in neighbors_of[cur] if not visited[nb]]
            if not options:
                break
            if len(options) > 1 and rng.below(8) == 0:  # occasional random step
                cur = options[rng.below(len(options))]
            else:
                rng.shuffle(options)
                cur = min(options,
                          key=lambda nb: sum(1 for x in neighbors_of[nb] if not visited[x]))
            visited[cur] = 1
            path.append(cur)
        if len(path) == n_cells:
            flat = [0] * n_cells
            for i, idx in enumerate(path, start=1):
                flat[idx] = i
            return flat
    return None


def _check_payload(payload: Dict[str, Any]) -> Tuple[int, int]:
    try:
        rows, cols = payload["rows"], payload["cols"]
        givens = payload["givens"]
    except (KeyError, TypeError):
        raise PayloadError("numbrix payload missing rows/cols/givens") from None
    if coerce_grid(givens, rows, cols) is None:
        raise PayloadError("numbrix givens are not a rows x cols integer grid")
    return rows, cols


def count_payload_solutions(payload: Dict[str, Any], limit: int, node_budget: int = DEFAULT_NODE_BUDGET,
                            exclude: Optional[Tuple[int, int]] = None,
                            solutions: Optional[List[List[int]]] = None) -> int:
    """Count valid numberings by extending the chain value by value.

    Pruning: the walk from value v to the next anchored value g must cover
    Manhattan distance within g - v steps of matching parity.
    ``exclude=(flat_idx, value)`` counts only solutions where that cell
    differs from value (the hole-digging probe).
    """
    rows, cols = _check_payload(payload)
    n_cells = rows * cols
    flat_givens = [v for row in payload["givens"] for v in row]
    at_value: Dict[int, int] = {}
    for idx, v in enumerate(flat_givens):
        if v:
            if not 1 <= v <= n_cells or v in at_value:
                return 0
            at_value[v] = idx
    anchors = sorted(at_value)
    ex_idx, ex_val = exclude if exclude is not None else (-1, 0)

    count = 0
    nodes = 0
    val = [0] * n_cells

    def next_anchor(v: int) -> Optional[int]:
        # smallest anchored value > v (anchors is sorted, small)
        for a in anchors:
            if a > v:
                return a
        return None

    def reachable(idx: int, v: int) -> bool:
        g = next_anchor(v)
        if g is None:
            return True
        tgt = at_value[g]
        dist = abs(idx // cols - tgt // cols) + abs(idx % cols - tgt % cols)
        steps = g - v
        return dist <= steps and (steps - dist) % 2 == 0

    neighbors_of: List[List[int]] = []
    for idx in range(n_cells):
        r, c = idx // cols, idx % cols
        neighbors_of.append([
            (r + dr) * cols + (c + dc)
            for dr, dc in _ORTH
            if 0 <= r + dr < rows and 0 <= c + dc < cols
        ])

    anchor_last = at_value.get(n_cells, -1)

    def region_ok(idx: int, v: int) -> bool:
        # the rest of the chain must cover every empty cell: the empties
        # form one component touching idx, and at most one empty may be a
        # dead end (it has to be where the chain terminates)
        remaining = n_cells - v
        if remaining == 0:
            return True
        start = -1
        for nb in neighbors_of[idx]:
            if not val[nb]:
                start = nb
                break
        if start < 0:
            return False
        seen = bytearray(n_cells)
        seen[start] = 1
        reached = 1
        dead = 0
        stack = [start]
        while stack:
            cur = stack.pop()
            exits = 0
            for nb in neighbors_of[cur]:
                if not val[nb]:
                    exits += 1
                    if not seen[nb]:
                        seen[nb] = 1
                        reached += 1
                        stack.append(nb)
                elif nb == idx:
                    exits += 1
            if exits <= 1:
                dead += 1
                if dead > 1 or (anchor_last >= 0 and anchor_last != cur):
                    return False
        return reached == remaining

    def place(v: int, idx: int) -> None:
        nonlocal count, nodes
        if val[idx] or (v in at_value and at_value[v] != idx):
            return
        if flat_givens[idx] and flat_givens[idx] != v:
            return
        if idx == ex_idx and v == ex_val:
            return
        if not reachable(idx, v):
            return
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded(f"numbrix counter exceeded {node_budget} nodes")
        val[idx] = v
        if not region_ok(idx, v):
            val[idx] = 0
            return
        if v == n_cells:
            count += 1
            if solutions is not None:
                solutions.append(list(val))
        else:
            nxt = v + 1
            if nxt in at_value:
                tgt = at_value[nxt]
                if abs(idx // cols - tgt // cols) + abs(idx % cols - tgt % cols) == 1:
                    place(nxt, tgt)
            else:
                r, c = idx // cols, idx % cols
                for dr, dc in _ORTH:
                    if 0 <= r + dr < rows and 0 <= c + dc < cols:
                        place(nxt, (r + dr) * cols + (c + dc))
                        if count >= limit:
                            break
        val[idx] = 0

    if 1 in at_value:
        place(1, at_value[1])
    else:
        for idx in range(n_cells):
            place(1, idx)
            if count >= limit:
                break
    return count


def numbrix_generate(rows: int, cols: int, num_givens: int, seed: int) -> Tuple[Dict[str, Any], List[List[int]]]:
    if not 0 <= num_givens <= rows * cols:
        raise ParamError(f"num_givens {num_givens} outside [0, {rows * cols}]")
    rng = SplitMix64(seed)
    for _ in range(RETRY_BUDGET):
        flat = random_ham_path(rows, cols, rng)
        if flat is None:
            continue
        cells = list(flat)
        order = list(range(rows * cols))
        rng.shuffle(order)
        remaining = rows * cols
        for idx in order:
            if remaining == num_givens:
                break
            v = cells[idx]
            cells[idx] = 0
            payload = {
                "schema_version": SCHEMA_VERSION,
                "task": "numbrix",
                "rows": rows,
                "cols": cols,
                "givens": [cells[r * cols : (r + 1) * cols] for r in range(rows)],
            }
            if count_payload_solutions(payload, limit=1, exclude=(idx, v)) == 0:
                remaining -= 1
            else:
                cells[idx] = v
        if remaining != num_givens:
            continue
        payload = {
            "schema_version": SCHEMA_VERSION,
            "task": "numbrix",
            "rows": rows,
            "cols": cols,
            "givens": [cells[r * cols : (r + 1) * cols] for r in range(rows)],
        }
        return payload, [flat[r * cols : (r + 1) * cols] for r in range(rows)]
    raise GenerationExhausted(
        f"numbrix {rows}x{cols} givens={num_givens} uniqueness unreachable", RETRY_BUDGET
    )


def verify_numbrix(payload: Dict[str, Any], candidate: Any) -> bool:
    rows, cols = _check_payload(payload)
    grid = coerce_grid(candidate, rows, cols)
    if grid is None:
        raise PayloadError(f"candidate is not a {rows}x{cols} integer grid")
    n_cells = rows * cols
    flat = [v for row in grid for v in row]
    if sorted(flat) != list(range(1, n_cells + 1)):
        return False
    givens = payload["givens"]
    for r in range(rows):
        for c in range(cols):
            if givens[r][c] and grid[r][c] != givens[r][c]:
                return False
    where = {v: i for i, v in enumerate(flat)}
    for v in range(1, n_cells):
        a, b = where[v], where[v + 1]
        if abs(a // cols - b // cols) + abs(a % cols - b % cols) != 1:
            return False
    return True


def render_numbrix(payload: Dict[str, Any]) -> str:
    rows, cols = payload["rows"], payload["cols"]
    n_cells = rows * cols
    return "\n".join([
        f"Solve this {rows}x{cols} Numbrix puzzle.",
        f"Fill the grid with the numbers 1 to {n_cells}, each exactly once, so "
        f"that every pair of consecutive numbers occupies orthogonally adjacent "
        f"cells (no diagonal steps). Cells marked 0 are hidden; the other cells "
        f"are fixed anchors.",
        "",
        format_grid(payload["givens"]),
        "",
        f"Give the completed grid as {rows} lines of {cols} space-separated integers.",
    ])


SCHEMA = ParamSchema((
    ParamSpec("rows", "int", 1, 9, easy=3, hard=7),
    ParamSpec("cols", "int", 1, 9, easy=3, hard=7),
    ParamSpec("num_givens", "int", 0, 81, easy=4, hard=12, harder_when_larger=False),
))

DESCRIPTOR = TaskDescriptor(
    id="numbrix",
    schema=SCHEMA,
    generate=lambda params, seed: numbrix_generate(
        params["rows"], params["cols"], params["num_givens"], seed
    ),
    verify=verify_numbrix,
    render=render_numbrix,
    parse_answer=lambda payload, text: parse_grid(text, payload["rows"], payload["cols"]),
    serialize_answer=format_grid,
)
