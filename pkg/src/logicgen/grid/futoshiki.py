"""Futoshiki: Latin square with < inequality clues between adjacent cells.

Payload schema (version 1):
    task: "futoshiki"
    n: side length
    givens: n rows of n ints, 0 = empty
    inequalities: list of [r1, c1, r2, c2] (1-indexed, orthogonally
        adjacent) meaning value(r1,c1) < value(r2,c2)
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from ..errors import GenerationExhausted, ParamError, PayloadError, SearchBudgetExceeded
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, Params, TaskDescriptor
from ..rng import SplitMix64
from .answers import coerce_grid, format_grid, parse_grid
from .sudoku import DEFAULT_NODE_BUDGET, RETRY_BUDGET, random_solution

Edge = Tuple[int, int]  # (lo_idx, hi_idx) flat cells, value[lo] < value[hi]


def _edges_from_payload(payload: Dict[str, Any]) -> List[Edge]:
    n = payload["n"]
    edges = []
    for quad in payload["inequalities"]:
        if len(quad) != 4:
            raise PayloadError(f"inequality {quad!r} is not a 4-tuple")
        r1, c1, r2, c2 = quad
        for r, c in ((r1, c1), (r2, c2)):
            if not (1 <= r <= n and 1 <= c <= n):
                raise PayloadError(f"inequality cell ({r},{c}) outside grid")
        if abs(r1 - r2) + abs(c1 - c2) != 1:
            raise PayloadError(f"inequality {quad!r} joins non-adjacent cells")
        edges.append(((r1 - 1) * n + (c1 - 1), (r2 - 1) * n + (c2 - 1)))
    return edges


def count_solutions(
    n: int,
    cells: List[int],
    edges: List[Edge],
    limit: int,
    exclude: Optional[Tuple[int, int]] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    solutions: Optional[List[List[int]]] = None,
) -> int:
    """Backtracking count over Latin + inequality constraints, capped at limit."""
    full = (1 << n) - 1
    row_used = [0] * n
    col_used = [0] * n
    # less_than[i] = cells that must exceed i; greater_than[i] = cells below i
    less_than: List[List[int]] = [[] for _ in range(n * n)]
    greater_than: List[List[int]] = [[] for _ in range(n * n)]
    for lo, hi in edges:
        less_than[lo].append(hi)
        greater_than[hi].append(lo)

    val = list(cells)
    for idx, v in enumerate(val):
        if v:
            bit = 1 << (v - 1)
            if row_used[idx // n] & bit or col_used[idx % n] & bit:
                return 0
            row_used[idx // n] |= bit
            col_used[idx % n] |= bit
    for lo, hi in edges:
        if val[lo] and val[hi] and not val[lo] < val[hi]:
            return 0
    empties = [i for i in range(n * n) if not val[i]]
    ex_idx, ex_bit = (-1, 0)
    if exclude is not None:
        ex_idx = exclude[0]
        ex_bit = 1 << (exclude[1] - 1)

    count = 0
    nodes = 0

    def candidates(idx: int) -> int:
        cand = full & ~(row_used[idx // n] | col_used[idx % n])
        if idx == ex_idx:
            cand &= ~ex_bit
        for other in less_than[idx]:  # this cell < other
            top = val[other] if val[other] else n
            cand &= (1 << (top - 1)) - 1
        for other in greater_than[idx]:  # other < this cell
            bottom = val[other] if val[other] else 1
            cand &= full & ~((1 << bottom) - 1)
        return cand

    def assign(idx: int, bit: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded(f"futoshiki counter exceeded {node_budget} nodes")
        val[idx] = bit.bit_length()
        row_used[idx // n] |= bit
        col_used[idx % n] |= bit

    def unassign(idx: int) -> None:
        bit = 1 << (val[idx] - 1)
        val[idx] = 0
        row_used[idx // n] &= ~bit
        col_used[idx % n] &= ~bit

    def search() -> None:
        nonlocal count
        trail: List[int] = []
        while True:
            progress = False
            best_idx = -1
            best_cand = 0
            best_k = n + 1
            for idx in empties:
                if val[idx]:
                    continue
                cand = candidates(idx)
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


def futoshiki_generate(
    n: int, num_inequalities: int, empties: int, seed: int
) -> Tuple[Dict[str, Any], List[List[int]]]:
    if not 0 <= num_inequalities <= 2 * n * (n - 1):
        raise ParamError(f"num_inequalities {num_inequalities} outside [0, {2 * n * (n - 1)}]")
    if not 0 <= empties <= n * n:
        raise ParamError(f"empties {empties} outside [0, {n * n}]")
    rng = SplitMix64(seed)
    all_edges: List[Tuple[int, int]] = []
    for r in range(n):
        for c in range(n):
            if c + 1 < n:
                all_edges.append((r * n + c, r * n + c + 1))
            if r + 1 < n:
                all_edges.append((r * n + c, (r + 1) * n + c))
    for _ in range(RETRY_BUDGET):
        solution = random_solution(n, None, None, rng)
        chosen = rng.sample(all_edges, num_inequalities)
        # orient each sampled edge by the hidden solution: lesser cell first
        edges = [(a, b) if solution[a] < solution[b] else (b, a) for a, b in chosen]
        cells = list(solution)
        order = list(range(n * n))
        rng.shuffle(order)
        removed = 0
        for idx in order:
            if removed == empties:
                break
            v = cells[idx]
            cells[idx] = 0
            if count_solutions(n, cells, edges, limit=1, exclude=(idx, v)) == 0:
                removed += 1
            else:
                cells[idx] = v
        if removed != empties:
            continue
        payload = {
            "schema_version": SCHEMA_VERSION,
            "task": "futoshiki",
            "n": n,
            "givens": [cells[r * n : (r + 1) * n] for r in range(n)],
            "inequalities": [
                [lo // n + 1, lo % n + 1, hi // n + 1, hi % n + 1] for lo, hi in edges
            ],
        }
        return payload, [solution[r * n : (r + 1) * n] for r in range(n)]
    raise GenerationExhausted(
        f"futoshiki n={n} ineq={num_inequalities} empties={empties} uniqueness unreachable",
        RETRY_BUDGET,
    )


def _payload_dims(payload: Dict[str, Any]) -> int:
    try:
        n = payload["n"]
        givens = payload["givens"]
        payload["inequalities"]
    except (KeyError, TypeError):
        raise PayloadError("futoshiki payload missing n/givens/inequalities") from None
    if coerce_grid(givens, n, n) is None:
        raise PayloadError("futoshiki givens are not an n x n integer grid")
    return n


def verify_futoshiki(payload: Dict[str, Any], candidate: Any) -> bool:
    n = _payload_dims(payload)
    grid = coerce_grid(candidate, n, n)
    if grid is None:
        raise PayloadError(f"candidate is not a {n}x{n} integer grid")
    givens = payload["givens"]
    full = set(range(1, n + 1))
    for r in range(n):
        if set(grid[r]) != full:
            return False
        for c in range(n):
            if givens[r][c] and grid[r][c] != givens[r][c]:
                return False
    for c in range(n):
        if {grid[r][c] for r in range(n)} != full:
            return False
    flat = [v for row in grid for v in row]
    for lo, hi in _edges_from_payload(payload):
        if not flat[lo] < flat[hi]:
            return False
    return True


def count_payload_solutions(payload: Dict[str, Any], limit: int, node_budget: int = DEFAULT_NODE_BUDGET,
                            solutions: Optional[List[List[int]]] = None) -> int:
    n = _payload_dims(payload)
    flat = [v for row in payload["givens"] for v in row]
    return count_solutions(n, flat, _edges_from_payload(payload), limit,
                           node_budget=node_budget, solutions=solutions)


def render_futoshiki(payload: Dict[str, Any]) -> str:
    n = payload["n"]
    lines = [
        f"Solve this {n}x{n} Futoshiki puzzle.",
        f"Fill every empty cell (marked 0) with an integer from 1 to {n} so that "
        f"every row and every column contains each number exactly once, and all "
        f"the inequality constraints below hold. Cells are addressed as "
        f"(row,column), 1-indexed from the top-left.",
        "",
        format_grid(payload["givens"]),
    ]
    if payload["inequalities"]:
        lines.append("")
        lines.append("Constraints:")
        for r1, c1, r2, c2 in payload["inequalities"]:
            lines.append(f"value at ({r1},{c1}) < value at ({r2},{c2})")
    lines.append("")
    lines.append(f"Give the completed grid as {n} lines of {n} space-separated integers.")
    return "\n".join(lines)


SCHEMA = ParamSchema((
    ParamSpec("n", "int", 2, 7, easy=4, hard=7),
    ParamSpec("num_inequalities", "int", 0, 84, easy=4, hard=10),
    ParamSpec("empties", "int", 0, 49, easy=8, hard=30),
))

DESCRIPTOR = TaskDescriptor(
    id="futoshiki",
    schema=SCHEMA,
    generate=lambda params, seed: futoshiki_generate(
        params["n"], params["num_inequalities"], params["empties"], seed
    ),
    verify=verify_futoshiki,
    render=render_futoshiki,
    parse_answer=lambda payload, text: parse_grid(text, payload["n"], payload["n"]),
    serialize_answer=format_grid,
)
