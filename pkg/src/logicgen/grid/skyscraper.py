"""Skyscraper puzzle: Latin square of heights with edge visibility clues.

Payload schema (version 1):
    task: "skyscraper"
    n: side length
    clues: {"top": [n], "bottom": [n], "left": [n], "right": [n]}
    givens: n rows of n ints, 0 = empty (pre-revealed heights)

A clue is the number of buildings visible looking down that line from
that edge; a building is visible when taller than everything before it
(count of running maxima).
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..errors import GenerationExhausted, ParamError, PayloadError, SearchBudgetExceeded
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64
from .answers import coerce_grid, format_grid, parse_grid
from .sudoku import DEFAULT_NODE_BUDGET, RETRY_BUDGET, random_solution


def visible_count(line: Sequence[int]) -> int:
    """Number of running maxima scanning the line from its start."""
    seen = 0
    top = 0
    for v in line:
        if v > top:
            top = v
            seen += 1
    return seen


def skyscraper_clues(grid: Sequence[Sequence[int]]) -> Dict[str, List[int]]:
    """All 4n visibility clues of a solved Latin square of heights 1..n."""
    n = len(grid)
    full = set(range(1, n + 1))
    if any(len(row) != n or set(row) != full for row in grid):
        raise PayloadError("clue input is not a Latin square of heights 1..n")
    for c in range(n):
        if {grid[r][c] for r in range(n)} != full:
            raise PayloadError("clue input is not a Latin square of heights 1..n")
    cols = [[grid[r][c] for r in range(n)] for c in range(n)]
    return {
        "top": [visible_count(col) for col in cols],
        "bottom": [visible_count(col[::-1]) for col in cols],
        "left": [visible_count(row) for row in grid],
        "right": [visible_count(row[::-1]) for row in grid],
    }


def _check_payload(payload: Dict[str, Any]) -> int:
    try:
        n = payload["n"]
        clues = payload["clues"]
        givens = payload["givens"]
    except (KeyError, TypeError):
        raise PayloadError("skyscraper payload missing n/clues/givens") from None
    if coerce_grid(givens, n, n) is None:
        raise PayloadError("skyscraper givens are not an n x n integer grid")
    for side in ("top", "bottom", "left", "right"):
        if side not in clues or len(clues[side]) != n:
            raise PayloadError(f"skyscraper clue vector {side!r} missing or wrong length")
    return n


def count_payload_solutions(payload: Dict[str, Any], limit: int, node_budget: int = DEFAULT_NODE_BUDGET,
                            solutions: Optional[List[List[int]]] = None) -> int:
    """Row-major backtracking with prefix visibility pruning, capped at limit."""
    n = _check_payload(payload)
    clues = payload["clues"]
    top, bottom = clues["top"], clues["bottom"]
    left, right = clues["left"], clues["right"]
    full = (1 << n) - 1
    val = [0] * (n * n)
    row_used = [0] * n
    col_used = [0] * n
    for r in range(n):
        for c in range(n):
            v = payload["givens"][r][c]
            if v:
                bit = 1 << (v - 1)
                if row_used[r] & bit or col_used[c] & bit:
                    return 0
                val[r * n + c] = v
                row_used[r] |= bit
                col_used[c] |= bit

    count = 0
    nodes = 0

    def line_ok(cells: List[int], filled: int, clue: int, rev_clue: int) -> bool:
        # prefix feasibility vs the near clue; exact check (both ends) when full
        seen = 0
        topv = 0
        for i in range(filled):
            if cells[i] > topv:
                topv = cells[i]
                seen += 1
        if seen > clue:
            return False
        remaining = len(cells) - filled
        if seen + min(remaining, len(cells) - topv) < clue:
            return False
        if remaining == 0:
            if seen != clue:
                return False
            if visible_count(cells[::-1]) != rev_clue:
                return False
        return True

    def feasible_after(r: int, c: int) -> bool:
        row = [val[r * n + j] for j in range(n)]
        if not line_ok(row, c + 1, left[r], right[r]):
            return False
        col = [val[i * n + c] for i in range(n)]
        return line_ok(col, r + 1, top[c], bottom[c])

    def search(pos: int) -> None:
        nonlocal count, nodes
        while pos < n * n and val[pos]:
            # pre-filled given: still subject to visibility feasibility
            if not feasible_after(pos // n, pos % n):
                return
            pos += 1
        if pos == n * n:
            count += 1
            if solutions is not None:
                solutions.append(list(val))
            return
        r, c = pos // n, pos % n
        cand = full & ~(row_used[r] | col_used[c])
        while cand:
            bit = cand & -cand
            cand ^= bit
            nodes += 1
            if nodes > node_budget:
                raise SearchBudgetExceeded(f"skyscraper counter exceeded {node_budget} nodes")
            val[pos] = bit.bit_length()
            row_used[r] |= bit
            col_used[c] |= bit
            if feasible_after(r, c):
                search(pos + 1)
            row_used[r] &= ~bit
            col_used[c] &= ~bit
            val[pos] = 0
            if count >= limit:
                return

    search(0)
    return count


def skyscraper_generate(n: int, givens: int, seed: int) -> Tuple[Dict[str, Any], List[List[int]]]:
    if not 0 <= givens <= n * n:
        raise ParamError(f"givens {givens} outside [0, {n * n}]")
    rng = SplitMix64(seed)
    for _ in range(RETRY_BUDGET):
        flat = random_solution(n, None, None, rng)
        grid = [flat[r * n : (r + 1) * n] for r in range(n)]
        reveal = set(rng.sample(list(range(n * n)), givens))
        payload = {
            "schema_version": SCHEMA_VERSION,
            "task": "skyscraper",
            "n": n,
            "clues": skyscraper_clues(grid),
            "givens": [[grid[r][c] if r * n + c in reveal else 0 for c in range(n)] for r in range(n)],
        }
        if count_payload_solutions(payload, limit=2) == 1:
            return payload, grid
    raise GenerationExhausted(f"skyscraper n={n} givens={givens} uniqueness unreachable", RETRY_BUDGET)


def verify_skyscraper(payload: Dict[str, Any], candidate: Any) -> bool:
    n = _check_payload(payload)
    grid = coerce_grid(candidate, n, n)
    if grid is None:
        raise PayloadError(f"candidate is not a {n}x{n} integer grid")
    full = set(range(1, n + 1))
    givens = payload["givens"]
    for r in range(n):
        if set(grid[r]) != full:
            return False
        for c in range(n):
            if givens[r][c] and grid[r][c] != givens[r][c]:
                return False
    for c in range(n):
        if {grid[r][c] for r in range(n)} != full:
            return False
    return skyscraper_clues(grid) == payload["clues"]


def render_skyscraper(payload: Dict[str, Any]) -> str:
    n = payload["n"]
    clues = payload["clues"]
    lines = [
        f"Solve this {n}x{n} Skyscraper puzzle.",
        f"Place a building of height 1 to {n} in every cell so that every row and "
        f"every column contains each height exactly once. Each clue on the edge "
        f"tells how many buildings are visible looking along that row or column "
        f"from that side; taller buildings hide all shorter ones behind them.",
        "",
        "Clues along the top edge (looking down each column, left to right): "
        + " ".join(map(str, clues["top"])),
        "Clues along the bottom edge (looking up each column, left to right): "
        + " ".join(map(str, clues["bottom"])),
        "Clues along the left edge (looking right along each row, top to bottom): "
        + " ".join(map(str, clues["left"])),
        "Clues along the right edge (looking left along each row, top to bottom): "
        + " ".join(map(str, clues["right"])),
        "",
        "Current grid (0 = empty):",
        format_grid(payload["givens"]),
        "",
        f"Give the completed grid as {n} lines of {n} space-separated integers.",
    ]
    return "\n".join(lines)


SCHEMA = ParamSchema((
    ParamSpec("n", "int", 3, 6, easy=3, hard=5),
    ParamSpec("givens", "int", 0, 36, easy=2, hard=0, harder_when_larger=False),
))

DESCRIPTOR = TaskDescriptor(
    id="skyscraper",
    schema=SCHEMA,
    generate=lambda params, seed: skyscraper_generate(params["n"], params["givens"], seed),
    verify=verify_skyscraper,
    render=render_skyscraper,
    parse_answer=lambda payload, text: parse_grid(text, payload["n"], payload["n"]),
    serialize_answer=format_grid,
)
