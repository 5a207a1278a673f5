"""Star placement: k stars per row, column, and region, no two adjacent.

Payload schema (version 1):
    task: "star_placement"
    n: side length
    k: stars per row / column / region
    regions: n rows of n region ids in 1..n (orthogonally contiguous)

Adjacency is the 8-neighborhood, so stars never touch, even diagonally.
Generation places the stars first, then grows one contiguous region
around each group of k stars, and keeps only boards with a unique
solution. Boards with n < 4k are rejected outright: rows force k stars
apiece while adjacency caps a row pair at floor(n/2) each, which is
already impossible at n=2, k=1 (checked exhaustively in tests).
"""

from __future__ import annotations

from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple

from ..errors import GenerationExhausted, ParamError, PayloadError, SearchBudgetExceeded
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64
from .answers import Cell, coerce_cells, format_cells, parse_cells
from .sudoku import DEFAULT_NODE_BUDGET, RETRY_BUDGET

_ORTH = ((-1, 0), (1, 0), (0, -1), (0, 1))


def _check_payload(payload: Dict[str, Any]) -> Tuple[int, int, List[List[int]]]:
    try:
        n = payload["n"]
        k = payload["k"]
        regions = payload["regions"]
    except (KeyError, TypeError):
        raise PayloadError("star placement payload missing n/k/regions") from None
    if len(regions) != n or any(len(row) != n for row in regions):
        raise PayloadError("regions are not an n x n grid")
    ids = {v for row in regions for v in row}
    if ids != set(range(1, n + 1)):
        raise PayloadError(f"region ids must be exactly 1..{n}")
    return n, k, regions


def verify_star(payload: Dict[str, Any], candidate: Any) -> bool:
    n, k, regions = _check_payload(payload)
    stars = coerce_cells(candidate)
    if stars is None:
        raise PayloadError("candidate is not a duplicate-free list of (r,c) cells")
    if len(stars) != n * k:
        return False
    star_set = set(stars)
    for r, c in stars:
        if not (1 <= r <= n and 1 <= c <= n):
            return False
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                if (dr or dc) and (r + dr, c + dc) in star_set:
                    return False
    for r in range(1, n + 1):
        if sum(1 for sr, _ in stars if sr == r) != k:
            return False
    for c in range(1, n + 1):
        if sum(1 for _, sc in stars if sc == c) != k:
            return False
    per_region = [0] * (n + 1)
    for r, c in stars:
        per_region[regions[r - 1][c - 1]] += 1
    return all(per_region[i] == k for i in range(1, n + 1))


def _row_subsets(n: int, k: int) -> List[Tuple[int, ...]]:
    """Column subsets of size k with in-row gaps of at least 2."""
    return [
        combo for combo in combinations(range(n), k)
        if all(b - a >= 2 for a, b in zip(combo, combo[1:]))
    ]


def count_payload_solutions(payload: Dict[str, Any], limit: int, node_budget: int = DEFAULT_NODE_BUDGET,
                            solutions: Optional[List[List[Cell]]] = None) -> int:
    """Row-by-row subset search with column/region capacity pruning."""
    n, k, regions = _check_payload(payload)
    subsets = _row_subsets(n, k)
    # region cells available in rows >= r (capacity prune)
    region_suffix = [[0] * (n + 1) for _ in range(n + 1)]
    for r in range(n - 1, -1, -1):
        region_suffix[r] = list(region_suffix[r + 1])
        for c in range(n):
            region_suffix[r][regions[r][c]] += 1

    col_count = [0] * n
    region_count = [0] * (n + 1)
    placed: List[Tuple[int, ...]] = []
    count = 0
    nodes = 0

    def search(r: int) -> None:
        nonlocal count, nodes
        if count >= limit:
            return
        if r == n:
            count += 1
            if solutions is not None:
                solutions.append(sorted(
                    (i + 1, c + 1) for i, combo in enumerate(placed) for c in combo
                ))
            return
        prev = placed[r - 1] if r else ()
        for combo in subsets:
            nodes += 1
            if nodes > node_budget:
                raise SearchBudgetExceeded(f"star counter exceeded {node_budget} nodes")
            if any(col_count[c] == k for c in combo):
                continue
            if prev and any(abs(c - p) <= 1 for c in combo for p in prev):
                continue
            over = False
            for c in combo:
                reg = regions[r][c]
                if region_count[reg] == k:
                    over = True
                    break
            if over:
                continue
            for c in combo:
                col_count[c] += 1
                region_count[regions[r][c]] += 1
            # capacity: every column / region must stay reachable
            rows_left = n - r - 1
            feasible = all(k - col_count[c] <= rows_left for c in range(n)) and all(
                k - region_count[i] <= region_suffix[r + 1][i] for i in range(1, n + 1)
            )
            if feasible:
                placed.append(combo)
                search(r + 1)
                placed.pop()
            for c in combo:
                col_count[c] -= 1
                region_count[regions[r][c]] -= 1
            if count >= limit:
                return

    search(0)
    return count


def _random_star_set(n: int, k: int, rng: SplitMix64) -> Optional[List[Cell]]:
    """Row-by-row randomized placement honoring column caps and adjacency."""
    subsets = _row_subsets(n, k)
    col_count = [0] * n
    placed: List[Tuple[int, ...]] = []

    def fill(r: int) -> bool:
        if r == n:
            return all(v == k for v in col_count)
        order = list(subsets)
        rng.shuffle(order)
        prev = placed[r - 1] if r else ()
        rows_left = n - r - 1
        for combo in order:
            if any(col_count[c] == k for c in combo):
                continue
            if prev and any(abs(c - p) <= 1 for c in combo for p in prev):
                continue
            for c in combo:
                col_count[c] += 1
            placed.append(combo)
            if all(k - col_count[c] <= rows_left for c in range(n)) and fill(r + 1):
                return True
            placed.pop()
            for c in combo:
                col_count[c] -= 1
        return False

    if not fill(0):
        return None
    return [(r + 1, c + 1) for r, combo in enumerate(placed) for c in combo]


def _grow_regions(n: int, star_groups: List[List[Cell]], rng: SplitMix64) -> Optional[List[List[int]]]:
    """Assign every cell to a region id, each region one orthogonal component.

    Each region starts from its stars joined by a staircase path, then
    regions expand one random frontier cell at a time until the grid is
    covered. Returns None when seeding collides; the caller retries.
    """
    owner = [[0] * n for _ in range(n)]

    def claim(r: int, c: int, region: int) -> bool:
        if owner[r][c] and owner[r][c] != region:
            return False
        owner[r][c] = region
        return True

    for region, group in enumerate(star_groups, start=1):
        anchor = group[0]
        if not claim(anchor[0] - 1, anchor[1] - 1, region):
            return None
        for r2, c2 in group[1:]:
            r, c = anchor[0] - 1, anchor[1] - 1
            tr, tc = r2 - 1, c2 - 1
            if not claim(r, c, region):
                return None
            while (r, c) != (tr, tc):
                # staircase: step toward the target, random axis first
                steps = []
                if r != tr:
                    steps.append((r + (1 if tr > r else -1), c))
                if c != tc:
                    steps.append((r, c + (1 if tc > c else -1)))
                r, c = rng.choice(steps)
                if not claim(r, c, region):
                    return None
    while True:
        frontier = [
            (r, c, owner[r + dr][c + dc])
            for r in range(n)
            for c in range(n)
            if not owner[r][c]
            for dr, dc in _ORTH
            if 0 <= r + dr < n and 0 <= c + dc < n and owner[r + dr][c + dc]
        ]
        if not frontier:
            break
        r, c, region = rng.choice(frontier)
        owner[r][c] = region
    return owner


def star_generate(n: int, k: int, seed: int) -> Tuple[Dict[str, Any], List[Cell]]:
    if n < 4 * k:
        raise ParamError(f"star placement with k={k} needs n >= {4 * k}, got {n}")
    rng = SplitMix64(seed)
    for _ in range(RETRY_BUDGET):
        stars = _random_star_set(n, k, rng)
        if stars is None:
            continue
        if k == 1:
            groups = [[s] for s in stars]
        else:
            # pair each star with the nearest unpaired one (greedy)
            pool = list(stars)
            groups = []
            while pool:
                a = pool.pop(0)
                j = min(range(len(pool)),
                        key=lambda i: abs(pool[i][0] - a[0]) + abs(pool[i][1] - a[1]))
                groups.append([a] + [pool.pop(j)])
        rng.shuffle(groups)
        owner = _grow_regions(n, groups, rng)
        if owner is None:
            continue
        payload = {
            "schema_version": SCHEMA_VERSION,
            "task": "star_placement",
            "n": n,
            "k": k,
            "regions": owner,
        }
        if count_payload_solutions(payload, limit=2) == 1:
            return payload, sorted(stars)
    raise GenerationExhausted(f"star placement n={n} k={k} uniqueness unreachable", RETRY_BUDGET)


def render_star(payload: Dict[str, Any]) -> str:
    n, k, regions = _check_payload(payload)
    star_word = "star" if k == 1 else "stars"
    return "\n".join([
        f"Solve this {n}x{n} star placement puzzle.",
        f"Place stars on the grid so that every row, every column, and every "
        f"region contains exactly {k} {star_word}. No two stars may occupy "
        f"adjacent cells, not even diagonally. The grid below gives each "
        f"cell's region id.",
        "",
        "\n".join(" ".join(str(v) for v in row) for row in regions),
        "",
        "Give the star cells as a comma-separated list of (row,column) pairs, "
        "1-indexed from the top-left, e.g. (1,2),(3,4).",
    ])


SCHEMA = ParamSchema((
    ParamSpec("n", "int", 4, 10, easy=5, hard=8),
    ParamSpec("k", "int", 1, 2, easy=1, hard=2),
))

DESCRIPTOR = TaskDescriptor(
    id="star_placement",
    schema=SCHEMA,
    generate=lambda params, seed: star_generate(params["n"], params["k"], seed),
    verify=verify_star,
    render=render_star,
    parse_answer=lambda payload, text: parse_cells(text),
    serialize_answer=format_cells,
)
