"""Canonical answer grammar for grid tasks.

Grids serialize as rows of space-separated integers, one row per line.
Cell sets serialize as 1-indexed ``(r,c)`` pairs, comma-separated and
sorted lexicographically. Parsing is lenient on whitespace but strict on
structure (wrong token count or duplicate cells parse to None).
"""

from __future__ import annotations

import re
from typing import Any, List, Optional, Sequence, Tuple

_INT_RE = re.compile(r"-?\d+")
_CELL_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")

Cell = Tuple[int, int]


def format_grid(grid: Sequence[Sequence[int]]) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in grid)


def parse_grid(text: str, rows: int, cols: int) -> Optional[List[List[int]]]:
    """Parse exactly rows*cols integer tokens, row-major."""
    if not isinstance(text, str):
        return None
    tokens = _INT_RE.findall(text)
    if len(tokens) != rows * cols:
        return None
    values = [int(t) for t in tokens]
    return [values[r * cols : (r + 1) * cols] for r in range(rows)]


def format_cells(cells: Sequence[Cell]) -> str:
    return ",".join(f"({r},{c})" for r, c in sorted(tuple(c) for c in cells))


_PAIR_RE = re.compile(r"\((\d+),(\d+)\)")


def parse_cells(text: str) -> Optional[List[Cell]]:
    """Parse a set of (r,c) pairs; duplicates or stray junk parse to None."""
    if not isinstance(text, str):
        return None
    s = "".join(text.split())
    if not s:
        return None
    cells: List[Cell] = []
    pos = 0
    while pos < len(s):
        m = _PAIR_RE.match(s, pos)
        if not m:
            return None
        cells.append((int(m.group(1)), int(m.group(2))))
        pos = m.end()
        if pos < len(s) and s[pos] == ",":  # separators optional
            pos += 1
    if len(set(cells)) != len(cells):
        return None
    return sorted(cells)


def coerce_grid(candidate: Any, rows: int, cols: int) -> Optional[List[List[int]]]:
    """Accept list-of-lists candidates from JSON or tests; validate shape."""
    if not isinstance(candidate, (list, tuple)) or len(candidate) != rows:
        return None
    out = []
    for row in candidate:
        if not isinstance(row, (list, tuple)) or len(row) != cols:
            return None
        if any(isinstance(v, bool) or not isinstance(v, int) for v in row):
            return None
        out.append(list(row))
    return out


def coerce_cells(candidate: Any) -> Optional[List[Cell]]:
    if not isinstance(candidate, (list, tuple)):
        return None
    cells = []
    for item in candidate:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            return None
        r, c = item
        if isinstance(r, bool) or isinstance(c, bool) or not isinstance(r, int) or not isinstance(c, int):
            return None
        cells.append((r, c))
    if len(set(cells)) != len(cells):
        return None
    return sorted(cells)
