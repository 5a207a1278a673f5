"""Math Path: operand grid with blanks; row and column equations must hold.

Payload schema (version 1):
    task: "math_path"
    rows, cols
    values: rows x cols ints in 1..9, 0 = blank to fill
    row_ops: rows x (cols-1) operator chars applied left to right
    col_ops: (rows-1) x cols operator chars applied top to bottom
    row_targets: [rows] (absent entries impossible: every row has one when cols >= 2)
    col_targets: [cols]

Equations evaluate with standard operator precedence (* binds before
+ and -), e.g. 2 + 3 * 4 = 14; the rendered prompt states this rule.
Operators come from +, -, *. Rows of width 1 and columns of height 1
carry no equation. Any in-range fill satisfying every equation verifies
true; the puzzle does not promise a unique fill.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..errors import GenerationExhausted, ParamError, PayloadError
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64
from ..grid.answers import coerce_grid, format_grid, parse_grid

RETRY_BUDGET = 1000
_OPS = "+-*"


def chain_eval(values: Sequence[int], ops: Sequence[str]) -> int:
    """Evaluate v0 op0 v1 op1 v2 ... with * binding before + and -."""
    total = 0
    sign = 1
    term = values[0]
    for op, v in zip(ops, values[1:]):
        if op == "*":
            term *= v
        elif op in "+-":
            total += sign * term
            sign = 1 if op == "+" else -1
            term = v
        else:
            raise PayloadError(f"unknown operator {op!r}")
    return total + sign * term


def _check_payload(payload: Dict[str, Any]) -> Tuple[int, int]:
    try:
        rows, cols = payload["rows"], payload["cols"]
        values = payload["values"]
        row_ops, col_ops = payload["row_ops"], payload["col_ops"]
        row_targets, col_targets = payload["row_targets"], payload["col_targets"]
    except (KeyError, TypeError):
        raise PayloadError("math path payload missing fields") from None
    if coerce_grid(values, rows, cols) is None:
        raise PayloadError("math path values are not a rows x cols integer grid")
    if len(row_ops) != rows or any(len(r) != max(cols - 1, 0) for r in row_ops):
        raise PayloadError("row_ops shape mismatch")
    if len(col_ops) != max(rows - 1, 0) or any(len(r) != cols for r in col_ops):
        raise PayloadError("col_ops shape mismatch")
    if len(row_targets) != rows or len(col_targets) != cols:
        raise PayloadError("target vector shape mismatch")
    return rows, cols


def math_path_generate(rows: int, cols: int, blanks: int, seed: int) -> Tuple[Dict[str, Any], List[List[int]]]:
    n_cells = rows * cols
    if not 0 <= blanks <= n_cells:
        raise ParamError(f"blanks {blanks} outside [0, {n_cells}]")
    if rows < 1 or cols < 1:
        raise ParamError("grid must be at least 1x1")
    rng = SplitMix64(seed)
    grid = [[rng.randint(1, 9) for _ in range(cols)] for _ in range(rows)]
    row_ops = [[_OPS[rng.below(3)] for _ in range(cols - 1)] for _ in range(rows)]
    col_ops = [[_OPS[rng.below(3)] for _ in range(cols)] for _ in range(rows - 1)]
    holes = rng.sample([(r, c) for r in range(rows) for c in range(cols)], blanks)
    values = [[0 if (r, c) in set(holes) else grid[r][c] for c in range(cols)] for r in range(rows)]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "task": "math_path",
        "rows": rows,
        "cols": cols,
        "values": values,
        "row_ops": row_ops,
        "col_ops": col_ops,
        "row_targets": [
            chain_eval(grid[r], row_ops[r]) if cols >= 2 else None for r in range(rows)
        ],
        "col_targets": [
            chain_eval([grid[r][c] for r in range(rows)], [col_ops[r][c] for r in range(rows - 1)])
            if rows >= 2 else None
            for c in range(cols)
        ],
    }
    return payload, grid


def verify_math_path(payload: Dict[str, Any], candidate: Any) -> bool:
    rows, cols = _check_payload(payload)
    grid = coerce_grid(candidate, rows, cols)
    if grid is None:
        raise PayloadError(f"candidate is not a {rows}x{cols} integer grid")
    values = payload["values"]
    for r in range(rows):
        for c in range(cols):
            if values[r][c] and grid[r][c] != values[r][c]:
                return False
            if not 1 <= grid[r][c] <= 9:
                return False
    if cols >= 2:
        for r in range(rows):
            if chain_eval(grid[r], payload["row_ops"][r]) != payload["row_targets"][r]:
                return False
    if rows >= 2:
        for c in range(cols):
            col = [grid[r][c] for r in range(rows)]
            ops = [payload["col_ops"][r][c] for r in range(rows - 1)]
            if chain_eval(col, ops) != payload["col_targets"][c]:
                return False
    return True


def render_math_path(payload: Dict[str, Any]) -> str:
    rows, cols = _check_payload(payload)
    values = payload["values"]
    lines = [
        f"Fill in this {rows}x{cols} arithmetic grid.",
        "Replace every blank (_) with a digit from 1 to 9 (repeats allowed) so "
        "that every stated equation holds. Equations follow the standard order "
        "of operations: multiplication binds before addition and subtraction.",
        "",
    ]
    for r in range(rows):
        parts = []
        for c in range(cols):
            parts.append("_" if values[r][c] == 0 else str(values[r][c]))
            if c < cols - 1:
                parts.append(payload["row_ops"][r][c])
        if cols >= 2:
            parts += ["=", str(payload["row_targets"][r])]
        lines.append(" ".join(parts))
    if rows >= 2:
        lines.append("")
        lines.append("Column equations (top to bottom):")
        for c in range(cols):
            parts = []
            for r in range(rows):
                parts.append("_" if values[r][c] == 0 else str(values[r][c]))
                if r < rows - 1:
                    parts.append(payload["col_ops"][r][c])
            parts += ["=", str(payload["col_targets"][c])]
            lines.append(" ".join(parts))
    lines.append("")
    lines.append(f"Give the completed grid as {rows} lines of {cols} space-separated integers.")
    return "\n".join(lines)


SCHEMA = ParamSchema((
    ParamSpec("rows", "int", 1, 4, easy=2, hard=3),
    ParamSpec("cols", "int", 1, 4, easy=2, hard=3),
    ParamSpec("blanks", "int", 0, 16, easy=1, hard=4),
))

DESCRIPTOR = TaskDescriptor(
    id="math_path",
    schema=SCHEMA,
    generate=lambda params, seed: math_path_generate(
        params["rows"], params["cols"], params["blanks"], seed
    ),
    verify=verify_math_path,
    render=render_math_path,
    parse_answer=lambda payload, text: parse_grid(text, payload["rows"], payload["cols"]),
    serialize_answer=format_grid,
)
