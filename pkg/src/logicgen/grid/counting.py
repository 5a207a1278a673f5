"""Uniqueness oracle: exact solution counts for any grid-task payload."""

from __future__ import annotations

from typing import Any, Dict

from ..errors import PayloadError
from . import campsite, futoshiki, minesweeper, numbrix, skyscraper, starplacement, sudoku

DEFAULT_NODE_BUDGET = sudoku.DEFAULT_NODE_BUDGET

_COUNTERS = {
    "sudoku": sudoku.count_payload_solutions,
    "futoshiki": futoshiki.count_payload_solutions,
    "skyscraper": skyscraper.count_payload_solutions,
    "campsite": campsite.count_payload_solutions,
    "star_placement": starplacement.count_payload_solutions,
    "numbrix": numbrix.count_payload_solutions,
    "minesweeper": minesweeper.count_payload_solutions,
}


def csp_count_solutions(payload: Dict[str, Any], limit: int,
                        node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Number of satisfying assignments of the payload, capped at ``limit``.

    Dispatches on ``payload["task"]``; raises a structural error for
    non-grid payloads and a budget error when the exhaustive search
    exceeds ``node_budget`` explored nodes.
    """
    if limit < 1:
        raise ValueError(f"limit must be positive, got {limit}")
    try:
        task = payload["task"]
    except (KeyError, TypeError):
        raise PayloadError("payload has no task field") from None
    counter = _COUNTERS.get(task)
    if counter is None:
        raise PayloadError(f"no solution counter for task {task!r}")
    return counter(payload, limit, node_budget=node_budget)
