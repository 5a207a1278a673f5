"""Boolean expression evaluation task.

ASTs are tuples: ("lit", bool), ("not", child), ("and", l, r), ("or", l, r).
The surface form spells operators as words and parenthesizes every nested
operator application, so "( True or False ) and False" reads unambiguously.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple, Union

from ..errors import ParamError, PayloadError
from ..registry import SCHEMA_VERSION, ParamSchema, ParamSpec, TaskDescriptor
from ..rng import SplitMix64

BoolExpr = Tuple[Any, ...]


def boolexpr_eval(expr: BoolExpr) -> bool:
    op = expr[0]
    if op == "lit":
        return expr[1]
    if op == "not":
        return not boolexpr_eval(expr[1])
    if op == "and":
        return boolexpr_eval(expr[1]) and boolexpr_eval(expr[2])
    if op == "or":
        return boolexpr_eval(expr[1]) or boolexpr_eval(expr[2])
    raise PayloadError(f"unknown boolean operator {op!r}")


def expr_depth(expr: BoolExpr) -> int:
    if expr[0] == "lit":
        return 0
    return 1 + max(expr_depth(e) for e in expr[1:])


def to_surface(expr: BoolExpr, top: bool = True) -> str:
    op = expr[0]
    if op == "lit":
        return "True" if expr[1] else "False"
    if op == "not":
        return f"not {to_surface(expr[1], top=False)}"
    inner = f"{to_surface(expr[1], top=False)} {op} {to_surface(expr[2], top=False)}"
    return inner if top else f"( {inner} )"


def _random_expr(depth: int, rng: SplitMix64) -> BoolExpr:
    # exactly the requested depth: one branch carries it, the other is free
    if depth == 0:
        return ("lit", rng.coin())
    r = rng.below(3)
    if r == 0:
        return ("not", _random_expr(depth - 1, rng))
    op = "and" if r == 1 else "or"
    deep = _random_expr(depth - 1, rng)
    other = _random_expr(rng.below(depth), rng)
    if rng.coin():
        return (op, deep, other)
    return (op, other, deep)


def ast_to_jsonable(expr: BoolExpr) -> List[Any]:
    if expr[0] == "lit":
        return ["lit", expr[1]]
    return [expr[0]] + [ast_to_jsonable(e) for e in expr[1:]]


def ast_from_jsonable(data: Any) -> BoolExpr:
    if not isinstance(data, list) or not data:
        raise PayloadError("boolean AST nodes must be non-empty lists")
    op = data[0]
    if op == "lit":
        if len(data) != 2 or not isinstance(data[1], bool):
            raise PayloadError("literal node must be ['lit', bool]")
        return ("lit", data[1])
    if op == "not":
        if len(data) != 2:
            raise PayloadError("not node takes one child")
        return ("not", ast_from_jsonable(data[1]))
    if op in ("and", "or"):
        if len(data) != 3:
            raise PayloadError(f"{op} node takes two children")
        return (op, ast_from_jsonable(data[1]), ast_from_jsonable(data[2]))
    raise PayloadError(f"unknown boolean operator {op!r}")


def boolexpr_generate(depth: int, seed: int) -> Tuple[Dict[str, Any], bool]:
    if depth < 0:
        raise ParamError(f"depth must be >= 0, got {depth}")
    rng = SplitMix64(seed)
    expr = _random_expr(depth, rng)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "task": "boolean_expressions",
        "ast": ast_to_jsonable(expr),
        "expression": to_surface(expr),
    }
    return payload, boolexpr_eval(expr)


def verify_boolexpr(payload: Dict[str, Any], candidate: Any) -> bool:
    truth = boolexpr_eval(ast_from_jsonable(payload["ast"]))
    return isinstance(candidate, bool) and candidate == truth


def render_boolexpr(payload: Dict[str, Any]) -> str:
    return (
        "Evaluate the following boolean expression. Respond with True or "
        f"False only.\n\n{payload['expression']}"
    )


def _parse_bool(payload: Dict[str, Any], text: str) -> Optional[bool]:
    s = text.strip().lower()
    if s == "true":
        return True
    if s == "false":
        return False
    return None


SCHEMA = ParamSchema((
    ParamSpec("depth", "int", 0, 8, easy=2, hard=5),
))

DESCRIPTOR = TaskDescriptor(
    id="boolean_expressions",
    schema=SCHEMA,
    generate=lambda params, seed: boolexpr_generate(params["depth"], seed),
    verify=verify_boolexpr,
    render=render_boolexpr,
    parse_answer=_parse_bool,
    serialize_answer=str,
)
