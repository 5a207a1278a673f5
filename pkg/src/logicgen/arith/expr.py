"""Arithmetic expression trees: parse, exact-evaluate, search.

Expressions are infix with parentheses over the four binary operators and
non-negative integer literals; there is no unary minus. Evaluation is
exact rational arithmetic (8/(3-8/3) really is 24), division by zero
evaluates to None.

Trees are nested tuples: ("num", Fraction) or (op, left, right) with op
one of "+-*/".
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from ..errors import ParamError

Expr = Union[Tuple[str, Fraction], Tuple[str, "Expr", "Expr"]]

OPS = "+-*/"
MAX_SEARCH_NUMBERS = 6

_TOKEN_RE = re.compile(r"\s*(\d+|[()+\-*/×÷−x])")
_CANON = {"×": "*", "x": "*", "÷": "/", "−": "-"}


def num(value) -> Expr:
    return ("num", Fraction(value))


def evaluate(tree: Expr) -> Optional[Fraction]:
    """Exact value of the tree, or None when any division hits zero."""
    if tree[0] == "num":
        return tree[1]
    op, left, right = tree
    a = evaluate(left)
    b = evaluate(right)
    if a is None or b is None:
        return None
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if b == 0:
        return None
    return a / b


def leaves(tree: Expr) -> List[int]:
    """Leaf literals in left-to-right order."""
    if tree[0] == "num":
        return [int(tree[1])]
    return leaves(tree[1]) + leaves(tree[2])


def operators(tree: Expr) -> List[str]:
    if tree[0] == "num":
        return []
    return [tree[0]] + operators(tree[1]) + operators(tree[2])


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_string(tree: Expr) -> str:
    """Surface form with minimal parentheses (left-associative reading)."""
    if tree[0] == "num":
        return str(int(tree[1]))
    op, left, right = tree
    ls = to_string(left)
    rs = to_string(right)
    if left[0] != "num" and _PREC[left[0]] < _PREC[op]:
        ls = f"({ls})"
    if right[0] != "num" and (
        _PREC[right[0]] < _PREC[op]
        or (_PREC[right[0]] == _PREC[op] and op in "-/")
        or (op == "*" and right[0] == "/")
    ):
        rs = f"({rs})"
    return f"{ls}{op}{rs}"


def parse(text: str) -> Optional[Expr]:
    """Parse an infix expression; None on any syntax error.

    Lenient on whitespace and on unicode operator spellings; strict on
    structure. No unary minus.
    """
    if not isinstance(text, str):
        return None
    tokens: List[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                return None
            break
        tok = m.group(1)
        tokens.append(_CANON.get(tok, tok))
        pos = m.end()
    if not tokens:
        return None

    idx = 0

    def peek() -> Optional[str]:
        return tokens[idx] if idx < len(tokens) else None

    def take() -> str:
        nonlocal idx
        idx += 1
        return tokens[idx - 1]

    def parse_factor() -> Optional[Expr]:
        tok = peek()
        if tok is None:
            return None
        if tok == "(":
            take()
            inner = parse_sum()
            if inner is None or peek() != ")":
                return None
            take()
            return inner
        if tok.isdigit():
            take()
            return num(int(tok))
        return None

    def parse_term() -> Optional[Expr]:
        left = parse_factor()
        while left is not None and peek() in ("*", "/"):
            op = take()
            right = parse_factor()
            if right is None:
                return None
            left = (op, left, right)
        return left

    def parse_sum() -> Optional[Expr]:
        left = parse_term()
        while left is not None and peek() in ("+", "-"):
            op = take()
            right = parse_term()
            if right is None:
                return None
            left = (op, left, right)
        return left

    tree = parse_sum()
    if tree is None or idx != len(tokens):
        return None
    return tree


def search(
    numbers,
    target,
    ops: str = OPS,
    use_all: bool = True,
    each_op_once: bool = False,
) -> Optional[Expr]:
    """Exhaustive witness search: combine numbers pairwise until target.

    With use_all the witness must consume the whole multiset; otherwise
    any sub-multiset works (a bare number counts only when it IS the
    target). each_op_once restricts every operator to a single use.
    Returns the first witness found or None after exhausting the space.
    """
    numbers = list(numbers)
    if not 1 <= len(numbers) <= MAX_SEARCH_NUMBERS:
        raise ParamError(f"search supports 1..{MAX_SEARCH_NUMBERS} numbers, got {len(numbers)}")
    target = Fraction(target)
    for op in ops:
        if op not in OPS:
            raise ParamError(f"unknown operator {op!r}")

    seen: set = set()

    def run(items: Tuple[Tuple[Fraction, Expr], ...], used: FrozenSet[str]) -> Optional[Expr]:
        if use_all:
            if len(items) == 1 and items[0][0] == target:
                return items[0][1]
        else:
            for value, tree in items:
                if value == target:
                    return tree
        key = (tuple(sorted(v for v, _ in items)), used if each_op_once else None)
        if key in seen:
            return None
        seen.add(key)
        n = len(items)
        for i in range(n):
            for j in range(i + 1, n):
                (a, ta), (b, tb) = items[i], items[j]
                rest = tuple(items[k] for k in range(n) if k != i and k != j)
                for op in ops:
                    if each_op_once and op in used:
                        continue
                    used2 = used | {op} if each_op_once else used
                    candidates = []
                    if op == "+":
                        candidates.append((a + b, (op, ta, tb)))
                    elif op == "*":
                        candidates.append((a * b, (op, ta, tb)))
                    elif op == "-":
                        candidates.append((a - b, (op, ta, tb)))
                        candidates.append((b - a, (op, tb, ta)))
                    else:
                        if b != 0:
                            candidates.append((a / b, (op, ta, tb)))
                        if a != 0:
                            candidates.append((b / a, (op, tb, ta)))
                    for value, tree in candidates:
                        found = run(rest + ((value, tree),), used2)
                        if found is not None:
                            return found
        return None

    items = tuple((Fraction(v), num(v)) for v in numbers)
    return run(items, frozenset())


def reachable_values(
    numbers,
    ops: str = OPS,
    each_op_once: bool = False,
) -> Dict[Fraction, Expr]:
    """Every value attainable from any sub-multiset, with one witness each.

    One sweep of the same combine space search() walks, but collecting
    instead of stopping at a target — cheaper than probing many targets
    one by one. Bare numbers are included as single-leaf witnesses.
    """
    numbers = list(numbers)
    if not 1 <= len(numbers) <= MAX_SEARCH_NUMBERS:
        raise ParamError(f"search supports 1..{MAX_SEARCH_NUMBERS} numbers, got {len(numbers)}")
    for op in ops:
        if op not in OPS:
            raise ParamError(f"unknown operator {op!r}")

    out: Dict[Fraction, Expr] = {}
    seen: set = set()

    def run(items: Tuple[Tuple[Fraction, Expr], ...], used: FrozenSet[str]) -> None:
        key = (tuple(sorted(v for v, _ in items)), used if each_op_once else None)
        if key in seen:
            return
        seen.add(key)
        n = len(items)
        for i in range(n):
            for j in range(i + 1, n):
                (a, ta), (b, tb) = items[i], items[j]
                rest = tuple(items[k] for k in range(n) if k != i and k != j)
                for op in ops:
                    if each_op_once and op in used:
                        continue
                    used2 = used | {op} if each_op_once else used
                    candidates = []
                    if op == "+":
                        candidates.append((a + b, (op, ta, tb)))
                    elif op == "*":
                        candidates.append((a * b, (op, ta, tb)))
                    elif op == "-":
                        candidates.append((a - b, (op, ta, tb)))
                        candidates.append((b - a, (op, tb, ta)))
                    else:
                        if b != 0:
                            candidates.append((a / b, (op, ta, tb)))
                        if a != 0:
                            candidates.append((b / a, (op, tb, ta)))
                    for value, tree in candidates:
                        if value not in out:
                            out[value] = tree
                        run(rest + ((value, tree),), used2)

    items = tuple((Fraction(v), num(v)) for v in numbers)
    for value, tree in items:
        if value not in out:
            out[value] = tree
    run(items, frozenset())
    return out
