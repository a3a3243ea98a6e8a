"""Safe arithmetic-expression evaluation over caller-supplied value types.

Data files store formulas as text (``"exp(a)*x + exp(a) - 1"``,
``"t^-2 + 1/2"``, ``"q + p^2"``).  They are parsed with :mod:`ast` and
evaluated by walking the tree, so only arithmetic, the supplied names and the
supplied functions are reachable.  ``^`` is accepted as exponentiation.
"""
from __future__ import annotations

import ast
import operator
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


class ExpressionError(ValueError):
    pass


@lru_cache(maxsize=4096)
def parse(text: str) -> ast.Expression:
    try:
        return ast.parse(text.replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None


def evaluate(
    text: str,
    names: Mapping[str, object],
    functions: Mapping[str, Callable] | None = None,
    number: Callable = Fraction,
):
    """Evaluate ``text`` with ``names`` bound; numeric literals go through ``number``."""
    functions = functions or {}

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return number(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ExpressionError(f"unknown name {node.id!r} in {text!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                exponent = _integer_exponent(node.right)
                if exponent is not None:
                    if exponent < 0:
                        return number(1) / left ** (-exponent)
                    return left ** exponent
            return _BINOPS[type(node.op)](left, walk(node.right))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
            fn = functions.get(node.func.id)
            if fn is None:
                raise ExpressionError(f"unknown function {node.func.id!r} in {text!r}")
            return fn(*[walk(a) for a in node.args])
        raise ExpressionError(f"unsupported syntax in {text!r}: {ast.dump(node)}")

    return walk(parse(text))


def _integer_exponent(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if (
        isinstance(node, ast.UnaryOp)
        and isinstance(node.op, ast.USub)
        and isinstance(node.operand, ast.Constant)
        and isinstance(node.operand.value, int)
    ):
        return -node.operand.value
    return None


def free_names(text: str) -> set:
    return {n.id for n in ast.walk(parse(text)) if isinstance(n, ast.Name)} - _called_names(text)


def _called_names(text: str) -> set:
    return {
        n.func.id for n in ast.walk(parse(text)) if isinstance(n, ast.Call) and isinstance(n.func, ast.Name)
    }
