"""Parsing, evaluation and symbolic differentiation of functions of ``t``."""
from .nodes import (
    ONE, T, ZERO, Const, Expr, Func, OdeComponent, Pow, Var, add, as_expr, const, div, evaluate,
    func, mul, neg, power, sub,
)
from .parser import parse
from .scalarfn import ScalarFn, differentiate, eval_fn

__all__ = [
    "Expr", "Const", "Var", "Func", "Pow", "OdeComponent", "T", "ZERO", "ONE",
    "add", "sub", "mul", "div", "neg", "power", "func", "const", "as_expr", "evaluate",
    "parse", "ScalarFn", "differentiate", "eval_fn",
]
