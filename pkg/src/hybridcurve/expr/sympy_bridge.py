"""Conversion to and from sympy, used for simplification and antiderivatives.

Every simplification is certified: the result must agree with the input on a
grid, otherwise it is discarded.
"""
from __future__ import annotations

import numpy as np
import sympy as sp

from .nodes import (
    Add, Const, Div, Expr, Func, Mul, Neg, OdeComponent, Pow, Sub, Var, const, func, power,
    topological_order,
)
from .scalarfn import ScalarFn

SYMBOL = sp.Symbol("t", real=True)

_TO_SYMPY = {
    "sin": sp.sin, "cos": sp.cos, "tan": sp.tan, "sinh": sp.sinh, "cosh": sp.cosh,
    "tanh": sp.tanh, "exp": sp.exp, "log": sp.log, "sqrt": sp.sqrt, "abs": sp.Abs,
    "sign": sp.sign,
}
_FROM_SYMPY = {
    sp.sin: "sin", sp.cos: "cos", sp.tan: "tan", sp.sinh: "sinh", sp.cosh: "cosh",
    sp.tanh: "tanh", sp.exp: "exp", sp.log: "log", sp.Abs: "abs", sp.sign: "sign",
}


#: Largest expression (counted as a tree) handed to sympy; beyond this its
#: simplifier and integrator can take minutes.
TREE_BUDGET = 2000


class Unsupported(ValueError):
    """A sympy result uses constructs outside the expression language."""


def tree_size(expr: Expr) -> int:
    """Node count of ``expr`` with shared subexpressions counted once per use."""
    sizes: dict[int, int] = {}
    for node in topological_order(expr):
        sizes[id(node)] = 1 + sum(sizes[id(ch)] for ch in node.children())
    return sizes[id(expr)]


def _check_budget(expr: Expr) -> None:
    n = tree_size(expr)
    if n > TREE_BUDGET:
        raise Unsupported(f"expression too large for symbolic work ({n} nodes)")


def to_sympy(expr: Expr) -> sp.Expr:
    _check_budget(expr)
    values: dict[int, sp.Expr] = {}
    for node in topological_order(expr):
        args = [values[id(ch)] for ch in node.children()]
        if isinstance(node, Const):
            out = sp.Float(node.value)
        elif isinstance(node, Var):
            out = SYMBOL
        elif isinstance(node, Neg):
            out = -args[0]
        elif isinstance(node, Add):
            out = args[0] + args[1]
        elif isinstance(node, Sub):
            out = args[0] - args[1]
        elif isinstance(node, Mul):
            out = args[0] * args[1]
        elif isinstance(node, Div):
            out = args[0] / args[1]
        elif isinstance(node, Pow):
            e = node.exponent
            out = args[0] ** (sp.Integer(int(e)) if e.is_integer() else sp.Float(e))
        elif isinstance(node, Func):
            out = _TO_SYMPY[node.name](args[0])
        elif isinstance(node, OdeComponent):
            raise Unsupported("sampled ODE components have no symbolic form")
        else:  # pragma: no cover
            raise Unsupported(type(node).__name__)
        values[id(node)] = out
    return values[id(expr)]


def from_sympy(s: sp.Expr) -> Expr:
    if s == SYMBOL or (isinstance(s, sp.Symbol) and s.name == "t"):
        from .nodes import T
        return T
    if s.is_number:
        value = complex(sp.N(s, 17))
        if value.imag != 0.0:
            raise Unsupported(f"complex constant {s}")
        return const(value.real)
    if isinstance(s, sp.Add):
        out = from_sympy(s.args[0])
        for a in s.args[1:]:
            out = out + from_sympy(a)
        return out
    if isinstance(s, sp.Mul):
        out = from_sympy(s.args[0])
        for a in s.args[1:]:
            if isinstance(a, sp.Pow) and a.exp == -1:
                out = out / from_sympy(a.base)
            else:
                out = out * from_sympy(a)
        return out
    if isinstance(s, sp.Pow):
        if not s.exp.is_number:
            if s.base == sp.E:
                return func("exp", from_sympy(s.exp))
            raise Unsupported(f"non-constant exponent in {s}")
        e = float(s.exp)
        base = from_sympy(s.base)
        if e == 0.5:
            return func("sqrt", base)
        if e == -1.0:
            return const(1.0) / base
        return power(base, e)
    if isinstance(s, sp.Function) and s.func in _FROM_SYMPY and len(s.args) == 1:
        return func(_FROM_SYMPY[s.func], from_sympy(s.args[0]))
    raise Unsupported(f"cannot convert {type(s).__name__}: {s}")


def _chop(s: sp.Expr, rel: float) -> sp.Expr:
    """Drop additive terms whose float coefficient is negligible against the largest one."""
    s = sp.expand(s)
    terms = sp.Add.make_args(s)
    coeffs = [abs(float(term.as_coeff_Mul()[0])) for term in terms]
    top = max(coeffs) if coeffs else 0.0
    if top == 0.0:
        return s
    return sp.Add(*(term for term, c in zip(terms, coeffs) if c > rel * top))


def certify(candidate: Expr, original: ScalarFn, grid: np.ndarray, tol: float) -> bool:
    try:
        a = ScalarFn(candidate)(grid)
        b = original(grid)
    except ArithmeticError:
        return False
    scale = max(1.0, float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b))) <= tol * scale


def simplify(fn: ScalarFn, grid: np.ndarray, tol: float = 1e-12) -> ScalarFn:
    """Return a simpler equivalent of ``fn``, or ``fn`` itself if none is certified.

    The pipeline is: expand, drop round-off terms, trigonometric
    simplification, then recognise constants.  The result is accepted only if
    it matches ``fn`` on ``grid`` to ``tol`` relative to ``max(1, |fn|)``.
    """
    if fn.constant_value is not None:
        return fn
    try:
        s = to_sympy(fn.expr)
        s = _chop(s, 1e-13)
        s = sp.trigsimp(s)
        s = _chop(s, 1e-13)
        s = sp.nsimplify(s, tolerance=1e-12, rational=False)
        candidate = from_sympy(s)
    except (Unsupported, TypeError, ValueError, sp.SympifyError):
        return fn
    if certify(candidate, fn, grid, tol):
        return ScalarFn(candidate)
    return fn


def antiderivative(s: sp.Expr) -> sp.Expr:
    """Indefinite integral in ``t`` with zero constant; raises Unsupported if sympy fails."""
    result = sp.integrate(s, SYMBOL)
    if result.has(sp.Integral) or result.has(sp.Piecewise):
        raise Unsupported(f"no closed-form antiderivative for {s}")
    return result
