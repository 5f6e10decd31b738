"""Expression trees in one variable ``t`` with exact symbolic derivatives.

Trees are immutable and may share subtrees (derivatives reuse their operand
nodes), so evaluation walks the DAG once per distinct node.  The smart
constructors :func:`add`, :func:`mul` and friends fold constants and drop
neutral elements; no other simplification is attempted.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..errors import EvalDomainError

__all__ = [
    "Expr", "Const", "Var", "Neg", "Add", "Sub", "Mul", "Div", "Pow", "Func", "OdeComponent",
    "T", "ZERO", "ONE", "const", "add", "sub", "mul", "div", "neg", "power", "func",
    "as_expr", "evaluate", "FUNCTIONS",
]

FUNCTIONS: dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    # not in the input grammar proper, but needed as the derivative of abs
    "sign": np.sign,
}


class Expr:
    """Base node.  Subclasses implement ``children``, ``_apply`` and ``_derivative``."""

    __slots__ = ("_deriv", "_has_t")

    def __init__(self):
        self._deriv = None
        self._has_t = any(ch._has_t for ch in self.children())

    def children(self) -> tuple[Expr, ...]:
        return ()

    def _apply(self, args, t):
        raise NotImplementedError

    def _derivative(self) -> Expr:
        raise NotImplementedError

    @property
    def is_constant(self) -> bool:
        """True if the tree does not depend on ``t``."""
        return not self._has_t

    def diff(self) -> Expr:
        d = self._deriv
        if d is None:
            d = self._derivative()
            self._deriv = d
        return d

    def __call__(self, t):
        return evaluate(self, t)

    def to_text(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        try:
            return f"Expr({self.to_text()!r})"
        except ValueError:
            return f"<{type(self).__name__}>"

    # operator sugar, numbers are coerced to Const
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent):
        return power(self, exponent)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: float):
        self.value = float(value)
        super().__init__()

    def _apply(self, args, t):
        return self.value

    def _derivative(self):
        return ZERO

    def to_text(self):
        text = repr(self.value)
        return f"({text})" if self.value < 0 or text.startswith("-") else text


class Var(Expr):
    __slots__ = ()

    def __init__(self):
        super().__init__()
        self._has_t = True

    def _apply(self, args, t):
        return t

    def _derivative(self):
        return ONE

    def to_text(self):
        return "t"


class Neg(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg: Expr):
        self.arg = arg
        super().__init__()

    def children(self):
        return (self.arg,)

    def _apply(self, args, t):
        return -args[0]

    def _derivative(self):
        return neg(self.arg.diff())

    def to_text(self):
        return f"(-{self.arg.to_text()})"


class _Binary(Expr):
    __slots__ = ("left", "right")
    symbol = "?"

    def __init__(self, left: Expr, right: Expr):
        self.left = left
        self.right = right
        super().__init__()

    def children(self):
        return (self.left, self.right)

    def to_text(self):
        return f"({self.left.to_text()} {self.symbol} {self.right.to_text()})"


class Add(_Binary):
    __slots__ = ()
    symbol = "+"

    def _apply(self, args, t):
        return args[0] + args[1]

    def _derivative(self):
        return add(self.left.diff(), self.right.diff())


class Sub(_Binary):
    __slots__ = ()
    symbol = "-"

    def _apply(self, args, t):
        return args[0] - args[1]

    def _derivative(self):
        return sub(self.left.diff(), self.right.diff())


class Mul(_Binary):
    __slots__ = ()
    symbol = "*"

    def _apply(self, args, t):
        return args[0] * args[1]

    def _derivative(self):
        u, v = self.left, self.right
        return add(mul(u.diff(), v), mul(u, v.diff()))


class Div(_Binary):
    __slots__ = ()
    symbol = "/"

    def _apply(self, args, t):
        return args[0] / args[1]

    def _derivative(self):
        u, v = self.left, self.right
        du, dv = u.diff(), v.diff()
        first = div(du, v)
        if isinstance(dv, Const) and dv.value == 0.0:
            return first
        return sub(first, div(mul(u, dv), mul(v, v)))


class Pow(Expr):
    """``base ^ exponent`` with a constant real exponent."""

    __slots__ = ("base", "exponent")

    def __init__(self, base: Expr, exponent: float):
        self.base = base
        self.exponent = float(exponent)
        super().__init__()

    def children(self):
        return (self.base,)

    def _apply(self, args, t):
        if self.exponent == 2.0:
            return args[0] * args[0]
        return np.power(args[0], self.exponent)

    def _derivative(self):
        c = self.exponent
        return mul(mul(const(c), power(self.base, c - 1.0)), self.base.diff())

    def to_text(self):
        return f"({self.base.to_text()} ^ {Const(self.exponent).to_text()})"


class Func(Expr):
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: Expr):
        if name not in FUNCTIONS:
            raise ValueError(f"unknown function {name!r}")
        self.name = name
        self.arg = arg
        super().__init__()

    def children(self):
        return (self.arg,)

    def _apply(self, args, t):
        return FUNCTIONS[self.name](args[0])

    def _derivative(self):
        u = self.arg
        name = self.name
        if name == "sin":
            outer = func("cos", u)
        elif name == "cos":
            outer = neg(func("sin", u))
        elif name == "tan":
            outer = add(ONE, power(self, 2.0))
        elif name == "sinh":
            outer = func("cosh", u)
        elif name == "cosh":
            outer = func("sinh", u)
        elif name == "tanh":
            outer = sub(ONE, power(self, 2.0))
        elif name == "exp":
            outer = self
        elif name == "log":
            return div(u.diff(), u)
        elif name == "sqrt":
            return div(u.diff(), mul(const(2.0), self))
        elif name == "abs":
            outer = func("sign", u)
        elif name == "sign":
            return ZERO
        else:  # pragma: no cover - guarded in __init__
            raise AssertionError(name)
        return mul(outer, u.diff())

    def to_text(self):
        return f"{self.name}({self.arg.to_text()})"


class OdeComponent(Expr):
    """One component of a numerically integrated ODE solution.

    ``system`` must provide ``interpolate(index, t)`` and ``rhs_expr(index)``;
    the derivative of this node is the (symbolic) right-hand side, so the
    chain of derivatives stays exact in terms of the solution values.
    """

    __slots__ = ("system", "index", "label")

    def __init__(self, system, index: int, label: str = "y"):
        self.system = system
        self.index = index
        self.label = label
        super().__init__()
        self._has_t = True

    def _apply(self, args, t):
        return self.system.interpolate(self.index, t)

    def _derivative(self):
        return self.system.rhs_expr(self.index)

    def to_text(self):
        raise ValueError(f"ODE solution component {self.label!r} has no text form")


T = Var()
ZERO = Const(0.0)
ONE = Const(1.0)


def const(value: float) -> Const:
    if value == 0.0:
        return ZERO
    if value == 1.0:
        return ONE
    return Const(value)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    expr = getattr(value, "expr", None)
    if isinstance(expr, Expr):
        return expr
    if isinstance(value, (int, float, np.floating, np.integer)):
        return const(float(value))
    raise TypeError(f"cannot use {type(value).__name__} as an expression")


def _value(e: Expr):
    return e.value if isinstance(e, Const) else None


def _fold(result: float):
    if math.isfinite(result):
        return const(result)
    return None


def add(a: Expr, b: Expr) -> Expr:
    va, vb = _value(a), _value(b)
    if va is not None and vb is not None:
        return _fold(va + vb) or Add(a, b)
    if va == 0.0:
        return b
    if vb == 0.0:
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    va, vb = _value(a), _value(b)
    if va is not None and vb is not None:
        return _fold(va - vb) or Sub(a, b)
    if vb == 0.0:
        return a
    if va == 0.0:
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    va, vb = _value(a), _value(b)
    if va is not None and vb is not None:
        return _fold(va * vb) or Mul(a, b)
    if va == 0.0 or vb == 0.0:
        return ZERO
    if va == 1.0:
        return b
    if vb == 1.0:
        return a
    if va == -1.0:
        return neg(b)
    if vb == -1.0:
        return neg(a)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    va, vb = _value(a), _value(b)
    if va is not None and vb is not None:
        return (_fold(va / vb) if vb != 0.0 else None) or Div(a, b)
    if vb == 1.0:
        return a
    if va == 0.0 and vb != 0.0:
        return ZERO
    return Div(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(base: Expr, exponent) -> Expr:
    if isinstance(exponent, Expr):
        if not isinstance(exponent, Const):
            raise ValueError("exponent of '^' must be a constant")
        exponent = exponent.value
    exponent = float(exponent)
    if exponent == 1.0:
        return base
    if exponent == 0.0:
        return ONE
    vb = _value(base)
    if vb is not None:
        try:
            folded = _fold(vb ** exponent) if not (vb < 0 and not exponent.is_integer()) else None
        except (OverflowError, ZeroDivisionError):
            folded = None
        return folded or Pow(base, exponent)
    return Pow(base, exponent)


def func(name: str, arg: Expr) -> Expr:
    va = _value(arg)
    if va is not None:
        with np.errstate(all="ignore"):
            folded = _fold(float(FUNCTIONS[name](va)))
        if folded is not None:
            return folded
    return Func(name, arg)


def topological_order(root: Expr) -> list[Expr]:
    """Distinct nodes of the DAG below ``root``, children before parents."""
    order: list[Expr] = []
    seen: set[int] = set()
    stack: list[tuple[Expr, bool]] = [(root, False)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for ch in node.children():
            if id(ch) not in seen:
                stack.append((ch, False))
    return order


def run_program(order: list[Expr], t):
    """Evaluate a topologically ordered node list; returns the last node's value."""
    values: dict[int, object] = {}
    with np.errstate(all="ignore"):
        try:
            for node in order:
                args = [values[id(ch)] for ch in node.children()]
                values[id(node)] = node._apply(args, t)
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise EvalDomainError(f"{node.to_text()}: {exc}") from None
    return values[id(order[-1])]


def finalize(result, t, what: str = "expression"):
    """Broadcast to the shape of ``t`` and reject non-finite values."""
    if np.ndim(t) == 0:
        value = float(result)
        if not math.isfinite(value):
            raise EvalDomainError(f"{what} is not finite at t={float(t)!r} (value {value!r})")
        return value
    arr = np.array(np.broadcast_to(result, np.shape(t)), dtype=float)
    bad = ~np.isfinite(arr)
    if bad.any():
        idx = np.flatnonzero(bad.ravel())[0]
        raise EvalDomainError(
            f"{what} is not finite at t={float(np.ravel(t)[idx])!r} ({int(bad.sum())} bad points)"
        )
    return arr


def evaluate(expr: Expr, t):
    """Evaluate ``expr`` at a scalar or an array of ``t`` values."""
    t = t if np.ndim(t) == 0 else np.asarray(t, dtype=float)
    return finalize(run_program(topological_order(expr), t), t)
