"""Callable wrapper around an expression with a memoised derivative table."""
from __future__ import annotations

import threading

import numpy as np

from .nodes import Const, Expr, as_expr, finalize, run_program, topological_order
from .parser import parse


class ScalarFn:
    """A real function of ``t`` given by an expression.

    Evaluation is vectorised over numpy arrays.  Derivatives are symbolic and
    cached; the cache is lock-guarded so instances can be shared across
    threads.
    """

    __slots__ = ("expr", "_derivs", "_program", "_lock")

    def __init__(self, expr):
        if isinstance(expr, str):
            expr = parse(expr)
        self.expr = as_expr(expr)
        self._derivs: list[ScalarFn] = [self]
        self._program = None
        self._lock = threading.Lock()

    @classmethod
    def parse(cls, src: str) -> ScalarFn:
        return cls(parse(src))

    def __call__(self, t):
        program = self._program
        if program is None:
            program = topological_order(self.expr)
            self._program = program
        t = t if np.ndim(t) == 0 else np.asarray(t, dtype=float)
        return finalize(run_program(program, t), t)

    def derivative(self, order: int = 1) -> ScalarFn:
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        with self._lock:
            while len(self._derivs) <= order:
                self._derivs.append(ScalarFn(self._derivs[-1].expr.diff()))
            return self._derivs[order]

    @property
    def is_constant(self) -> bool:
        return self.expr.is_constant

    @property
    def constant_value(self) -> float | None:
        """The value if the expression folded to a literal, else None."""
        return self.expr.value if isinstance(self.expr, Const) else None

    def to_text(self) -> str:
        return self.expr.to_text()

    def __repr__(self):
        try:
            return f"ScalarFn({self.to_text()!r})"
        except ValueError:
            return "ScalarFn(<sampled>)"

    def _wrap(self, other, op):
        return ScalarFn(op(self.expr, as_expr(other)))

    def __add__(self, other):
        return self._wrap(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._wrap(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._wrap(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._wrap(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._wrap(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._wrap(other, lambda a, b: b * a)

    def __truediv__(self, other):
        return self._wrap(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._wrap(other, lambda a, b: b / a)

    def __neg__(self):
        return ScalarFn(-self.expr)


def differentiate(f: ScalarFn, order: int = 1) -> ScalarFn:
    return f.derivative(order)


def eval_fn(f: ScalarFn, t):
    return f(t)
