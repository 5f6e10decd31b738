"""Framed curves in the spatial hybrid number space.

A framed curve is a triple ``(gamma, nu1, nu2)`` of curves where ``nu1`` and
``nu2`` are unit (non-parabolic), mutually g-orthogonal and g-orthogonal to
``gamma'``.  All components are symbolic, so frames, curvatures and derived
curves keep exact derivatives.  Pointwise conditions are certified on a
uniform validation grid.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import SpatialHybrid, g_array
from .errors import FrameValidationError, NotAdapted, NotOrthogonal, ParabolicNormal
from .expr import ScalarFn, as_expr, const, func, parse

N_VAL = 257
TAU_FRAME = 1e-8
TAU_ADAPT = 1e-10
TAU_SING = 1e-10


def _fn(value) -> ScalarFn:
    if isinstance(value, ScalarFn):
        return value
    if isinstance(value, str):
        return ScalarFn(parse(value))
    return ScalarFn(as_expr(value))


@dataclass(frozen=True)
class SpaceCurve:
    """A curve ``t -> b(t) i + c(t) eps + d(t) h`` on ``domain``."""

    b: ScalarFn
    c: ScalarFn
    d: ScalarFn
    domain: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "b", _fn(self.b))
        object.__setattr__(self, "c", _fn(self.c))
        object.__setattr__(self, "d", _fn(self.d))
        lo, hi = (float(x) for x in self.domain)
        if not lo < hi:
            raise ValueError(f"domain must satisfy t_min < t_max, got {self.domain!r}")
        object.__setattr__(self, "domain", (lo, hi))

    @classmethod
    def from_text(cls, components: Sequence[str], domain) -> SpaceCurve:
        if len(components) != 3:
            raise ValueError(f"a space curve needs 3 components, got {len(components)}")
        return cls(*(ScalarFn.parse(s) for s in components), domain=tuple(domain))

    @classmethod
    def constant(cls, x: SpatialHybrid, domain) -> SpaceCurve:
        return cls(const(x.b), const(x.c), const(x.d), domain=tuple(domain))

    @property
    def components(self) -> tuple[ScalarFn, ScalarFn, ScalarFn]:
        return (self.b, self.c, self.d)

    def __call__(self, t) -> np.ndarray:
        """Sample the curve; returns shape ``(3,)`` for scalar t, else ``(N, 3)``."""
        return np.stack([fn(t) for fn in self.components], axis=-1)

    def at(self, t: float) -> SpatialHybrid:
        return SpatialHybrid(*(fn(float(t)) for fn in self.components))

    def derivative(self, order: int = 1) -> SpaceCurve:
        return SpaceCurve(*(fn.derivative(order) for fn in self.components), domain=self.domain)

    def _zip(self, other: SpaceCurve, op) -> SpaceCurve:
        return SpaceCurve(*(op(x, y) for x, y in zip(self.components, other.components)),
                          domain=self.domain)

    def __add__(self, other: SpaceCurve) -> SpaceCurve:
        return self._zip(other, lambda x, y: x + y)

    def __sub__(self, other: SpaceCurve) -> SpaceCurve:
        return self._zip(other, lambda x, y: x - y)

    def __neg__(self) -> SpaceCurve:
        return SpaceCurve(-self.b, -self.c, -self.d, domain=self.domain)

    def scale(self, factor) -> SpaceCurve:
        """Multiply by a scalar function or constant."""
        f = as_expr(factor)
        return SpaceCurve(*(ScalarFn(f * fn.expr) for fn in self.components), domain=self.domain)

    def with_domain(self, domain) -> SpaceCurve:
        return SpaceCurve(self.b, self.c, self.d, domain=tuple(domain))

    def to_text(self) -> list[str]:
        return [fn.to_text() for fn in self.components]


def g_sym(x: SpaceCurve, y: SpaceCurve) -> ScalarFn:
    """Symbolic scalar product ``g(x(t), y(t))``."""
    b1, c1, d1 = (f.expr for f in x.components)
    b2, c2, d2 = (f.expr for f in y.components)
    return ScalarFn(b1 * b2 - b1 * c2 - b2 * c1 - d1 * d2)


def product_sym(x: SpaceCurve, y: SpaceCurve) -> tuple[ScalarFn, SpaceCurve]:
    """Symbolic spatial product; returns ``(scalar_part, vector_part)``."""
    b1, c1, d1 = (f.expr for f in x.components)
    b2, c2, d2 = (f.expr for f in y.components)
    scalar = ScalarFn(-(b1 * b2) + b1 * c2 + b2 * c1 + d1 * d2)
    vec = SpaceCurve(
        b1 * d2 - b2 * d1,
        b1 * d2 - b2 * d1 - c1 * d2 + c2 * d1,
        b2 * c1 - b1 * c2,
        domain=x.domain,
    )
    return scalar, vec


def combine(terms: Sequence[tuple[object, SpaceCurve]], domain) -> SpaceCurve:
    """``sum(coef_k * vec_k)`` with symbolic or constant coefficients."""
    out = [const(0.0)] * 3
    for coef, vec in terms:
        c = as_expr(coef)
        out = [acc + c * comp.expr for acc, comp in zip(out, vec.components)]
    return SpaceCurve(*out, domain=tuple(domain))


def uniform_grid(domain, n: int = N_VAL) -> np.ndarray:
    lo, hi = domain
    return np.linspace(lo, hi, n)


def _sign(value: float) -> int:
    return 1 if value > 0 else -1


@dataclass(frozen=True)
class FrameReport:
    """Per-check maximum residuals of the framed-curve conditions on a grid."""

    delta1: int
    delta2: int
    residuals: dict
    worst_t: dict
    tol: float

    @property
    def ok(self) -> bool:
        return all(r <= self.tol for r in self.residuals.values())

    def first_failure(self):
        for name, r in self.residuals.items():
            if not r <= self.tol:
                return name, r, self.worst_t[name]
        return None


def frame_report(gamma: SpaceCurve, nu1: SpaceCurve, nu2: SpaceCurve,
                 grid: np.ndarray, tol: float = TAU_FRAME) -> FrameReport:
    """Evaluate every framed-curve condition on ``grid`` without raising."""
    v1, v2, dg = nu1(grid), nu2(grid), gamma.derivative()(grid)
    q1, q2 = g_array(v1, v1), g_array(v2, v2)
    delta1, delta2 = _sign(q1[0]), _sign(q2[0])
    checks = {
        "unit_nu1": np.abs(q1 - delta1),
        "unit_nu2": np.abs(q2 - delta2),
        "orth_nu1_nu2": np.abs(g_array(v1, v2)),
        "orth_gamma'_nu1": np.abs(g_array(dg, v1)),
        "orth_gamma'_nu2": np.abs(g_array(dg, v2)),
    }
    residuals, worst = {}, {}
    for name, arr in checks.items():
        i = int(np.argmax(arr))
        residuals[name] = float(arr[i])
        worst[name] = float(grid[i])
    return FrameReport(delta1, delta2, residuals, worst, tol)


@dataclass(frozen=True, eq=False)
class FramedCurve:
    """A validated non-parabolic framed curve ``(gamma, nu1, nu2)``.

    ``delta1 = g(nu1, nu1)`` and ``delta2 = g(nu2, nu2)`` are read off the
    frame itself.  Construction raises :class:`FrameValidationError` if any
    condition fails on the validation grid.
    """

    gamma: SpaceCurve
    nu1: SpaceCurve
    nu2: SpaceCurve
    n_val: int = N_VAL
    tol: float = TAU_FRAME
    delta1: int = field(init=False)
    delta2: int = field(init=False)
    mu: SpaceCurve = field(init=False, repr=False)

    def __post_init__(self):
        dom = self.gamma.domain
        if self.nu1.domain != dom or self.nu2.domain != dom:
            object.__setattr__(self, "nu1", self.nu1.with_domain(dom))
            object.__setattr__(self, "nu2", self.nu2.with_domain(dom))
        report = frame_report(self.gamma, self.nu1, self.nu2, self.grid, self.tol)
        failure = report.first_failure()
        if failure is not None:
            name, residual, t = failure
            raise FrameValidationError(name, residual, t, self.tol)
        object.__setattr__(self, "delta1", report.delta1)
        object.__setattr__(self, "delta2", report.delta2)
        _, vec = product_sym(self.nu1, self.nu2)
        object.__setattr__(self, "mu", vec)

    @classmethod
    def from_text(cls, gamma, nu1, nu2, domain, **kwargs) -> FramedCurve:
        return cls(SpaceCurve.from_text(gamma, domain), SpaceCurve.from_text(nu1, domain),
                   SpaceCurve.from_text(nu2, domain), **kwargs)

    @property
    def domain(self) -> tuple[float, float]:
        return self.gamma.domain

    @property
    def grid(self) -> np.ndarray:
        return uniform_grid(self.domain, self.n_val)

    @property
    def kind(self) -> str:
        """``'elliptic'`` if delta1*delta2 = 1, ``'hyperbolic'`` if it is -1."""
        return "elliptic" if self.delta1 * self.delta2 == 1 else "hyperbolic"

    def frame_at(self, t: float) -> np.ndarray:
        """3x3 matrix with columns ``nu1, nu2, mu`` at ``t``."""
        return np.column_stack([self.nu1(t), self.nu2(t), self.mu(t)])


def mu(fc: FramedCurve, grid: np.ndarray | None = None, tol: float = 1e-9) -> SpaceCurve:
    """The third frame vector ``nu1 nu2`` as a symbolic curve."""
    grid = fc.grid if grid is None else grid
    g12 = g_array(fc.nu1(grid), fc.nu2(grid))
    worst = float(np.max(np.abs(g12)))
    if worst > tol:
        raise NotOrthogonal(worst, tol)
    return fc.mu


@dataclass(frozen=True)
class Curvature:
    """Coefficients of the Frenet-type formulas of a frame."""

    l: ScalarFn
    m: ScalarFn
    n: ScalarFn
    alpha: ScalarFn
    delta1: int
    delta2: int

    def __post_init__(self):
        for name in ("l", "m", "n", "alpha"):
            object.__setattr__(self, name, _fn(getattr(self, name)))
        for name in ("delta1", "delta2"):
            if getattr(self, name) not in (1, -1):
                raise ValueError(f"{name} must be +1 or -1")


@dataclass(frozen=True)
class AdaptedCurvature:
    L: ScalarFn
    M: ScalarFn
    sigma: int


@dataclass(frozen=True, eq=False)
class AdaptedFrame:
    """Result of :func:`adapt_frame`: the framed curve ``(gamma, n1, n2)`` and ``(L, M, sigma)``."""

    curve: FramedCurve
    curvature: AdaptedCurvature

    @property
    def n1(self) -> SpaceCurve:
        return self.curve.nu1

    @property
    def n2(self) -> SpaceCurve:
        return self.curve.nu2


def extract_curvature(fc: FramedCurve) -> Curvature:
    """Curvature ``(l, m, n, alpha)`` built symbolically from the frame."""
    d1, d2 = fc.delta1, fc.delta2
    dd = d1 * d2
    dnu1, dnu2 = fc.nu1.derivative(), fc.nu2.derivative()
    l = g_sym(dnu1, fc.nu2) * d2
    m = g_sym(dnu1, fc.mu) * dd
    n = g_sym(dnu2, fc.mu) * dd
    alpha = g_sym(fc.gamma.derivative(), fc.mu) * dd
    return Curvature(l, m, n, alpha, d1, d2)


def verify_frenet(fc: FramedCurve, grid=None, curvature: Curvature | None = None) -> dict:
    """Max-norm residuals of the four Frenet-type equations on ``grid``."""
    grid = fc.grid if grid is None else np.asarray(grid, dtype=float)
    k = curvature or extract_curvature(fc)
    d1, d2 = fc.delta1, fc.delta2
    l, m, n, a = (f(grid)[:, None] for f in (k.l, k.m, k.n, k.alpha))
    v1, v2, w = fc.nu1(grid), fc.nu2(grid), fc.mu(grid)
    dv1, dv2, dw = fc.nu1.derivative()(grid), fc.nu2.derivative()(grid), fc.mu.derivative()(grid)
    dg = fc.gamma.derivative()(grid)
    res = {
        "nu1'": dv1 - (l * v2 + m * w),
        "nu2'": dv2 - (-d1 * d2 * l * v1 + n * w),
        "mu'": dw - (-d2 * m * v1 - d1 * n * v2),
        "gamma'": dg - a * w,
    }
    return {name: float(np.max(np.abs(r))) for name, r in res.items()}


def singular_points(fc: FramedCurve, grid=None, tol: float = TAU_SING,
                    curvature: Curvature | None = None) -> np.ndarray:
    """Grid points where ``|alpha| <= tol`` (singular points of the base curve)."""
    grid = fc.grid if grid is None else np.asarray(grid, dtype=float)
    k = curvature or extract_curvature(fc)
    return grid[np.abs(k.alpha(grid)) <= tol]


def is_singular(fc: FramedCurve, t0: float, tol: float = TAU_SING,
                curvature: Curvature | None = None) -> bool:
    k = curvature or extract_curvature(fc)
    return abs(k.alpha(float(t0))) <= tol


def adapt_frame(fc: FramedCurve, tol: float = TAU_ADAPT,
                curvature: Curvature | None = None) -> AdaptedFrame:
    """Rotate ``(nu1, nu2)`` into the principal-normal / binormal frame ``(n1, n2)``.

    After the change the curvature takes the form ``(L, M, 0, alpha)`` with
    ``M > 0``, ``g(n1, n1) = sigma`` and ``g(n2, n2) = sigma*delta1*delta2``.

    Raises
    ------
    ParabolicNormal
        If ``delta1*m^2 + delta2*n^2`` comes within ``tol`` of zero or changes
        sign on the validation grid.
    """
    k = curvature or extract_curvature(fc)
    d1, d2 = fc.delta1, fc.delta2
    m, n, l = k.m.expr, k.n.expr, k.l.expr
    q = d1 * (m * m) + d2 * (n * n)
    qv = ScalarFn(q)(fc.grid)
    sigma = _sign(float(qv[np.argmax(np.abs(qv))]))
    worst = float(np.min(sigma * qv))
    if not worst > tol:
        i = int(np.argmin(sigma * qv))
        raise ParabolicNormal(
            f"delta1*m^2 + delta2*n^2 = {qv[i]!r} at t={fc.grid[i]!r}: "
            "the adapted frame does not exist on the whole domain"
        )
    sq = sigma * q
    mv = k.m(fc.grid)
    if float(np.max(np.abs(k.n(fc.grid)))) <= TAU_FRAME * max(1.0, float(np.max(np.abs(mv)))):
        # already adapted up to a common sign; keep the original expressions so that
        # downstream symbolic work stays small
        sm = _sign(float(mv[np.argmax(np.abs(mv))]))
        if sm == 1:
            curve = fc
        else:
            curve = FramedCurve(fc.gamma, -fc.nu1, -fc.nu2, n_val=fc.n_val, tol=fc.tol)
        return AdaptedFrame(curve, AdaptedCurvature(k.l, sm * k.m, sigma))
    big_m = func("sqrt", sq)
    n1 = combine([(sigma * d1 * m / big_m, fc.nu1), (sigma * d2 * n / big_m, fc.nu2)], fc.domain)
    n2 = combine([(-n / big_m, fc.nu1), (m / big_m, fc.nu2)], fc.domain)
    dm, dn = k.m.derivative().expr, k.n.derivative().expr
    big_l = (d1 * d2) * (m * dn - dm * n) / sq + (sigma * d1) * l
    curve = FramedCurve(fc.gamma, n1, n2, n_val=fc.n_val, tol=fc.tol)
    return AdaptedFrame(curve, AdaptedCurvature(ScalarFn(big_l), ScalarFn(big_m), sigma))


def adapted_curvature(fc: FramedCurve, curvature: Curvature | None = None,
                      tol: float = TAU_FRAME) -> tuple[Curvature, AdaptedCurvature]:
    """Read ``(L, M, sigma)`` off a frame that is already adapted.

    The frame is adapted when its ``n`` vanishes and ``m > 0`` on the grid;
    then ``L = l``, ``M = m`` and ``sigma = delta1``.

    Raises
    ------
    NotAdapted
        If ``|n| > tol * max(1, max|m|)`` or ``m <= tol * max(1, max|m|)``
        somewhere on the grid.
    """
    k = curvature or extract_curvature(fc)
    grid = fc.grid
    nv = np.abs(k.n(grid))
    scale = max(1.0, float(np.max(np.abs(k.m(grid)))))
    if float(nv.max()) > tol * scale:
        i = int(np.argmax(nv))
        raise NotAdapted(f"frame is not adapted: |n| = {nv[i]:.3e} at t={grid[i]!r}")
    mv = k.m(grid)
    if not float(np.min(mv)) > tol * scale:
        i = int(np.argmin(mv))
        raise NotAdapted(f"frame is not adapted: m = {mv[i]:.3e} at t={grid[i]!r}, need m > 0")
    return k, AdaptedCurvature(k.l, k.m, fc.delta1)
