"""Curves generated by a framed curve: evolute, involute, pedal and contrapedal.

Every construction reads its sign factors from the Gram values of the frame it
is given (``delta1 = g(nu1, nu1)``, ``delta2 = g(nu2, nu2)``), so the same
code serves the base frame, the evolute frame ``(Ev, n1, mu)`` and the
involute frame ``(Inv, n1, mu)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .algebra import SpatialHybrid, g_array
from .errors import DegenerateEvolute, NotAdapted
from .expr import Expr, OdeComponent, ScalarFn, as_expr, const
from .framed import (
    AdaptedFrame, Curvature, FramedCurve, SpaceCurve, adapted_curvature, combine,
    extract_curvature, g_sym,
)
from .reconstruct import make_grid, node_index, rk4_sweep

TAU_DEN = 1e-10
TAU_ODE = 1e-8


def _unpack(fc):
    """``(framed_curve, curvature, L, M)`` for a FramedCurve or AdaptedFrame."""
    if isinstance(fc, AdaptedFrame):
        k = extract_curvature(fc.curve)
        return fc.curve, k, fc.curvature.L, fc.curvature.M
    k, ad = adapted_curvature(fc)
    return fc, k, ad.L, ad.M


def _require_nonzero(fn: ScalarFn, grid: np.ndarray, what: str, tol: float = TAU_DEN):
    vals = np.abs(fn(grid))
    i = int(np.argmin(vals))
    if not vals[i] > tol:
        raise DegenerateEvolute(f"{what} = {vals[i]!r} at t={grid[i]!r} (tol {tol:.0e})")


# ---------------------------------------------------------------------------
# distance-squared function


class DistanceSquared:
    """``f_x(t) = g(gamma(t) - x, gamma(t) - x)`` for a fixed point ``x``.

    Derivatives up to order 3 are evaluated from the frame and curvature
    rather than by differentiating ``f_x`` directly.
    """

    def __init__(self, fc: FramedCurve, x: SpatialHybrid, curvature: Curvature | None = None):
        self.fc = fc
        self.x = x
        self.k = curvature or extract_curvature(fc)

    def __call__(self, t):
        return self.derivative(t, 0)

    def derivative(self, t, order: int = 0):
        fc, k = self.fc, self.k
        d1, d2 = fc.delta1, fc.delta2
        dd = d1 * d2
        w = fc.gamma(t) - self.x.as_array()
        if order == 0:
            return g_array(w, w)
        gw_mu = g_array(w, fc.mu(t))
        a = k.alpha(t)
        if order == 1:
            return 2.0 * a * gw_mu
        gw1, gw2 = g_array(w, fc.nu1(t)), g_array(w, fc.nu2(t))
        l, m, n = k.l(t), k.m(t), k.n(t)
        da = k.alpha.derivative(1)(t)
        if order == 2:
            return 2.0 * (da * gw_mu + dd * a * a - a * (d2 * m * gw1 + d1 * n * gw2))
        if order == 3:
            dm, dn = k.m.derivative(1)(t), k.n.derivative(1)(t)
            d2a = k.alpha.derivative(2)(t)
            return 2.0 * (
                (-d2 * dm * a + d2 * l * n * a - 2.0 * d2 * m * da) * gw1
                - (d1 * dn * a + d2 * l * m * a + 2.0 * d1 * n * da) * gw2
                + (d2a - d2 * m * m * a - d1 * n * n * a) * gw_mu
                + 3.0 * dd * a * da
            )
        raise ValueError(f"order must be 0..3, got {order}")


def dist_sq_derivatives(ds: DistanceSquared, t, order: int):
    return ds.derivative(t, order)


def evolute_denominator(fc: FramedCurve, k: Curvature | None = None) -> ScalarFn:
    """``m n' - m' n + d1 d2 l m^2 + l n^2``."""
    k = k or extract_curvature(fc)
    l, m, n = k.l.expr, k.m.expr, k.n.expr
    dm, dn = k.m.derivative().expr, k.n.derivative().expr
    return ScalarFn(m * dn - dm * n + (fc.delta1 * fc.delta2) * l * (m * m) + l * (n * n))


def _evolute_coefficients(fc: FramedCurve, k: Curvature) -> tuple[Expr, Expr, ScalarFn]:
    dd = fc.delta1 * fc.delta2
    l, m, n, a = k.l.expr, k.m.expr, k.n.expr, k.alpha.expr
    dm, dn, da = (f.derivative().expr for f in (k.m, k.n, k.alpha))
    den = evolute_denominator(fc, k)
    lam1 = (dn * a - n * da + dd * l * m * a) / den.expr
    lam2 = (m * da - dm * a + l * n * a) / den.expr
    return lam1, lam2, den


def hypothesis_holds(fc: FramedCurve, t, tol: float = TAU_DEN, k: Curvature | None = None):
    """Whether ``alpha * (m n' - m' n + d1 d2 l m^2 + l n^2)`` is nonzero at ``t``."""
    k = k or extract_curvature(fc)
    return np.abs(k.alpha(t) * evolute_denominator(fc, k)(t)) > tol


def evolute_point(fc: FramedCurve, t0: float, k: Curvature | None = None) -> SpatialHybrid:
    """The point where ``f_x', f_x'', f_x'''`` all vanish at ``t0``."""
    k = k or extract_curvature(fc)
    lam1, lam2, _ = _evolute_coefficients(fc, k)
    p = fc.gamma(t0) - ScalarFn(lam1)(t0) * fc.nu1(t0) - ScalarFn(lam2)(t0) * fc.nu2(t0)
    return SpatialHybrid.from_array(p)


# ---------------------------------------------------------------------------
# evolutes


def evolute(fc, form: str = "general", tol: float = TAU_DEN) -> SpaceCurve:
    """Evolute of a framed curve.

    ``form="general"`` works for any frame and needs the denominator
    ``m n' - m' n + d1 d2 l m^2 + l n^2`` to be nonzero on the grid.
    ``form="adapted"`` needs an adapted frame with ``L != 0``; on adapted
    frames the two forms coincide.

    Raises
    ------
    DegenerateEvolute
        If the relevant denominator vanishes on the validation grid.
    """
    if form == "general":
        base = fc.curve if isinstance(fc, AdaptedFrame) else fc
        k = extract_curvature(base)
        lam1, lam2, den = _evolute_coefficients(base, k)
        _require_nonzero(den, base.grid, "evolute denominator", tol)
        return base.gamma - combine([(lam1, base.nu1), (lam2, base.nu2)], base.domain)
    if form == "adapted":
        base, k, big_l, big_m = _unpack(fc)
        _require_nonzero(big_l, base.grid, "L", tol)
        _require_nonzero(big_m, base.grid, "M", tol)
        dd = base.delta1 * base.delta2
        a, da = k.alpha.expr, k.alpha.derivative().expr
        L, M, dM = big_l.expr, big_m.expr, big_m.derivative().expr
        c1 = a / M
        c2 = dd * (M * da - dM * a) / (L * (M * M))
        return base.gamma - combine([(c1, base.nu1), (c2, base.nu2)], base.domain)
    raise ValueError(f"form must be 'general' or 'adapted', got {form!r}")


def evolute_frame(fc, **kwargs) -> FramedCurve:
    """The framed curve ``(Ev, n1, mu)`` of an adapted frame."""
    base, *_ = _unpack(fc)
    ev = evolute(fc, form="adapted", **kwargs)
    return FramedCurve(ev, base.nu1, base.mu, n_val=base.n_val, tol=base.tol)


# ---------------------------------------------------------------------------
# involutes


class InvoluteODE:
    """Numerical solution of ``f1' = s M f2, f2' = -M f1 - alpha`` on a fixed grid.

    Exposes its components as expression nodes whose derivatives are the
    right-hand sides, so downstream symbolic constructions stay exact in terms
    of the sampled values.  Values between nodes use cubic Hermite
    interpolation with the right-hand side as slopes.
    """

    def __init__(self, s: int, big_m: ScalarFn, alpha: ScalarFn, domain, f0,
                 h: float = 1e-3, t_init: float | None = None):
        self.s = s
        self.big_m = big_m
        self.alpha = alpha
        t, h_eff = make_grid(domain[0], domain[1], h)
        j = len(t) // 2 if t_init is None else node_index(t, t_init)
        half = np.linspace(t[0], t[-1], 2 * (len(t) - 1) + 1)
        mv, av = big_m(half), alpha(half)

        def rhs(i, y):
            return np.array([s * mv[i] * y[1], -mv[i] * y[0] - av[i]])

        y = rk4_sweep(rhs, t, j, np.asarray(f0, dtype=float))
        self.t_init = float(t[j])
        slopes = np.stack([rhs(2 * i, y[i]) for i in range(len(t))])
        self.t = t
        self.h = h_eff
        self.values = y
        self._splines = [CubicHermiteSpline(t, y[:, i], slopes[:, i], extrapolate=False)
                         for i in range(2)]
        self.f1 = OdeComponent(self, 0, "f1")
        self.f2 = OdeComponent(self, 1, "f2")

    def interpolate(self, index: int, t):
        out = self._splines[index](t)
        return float(out) if np.ndim(t) == 0 else out

    def rhs_expr(self, index: int) -> Expr:
        if index == 0:
            return self.s * self.big_m.expr * self.f2
        return -(self.big_m.expr * self.f1) - self.alpha.expr


def _closed_form_coefficients(s: int, big_m: ScalarFn, alpha: ScalarFn, grid, c1, c2):
    """Analytic ``(f1, f2)`` when ``M`` is constant; raises Unsupported otherwise."""
    import sympy as sp

    from .expr.sympy_bridge import SYMBOL, Unsupported, antiderivative, from_sympy, simplify, to_sympy

    mvals = big_m(grid)
    mv = float(np.mean(mvals))
    if float(np.max(np.abs(mvals - mv))) > 1e-12 * max(1.0, abs(mv)):
        raise Unsupported("M is not constant")
    a_s = to_sympy(simplify(alpha, grid).expr)
    t = SYMBOL
    m_exact = sp.nsimplify(mv, tolerance=1e-12, rational=False)
    if abs(float(m_exact) - mv) > 1e-12 * max(1.0, abs(mv)):
        m_exact = sp.Float(mv)
    mv = float(m_exact)
    c1s, c2s = sp.Float(c1), sp.Float(c2)
    if mv == 0.0:
        f1 = c1s + 0 * t
        f2 = c2s - antiderivative(a_s)
    elif s == -1:
        e = sp.exp(m_exact * t)
        u1 = antiderivative(a_s * sp.exp(-m_exact * t)) / 2
        u2 = -antiderivative(a_s * e) / 2
        f1 = e * (c1s + u1) + (c2s + u2) / e
        f2 = -e * (c1s + u1) + (c2s + u2) / e
    else:
        cm, sm = sp.cos(m_exact * t), sp.sin(m_exact * t)
        u1 = antiderivative(a_s * sm)
        u2 = -antiderivative(a_s * cm)
        f1 = cm * (c1s + u1) + sm * (c2s + u2)
        f2 = -sm * (c1s + u1) + cm * (c2s + u2)
    f1 = ScalarFn(from_sympy(sp.expand(sp.powsimp(sp.expand(f1)))))
    f2 = ScalarFn(from_sympy(sp.expand(sp.powsimp(sp.expand(f2)))))
    return f1, f2, ScalarFn(const(mv))


@dataclass(frozen=True, eq=False)
class Involute:
    """An involute with its coefficient functions ``f1, f2``."""

    curve: SpaceCurve
    f1: ScalarFn
    f2: ScalarFn
    backend: str  # "closed-form" or "integrated"
    c1: float | None
    c2: float | None
    ode_residual: float


def involute_ode_residual(s: int, big_m: ScalarFn, alpha: ScalarFn, f1: ScalarFn, f2: ScalarFn,
                          grid) -> float:
    r1 = f1.derivative()(grid) - s * big_m(grid) * f2(grid)
    r2 = f2.derivative()(grid) + big_m(grid) * f1(grid) + alpha(grid)
    return float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))


def involute(fc, c1: float = 0.0, c2: float = 0.0, *, backend: str = "auto",
             f0: tuple[float, float] | None = None, h: float = 1e-3,
             t_init: float | None = None) -> Involute:
    """Involute ``gamma + f1 n1 + f2 mu`` of an adapted frame.

    ``(f1, f2)`` solves ``f1' = s M f2, f2' = -M f1 - alpha`` with
    ``s = g(n2, n2)``.  The ``"closed-form"`` backend needs constant ``M`` and
    an antiderivative for ``alpha`` times the homogeneous solutions; ``c1`` and
    ``c2`` weight ``e^{Mt}, e^{-Mt}`` (if ``s = -1``) or ``cos Mt, sin Mt``
    (if ``s = 1``).  The ``"integrated"`` backend runs RK4 with step ``h``
    from ``f0 = (f1, f2)`` given at ``t_init`` (default: the grid node nearest
    the middle of the domain, which halves the exponent by which a growing
    mode amplifies truncation error).  Without ``f0`` it starts from the
    closed-form values when those exist and from ``(0, 0)`` otherwise.
    ``"auto"`` tries closed form first.
    """
    from .expr.sympy_bridge import Unsupported

    base, k, _big_l, big_m = _unpack(fc)
    s = base.delta2
    grid = base.grid
    closed = None
    if backend not in ("auto", "closed-form", "integrated"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend != "integrated" or f0 is None:
        try:
            closed = _closed_form_coefficients(s, big_m, k.alpha, grid, c1, c2)
            res = involute_ode_residual(s, closed[2], k.alpha, closed[0], closed[1], grid)
            scale = max(1.0, float(np.max(np.abs(closed[0](grid)))),
                        float(np.max(np.abs(closed[1](grid)))))
            if res > TAU_ODE * scale:
                raise Unsupported(f"closed form fails the ODE check (residual {res:.2e})")
        except Unsupported:
            if backend == "closed-form":
                raise
            closed = None
    if closed is not None and backend != "integrated":
        f1, f2, m_const = closed
        used, cc1, cc2 = "closed-form", float(c1), float(c2)
    else:
        cc1 = cc2 = None
        t, _ = make_grid(base.domain[0], base.domain[1], h)
        t0 = float(t[len(t) // 2]) if t_init is None else t_init
        if f0 is None:
            if closed is not None:
                f0 = (closed[0](t0), closed[1](t0))
                cc1, cc2 = float(c1), float(c2)
            else:
                f0 = (0.0, 0.0)
        ode = InvoluteODE(s, big_m, k.alpha, base.domain, f0, h, t0)
        f1, f2 = ScalarFn(ode.f1), ScalarFn(ode.f2)
        used = "integrated"
    res = involute_ode_residual(s, big_m, k.alpha, f1, f2, grid)
    curve = base.gamma + combine([(f1, base.nu1), (f2, base.mu)], base.domain)
    return Involute(curve, f1, f2, used, cc1, cc2, res)


def involute_frame(fc, *args, **kwargs) -> FramedCurve:
    """The framed curve ``(Inv, n1, mu)`` of an adapted frame."""
    base, *_ = _unpack(fc)
    inv = involute(fc, *args, **kwargs)
    return FramedCurve(inv.curve, base.nu1, base.mu, n_val=base.n_val, tol=base.tol)


# ---------------------------------------------------------------------------
# pedal and contrapedal curves


def _point_curve(p: SpatialHybrid, domain) -> SpaceCurve:
    return SpaceCurve.constant(p, domain)


def pedal(fc, p: SpatialHybrid) -> SpaceCurve:
    """``p - d2 g(p - gamma, n2) n2``: g-projection of ``p`` onto the line ``gamma + R n2``."""
    base, *_ = _unpack(fc)
    pc = _point_curve(p, base.domain)
    coef = g_sym(pc - base.gamma, base.nu2) * base.delta2
    return pc - base.nu2.scale(coef)


def contrapedal(fc, p: SpatialHybrid) -> SpaceCurve:
    """``p - d1 d2 g(p - gamma, mu) mu``: g-projection of ``p`` onto the tangent line."""
    base, *_ = _unpack(fc)
    pc = _point_curve(p, base.domain)
    coef = g_sym(pc - base.gamma, base.mu) * (base.delta1 * base.delta2)
    return pc - base.mu.scale(coef)
