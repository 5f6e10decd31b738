"""Rebuilding a framed curve from its curvature, and aligning two such curves.

The frame ``(nu1, nu2, mu)`` and the curve ``gamma`` are integrated together
as one 12-dimensional linear system with the classical fourth-order
Runge-Kutta scheme at a fixed step.  The frame is never re-orthonormalised;
instead the drift of its Gram matrix from ``diag(d1, d2, d1 d2)`` is measured
at every node and reported as ``eps_gram``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import G, SpatialHybrid, g_array, scalar_product, spatial_product
from .errors import NotAMotion, NotCongruent, StepTooLarge
from .expr import ScalarFn
from .motions import Motion, frame_transport, motion_from_matrix

TAU_INIT = 1e-10
GRAM_BOUND = 1e-7


def _unit_sign(q: float, name: str, tol: float) -> int:
    s = 1 if q > 0 else -1
    if abs(q - s) > tol:
        raise ValueError(f"g({name}, {name}) = {q!r} is not +-1 within {tol:.0e}")
    return s


@dataclass(frozen=True)
class InitialFrame:
    """Initial data ``nu1(t0), nu2(t0), gamma(t0)``; the signs are read off the frame."""

    nu1_0: SpatialHybrid
    nu2_0: SpatialHybrid
    t0: float = 0.0
    gamma0: SpatialHybrid = SpatialHybrid()
    tol: float = TAU_INIT
    delta1: int = field(init=False)
    delta2: int = field(init=False)

    def __post_init__(self):
        for name in ("nu1_0", "nu2_0", "gamma0"):
            v = getattr(self, name)
            if not isinstance(v, SpatialHybrid):
                object.__setattr__(self, name, SpatialHybrid(*v))
        d1 = _unit_sign(scalar_product(self.nu1_0, self.nu1_0), "nu1", self.tol)
        d2 = _unit_sign(scalar_product(self.nu2_0, self.nu2_0), "nu2", self.tol)
        g12 = scalar_product(self.nu1_0, self.nu2_0)
        if abs(g12) > self.tol:
            raise ValueError(f"g(nu1, nu2) = {g12!r} at t0; initial frame is not orthogonal")
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "delta1", d1)
        object.__setattr__(self, "delta2", d2)

    @property
    def mu0(self) -> SpatialHybrid:
        return spatial_product(self.nu1_0, self.nu2_0).vector()


@dataclass(frozen=True, eq=False)
class SampledFramedCurve:
    """Node values of a framed curve on a strictly increasing grid."""

    t: np.ndarray
    gamma: np.ndarray
    nu1: np.ndarray
    nu2: np.ndarray
    mu: np.ndarray
    h: float
    delta1: int
    delta2: int

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.ndim != 1 or len(t) < 2 or not np.all(np.diff(t) > 0):
            raise ValueError("t must be a strictly increasing 1-d grid with at least 2 nodes")
        for name in ("gamma", "nu1", "nu2", "mu"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (len(t), 3):
                raise ValueError(f"{name} must have shape ({len(t)}, 3), got {arr.shape}")
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "t", t)

    @classmethod
    def from_framed(cls, fc, t) -> SampledFramedCurve:
        """Sample a symbolic :class:`~hybridcurve.framed.FramedCurve` on ``t``."""
        t = np.asarray(t, dtype=float)
        h = float(t[1] - t[0]) if len(t) > 1 else 0.0
        return cls(t, fc.gamma(t), fc.nu1(t), fc.nu2(t), fc.mu(t), h, fc.delta1, fc.delta2)

    def gram(self) -> np.ndarray:
        """Gram matrices of ``(nu1, nu2, mu)`` at every node, shape ``(N, 3, 3)``."""
        frames = np.stack([self.nu1, self.nu2, self.mu], axis=1)
        return np.einsum("nik,kl,njl->nij", frames, G, frames)

    @property
    def eps_gram(self) -> float:
        target = np.diag([self.delta1, self.delta2, self.delta1 * self.delta2]).astype(float)
        return float(np.max(np.abs(self.gram() - target)))

    def frame_at(self, i: int) -> np.ndarray:
        return np.column_stack([self.nu1[i], self.nu2[i], self.mu[i]])

    def transformed(self, motion: Motion, offset: SpatialHybrid) -> SampledFramedCurve:
        a = motion.matrix
        return SampledFramedCurve(
            self.t, self.gamma @ a.T + offset.as_array(), self.nu1 @ a.T, self.nu2 @ a.T,
            self.mu @ a.T, self.h, self.delta1, self.delta2,
        )


def make_grid(t_min: float, t_max: float, h: float) -> tuple[np.ndarray, float]:
    """Uniform nodes covering ``[t_min, t_max]``; the step is shrunk to divide the span."""
    if not h > 0:
        raise ValueError(f"step h must be positive, got {h!r}")
    if not t_max > t_min:
        raise ValueError("t_max must exceed t_min")
    span = t_max - t_min
    n = max(1, math.ceil(span / h - 1e-9))
    return np.linspace(t_min, t_max, n + 1), span / n


def rk4_sweep(rhs, t: np.ndarray, j: int, y0: np.ndarray) -> np.ndarray:
    """Classical RK4 on a uniform grid ``t`` starting from node ``j``.

    ``rhs(i, y)`` returns ``y'`` at half-grid index ``i`` (node ``k`` is half
    index ``2k``, the midpoint after it ``2k + 1``).  Integrates forward to the
    last node and backward to the first; returns all node values.
    """
    h = (t[-1] - t[0]) / (len(t) - 1)
    y = np.empty((len(t),) + np.shape(y0))
    y[j] = y0

    def step(i: int, direction: int):
        s = direction * h
        yi = y[i]
        r1 = rhs(2 * i, yi)
        r2 = rhs(2 * i + direction, yi + 0.5 * s * r1)
        r3 = rhs(2 * i + direction, yi + 0.5 * s * r2)
        r4 = rhs(2 * i + 2 * direction, yi + s * r3)
        y[i + direction] = yi + (s / 6.0) * (r1 + 2.0 * r2 + 2.0 * r3 + r4)

    for i in range(j, len(t) - 1):
        step(i, 1)
    for i in range(j, 0, -1):
        step(i, -1)
    return y


def node_index(t: np.ndarray, t0: float) -> int:
    j = int(np.argmin(np.abs(t - t0)))
    if abs(t[j] - t0) > 1e-9 * max(1.0, abs(t0)):
        raise ValueError(f"t0 = {t0!r} is not a node of the grid")
    return j


def _curvature_fns(curv):
    if isinstance(curv, (tuple, list)):
        fns = curv
    else:
        fns = (curv.l, curv.m, curv.n, curv.alpha)
    return [f if isinstance(f, ScalarFn) else ScalarFn(f) for f in fns]


def _coefficients(l, m, n, a, d1, d2) -> np.ndarray:
    """Stacked 4x4 matrices ``K`` with ``X' = K X`` for rows ``nu1, nu2, mu, gamma``."""
    k = np.zeros(l.shape + (4, 4))
    k[..., 0, 1] = l
    k[..., 0, 2] = m
    k[..., 1, 0] = -d1 * d2 * l
    k[..., 1, 2] = n
    k[..., 2, 0] = -d2 * m
    k[..., 2, 1] = -d1 * n
    k[..., 3, 2] = a
    return k


def integrate(curv, init: InitialFrame, t_min: float, t_max: float, h: float,
              gram_bound: float | None = GRAM_BOUND) -> SampledFramedCurve:
    """Integrate the Frenet-type system plus ``gamma' = alpha mu`` from ``init``.

    ``curv`` is a :class:`~hybridcurve.framed.Curvature` or a tuple of four
    functions ``(l, m, n, alpha)``; any sign fields it carries are ignored in
    favour of the signs of ``init``.  ``init.t0`` must be a grid node.

    Raises
    ------
    StepTooLarge
        If ``eps_gram`` exceeds ``gram_bound``.  The sampled result is attached
        as ``exc.result``.
    """
    l, m, n, a = _curvature_fns(curv)
    t, h_eff = make_grid(float(t_min), float(t_max), float(h))
    j = node_index(t, init.t0)
    d1, d2 = init.delta1, init.delta2

    half = np.linspace(t[0], t[-1], 2 * (len(t) - 1) + 1)
    k = _coefficients(l(half), m(half), n(half), a(half), d1, d2)

    x0 = np.array([init.nu1_0.as_array(), init.nu2_0.as_array(), init.mu0.as_array(),
                   init.gamma0.as_array()])
    x = rk4_sweep(lambda i, y: k[i] @ y, t, j, x0)

    result = SampledFramedCurve(t, x[:, 3], x[:, 0], x[:, 1], x[:, 2], h_eff, d1, d2)
    if gram_bound is not None:
        drift = result.eps_gram
        if drift > gram_bound:
            exc = StepTooLarge(drift, gram_bound, h_eff)
            exc.result = result
            raise exc
    return result


@dataclass(frozen=True, eq=False)
class Congruence:
    """Motion and translation carrying curve 1 onto curve 2, with residuals."""

    motion: Motion
    offset: SpatialHybrid
    residual: float
    frame_residual: float
    motion_defect: tuple[float, float]

    def __iter__(self):
        return iter((self.motion, self.offset))


def congruence(fc1: SampledFramedCurve, fc2: SampledFramedCurve, tol: float = 1e-6,
               motion_tol: float = 1e-8) -> Congruence:
    """Find ``(A, H0)`` with ``gamma2 = A gamma1 + H0`` and ``nu_k2 = A nu_k1``.

    The motion is fixed by the frames at the first node; the residual is the
    worst mismatch over all nodes.

    Raises
    ------
    NotCongruent
        If the curves differ by more than ``tol`` or the frame change is not a
        motion within ``motion_tol``.
    """
    if fc1.t.shape != fc2.t.shape or not np.allclose(fc1.t, fc2.t, rtol=0, atol=1e-12):
        raise ValueError("congruence needs both curves on the same grid")
    a = frame_transport(fc1.frame_at(0), fc2.frame_at(0))
    try:
        motion = motion_from_matrix(a, motion_tol)
    except NotAMotion as exc:
        raise NotCongruent(f"frame change at t0 is not a motion: {exc}") from exc
    offset = SpatialHybrid.from_array(fc2.gamma[0] - a @ fc1.gamma[0])
    residual = float(np.max(np.abs(fc2.gamma - (fc1.gamma @ a.T + offset.as_array()))))
    frame_residual = max(
        float(np.max(np.abs(getattr(fc2, name) - getattr(fc1, name) @ a.T)))
        for name in ("nu1", "nu2", "mu")
    )
    worst = max(residual, frame_residual)
    if not worst <= tol:
        raise NotCongruent(f"alignment residual {worst:.3e} exceeds {tol:.1e}")
    from .motions import motion_defect
    return Congruence(motion, offset, residual, frame_residual, motion_defect(a))
