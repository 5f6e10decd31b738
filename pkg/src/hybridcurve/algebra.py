"""Hybrid numbers, the spatial subspace and its indefinite scalar product.

Spatial hybrid numbers are stored in ``(b, c, d)`` order, the coefficients of
``i``, ``eps`` and ``h``.  With this ordering the scalar product is
``g(x, y) = x^T G y`` for the constant matrix :data:`G`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NotOrthogonal

#: Gram matrix of the scalar product on the spatial subspace.
G = np.array([[1.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, -1.0]])
G.setflags(write=False)
G_INV = np.array([[0.0, -1.0, 0.0], [-1.0, -1.0, 0.0], [0.0, 0.0, -1.0]])
G_INV.setflags(write=False)

TAU_CLASS = 1e-12
TAU_ORTH = 1e-9

assert abs(np.linalg.det(G) - 1.0) < 1e-15


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"hybrid number components must be finite, got {v!r}")


@dataclass(frozen=True)
class Hybrid:
    """A hybrid number ``a + b i + c eps + d h``."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _check_finite(self.a, self.b, self.c, self.d)

    def __add__(self, other: Hybrid) -> Hybrid:
        if not isinstance(other, Hybrid):
            return NotImplemented
        return Hybrid(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: Hybrid) -> Hybrid:
        if not isinstance(other, Hybrid):
            return NotImplemented
        return Hybrid(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> Hybrid:
        return Hybrid(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        if isinstance(other, Hybrid):
            return hybrid_product(self, other)
        if isinstance(other, (int, float)):
            return Hybrid(self.a * other, self.b * other, self.c * other, self.d * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def conjugate(self) -> Hybrid:
        return Hybrid(self.a, -self.b, -self.c, -self.d)

    @property
    def scalar(self) -> float:
        return self.a

    def vector(self) -> SpatialHybrid:
        """The ``(b, c, d)`` part, discarding the scalar part."""
        return SpatialHybrid(self.b, self.c, self.d)

    def to_json(self) -> list[float]:
        return [self.a, self.b, self.c, self.d]

    @classmethod
    def from_json(cls, data: Sequence[float]) -> Hybrid:
        if len(data) != 4:
            raise ValueError(f"Hybrid expects 4 components, got {len(data)}")
        return cls(*data)


@dataclass(frozen=True)
class SpatialHybrid:
    """An element ``b i + c eps + d h`` of the spatial subspace (no scalar part)."""

    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __post_init__(self):
        for name in ("b", "c", "d"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _check_finite(self.b, self.c, self.d)

    def __add__(self, other: SpatialHybrid) -> SpatialHybrid:
        if not isinstance(other, SpatialHybrid):
            return NotImplemented
        return SpatialHybrid(self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: SpatialHybrid) -> SpatialHybrid:
        if not isinstance(other, SpatialHybrid):
            return NotImplemented
        return SpatialHybrid(self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> SpatialHybrid:
        return SpatialHybrid(-self.b, -self.c, -self.d)

    def __mul__(self, other):
        if isinstance(other, SpatialHybrid):
            return spatial_product(self, other)
        if isinstance(other, (int, float)):
            return SpatialHybrid(self.b * other, self.c * other, self.d * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def to_hybrid(self) -> Hybrid:
        return Hybrid(0.0, self.b, self.c, self.d)

    def as_array(self) -> np.ndarray:
        return np.array([self.b, self.c, self.d])

    @classmethod
    def from_array(cls, arr) -> SpatialHybrid:
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (3,):
            raise ValueError(f"SpatialHybrid expects shape (3,), got {arr.shape}")
        return cls(*arr)

    def to_json(self) -> list[float]:
        return [self.b, self.c, self.d]

    @classmethod
    def from_json(cls, data: Sequence[float]) -> SpatialHybrid:
        if len(data) != 3:
            raise ValueError(f"SpatialHybrid expects 3 components, got {len(data)}")
        return cls(*data)


class CausalClass(enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"


def hybrid_product(x: Hybrid, y: Hybrid) -> Hybrid:
    """Hybridian product ``xy`` (associative, not commutative)."""
    a1, b1, c1, d1 = x.a, x.b, x.c, x.d
    a2, b2, c2, d2 = y.a, y.b, y.c, y.d
    return Hybrid(
        a1 * a2 - b1 * b2 + b1 * c2 + b2 * c1 + d1 * d2,
        a1 * b2 + a2 * b1 + (b1 * d2 - b2 * d1),
        a1 * c2 + a2 * c1 + (b1 * d2 - b2 * d1 - c1 * d2 + c2 * d1),
        a1 * d2 + a2 * d1 + (b2 * c1 - b1 * c2),
    )


def spatial_product(x: SpatialHybrid, y: SpatialHybrid) -> Hybrid:
    """Product of two spatial hybrid numbers; its scalar part is ``-g(x, y)``."""
    b1, c1, d1 = x.b, x.c, x.d
    b2, c2, d2 = y.b, y.c, y.d
    return Hybrid(
        -b1 * b2 + b1 * c2 + b2 * c1 + d1 * d2,
        b1 * d2 - b2 * d1,
        b1 * d2 - b2 * d1 - c1 * d2 + c2 * d1,
        b2 * c1 - b1 * c2,
    )


def spatial_product_strict(x: SpatialHybrid, y: SpatialHybrid, tol: float = TAU_ORTH) -> SpatialHybrid:
    """Product of g-orthogonal spatial numbers, which stays in the spatial subspace.

    Raises
    ------
    NotOrthogonal
        If ``|g(x, y)| > tol``.
    """
    gxy = scalar_product(x, y)
    if abs(gxy) > tol:
        raise NotOrthogonal(gxy, tol)
    return spatial_product(x, y).vector()


def scalar_product(x: SpatialHybrid, y: SpatialHybrid) -> float:
    return x.b * y.b - x.b * y.c - y.b * x.c - x.d * y.d


def hybrid_scalar_product(x: Hybrid, y: Hybrid) -> float:
    """g on the full algebra, ``a1 a2 + b1 b2 - b1 c2 - b2 c1 - d1 d2``."""
    return x.a * y.a + x.b * y.b - x.b * y.c - y.b * x.c - x.d * y.d


def classify(x: SpatialHybrid, tol: float = TAU_CLASS) -> CausalClass:
    q = scalar_product(x, x)
    if q > tol:
        return CausalClass.ELLIPTIC
    if q < -tol:
        return CausalClass.HYPERBOLIC
    return CausalClass.PARABOLIC


def norm(x: SpatialHybrid) -> float:
    return math.sqrt(abs(scalar_product(x, x)))


def triple_det(x: SpatialHybrid, y: SpatialHybrid, z: SpatialHybrid) -> float:
    """Determinant of the matrix with rows x, y, z.

    Equals ``g(xy, z)`` whenever x and y are g-orthogonal.
    """
    return (
        x.b * (y.c * z.d - y.d * z.c)
        - x.c * (y.b * z.d - y.d * z.b)
        + x.d * (y.b * z.c - y.c * z.b)
    )


# Vectorised forms over (..., 3) arrays, used on sampled curves.

def g_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x[..., 0] * y[..., 0] - x[..., 0] * y[..., 1] - y[..., 0] * x[..., 1] - x[..., 2] * y[..., 2]


def product_array(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Spatial product over stacked vectors: returns ``(scalar_part, vector_part)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    b1, c1, d1 = x[..., 0], x[..., 1], x[..., 2]
    b2, c2, d2 = y[..., 0], y[..., 1], y[..., 2]
    scalar = -b1 * b2 + b1 * c2 + b2 * c1 + d1 * d2
    vec = np.stack(
        [b1 * d2 - b2 * d1, b1 * d2 - b2 * d1 - c1 * d2 + c2 * d1, b2 * c1 - b1 * c2], axis=-1
    )
    return scalar, vec
