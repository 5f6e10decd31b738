"""Spatial hybrid motions: 3x3 matrices with ``A^T G A = G`` and ``det A = 1``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import G, G_INV, SpatialHybrid
from .errors import NotAMotion

TAU_MOTION = 1e-9


def motion_defect(matrix) -> tuple[float, float]:
    """``(max|A^T G A - G|, |det A - 1|)`` for an arbitrary 3x3 matrix."""
    a = np.asarray(matrix, dtype=float)
    return float(np.max(np.abs(a.T @ G @ a - G))), float(abs(np.linalg.det(a) - 1.0))


@dataclass(frozen=True, eq=False)
class Motion:
    """A validated element of the motion group acting on ``(b, c, d)`` coordinates."""

    matrix: np.ndarray

    def __post_init__(self):
        a = np.array(self.matrix, dtype=float)
        if a.shape != (3, 3):
            raise NotAMotion(f"a motion is a 3x3 matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise NotAMotion("matrix has non-finite entries")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    def __matmul__(self, other: Motion) -> Motion:
        return compose(self, other)

    def __call__(self, x):
        return apply(self, x)

    def to_json(self) -> dict:
        return {"matrix": [float(v) for v in self.matrix.ravel()]}

    @classmethod
    def from_json(cls, data: dict, tol: float = TAU_MOTION) -> Motion:
        values = data["matrix"]
        if len(values) != 9:
            raise NotAMotion(f"'matrix' must hold 9 numbers, got {len(values)}")
        return motion_from_matrix(np.reshape(values, (3, 3)), tol)


IDENTITY = Motion(np.eye(3))


def motion_from_matrix(matrix, tol: float = TAU_MOTION) -> Motion:
    """Validate ``matrix`` as a motion.

    Raises
    ------
    NotAMotion
        If ``A^T G A = G`` or ``det A = 1`` fails by more than ``tol``.
    """
    a = np.asarray(matrix, dtype=float)
    if a.shape != (3, 3):
        raise NotAMotion(f"a motion is a 3x3 matrix, got shape {a.shape}")
    metric, det = motion_defect(a)
    if not metric <= tol:
        raise NotAMotion(f"A^T G A differs from G by {metric:.3e} (tol {tol:.1e})")
    if not det <= tol:
        raise NotAMotion(f"det A = {np.linalg.det(a)!r}, expected 1 (tol {tol:.1e})")
    return Motion(a)


def compose(a: Motion, b: Motion) -> Motion:
    """``a`` after ``b`` (matrix product ``A B``)."""
    return Motion(a.matrix @ b.matrix)


def invert(a: Motion) -> Motion:
    # exact for group members: A^-1 = G^-1 A^T G
    return Motion(G_INV @ a.matrix.T @ G)


def apply(a: Motion, x):
    """Act on a SpatialHybrid, or on an array of ``(..., 3)`` coordinates."""
    if isinstance(x, SpatialHybrid):
        return SpatialHybrid.from_array(a.matrix @ x.as_array())
    arr = np.asarray(x, dtype=float)
    return arr @ a.matrix.T


def frame_matrix(nu1, nu2, mu) -> np.ndarray:
    """Columns ``nu1, nu2, mu`` as a 3x3 matrix."""
    return np.column_stack([np.asarray(v, dtype=float) for v in (nu1, nu2, mu)])


def frame_transport(f_from: np.ndarray, f_to: np.ndarray) -> np.ndarray:
    """``F_to F_from^-1``: the matrix carrying one g-orthonormal frame onto another.

    It is a motion whenever both frames have the same Gram matrix and
    determinant, which holds along any framed curve.
    """
    return np.asarray(f_to, dtype=float) @ np.linalg.inv(np.asarray(f_from, dtype=float))
