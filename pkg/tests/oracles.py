"""Independent reference implementations used only by the tests.

Hybrid numbers are realised as real 2x2 matrices: ``i = [[0,-1],[1,0]]``,
``h = [[1,0],[0,-1]]`` and ``eps = ih - i``, which satisfy ``i^2 = -1``,
``eps^2 = 0``, ``h^2 = 1`` and ``ih = -hi = eps + i``.  The product oracle
multiplies matrices and reads the coordinates back, so it shares no code with
the component formula under test.
"""
import numpy as np

ONE = np.eye(2)
I = np.array([[0.0, -1.0], [1.0, 0.0]])
H = np.array([[1.0, 0.0], [0.0, -1.0]])
EPS = I @ H - I
BASIS = np.stack([ONE, I, EPS, H])  # (4, 2, 2)
_COORDS = np.linalg.inv(BASIS.reshape(4, 4).T)


def to_matrix(q):
    return np.tensordot(np.asarray(q, dtype=float), BASIS, axes=1)


def from_matrix(m):
    return _COORDS @ np.asarray(m).reshape(4)


def product(x, y):
    """Hybrid product of coordinate 4-vectors via the matrix realisation."""
    return from_matrix(to_matrix(x) @ to_matrix(y))


def conjugate(q):
    q = np.asarray(q, dtype=float)
    return np.array([q[0], -q[1], -q[2], -q[3]])


def scalar_product(x, y):
    """``g(x, y)`` as the scalar part of ``(x conj(y) + y conj(x)) / 2``."""
    x4, y4 = np.r_[0.0, x], np.r_[0.0, y]
    s = (product(x4, conjugate(y4)) + product(y4, conjugate(x4))) / 2.0
    return s[0]


# --- closed forms of the worked example, as printed ------------------------

R10 = np.sqrt(10.0)


def _stack(b, c, d):
    return np.stack([b, c, d], axis=-1)


def gamma(t):
    s, c = np.sin(t), np.cos(t)
    return _stack(s**3 - R10 / 4 * np.cos(2 * t), s**3, c**3)


def n1(t):
    return _stack(np.cos(t), np.cos(t), np.sin(t))


def n2(t):
    s, c = np.sin(t), np.cos(t)
    return _stack(-3 - R10 * s, -R10 * s, R10 * c)


def mu(t):
    s, c = np.sin(t), np.cos(t)
    return _stack(R10 + 3 * s, 3 * s, -3 * c)


def evolute(t):
    s, c = np.sin(t), np.cos(t)
    return _stack(2 / 3 * s**3 - 3 * R10 / 20 * np.cos(2 * t), 2 / 3 * s**3, 2 / 3 * c**3)


def involute_coefficients(t, c1=0.0, c2=0.0):
    f1 = -3 / 26 * np.sin(2 * t) + c1 * np.exp(3 * t) + c2 * np.exp(-3 * t)
    f2 = 1 / 13 * np.cos(2 * t) - c1 * np.exp(3 * t) + c2 * np.exp(-3 * t)
    return f1, f2


def involute(t, c1=0.0, c2=0.0):
    """``gamma + f1 n1 + f2 mu`` assembled from the printed ingredients."""
    f1, f2 = involute_coefficients(t, c1, c2)
    return gamma(t) + f1[..., None] * n1(t) + f2[..., None] * mu(t)


def involute_printed_summary(t):
    """The single-line involute as printed (its i-component lacks a sqrt(10))."""
    s, c = np.sin(t), np.cos(t)
    return _stack(10 / 13 * s**3 - 9 / 52 * np.cos(2 * t), 10 / 13 * s**3, 10 / 13 * c**3)


def pedal(t):
    s, c = np.sin(t), np.cos(t)
    return np.cos(2 * t)[..., None] * _stack(-3 * R10 / 4 - 2.5 * s, -2.5 * s, 2.5 * c)


def contrapedal(t):
    s, c = np.sin(t), np.cos(t)
    return 0.5 * np.cos(2 * t)[..., None] * _stack(R10 + 3 * s, 3 * s, -3 * c)


FRENET = np.array([[0.0, R10, 3.0], [-R10, 0.0, 0.0], [3.0, 0.0, 0.0]])
