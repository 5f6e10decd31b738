"""Exception hierarchy shared by all modules."""


class HybridCurveError(Exception):
    """Base class for every error raised by this package."""


class NotOrthogonal(HybridCurveError, ValueError):
    """g(x, y) is nonzero, so the product xy would leave the spatial subspace."""

    def __init__(self, value: float, tol: float):
        super().__init__(f"g(x, y) = {value!r} exceeds orthogonality tolerance {tol!r}")
        self.value = value
        self.tol = tol


class ExprSyntaxError(HybridCurveError, ValueError):
    """Malformed expression text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int, source: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset
        self.source = source


class EvalDomainError(HybridCurveError, ArithmeticError):
    """An expression produced NaN or infinity (left its real domain)."""


class NotAMotion(HybridCurveError, ValueError):
    """A matrix violates A^T G A = G or det A = 1 beyond tolerance."""


class FrameValidationError(HybridCurveError, ValueError):
    """A framed curve fails one of its pointwise defining conditions."""

    def __init__(self, check: str, residual: float, t: float, tol: float):
        super().__init__(
            f"framed-curve check '{check}' failed: residual {residual:.3e} at t={t!r} (tol {tol:.1e})"
        )
        self.check = check
        self.residual = residual
        self.t = t
        self.tol = tol


class ParabolicNormal(HybridCurveError, ValueError):
    """delta1*m^2 + delta2*n^2 vanishes or changes sign; no global adapted frame."""


class NotAdapted(HybridCurveError, ValueError):
    """The construction needs an adapted frame (n identically zero)."""


class StepTooLarge(HybridCurveError, RuntimeError):
    """Gram drift of an integration exceeded its bound."""

    def __init__(self, drift: float, bound: float, h: float):
        super().__init__(
            f"Gram drift {drift:.3e} exceeds bound {bound:.1e} at step h={h!r}; try h={h / 2!r}"
        )
        self.drift = drift
        self.bound = bound
        self.h = h
        self.suggested_h = h / 2


class NotCongruent(HybridCurveError, ValueError):
    """Two sampled framed curves cannot be aligned by a single motion."""


class DegenerateEvolute(HybridCurveError, ValueError):
    """The evolute denominator vanishes somewhere on the grid."""


class SpecError(HybridCurveError, ValueError):
    """A JSON curve or curvature spec is missing fields or has the wrong shape."""
