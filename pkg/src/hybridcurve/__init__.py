"""Hybrid numbers, spatial hybrid framed curves and their derived curves."""
from .algebra import (
    G, CausalClass, Hybrid, SpatialHybrid, classify, hybrid_product, norm, scalar_product,
    spatial_product, spatial_product_strict, triple_det,
)
from .expr import ScalarFn, parse
from .framed import (
    AdaptedFrame, Curvature, FramedCurve, SpaceCurve, adapt_frame, extract_curvature,
    verify_frenet,
)
from .motions import Motion, compose, frame_transport, invert, motion_from_matrix
from .reconstruct import InitialFrame, SampledFramedCurve, congruence, integrate
from .derived import contrapedal, evolute, evolute_frame, involute, involute_frame, pedal

__version__ = "0.1.0"

__all__ = [
    "G", "CausalClass", "Hybrid", "SpatialHybrid", "classify", "hybrid_product", "norm",
    "scalar_product", "spatial_product", "spatial_product_strict", "triple_det",
    "ScalarFn", "parse",
    "AdaptedFrame", "Curvature", "FramedCurve", "SpaceCurve", "adapt_frame", "extract_curvature",
    "verify_frenet",
    "Motion", "compose", "frame_transport", "invert", "motion_from_matrix",
    "InitialFrame", "SampledFramedCurve", "congruence", "integrate",
    "contrapedal", "evolute", "evolute_frame", "involute", "involute_frame", "pedal",
]
