"""Built-in worked example: an elliptic framed curve with a cusp-type frame.

The curve has closed-form evolute, involute, pedal and contrapedal curves,
which makes it the reference case for the test-suite and the ``example``
subcommand.
"""
from __future__ import annotations

import math

EXAMPLE_NAME = "paper"

CURVE_SPEC = {
    "domain": [0.0, 2.0 * math.pi],
    "gamma": ["sin(t)^3 - sqrt(10)/4*cos(2*t)", "sin(t)^3", "cos(t)^3"],
    "nu1": ["cos(t)", "cos(t)", "sin(t)"],
    "nu2": ["-3 - sqrt(10)*sin(t)", "-sqrt(10)*sin(t)", "sqrt(10)*cos(t)"],
}

CURVATURE_SPEC = {
    "l": "sqrt(10)",
    "m": "3",
    "n": "0",
    "alpha": "sin(t)*cos(t)",
    "init": {
        "nu1_0": [1.0, 1.0, 0.0],
        "nu2_0": [-3.0, 0.0, math.sqrt(10.0)],
        "gamma0": [-math.sqrt(10.0) / 4.0, 0.0, 1.0],
        "t0": 0.0,
    },
    "grid": {"t_min": 0.0, "t_max": 2.0 * math.pi, "h": 1e-3},
}


def example_curve():
    """The example as a validated :class:`~hybridcurve.framed.FramedCurve`."""
    from .io import curve_from_spec

    return curve_from_spec(CURVE_SPEC)
