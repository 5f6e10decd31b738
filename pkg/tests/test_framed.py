import math

import numpy as np
import pytest

import oracles
from hybridcurve.algebra import g_array
from hybridcurve.errors import FrameValidationError, NotAdapted, ParabolicNormal
from hybridcurve.framed import (
    FramedCurve, SpaceCurve, adapt_frame, adapted_curvature, extract_curvature, frame_report,
    is_singular, singular_points, uniform_grid, verify_frenet,
)

TWO_PI = 2 * math.pi
GRID = np.linspace(0, TWO_PI, 301)


def rotated_example(theta="t/3"):
    """The example with (nu1, nu2) turned by a varying angle inside their plane.

    Both vectors have g = -1, so the plane is g-definite and an ordinary
    rotation keeps the frame g-orthonormal; the frame is no longer adapted.
    """
    g = ["sin(t)^3 - sqrt(10)/4*cos(2*t)", "sin(t)^3", "cos(t)^3"]
    a = ["cos(t)", "cos(t)", "sin(t)"]
    b = ["-3 - sqrt(10)*sin(t)", "-sqrt(10)*sin(t)", "sqrt(10)*cos(t)"]
    c, s = f"cos({theta})", f"sin({theta})"
    nu1 = [f"{c}*({x}) + {s}*({y})" for x, y in zip(a, b)]
    nu2 = [f"-{s}*({x}) + {c}*({y})" for x, y in zip(a, b)]
    return FramedCurve.from_text(g, nu1, nu2, (0.0, TWO_PI))


def test_signs_and_kind(example):
    assert (example.delta1, example.delta2) == (-1, -1)
    assert example.kind == "elliptic"


def test_mu_matches_closed_form(example):
    assert np.max(np.abs(example.mu(GRID) - oracles.mu(GRID))) <= 1e-13
    w = example.mu(GRID)
    assert np.max(np.abs(g_array(w, w) - 1.0)) <= 1e-9
    assert np.allclose(example.mu(0.0), [math.sqrt(10), 0.0, -3.0])


def test_curvature_of_example(example):
    k = extract_curvature(example)
    assert np.allclose(k.l(GRID), math.sqrt(10), atol=1e-13)
    assert np.allclose(k.m(GRID), 3.0, atol=1e-13)
    assert np.allclose(k.n(GRID), 0.0, atol=1e-13)
    assert np.allclose(k.alpha(GRID), np.sin(GRID) * np.cos(GRID), atol=1e-13)


def test_frenet_residuals(example):
    res = verify_frenet(example)
    assert set(res) == {"nu1'", "nu2'", "mu'", "gamma'"}
    assert max(res.values()) <= 1e-9


def test_frenet_matrix_against_closed_form(example):
    frame = np.stack([oracles.n1(GRID), oracles.n2(GRID), oracles.mu(GRID)], axis=1)
    deriv = np.stack([f.derivative()(GRID) for f in (example.nu1, example.nu2, example.mu)], axis=1)
    assert np.max(np.abs(deriv - np.einsum("ij,njk->nik", oracles.FRENET, frame))) <= 1e-12


def test_corrupted_frame_rejected():
    with pytest.raises(FrameValidationError) as info:
        FramedCurve.from_text(["t", "0", "0"], ["1", "0", "0"], ["0", "0", "1"], (0, 1))
    assert info.value.check == "orth_gamma'_nu1"
    with pytest.raises(FrameValidationError, match="unit_nu1"):
        FramedCurve.from_text(["0", "0", "0"], ["2", "0", "0"], ["0", "0", "1"], (0, 1))


def test_frame_report_does_not_raise():
    gamma, nu1, nu2 = (SpaceCurve.from_text(x, (0, 1)) for x in (["t", "0", "0"], ["1", "0", "0"],
                                                                    ["0", "0", "1"]))
    rep = frame_report(gamma, nu1, nu2, uniform_grid((0, 1), 11))
    assert not rep.ok and rep.first_failure()[0] == "orth_gamma'_nu1"


def test_singular_points(example):
    grid = np.linspace(0, TWO_PI, 9)  # multiples of pi/4
    sing = singular_points(example, grid)
    assert np.allclose(sing, [0, math.pi / 2, math.pi, 3 * math.pi / 2, TWO_PI])
    assert is_singular(example, math.pi / 2)
    assert not is_singular(example, 1.0)


def test_example_is_already_adapted(example):
    k, ad = adapted_curvature(example)
    assert ad.sigma == -1
    assert np.allclose(ad.M(GRID), 3.0, atol=1e-13)

    af = adapt_frame(example)
    assert af.curvature.sigma == -1
    assert np.allclose(af.curvature.M(GRID), 3.0, atol=1e-13)
    assert np.allclose(af.curvature.L(GRID), math.sqrt(10), atol=1e-13)
    assert np.max(np.abs(af.n1(GRID) - oracles.n1(GRID))) <= 1e-13
    assert np.max(np.abs(af.n2(GRID) - oracles.n2(GRID))) <= 1e-13


def test_adapt_rotated_frame():
    fc = rotated_example()
    with pytest.raises(NotAdapted):
        adapted_curvature(fc)
    af = adapt_frame(fc)
    new = af.curve
    sigma = af.curvature.sigma
    d1, d2 = fc.delta1, fc.delta2
    v1, v2 = new.nu1(GRID), new.nu2(GRID)
    assert np.max(np.abs(g_array(v1, v1) - sigma)) <= 1e-9
    assert np.max(np.abs(g_array(v2, v2) - sigma * d1 * d2)) <= 1e-9
    assert np.max(np.abs(g_array(v1, v2))) <= 1e-9
    k = extract_curvature(new)
    assert np.max(np.abs(k.n(GRID))) <= 1e-8
    assert np.max(np.abs(k.l(GRID) - af.curvature.L(GRID))) <= 1e-8
    assert np.max(np.abs(k.m(GRID) - af.curvature.M(GRID))) <= 1e-8
    # the principal normal is intrinsic: it is the original nu1 again
    assert np.max(np.abs(v1 - oracles.n1(GRID))) <= 1e-12
    assert max(verify_frenet(new).values()) <= 1e-9


def test_parabolic_normal_for_flat_frame():
    fc = FramedCurve.from_text(["t", "t", "0"], ["1", "0", "0"], ["0", "0", "1"], (0, 1))
    assert fc.kind == "hyperbolic"
    with pytest.raises(ParabolicNormal):
        adapt_frame(fc)


def test_space_curve_helpers():
    c = SpaceCurve.from_text(["t", "t^2", "1"], (0, 2))
    assert c.at(1.5).to_json() == [1.5, 2.25, 1.0]
    assert c(np.array([0.0, 1.0])).shape == (2, 3)
    assert np.allclose(c.derivative()(2.0), [1.0, 4.0, 0.0])
    again = SpaceCurve.from_text(c.to_text(), (0, 2))
    assert np.allclose(again(GRID / 4), c(GRID / 4))
    assert np.allclose((c - c)(1.0), 0.0)


def test_adapt_flips_negative_m(example):
    flipped = FramedCurve(example.gamma, -example.nu1, -example.nu2)
    assert np.allclose(extract_curvature(flipped).m(GRID), -3.0, atol=1e-13)
    af = adapt_frame(flipped)
    assert np.allclose(af.curvature.M(GRID), 3.0, atol=1e-13)
    assert np.allclose(af.curvature.L(GRID), math.sqrt(10), atol=1e-13)
    assert np.max(np.abs(af.n1(GRID) - oracles.n1(GRID))) <= 1e-13
