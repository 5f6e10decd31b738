import math

import numpy as np
import pytest

import oracles
from hybridcurve.algebra import SpatialHybrid
from hybridcurve.derived import (
    DistanceSquared, contrapedal, evolute, evolute_frame, evolute_point, hypothesis_holds,
    involute, involute_frame, pedal,
)
from hybridcurve.errors import DegenerateEvolute, NotAdapted
from hybridcurve.expr import ScalarFn
from hybridcurve.framed import FramedCurve, adapt_frame, extract_curvature
from test_framed import rotated_example

TWO_PI = 2 * math.pi
T = np.linspace(0, TWO_PI, 1001)


def scaled_example(lam: float):
    """The example with gamma scaled by ``lam``: same frame, alpha scaled by ``lam``."""
    g = [f"{lam!r}*(sin(t)^3 - sqrt(10)/4*cos(2*t))", f"{lam!r}*sin(t)^3", f"{lam!r}*cos(t)^3"]
    return FramedCurve.from_text(g, ["cos(t)", "cos(t)", "sin(t)"],
                                 ["-3 - sqrt(10)*sin(t)", "-sqrt(10)*sin(t)", "sqrt(10)*cos(t)"],
                                 (0.0, TWO_PI))


def maxdiff(a, b):
    return float(np.max(np.abs(a - b)))


# --- evolute -------------------------------------------------------------------

def test_evolute_closed_form(example):
    assert maxdiff(evolute(example)(T), oracles.evolute(T)) <= 1e-9


def test_evolute_forms_agree(example):
    assert maxdiff(evolute(example, "adapted")(T), evolute(example, "general")(T)) <= 1e-12
    with pytest.raises(ValueError):
        evolute(example, "other")


def test_evolute_uses_frame_at_t_not_t0(example):
    # a literal reading with nu(t0) frozen disagrees with the closed form away from t0
    ev = evolute(example)
    t0 = 0.3
    frozen = []
    for t in (0.8, 1.7):
        p = evolute_point(example, t)
        assert maxdiff(p.as_array(), ev(t)) <= 1e-12
        w = example.gamma(t) - p.as_array()
        lam = np.linalg.lstsq(np.stack([example.nu1(t), example.nu2(t)], axis=1), w, rcond=None)[0]
        frozen.append(example.gamma(t) - lam[0] * example.nu1(t0) - lam[1] * example.nu2(t0))
        assert maxdiff(frozen[-1], oracles.evolute(t)) > 1e-2


def test_evolute_independent_of_frame_rotation(example):
    rot = rotated_example()
    assert maxdiff(evolute(rot)(T), oracles.evolute(T)) <= 1e-9
    with pytest.raises(NotAdapted):
        evolute(rot, "adapted")
    assert maxdiff(evolute(adapt_frame(rot), "adapted")(T), oracles.evolute(T)) <= 1e-9


def test_degenerate_evolute():
    flat = FramedCurve.from_text(["t", "t", "0"], ["1", "0", "0"], ["0", "0", "1"], (0, 1))
    with pytest.raises(DegenerateEvolute):
        evolute(flat)


def test_hypothesis_fails_at_singular_points(example):
    assert not hypothesis_holds(example, math.pi / 2)
    assert hypothesis_holds(example, 1.0)


def test_evolute_frame(example):
    ef = evolute_frame(example)
    assert maxdiff(ef.gamma(T), oracles.evolute(T)) <= 1e-9
    assert maxdiff(ef.nu2(T), oracles.mu(T)) <= 1e-13


# --- distance squared function ----------------------------------------------------

def test_distance_squared_derivatives_vs_finite_differences(example, rng):
    k = extract_curvature(example)
    for _ in range(10):
        x = SpatialHybrid(*rng.uniform(-2, 2, 3))
        ds = DistanceSquared(example, x, k)
        t = float(rng.uniform(0.1, TWO_PI - 0.1))
        for order in (1, 2, 3):
            h = 1e-5
            fd = (ds.derivative(t + h, order - 1) - ds.derivative(t - h, order - 1)) / (2 * h)
            assert abs(ds.derivative(t, order) - fd) <= 1e-6 * max(1.0, abs(fd))


def test_evolute_point_annihilates_three_derivatives(example, rng):
    k = extract_curvature(example)
    done = 0
    for t in rng.uniform(0, TWO_PI, 40):
        if not hypothesis_holds(example, t, k=k):
            continue
        ds = DistanceSquared(example, evolute_point(example, t, k), k)
        assert all(abs(ds.derivative(t, o)) <= 1e-8 for o in (1, 2, 3))
        done += 1
    assert done >= 20


def test_condition_two_annihilates_two_derivatives(example, rng):
    k = extract_curvature(example)
    for t in rng.uniform(0.1, 1.4, 15):
        lam1 = float(rng.normal())
        lam2 = (k.alpha(t) - lam1 * k.m(t)) / 1.0 if k.n(t) != 0 else None
        # n = 0 on the example, so the condition fixes lam1 = alpha/m and leaves lam2 free
        lam1 = k.alpha(t) / k.m(t)
        lam2 = float(rng.normal())
        x = example.gamma(t) - lam1 * example.nu1(t) - lam2 * example.nu2(t)
        ds = DistanceSquared(example, SpatialHybrid.from_array(x), k)
        assert abs(ds.derivative(t, 1)) <= 1e-8 and abs(ds.derivative(t, 2)) <= 1e-8


def test_distance_squared_bad_order(example):
    with pytest.raises(ValueError):
        DistanceSquared(example, SpatialHybrid()).derivative(1.0, 4)


# --- involute --------------------------------------------------------------------

def test_involute_closed_form(example):
    inv = involute(example)
    assert inv.backend == "closed-form"
    assert maxdiff(inv.curve(T), oracles.involute(T)) <= 1e-9
    f1, f2 = oracles.involute_coefficients(T)
    assert maxdiff(inv.f1(T), f1) <= 1e-12 and maxdiff(inv.f2(T), f2) <= 1e-12
    assert inv.ode_residual <= 1e-8


def test_printed_single_line_involute_lacks_sqrt10(example):
    # the printed summary differs from gamma + f1 n1 + f2 mu only in the i-component,
    # by 9 (sqrt(10) - 1) / 52 cos 2t
    diff = involute(example).curve(T) - oracles.involute_printed_summary(T)
    assert np.max(np.abs(diff[:, 1:])) <= 1e-12
    expected = -9 * (math.sqrt(10) - 1) / 52 * np.cos(2 * T)
    assert maxdiff(diff[:, 0], expected) <= 1e-12


def test_involute_with_constants(example):
    inv = involute(example, 1e-6, 0.5)
    ref = oracles.involute(T, 1e-6, 0.5)
    assert maxdiff(inv.curve(T), ref) <= 1e-9 * max(1.0, np.max(np.abs(ref)))
    assert (inv.c1, inv.c2) == (1e-6, 0.5)


def test_involute_integrated_backend(example):
    inv = involute(example, backend="integrated", h=1e-3)
    assert inv.backend == "integrated"
    assert maxdiff(inv.curve(T), oracles.involute(T)) <= 1e-6
    assert maxdiff(inv.f1.derivative()(T), -3 * inv.f2(T)) <= 1e-12


def test_involute_integrated_from_given_values(example):
    f1, f2 = oracles.involute_coefficients(np.array(math.pi))
    inv = involute(example, backend="integrated", f0=(float(f1), float(f2)), t_init=math.pi,
                   h=TWO_PI / 4096)
    assert maxdiff(inv.curve(T), oracles.involute(T)) <= 1e-6


def test_unknown_backend(example):
    with pytest.raises(ValueError):
        involute(example, backend="magic")


def test_involute_needs_adapted_frame():
    with pytest.raises(NotAdapted):
        involute(rotated_example())


def test_auto_falls_back_to_integration():
    # after adapting, M is an unwieldy expression equal to 3; alpha is too large for
    # the symbolic integrator, so "auto" integrates
    fc = adapt_frame(rotated_example())
    inv = involute(fc)
    assert inv.backend == "integrated"
    assert inv.ode_residual <= 1e-8
    f1, f2 = oracles.involute_coefficients(np.array(math.pi))
    inv = involute(fc, f0=(float(f1), float(f2)), t_init=math.pi, h=TWO_PI / 4096)
    assert maxdiff(inv.curve(T), oracles.involute(T)) <= 1e-6


# --- pedal and contrapedal ----------------------------------------------------------

def test_pedal_closed_form(example):
    assert maxdiff(pedal(example, SpatialHybrid())(T), oracles.pedal(T)) <= 1e-9


def test_contrapedal_closed_form(example):
    assert maxdiff(contrapedal(example, SpatialHybrid())(T), oracles.contrapedal(T)) <= 1e-9


def test_pedal_is_projection(example, rng):
    from hybridcurve.algebra import g_array
    p = SpatialHybrid(*rng.normal(size=3))
    pe = pedal(example, p)(T)
    # Pe - gamma has no n2 component and p - Pe is along n2
    assert np.max(np.abs(g_array(pe - example.gamma(T), example.nu2(T)))) <= 1e-12
    cpe = contrapedal(example, p)(T)
    assert np.max(np.abs(g_array(cpe - example.gamma(T), example.mu(T)))) <= 1e-12


# --- duality identities ----------------------------------------------------------

@pytest.mark.parametrize("lam", [1.0, 0.5, 2.0])
def test_evolute_of_involute_is_gamma(lam):
    fc = scaled_example(lam)
    back = evolute(involute_frame(fc))
    assert maxdiff(back(T), fc.gamma(T)) <= 1e-8


def test_evolute_of_numeric_involute_is_gamma(example):
    back = evolute(involute_frame(example, backend="integrated"))
    assert maxdiff(back(T), example.gamma(T)) <= 1e-5


def test_evolute_of_involute_rotated_frame():
    fc = adapt_frame(rotated_example())
    back = evolute(involute_frame(fc))
    assert maxdiff(back(T), oracles.gamma(T)) <= 1e-5


def test_pedal_contrapedal_duality(example, rng):
    ef, inf_ = evolute_frame(example), involute_frame(example)
    points = [SpatialHybrid()] + [SpatialHybrid(*rng.uniform(-3, 3, 3)) for _ in range(10)]
    for p in points:
        assert maxdiff(pedal(ef, p)(T), contrapedal(example, p)(T)) <= 1e-9
        assert maxdiff(contrapedal(inf_, p)(T), pedal(example, p)(T)) <= 1e-9


def test_adapted_constant_m_detected(example):
    inv = involute(adapt_frame(example))
    assert inv.backend == "closed-form"
    assert isinstance(inv.f1, ScalarFn)
