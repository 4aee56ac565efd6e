import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heatforms.errors import (CoincidentPointsError, CutLocusError,
                              DomainError)
from heatforms.geometry import (OneFormValue, Point, SurfaceKind, distance)
from heatforms.kernels import (T_MIN, FormField, HeatTime, apply_k0, apply_k1,
                               g1_scalar, heat_residual, k0, k0_h2_mckean, k1,
                               k2)
from heatforms.quadrature import DecayHint, ToleranceBudget
from heatforms.specfun import legendre_p

TIGHT = ToleranceBudget(abs_tol=1e-12)
KINDS = ("plane", "sphere", "hyperbolic")


def test_plane_coincidence_value():
    x = Point("plane", 0.4, 1.1)
    v = k0("plane", x, x, 0.25)
    assert abs(v.value - 1.0 / math.pi) < 1e-15
    assert v.err_est < 1e-12


def test_sphere_long_time_limit():
    # spectrum gap is 2, so by t = 20 only the constant mode is left
    v = k0("sphere", Point("sphere", 0.2, 0.0), Point("sphere", 2.0, 3.0), 20.0)
    assert abs(v.value - 1.0 / (4.0 * math.pi)) < 1e-12


def test_time_validation():
    x = Point("plane", 0.1, 0.0)
    with pytest.raises(DomainError):
        k0("plane", x, x, T_MIN / 2)
    with pytest.raises(DomainError):
        HeatTime(0.0)
    assert k0("plane", x, x, HeatTime(0.25)).value == k0("plane", x, x, 0.25).value


@pytest.mark.parametrize("kind", KINDS)
def test_k2_is_k0_as_density(kind):
    x = Point(kind, 0.5, 0.1)
    y = Point(kind, 1.2, 2.0)
    assert k2(kind, x, y, 0.7).value == k0(kind, x, y, 0.7).value


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.0, 6.28), st.floats(0.05, 3.0),
       st.floats(0.0, 6.28), st.floats(0.05, 2.0))
def test_euclid_k1_closed_form(r1, t1, r2, t2, t):
    """On the plane the 1-form kernel is the scalar kernel times the
    rotation aligning the two polar coframes."""
    x = Point("plane", r1, t1)
    y = Point("plane", r2, t2)
    d = distance("plane", x, y)
    kern = math.exp(-d * d / (4.0 * t)) / (4.0 * math.pi * t)
    dth = t1 - t2
    ref = kern * np.array([[math.cos(dth), math.sin(dth)],
                           [-math.sin(dth), math.cos(dth)]])
    got = k1("plane", x, y, t, TIGHT).matrix.as_array()
    assert np.max(np.abs(got - ref)) < 1e-12


def test_sphere_k1_frozen_matrix():
    # frozen from a double finite difference of the generator series
    got = k1("sphere", Point("sphere", 0.7, 0.0), Point("sphere", 1.2, 0.9),
             0.5, TIGHT).matrix.as_array()
    ref = np.array([[0.065091034092207761, -0.041219409324524225],
                    [0.041219409324524225, 0.065091034092207761]])
    assert np.max(np.abs(got - ref)) < 1e-7


def test_k1_coincidence_is_isotropic():
    vals = {"plane": 1.0 / (4.0 * math.pi * 0.4),
            "sphere": 0.1481949208278189,
            "hyperbolic": 0.17439242924075343}
    for kind, ref in vals.items():
        x = Point(kind, 0.7, 0.2)
        m = k1(kind, x, x, 0.4, TIGHT).matrix
        assert m.m12 == 0.0 and m.m21 == 0.0
        assert m.m11 == m.m22
        assert abs(m.m11 - ref) < 1e-10
        # continuity: nearby separation reproduces the coincidence matrix
        near = k1(kind, x, Point(kind, 0.7 + 1e-6, 0.2), 0.4, TIGHT).matrix
        assert abs(near.m11 - m.m11) < 1e-4


def test_h2_dual_routes_agree():
    for d in (0.1, 1.0, 2.5):
        for t in (0.1, 0.8):
            a = k0("hyperbolic", Point("hyperbolic", 0.0, 0.0),
                   Point("hyperbolic", d, 0.0), t, TIGHT).value
            b = k0_h2_mckean(d, t, TIGHT)
            assert abs(a - b) < 1e-9


@pytest.mark.parametrize("kind,d,t", [("plane", 0.7, 0.4),
                                      ("sphere", 1.1, 0.5),
                                      ("hyperbolic", 0.9, 0.6)])
def test_generator_time_derivative(kind, d, t):
    # -dG/dt recovers the kernel (mean-zero part of it on the sphere)
    h = 1e-5
    gp = g1_scalar(kind, d, t + h, TIGHT)[0]
    gm = g1_scalar(kind, d, t - h, TIGHT)[0]
    lhs = -(gp - gm) / (2 * h)
    rhs = k0(kind, Point(kind, 0.3, 0.0), Point(kind, 0.3 + d, 0.0), t,
             TIGHT).value
    if kind == "sphere":
        rhs -= 1.0 / (4.0 * math.pi)
    assert abs(lhs - rhs) < 1e-7


@pytest.mark.parametrize("kind,d,t", [("plane", 0.8, 0.3),
                                      ("sphere", 1.3, 0.4),
                                      ("hyperbolic", 1.0, 0.5)])
def test_generator_radial_derivatives(kind, d, t):
    h = 1e-5
    g0, gd, gdd = g1_scalar(kind, d, t, TIGHT)
    gp = g1_scalar(kind, d + h, t, TIGHT)
    gm = g1_scalar(kind, d - h, t, TIGHT)
    assert abs(gd - (gp[0] - gm[0]) / (2 * h)) < 1e-6
    assert abs(gdd - (gp[1] - gm[1]) / (2 * h)) < 1e-6


def test_generator_frozen_plane_triple():
    g = g1_scalar("plane", 0.8, 0.3, TIGHT)
    ref = (-0.005966736276330914, -0.08223412176337588, -0.05282009059777121)
    for a, b in zip(g, ref):
        assert abs(a - b) < 1e-12


def test_coincident_and_cut_locus_rejection():
    with pytest.raises(CoincidentPointsError):
        g1_scalar("plane", 0.0, 0.3)
    with pytest.raises(CutLocusError):
        k1("sphere", Point("sphere", 0.0, 0.0), Point("sphere", math.pi, 0.0),
           0.3)


def test_apply_k0_sphere_eigenfunctions():
    t = 0.3
    for n in (1, 2, 3):
        field = FormField(0, lambda p, n=n: float(legendre_p(n, math.cos(p.c1))))
        out = apply_k0("sphere", field, t)
        decay = math.exp(-n * (n + 1) * t)
        for phi in (0.5, 1.1, 2.0):
            want = decay * float(legendre_p(n, math.cos(phi)))
            assert abs(out.fn(Point("sphere", phi, 0.3)) - want) < 1e-6


def test_apply_k0_plane_gaussian_closed_form():
    s0, t = 0.2, 0.35
    field = FormField(0, lambda p: math.exp(-p.c1 ** 2 / (4 * s0)),
                      DecayHint("gaussian", 1.0 / (4 * s0), 1.0))
    out = apply_k0("plane", field, t)
    for r in (0.0, 0.9):
        want = (s0 / (s0 + t)) * math.exp(-r ** 2 / (4 * (s0 + t)))
        assert abs(out.fn(Point("plane", r, 1.0)) - want) < 1e-7


@pytest.mark.parametrize("kind", ["plane", "hyperbolic"])
def test_apply_k0_preserves_constants(kind):
    ones = FormField(0, lambda p: 1.0, DecayHint("bounded", 0.0, 1.0))
    got = apply_k0(kind, ones, 0.5).fn(Point(kind, 0.7, 0.1))
    assert abs(got - 1.0) < 1e-7


def test_apply_k1_plane_parallel_field():
    # dx expressed in polar coframes; translation invariance fixes it
    dx = FormField(1, lambda p: OneFormValue(math.cos(p.c2), -math.sin(p.c2)),
                   DecayHint("bounded", 0.0, 1.0))
    got = apply_k1("plane", dx, 0.4).fn(Point("plane", 1.1, 0.7))
    assert abs(got.a - math.cos(0.7)) < 1e-7
    assert abs(got.b - -math.sin(0.7)) < 1e-7


def test_apply_k1_sphere_eigenform():
    # d(cos phi) has 1-form Laplacian eigenvalue 2
    t = 0.3
    out = apply_k1("sphere",
                   FormField(1, lambda p: OneFormValue(-math.sin(p.c1), 0.0)),
                   t)
    for phi in (0.6, 1.2, 2.1):
        got = out.fn(Point("sphere", phi, 0.5))
        assert abs(got.a - math.exp(-2 * t) * -math.sin(phi)) < 1e-4
        assert abs(got.b) < 1e-4


def test_evolution_commutes_with_differential():
    t = 0.5
    ev0 = apply_k0("sphere", FormField(0, lambda p: math.cos(p.c1)), t)
    ev1 = apply_k1("sphere",
                   FormField(1, lambda p: OneFormValue(-math.sin(p.c1), 0.0)),
                   t)
    h = 1e-4
    for phi, th in ((0.8, 0.2), (1.5, 1.1)):
        da = (ev0.fn(Point("sphere", phi + h, th))
              - ev0.fn(Point("sphere", phi - h, th))) / (2 * h)
        db = (ev0.fn(Point("sphere", phi, th + h))
              - ev0.fn(Point("sphere", phi, th - h))) / (2 * h) / math.sin(phi)
        v = ev1.fn(Point("sphere", phi, th))
        assert abs(da - v.a) < 1e-4
        assert abs(db - v.b) < 1e-4


def test_heat_residual_of_the_kernels():
    """The kernels themselves solve the heat equation; the degree-1 row
    exercises the curvature coupling between the radial and angular parts."""
    budget = ToleranceBudget(abs_tol=1e-11)
    kind = "plane"
    x0 = Point(kind, 0.3, 0.1)
    xp = Point(kind, 1.1, 0.9)
    t = 0.45
    fields0 = [FormField(0, lambda p, T=T: k0(kind, x0, p, T, budget).value)
               for T in (t - 1e-3, t, t + 1e-3)]
    assert heat_residual(kind, fields0, xp, 1e-3, 1e-2) < 1e-3

    v = np.array([0.6, 0.8])

    def omega(p, T):
        row = v @ k1(kind, x0, p, T, budget).matrix.as_array()
        return OneFormValue(float(row[0]), float(row[1]))

    fields1 = [FormField(1, lambda p, T=T: omega(p, T))
               for T in (t - 1e-3, t, t + 1e-3)]
    assert heat_residual(kind, fields1, xp, 1e-3, 1e-2) < 1e-3
