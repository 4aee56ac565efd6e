import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heatforms.errors import DecayHintError, DomainError
from heatforms.geometry import (BiTensor1, OneFormValue, Point, SurfaceKind,
                                apply_i_plus_star, distance, distance_gradient,
                                hodge_star_1, integrate_surface,
                                mixed_distance_hessian)
from heatforms.quadrature import DecayHint, ToleranceBudget

KINDS = (SurfaceKind.EUCLIDEAN, SurfaceKind.SPHERE, SurfaceKind.HYPERBOLIC)

radii = st.floats(0.05, 2.6)
angles = st.floats(0.0, 2.0 * math.pi - 1e-9)


def test_kind_aliases():
    assert SurfaceKind.parse("plane") is SurfaceKind.EUCLIDEAN
    assert SurfaceKind.parse("S2") is SurfaceKind.SPHERE
    assert SurfaceKind.parse("h2") is SurfaceKind.HYPERBOLIC
    with pytest.raises(DomainError):
        SurfaceKind.parse("torus")


def test_point_validation():
    p = Point("sphere", 0.4, 2.0 * math.pi + 0.3)
    assert abs(p.c2 - 0.3) < 1e-12  # angle normalized into [0, 2 pi)
    with pytest.raises(DomainError):
        Point("sphere", 3.5, 0.0)
    with pytest.raises(DomainError):
        Point("plane", -0.1, 0.0)
    with pytest.raises(DomainError):
        Point("plane", math.nan, 0.0)


def test_plane_distance_closed_form():
    x = Point("plane", 1.0, 0.0)
    y = Point("plane", 2.0, math.pi / 2)
    assert abs(distance("plane", x, y) - math.sqrt(5.0)) < 1e-14


def test_sphere_antipodal_distance():
    d = distance("sphere", Point("sphere", 0.0, 0.0),
                 Point("sphere", math.pi, 1.3))
    assert abs(d - math.pi) < 1e-12


@settings(max_examples=60, deadline=None)
@given(radii, angles, radii, angles, radii, angles)
def test_distance_metric_properties(r1, t1, r2, t2, r3, t3):
    for kind in KINDS:
        x, y, z = (Point(kind, a, b)
                   for a, b in ((r1, t1), (r2, t2), (r3, t3)))
        dxy = distance(kind, x, y)
        assert dxy >= 0.0
        assert abs(dxy - distance(kind, y, x)) < 1e-12
        assert distance(kind, x, x) < 1e-12
        assert dxy <= distance(kind, x, z) + distance(kind, z, y) + 1e-10


@settings(max_examples=40, deadline=None)
@given(radii, angles, radii, angles, st.floats(0.0, 2.0 * math.pi))
def test_distance_rotation_invariance(r1, t1, r2, t2, alpha):
    for kind in KINDS:
        d0 = distance(kind, Point(kind, r1, t1), Point(kind, r2, t2))
        d1 = distance(kind, Point(kind, r1, t1 + alpha),
                      Point(kind, r2, t2 + alpha))
        assert abs(d0 - d1) < 1e-11


def test_sphere_gradient_frozen_value():
    # frozen against central differences of the distance itself
    g = distance_gradient("sphere", Point("sphere", 0.7, 0.2),
                          Point("sphere", 1.1, 1.0))
    assert abs(g.a - -0.27475278277288462) < 1e-9
    assert abs(g.b - -0.96151490282707353) < 1e-9


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
def test_gradient_is_unit(kind):
    rng = np.random.default_rng(11)
    for _ in range(25):
        x = Point(kind, rng.uniform(0.1, 2.5), rng.uniform(0, 6.2))
        y = Point(kind, rng.uniform(0.1, 2.5), rng.uniform(0, 6.2))
        if distance(kind, x, y) < 0.05:
            continue
        g = distance_gradient(kind, x, y)
        assert abs(math.hypot(g.a, g.b) - 1.0) < 1e-10


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
def test_mixed_hessian_matches_finite_differences(kind):
    """d/dx d/dy of F(d(x, y)) in unit frames, against a 4-point stencil."""
    r1, t1, r2, t2 = 0.8, 0.3, 1.4, 1.5
    F1 = lambda d: 2.0 * d
    F2 = lambda d: 2.0
    metric = {SurfaceKind.EUCLIDEAN: lambda r: r,
              SurfaceKind.SPHERE: math.sin,
              SurfaceKind.HYPERBOLIC: math.sinh}[kind]

    def F(a1, a2, b1, b2):
        return distance(kind, Point(kind, a1, a2), Point(kind, b1, b2)) ** 2

    h = 1e-5
    coords = [r1, t1, r2, t2]

    def fd(i, j):
        def ev(si, sj):
            q = list(coords)
            q[i] += si * h
            q[j] += sj * h
            return F(*q)
        return (ev(1, 1) - ev(1, -1) - ev(-1, 1) + ev(-1, -1)) / (4 * h * h)

    lx, ly = metric(r1), metric(r2)
    ref = np.array([[fd(0, 2), fd(0, 3) / ly],
                    [fd(1, 2) / lx, fd(1, 3) / (lx * ly)]])
    d0 = distance(kind, Point(kind, r1, t1), Point(kind, r2, t2))
    got = mixed_distance_hessian(kind, Point(kind, r1, t1),
                                 Point(kind, r2, t2), F1(d0), F2(d0))
    assert np.max(np.abs(got.as_array() - ref)) < 1e-5


def test_hodge_star_algebra():
    w = OneFormValue(0.3, -0.8)
    ww = hodge_star_1(hodge_star_1(w))
    assert (ww.a, ww.b) == (-0.3, 0.8)
    m = apply_i_plus_star(BiTensor1(1.0, 2.0, 3.0, 4.0))
    assert (m.m11, m.m12, m.m21, m.m22) == (5.0, -1.0, 1.0, 5.0)


def test_surface_integrals_against_closed_forms():
    budget = ToleranceBudget(abs_tol=1e-9)
    area = integrate_surface("sphere", lambda a, b: np.ones_like(a), budget,
                             vectorized=True)
    assert abs(area - 4.0 * math.pi) < 1e-8
    plane = integrate_surface("plane", lambda a, b: np.exp(-a ** 2), budget,
                              decay=DecayHint("gaussian", 1.0, 1.0),
                              vectorized=True)
    assert abs(plane - math.pi) < 1e-8
    # int exp(-a cosh r) dA = 2 pi exp(-a) / a on the hyperbolic plane
    a = 1.3
    hyp = integrate_surface("hyperbolic",
                            lambda g1, g2: np.exp(-a * np.cosh(g1)), budget,
                            decay=DecayHint("gaussian", rate=a / 2.5,
                                            bound=1.0),
                            vectorized=True)
    assert abs(hyp - 2.0 * math.pi * math.exp(-a) / a) < 1e-8


def test_noncompact_integration_needs_decay():
    with pytest.raises(DecayHintError):
        integrate_surface("plane", lambda a, b: np.ones_like(a))
    # sub-exponential decay cannot beat the hyperbolic area growth
    with pytest.raises(DecayHintError):
        integrate_surface("hyperbolic", lambda a, b: np.exp(-0.5 * a),
                          decay=DecayHint("exp", rate=0.5, bound=1.0),
                          vectorized=True)
