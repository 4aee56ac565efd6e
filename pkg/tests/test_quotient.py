import math

import numpy as np
import pytest

from heatforms.errors import (DomainError, EnumerationOverflowError,
                              KindMismatchError, UnsupportedGroupError)
from heatforms.geometry import Point, SurfaceKind, distance
from heatforms.kernels import k0, k1
from heatforms.quadrature import ToleranceBudget
from heatforms.quotient import (CoveringGroupSpec, GroupElement,
                                QuotientSurface, act, enumerate_elements,
                                k0_quotient, k1_quotient_flat,
                                torus_fourier_oracle)

TIGHT = ToleranceBudget(abs_tol=1e-12)

UNIT = CoveringGroupSpec.euclidean_lattice((1.0, 0.0), (0.0, 1.0))
SKEW = CoveringGroupSpec.euclidean_lattice((1.0, 0.0), (0.4, 1.2))
CYL = CoveringGroupSpec.euclidean_cyclic((1.0, 0.0))
HCYL = CoveringGroupSpec.hyperbolic_cyclic(2.0)

E = SurfaceKind.EUCLIDEAN
H = SurfaceKind.HYPERBOLIC


def test_group_spec_validation():
    with pytest.raises(DomainError):
        CoveringGroupSpec.euclidean_lattice((1.0, 0.0), (2.0, 0.0))
    with pytest.raises(DomainError):
        CoveringGroupSpec.euclidean_cyclic((0.0, 0.0))
    with pytest.raises(DomainError):
        CoveringGroupSpec.hyperbolic_cyclic(-1.0)


def test_group_elements_compose():
    g = GroupElement(UNIT, 2, -1)
    h = GroupElement(UNIT, -1, 3)
    gh = g.compose(h)
    assert (gh.k1, gh.k2) == (1, 2)
    inv = g.inverse()
    assert (inv.k1, inv.k2) == (-2, 1)
    with pytest.raises(KindMismatchError):
        g.compose(GroupElement(SKEW, 1, 0))


def test_act_translates_by_lattice_vectors():
    p = Point(E, 0.5, 0.3)
    q = act(GroupElement(SKEW, 1, -2), p)
    want = np.array([0.5 * math.cos(0.3) + 1.0 - 0.8,
                     0.5 * math.sin(0.3) - 2.4])
    got = np.array([q.c1 * math.cos(q.c2), q.c1 * math.sin(q.c2)])
    assert np.max(np.abs(got - want)) < 1e-13
    ident = act(UNIT.identity(), p)
    assert (ident.c1, ident.c2) == (p.c1, p.c2)


def test_act_hyperbolic_is_isometric():
    x = Point(H, 0.7, 0.4)
    y = Point(H, 1.3, 2.2)
    g = GroupElement(HCYL, 3)
    assert abs(distance(H, act(g, x), act(g, y)) - distance(H, x, y)) < 1e-12
    # composing two boosts along the axis equals one boost of the sum
    two = act(GroupElement(HCYL, 1), act(GroupElement(HCYL, 2), x))
    one = act(GroupElement(HCYL, 3), x)
    assert abs(distance(H, two, one)) < 1e-12


def test_enumeration_counts_and_monotonicity():
    origin = Point(E, 0.0, 0.0)
    els = enumerate_elements(UNIT, origin, origin, 2.5)
    assert len(els) == 21
    els_cyl = enumerate_elements(CYL, origin, origin, 3.2)
    assert len(els_cyl) == 7
    # exact-distance filter: nothing reaches into a tiny ball off the orbit
    x = Point(E, 0.45, 1.0)
    assert enumerate_elements(UNIT, origin, x, 0.1) == []
    sizes = [len(enumerate_elements(UNIT, origin, origin, r))
             for r in (1.0, 2.0, 3.0, 4.0)]
    assert sizes == sorted(sizes)


def test_enumeration_matches_brute_force_hyperbolic():
    x = Point(H, 0.4, 0.2)
    y = Point(H, 0.9, 1.5)
    radius = 7.0
    got = enumerate_elements(HCYL, x, y, radius)
    brute = [GroupElement(HCYL, k) for k in range(-40, 41)
             if distance(H, x, act(GroupElement(HCYL, k), y)) <= radius]
    assert [g.k1 for g in got] == sorted((g.k1 for g in brute),
                                         key=lambda k: (k * k, k))


def test_enumeration_overflow_guard():
    origin = Point(E, 0.0, 0.0)
    with pytest.raises(EnumerationOverflowError):
        enumerate_elements(UNIT, origin, origin, 4000.0)


@pytest.mark.parametrize("group", [UNIT, SKEW, CYL, HCYL],
                         ids=["unit", "skew", "cylinder", "h-cylinder"])
def test_reduce_is_idempotent_and_orbit_stable(group):
    q = QuotientSurface.from_group(group)
    p = Point(group.base, 1.7, 2.6)
    r1 = q.reduce(p)
    r2 = q.reduce(r1)
    assert abs(r1.c1 - r2.c1) < 1e-12 and abs(r1.c2 - r2.c2) < 1e-12
    shifted = q.reduce(act(GroupElement(group, 2, 1 if group.v2 else 0), p))
    assert abs(shifted.c1 - r1.c1) < 1e-9
    assert abs(math.remainder(shifted.c2 - r1.c2, 2 * math.pi)) < 1e-9


def test_torus_value_matches_theta_identity():
    """Image sum and dual Fourier sum both equal the Jacobi theta value
    theta_3(0, exp(-1/(4t)))^2 / (4 pi t) on the unit torus diagonal."""
    q = QuotientSurface.from_group(UNIT)
    origin = Point(E, 0.0, 0.0)
    ref = 1.0002069034459673
    assert abs(k0_quotient(q, origin, origin, 0.25, TIGHT) - ref) < 1e-13
    assert abs(torus_fourier_oracle(UNIT, origin, origin, 0.25, TIGHT)
               - ref) < 1e-13


def test_image_sum_equals_fourier_oracle_off_diagonal():
    q = QuotientSurface.from_group(SKEW)
    x = Point(E, 0.3, 0.7)
    for (yr, yth) in ((0.0, 0.0), (0.5, 2.0), (0.9, 4.1)):
        y = Point(E, yr, yth)
        for t in (0.1, 0.6):
            a = k0_quotient(q, x, y, t, TIGHT)
            b = torus_fourier_oracle(SKEW, x, y, t, TIGHT)
            assert abs(a - b) < 1e-11


def test_torus_long_time_uniformizes():
    area = abs(np.linalg.det(SKEW.matrix))
    q = QuotientSurface.from_group(SKEW)
    v = k0_quotient(q, Point(E, 0.4, 0.3), Point(E, 0.2, 1.9), 20.0, TIGHT)
    assert abs(v - 1.0 / area) < 1e-10


def test_deck_periodicity():
    q = QuotientSurface.from_group(UNIT)
    x = Point(E, 0.31, 0.5)
    y = Point(E, 0.62, 2.4)
    base = k0_quotient(q, x, y, 0.3, TIGHT)
    for g in (GroupElement(UNIT, 1, 0), GroupElement(UNIT, -2, 1)):
        assert abs(k0_quotient(q, x, act(g, y), 0.3, TIGHT) - base) < 1e-12
    qh = QuotientSurface.from_group(HCYL)
    xh = Point(H, 0.5, 0.8)
    yh = Point(H, 1.1, 2.0)
    bh = k0_quotient(qh, xh, yh, 0.4, TIGHT)
    moved = k0_quotient(qh, xh, act(GroupElement(HCYL, 1), yh), 0.4, TIGHT)
    assert abs(moved - bh) < 1e-9


def test_torus_kernel_mass_is_one():
    # uniform Riemann sum is exact for smooth periodic integrands
    n = 24
    q = QuotientSurface.from_group(UNIT)
    x = Point(E, 0.2, 0.4)
    cell = 1.0 / (n * n)
    total = 0.0
    for i in range(n):
        for j in range(n):
            u, v = (i + 0.5) / n, (j + 0.5) / n
            y = Point(E, math.hypot(u, v), math.atan2(v, u))
            total += k0_quotient(q, x, y, 0.3, TIGHT) * cell
    assert abs(total - 1.0) < 1e-10


def test_trivial_quotient_reduces_to_base():
    for kind in ("plane", "sphere", "hyperbolic"):
        group = CoveringGroupSpec.trivial(kind)
        q = QuotientSurface.from_group(group)
        x = Point(kind, 0.4, 0.1)
        y = Point(kind, 1.0, 2.0)
        assert k0_quotient(q, x, y, 0.5) == k0(kind, x, y, 0.5).value
        m_q = k1_quotient_flat(QuotientSurface.from_group(
            CoveringGroupSpec.trivial("plane")), Point(E, 0.4, 0.1),
            Point(E, 1.0, 2.0), 0.5).matrix
        m_b = k1("plane", Point(E, 0.4, 0.1), Point(E, 1.0, 2.0), 0.5).matrix
        assert m_q == m_b


def test_quotient_k1_diagonal_is_scalar_times_identity():
    q = QuotientSurface.from_group(UNIT)
    x = Point(E, 0.25, 0.0)
    val = k1_quotient_flat(q, x, x, 0.3, TIGHT)
    s = k0_quotient(q, x, x, 0.3, TIGHT)
    assert abs(val.matrix.m11 - s) < 1e-13
    assert abs(val.matrix.m22 - s) < 1e-13
    assert val.matrix.m12 == 0.0


def test_cylinder_k1_matches_transported_image_sum():
    """Manual image sum: each base matrix maps y_k's coframe, so transport
    back to y's coframe with the polar frame rotation before summing."""
    q = QuotientSurface.from_group(CYL)
    x = Point(E, 0.4, 0.9)
    y = Point(E, 0.7, 2.2)
    t = 0.3
    got = k1_quotient_flat(q, x, y, t, TIGHT).matrix.as_array()
    manual = np.zeros((2, 2))
    for k in range(-9, 10):
        yk = act(GroupElement(CYL, k), y)
        rot = np.array([[math.cos(yk.c2 - y.c2), math.sin(yk.c2 - y.c2)],
                        [-math.sin(yk.c2 - y.c2), math.cos(yk.c2 - y.c2)]])
        manual += k1("plane", x, yk, t, TIGHT).matrix.as_array() @ rot
    assert np.max(np.abs(got - manual)) < 1e-12


def test_quotient_k1_needs_flat_transport():
    q = QuotientSurface.from_group(HCYL)
    with pytest.raises(UnsupportedGroupError):
        k1_quotient_flat(q, Point(H, 0.3, 0.0), Point(H, 0.5, 1.0), 0.3)


def test_kind_mismatch_rejected():
    q = QuotientSurface.from_group(UNIT)
    with pytest.raises(KindMismatchError):
        k0_quotient(q, Point("sphere", 0.3, 0.0), Point("sphere", 0.5, 0.0),
                    0.3)
    with pytest.raises(KindMismatchError):
        QuotientSurface("sphere", UNIT)
    with pytest.raises(DomainError):
        torus_fourier_oracle(CYL, Point(E, 0.0, 0.0), Point(E, 0.0, 0.0), 0.3)


def test_fourier_oracle_validates_time():
    with pytest.raises(DomainError):
        torus_fourier_oracle(UNIT, Point(E, 0.0, 0.0), Point(E, 0.0, 0.0),
                             1e-9)
