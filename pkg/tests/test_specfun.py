import math

import numpy as np
import pytest

from heatforms.errors import DomainError
from heatforms.quadrature import DecayHint, ToleranceBudget
from heatforms.specfun import (RadialProfile, SpectralParameter, conical_p,
                               conical_p1, legendre_p, legendre_p1,
                               mehler_fock_forward, mehler_fock_inverse)
from heatforms.verify import PROFILES

TIGHT = ToleranceBudget(abs_tol=1e-12)


def test_legendre_closed_forms():
    assert legendre_p(0, 0.3) == 1.0
    assert abs(legendre_p(2, 0.5) - -0.125) < 1e-15
    x = 0.37
    assert abs(legendre_p(3, x) - 0.5 * (5 * x ** 3 - 3 * x)) < 1e-14
    xs = np.array([-0.9, 0.0, 0.9])
    np.testing.assert_allclose(legendre_p(5, -xs), -legendre_p(5, xs),
                               atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_legendre_p1_is_phi_derivative(n):
    # with the chosen phase, P^1_n(cos phi) = d/dphi P_n(cos phi)
    h = 1e-6
    for phi in (0.4, 1.2, 2.3):
        fd = (legendre_p(n, math.cos(phi + h))
              - legendre_p(n, math.cos(phi - h))) / (2 * h)
        assert abs(float(legendre_p1(n, math.cos(phi))) - fd) < 1e-8


def test_legendre_domain_checks():
    with pytest.raises(DomainError):
        legendre_p(-1, 0.5)
    with pytest.raises(DomainError):
        legendre_p(2, 1.5)


# Values frozen from 40-digit evaluations of the Legendre function of
# complex degree -1/2 + i rho; the pair at rho = 0, r ~ 1.9 pins the
# switch between the hypergeometric series and the integral branch.
CONICAL_CASES = [
    (0.5, 1.0, 0.8835378988482238, -0.21692422417246043),
    (0.0, 1.89, 0.8139424270069399, -0.16468385332675511),
    (0.0, 1.9, 0.8122940426711591, -0.16499204951667526),
    (2.0, 2.5, -0.12212413213329544, 0.4502033992746009),
    (10.0, 1.5, -0.010994272013760012, -1.7197795007795473),
    (0.0, 0.3, 0.9944038339797285, -0.03711667229682594),
]


@pytest.mark.parametrize("rho,r,p_ref,p1_ref", CONICAL_CASES)
def test_conical_frozen_values(rho, r, p_ref, p1_ref):
    assert abs(conical_p(rho, r, TIGHT) - p_ref) < 1e-12
    assert abs(conical_p1(rho, r, TIGHT) - p1_ref) < 1e-11


def test_conical_at_origin():
    assert conical_p(2.3, 0.0, TIGHT) == 1.0
    assert conical_p1(2.3, 0.0, TIGHT) == 0.0


def test_conical_even_in_rho():
    assert conical_p(-0.7, 1.3, TIGHT) == conical_p(0.7, 1.3, TIGHT)
    with pytest.raises(DomainError):
        SpectralParameter(-0.5)
    assert SpectralParameter(0.7).rho == 0.7


def test_conical_is_laplace_eigenfunction():
    # f'' + coth(r) f' + (1/4 + rho^2) f = 0 for f = conical_p(rho, .)
    h = 1e-4
    for rho, r in ((0.8, 0.9), (3.0, 1.7), (0.2, 2.4)):
        fp = conical_p(rho, r + h, TIGHT)
        f0 = conical_p(rho, r, TIGHT)
        fm = conical_p(rho, r - h, TIGHT)
        lap = ((fp - 2 * f0 + fm) / h ** 2
               + (fp - fm) / (2 * h) / math.tanh(r))
        assert abs(lap + (0.25 + rho * rho) * f0) < 1e-6


def test_conical_p1_is_radial_derivative():
    h = 1e-5
    for rho, r in ((0.5, 0.6), (4.0, 2.2)):
        fd = (conical_p(rho, r + h, TIGHT)
              - conical_p(rho, r - h, TIGHT)) / (2 * h)
        assert abs(conical_p1(rho, r, TIGHT) - fd) < 1e-8


def test_forward_transform_frozen_value():
    val = mehler_fock_forward(PROFILES["gaussian"], 0.5,
                              ToleranceBudget(abs_tol=1e-9))
    assert abs(val - -0.8130183293610438) < 1e-11


def test_forward_rejects_lying_profiles():
    bad = RadialProfile(fn=lambda r: math.exp(-0.1 * r),
                        decay=DecayHint("gaussian", rate=5.0, bound=0.1),
                        name="bad")
    with pytest.raises(DomainError):
        mehler_fock_forward(bad, 1.0)


def test_inverse_needs_positive_radius():
    with pytest.raises(DomainError):
        mehler_fock_inverse(lambda rho: 0.0, 0.0)


@pytest.mark.parametrize("name", ["gaussian", "cubic"])
def test_roundtrip_reproduces_profile(name):
    """Forward then inverse on profiles regular at the origin.

    Such profiles have spectral data decaying like exp(-pi rho), so the
    reconstruction error is set by the quadrature budget alone.
    """
    profile = PROFILES[name]
    budget = ToleranceBudget(abs_tol=1e-6)
    cache = {}

    def fhat(rho):
        key = float(rho)
        if key not in cache:
            cache[key] = mehler_fock_forward(profile, key, budget)
        return cache[key]

    for r in (0.5, 1.2, 2.0):
        back = mehler_fock_inverse(fhat, r, budget,
                                   gaussian_rate=0.2, bound=10.0)
        assert abs(back - profile(r)) < 1e-5
