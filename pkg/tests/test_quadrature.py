import math

import numpy as np
import pytest

from heatforms.errors import DomainError, NonconvergenceError
from heatforms.quadrature import (DecayHint, ToleranceBudget,
                                  gaussian_tail_radius, integrate_adaptive,
                                  integrate_semiinfinite)


def test_gaussian_on_finite_interval():
    # int_0^3 exp(-x^2) dx = sqrt(pi)/2 * erf(3)
    val, err = integrate_adaptive(lambda x: math.exp(-x * x), 0.0, 3.0,
                                  ToleranceBudget(abs_tol=1e-13))
    ref = 0.5 * math.sqrt(math.pi) * math.erf(3.0)
    assert err <= 1e-13
    assert abs(val - ref) <= err + 1e-15
    assert abs(val - 0.88620734825952) < 1e-13


def test_polynomial_is_near_exact():
    val, _ = integrate_adaptive(lambda x: x ** 5, 0.0, 1.0)
    assert abs(val - 1.0 / 6.0) < 1e-14


def test_vectorized_matches_scalar():
    budget = ToleranceBudget(abs_tol=1e-11)
    f = lambda x: np.sin(3.0 * x) * np.exp(-x)
    v1, _ = integrate_adaptive(f, 0.0, 2.0, budget)
    v2, _ = integrate_adaptive(f, 0.0, 2.0, budget, vectorized=True)
    assert abs(v1 - v2) < 1e-12


def test_degenerate_and_invalid_intervals():
    assert integrate_adaptive(lambda x: x, 1.0, 1.0) == (0.0, 0.0)
    with pytest.raises(DomainError):
        integrate_adaptive(lambda x: x, 1.0, 0.0)
    with pytest.raises(DomainError):
        integrate_adaptive(lambda x: x, 0.0, math.inf)


def test_nonfinite_integrand_rejected():
    with pytest.raises(DomainError):
        integrate_adaptive(lambda x: math.inf if x > 0.4 else 1.0, 0.0, 1.0)


def test_nonconvergence_reports_achieved_estimate():
    budget = ToleranceBudget(abs_tol=1e-15, max_quad_depth=2)
    with pytest.raises(NonconvergenceError) as info:
        integrate_adaptive(lambda x: math.sin(50.0 * x) ** 2, 0.0, 10.0, budget)
    assert info.value.achieved is not None
    assert info.value.achieved > 1e-15


def test_semiinfinite_gaussian_moments():
    budget = ToleranceBudget(abs_tol=1e-11)
    v0, e0 = integrate_semiinfinite(lambda x: math.exp(-x * x), 1.0, budget)
    assert abs(v0 - 0.5 * math.sqrt(math.pi)) <= e0 + 1e-13
    v2, e2 = integrate_semiinfinite(lambda x: x * x * math.exp(-x * x), 1.0,
                                    budget)
    assert abs(v2 - 0.25 * math.sqrt(math.pi)) <= e2 + 1e-13


def test_gaussian_tail_radius_is_rigorous():
    rate, bound = 0.7, 3.0
    radius, tail = gaussian_tail_radius(rate, 1e-9, bound=bound)
    assert tail <= 1e-9
    # crude numerical tail of the envelope itself must sit under the bound
    xs = np.linspace(radius, radius + 30.0, 300000)
    env = bound * (1.0 + xs) ** 2 * np.exp(-rate * xs * xs)
    assert np.trapezoid(env, xs) <= tail * 1.0000001
    r_loose, _ = gaussian_tail_radius(rate, 1e-3, bound=bound)
    assert r_loose <= radius


def test_budget_validation():
    with pytest.raises(DomainError):
        ToleranceBudget(abs_tol=0.0)
    with pytest.raises(DomainError):
        ToleranceBudget(abs_tol=math.nan)
    part = ToleranceBudget(abs_tol=1e-6).part(0.25)
    assert part.abs_tol == 0.25e-6


def test_decay_hint_validation_and_envelope():
    with pytest.raises(DomainError):
        DecayHint("cubic", 1.0, 1.0)
    hint = DecayHint("gaussian", rate=2.0, bound=3.0)
    assert hint.envelope(0.0) == 3.0
    assert abs(hint.envelope(1.5) - 3.0 * math.exp(-2.0 * 2.25)) < 1e-15
    assert DecayHint("bounded").envelope(100.0) == 1.0
