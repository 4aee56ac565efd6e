"""Adaptive quadrature engines used by every numerical routine in the package.

Two engines are provided: ``integrate_adaptive`` for finite intervals and
``integrate_semiinfinite`` for integrals over [0, inf) whose integrand obeys a
Gaussian decay bound.  Both return ``(value, err_est)`` with ``err_est`` no
larger than the requested absolute tolerance, or raise
:class:`~heatforms.errors.NonconvergenceError`.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import DomainError, NonconvergenceError

__all__ = [
    "ToleranceBudget",
    "DEFAULT_BUDGET",
    "DecayHint",
    "integrate_adaptive",
    "integrate_semiinfinite",
    "gaussian_tail_radius",
]

# Hard cap on accepted panels, independent of the depth limit, so a hostile
# integrand cannot allocate unboundedly.
_MAX_PANELS = 20000


@dataclass(frozen=True)
class ToleranceBudget:
    """Accuracy request threaded through kernels, series, and quadratures.

    abs_tol is the absolute error target for the final result; routines that
    combine several truncations split it internally.
    """

    abs_tol: float = 1e-8
    max_quad_depth: int = 40
    max_series_terms: int = 20000

    def __post_init__(self):
        if not (self.abs_tol > 0.0) or not math.isfinite(self.abs_tol):
            raise DomainError("abs_tol must be positive and finite")
        if self.max_quad_depth < 1:
            raise DomainError("max_quad_depth must be at least 1")
        if self.max_series_terms < 1:
            raise DomainError("max_series_terms must be at least 1")

    def part(self, fraction: float) -> "ToleranceBudget":
        """A budget carrying `fraction` of this budget's error allowance."""
        return replace(self, abs_tol=self.abs_tol * fraction)


DEFAULT_BUDGET = ToleranceBudget()


@dataclass(frozen=True)
class DecayHint:
    """Analytic envelope |f(r)| <= bound * exp(-rate * r^p).

    kind selects p: "gaussian" means p = 2, "exp" means p = 1, and "bounded"
    means no decay at all (rate ignored).  Truncation radii for integrals over
    noncompact surfaces are solved against this envelope.
    """

    kind: str = "bounded"
    rate: float = 0.0
    bound: float = 1.0

    def __post_init__(self):
        if self.kind not in ("bounded", "exp", "gaussian"):
            raise DomainError(f"unknown decay kind {self.kind!r}")
        if self.kind != "bounded" and not self.rate > 0.0:
            raise DomainError("decaying hints need a positive rate")
        if not self.bound >= 0.0:
            raise DomainError("bound must be nonnegative")

    def envelope(self, r: float) -> float:
        if self.kind == "gaussian":
            return self.bound * math.exp(-self.rate * r * r)
        if self.kind == "exp":
            return self.bound * math.exp(-self.rate * r)
        return self.bound


@lru_cache(maxsize=None)
def _gauss_rule(n: int):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes, weights


def _eval_many(f, xs: np.ndarray, vectorized: bool) -> np.ndarray:
    if vectorized:
        out = np.asarray(f(xs), dtype=float)
        if out.shape != xs.shape:
            raise DomainError("vectorized integrand returned a wrong shape")
        return out
    return np.array([float(f(x)) for x in xs], dtype=float)


def _panel_estimates(f, a: float, b: float, vectorized: bool):
    """(G15, |G15 - G7|) on one panel; 22 integrand evaluations."""
    x15, w15 = _gauss_rule(15)
    x7, w7 = _gauss_rule(7)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    xs = np.concatenate([mid + half * x15, mid + half * x7])
    ys = _eval_many(f, xs, vectorized)
    if not np.all(np.isfinite(ys)):
        raise DomainError(f"integrand returned a non-finite value on [{a}, {b}]")
    coarse = half * float(w7 @ ys[15:])
    fine = half * float(w15 @ ys[:15])
    return fine, abs(fine - coarse)


def integrate_adaptive(f, a: float, b: float, budget: ToleranceBudget = DEFAULT_BUDGET,
                       vectorized: bool = False):
    """Integrate f on [a, b] to within budget.abs_tol.

    Parameters
    ----------
    f : callable
        Real integrand.  With ``vectorized=True`` it must map an ndarray of
        abscissae to an ndarray of values.
    a, b : float
        Interval endpoints, a <= b.

    Returns
    -------
    (value, err_est) : tuple of float
        err_est <= budget.abs_tol on success.

    Raises
    ------
    NonconvergenceError
        If the error estimate cannot be pushed below abs_tol within the
        panel-depth limits.  The exception carries the achieved estimate.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integration endpoints must be finite")
    if a > b:
        raise DomainError("integrate_adaptive requires a <= b")
    if a == b:
        return 0.0, 0.0

    value, err = _panel_estimates(f, a, b, vectorized)
    # Heap entries: (-err, tiebreak, a, b, value, depth).
    counter = 0
    heap = [(-err, counter, a, b, value, 0)]
    total_err = err
    n_panels = 1
    while total_err > budget.abs_tol:
        neg_err, _, pa, pb, pval, depth = heapq.heappop(heap)
        worst = -neg_err
        if depth >= budget.max_quad_depth or n_panels >= _MAX_PANELS:
            heapq.heappush(heap, (neg_err, counter + 1, pa, pb, pval, depth))
            raise NonconvergenceError(
                f"adaptive quadrature stalled at error {total_err:.3e} "
                f"(requested {budget.abs_tol:.3e})",
                achieved=total_err, requested=budget.abs_tol)
        mid = 0.5 * (pa + pb)
        lv, le = _panel_estimates(f, pa, mid, vectorized)
        rv, re = _panel_estimates(f, mid, pb, vectorized)
        total_err += le + re - worst
        counter += 1
        heapq.heappush(heap, (-le, counter, pa, mid, lv, depth + 1))
        counter += 1
        heapq.heappush(heap, (-re, counter, mid, pb, rv, depth + 1))
        n_panels += 1
    value = math.fsum(entry[4] for entry in heap)
    return value, total_err


def gaussian_tail_radius(rate: float, tol: float, bound: float = 1.0,
                         poly_degree: int = 2) -> tuple[float, float]:
    """Smallest convenient R with int_R^inf bound*(1+x)^p*exp(-rate x^2) dx <= tol.

    Returns (R, tail_bound_at_R).  The bound used is the first-derivative
    majorant exp(-g(R))/g'(R) for g(x) = rate*x^2 - p*log(1+x) - log(bound),
    valid once g' > 0, so the reported tail is rigorous for integrands obeying
    the declared envelope.
    """
    if not rate > 0.0:
        raise DomainError("gaussian_rate must be positive")
    if not tol > 0.0:
        raise DomainError("tolerance must be positive")
    p = float(poly_degree)

    def tail(R: float) -> float:
        slope = 2.0 * rate * R - p / (1.0 + R)
        if slope <= 0.0:
            return math.inf
        log_val = math.log(bound) + p * math.log1p(R) - rate * R * R - math.log(slope)
        return math.exp(min(log_val, 700.0))

    R = max(1.0, math.sqrt(max(p, 1.0) / rate))
    for _ in range(200):
        t = tail(R)
        if t <= tol:
            return R, t
        R *= 1.25
    raise NonconvergenceError("could not solve the Gaussian tail bound",
                              achieved=tail(R), requested=tol)


def integrate_semiinfinite(f, gaussian_rate: float, budget: ToleranceBudget = DEFAULT_BUDGET,
                           bound: float = 1.0, poly_degree: int = 2,
                           vectorized: bool = False):
    """Integrate f on [0, inf) assuming |f(x)| <= bound*(1+x)^p*exp(-gaussian_rate x^2).

    The interval is truncated at a radius where the analytic tail bound is at
    most half the tolerance; the finite part receives the other half.  Returns
    (value, err_est) with the tail bound folded into err_est.
    """
    radius, tail = gaussian_tail_radius(gaussian_rate, 0.5 * budget.abs_tol,
                                        bound=bound, poly_degree=poly_degree)
    value, err = integrate_adaptive(f, 0.0, radius, budget.part(0.5),
                                    vectorized=vectorized)
    return value, err + tail
