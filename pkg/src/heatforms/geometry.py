"""Points, distances, distance derivatives, and the Hodge star on the three
simply connected surfaces of constant curvature.

All three surfaces use geodesic polar coordinates (c1, c2) = (r, theta) about
a base point (colatitude phi on the sphere).  Frame-dependent quantities are
expressed against the orthonormal coframe (dr, L(r) dtheta) with L = r,
sin, sinh; at a coordinate pole they are defined by continuous extension
along the theta = const ray, which the closed forms below produce naturally.

Orientation fixes the Hodge star: the area form is dr wedge L dtheta, so
star dr = L dtheta and star (L dtheta) = -dr.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (CoincidentPointsError, CutLocusError, DecayHintError,
                     DomainError, KindMismatchError, NonconvergenceError)
from .quadrature import DEFAULT_BUDGET, DecayHint, ToleranceBudget, _gauss_rule

__all__ = [
    "SurfaceKind",
    "Point",
    "OneFormValue",
    "BiTensor1",
    "CUT_LOCUS_TOL",
    "distance",
    "distance_gradient",
    "mixed_distance_hessian",
    "hodge_star_1",
    "apply_i_plus_star",
    "integrate_surface",
]

# Sphere pairs with pi - d below this are treated as on the cut locus:
# the kernels exclude the band and account for it in their error estimates.
CUT_LOCUS_TOL = 1e-3

_TWO_PI = 2.0 * math.pi


class SurfaceKind(enum.Enum):
    EUCLIDEAN = "euclidean"
    SPHERE = "sphere"
    HYPERBOLIC = "hyperbolic"

    @classmethod
    def parse(cls, name) -> "SurfaceKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        aliases = {
            "euclidean": cls.EUCLIDEAN, "plane": cls.EUCLIDEAN, "e2": cls.EUCLIDEAN,
            "sphere": cls.SPHERE, "s2": cls.SPHERE,
            "hyperbolic": cls.HYPERBOLIC, "h2": cls.HYPERBOLIC,
        }
        if key not in aliases:
            raise DomainError(f"unknown surface {name!r}")
        return aliases[key]


def _metric_profile(kind: SurfaceKind):
    """(L, L') for the metric dr^2 + L(r)^2 dtheta^2."""
    if kind is SurfaceKind.EUCLIDEAN:
        return lambda r: r, lambda r: 1.0
    if kind is SurfaceKind.SPHERE:
        return math.sin, math.cos
    return math.sinh, math.cosh


@dataclass(frozen=True)
class Point:
    """A surface point in geodesic polar coordinates.

    c1 is the radius (colatitude in [0, pi] on the sphere, nonnegative
    elsewhere) and c2 the angle, normalized into [0, 2 pi).
    """

    kind: SurfaceKind
    c1: float
    c2: float

    def __post_init__(self):
        kind = SurfaceKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        c1 = float(self.c1)
        c2 = float(self.c2)
        if not (math.isfinite(c1) and math.isfinite(c2)):
            raise DomainError("coordinates must be finite")
        if c1 < 0.0:
            raise DomainError("radial coordinate must be nonnegative")
        if kind is SurfaceKind.SPHERE and c1 > math.pi:
            raise DomainError("colatitude must lie in [0, pi]")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2 % _TWO_PI)


@dataclass(frozen=True)
class OneFormValue:
    """Components (a, b) of a 1-form against the orthonormal coframe."""

    a: float
    b: float

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=float)

    def norm(self) -> float:
        return math.hypot(self.a, self.b)


@dataclass(frozen=True)
class BiTensor1:
    """A two-point tensor with one covector leg at x and one at y.

    m11 pairs the radial coframe legs at both points, m12 pairs radial at x
    with angular at y, and so on.
    """

    m11: float
    m12: float
    m21: float
    m22: float

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=float)

    @classmethod
    def from_array(cls, m) -> "BiTensor1":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    def transpose(self) -> "BiTensor1":
        return BiTensor1(self.m11, self.m21, self.m12, self.m22)


def _check_pair(kind, x: Point, y: Point) -> SurfaceKind:
    kind = SurfaceKind.parse(kind)
    if x.kind is not kind or y.kind is not kind:
        raise KindMismatchError(
            f"points of kind ({x.kind.value}, {y.kind.value}) passed to a "
            f"{kind.value} operation")
    return kind


def distance(kind, x: Point, y: Point) -> float:
    """Geodesic distance, computed with cancellation-free half-angle forms."""
    kind = _check_pair(kind, x, y)
    dtheta = x.c2 - y.c2
    if kind is SurfaceKind.EUCLIDEAN:
        # d^2 = (r1 - r2)^2 + 4 r1 r2 sin^2(dtheta / 2)
        return math.hypot(x.c1 - y.c1,
                          2.0 * math.sqrt(x.c1 * y.c1) * abs(math.sin(0.5 * dtheta)))
    if kind is SurfaceKind.HYPERBOLIC:
        # cosh d - 1 = 2 sinh^2((r1-r2)/2) + 2 sinh r1 sinh r2 sin^2(dtheta/2)
        q = (2.0 * math.sinh(0.5 * (x.c1 - y.c1)) ** 2
             + 2.0 * math.sinh(x.c1) * math.sinh(y.c1) * math.sin(0.5 * dtheta) ** 2)
        return 2.0 * math.asinh(math.sqrt(0.5 * q))
    # Sphere: embed and use atan2 for uniform accuracy at both ends.
    v1 = _sphere_vec(x.c1, x.c2)
    v2 = _sphere_vec(y.c1, y.c2)
    cross = np.cross(v1, v2)
    return math.atan2(float(np.linalg.norm(cross)), float(v1 @ v2))


def _sphere_vec(phi: float, theta: float) -> np.ndarray:
    sp = math.sin(phi)
    return np.array([sp * math.cos(theta), sp * math.sin(theta), math.cos(phi)])


def _distance_many(kind: SurfaceKind, x: Point, c1s: np.ndarray,
                   c2s: np.ndarray) -> np.ndarray:
    """Distances from x to arrays of coordinates (vectorized grid helper)."""
    dtheta = x.c2 - c2s
    if kind is SurfaceKind.EUCLIDEAN:
        return np.hypot(x.c1 - c1s,
                        2.0 * np.sqrt(x.c1 * c1s) * np.abs(np.sin(0.5 * dtheta)))
    if kind is SurfaceKind.HYPERBOLIC:
        q = (2.0 * np.sinh(0.5 * (x.c1 - c1s)) ** 2
             + 2.0 * math.sinh(x.c1) * np.sinh(c1s) * np.sin(0.5 * dtheta) ** 2)
        return 2.0 * np.arcsinh(np.sqrt(0.5 * q))
    sx = math.sin(x.c1)
    sy = np.sin(c1s)
    # Haversine: sin^2(d/2) = sin^2(dphi/2) + sin(phi1) sin(phi2) sin^2(dtheta/2)
    h = np.sin(0.5 * (c1s - x.c1)) ** 2 + sx * sy * np.sin(0.5 * dtheta) ** 2
    h = np.clip(h, 0.0, 1.0)
    return 2.0 * np.arctan2(np.sqrt(h), np.sqrt(1.0 - h))


@dataclass(frozen=True)
class _PairDerivatives:
    d: float
    grad_x: np.ndarray   # unit coframe components of d_x d
    grad_y: np.ndarray   # unit coframe components of d_y d
    mixed: np.ndarray    # unit coframe components of d_x d_y d, shape (2, 2)


def _pair_derivatives(kind, x: Point, y: Point) -> _PairDerivatives:
    """Distance plus its first and mixed second derivatives in unit coframes.

    The generating functions are Q = d^2/2 (plane), C = cosh d (hyperbolic),
    and C = cos d (sphere); each row below writes the gradient/mixed data of
    the generator with half-angle identities so that no term suffers
    cancellation near coincidence, then applies the chain rule.
    """
    kind = _check_pair(kind, x, y)
    d = distance(kind, x, y)
    if d == 0.0:
        raise CoincidentPointsError("distance derivatives need distinct points")
    dtheta = x.c2 - y.c2
    sin_dt = math.sin(dtheta)
    two_sh2 = 2.0 * math.sin(0.5 * dtheta) ** 2  # = 1 - cos(dtheta)
    cos_dt = math.cos(dtheta)

    if kind is SurfaceKind.EUCLIDEAN:
        r1, r2 = x.c1, y.c1
        u = np.array([(r1 - r2) + r2 * two_sh2, r2 * sin_dt])
        v = np.array([(r2 - r1) + r1 * two_sh2, -r1 * sin_dt])
        w_mat = np.array([[-cos_dt, -sin_dt], [sin_dt, -cos_dt]])
        grad_x = u / d
        grad_y = v / d
        mixed = w_mat / d - np.outer(u, v) / d ** 3
        return _PairDerivatives(d, grad_x, grad_y, mixed)

    if kind is SurfaceKind.HYPERBOLIC:
        r1, r2 = x.c1, y.c1
        sh1, ch1 = math.sinh(r1), math.cosh(r1)
        sh2, ch2 = math.sinh(r2), math.cosh(r2)
        u = np.array([math.sinh(r1 - r2) + ch1 * sh2 * two_sh2, sh2 * sin_dt])
        v = np.array([math.sinh(r2 - r1) + sh1 * ch2 * two_sh2, -sh1 * sin_dt])
        w_mat = np.array([
            [-math.cosh(r1 - r2) + ch1 * ch2 * two_sh2, -ch1 * sin_dt],
            [ch2 * sin_dt, -cos_dt],
        ])
        sd = math.sinh(d)
        cd = math.cosh(d)
        grad_x = u / sd
        grad_y = v / sd
        mixed = w_mat / sd - cd * np.outer(u, v) / sd ** 3
        return _PairDerivatives(d, grad_x, grad_y, mixed)

    if math.pi - d < CUT_LOCUS_TOL:
        raise CutLocusError(
            f"pair at distance {d:.6f} lies within {CUT_LOCUS_TOL} of the cut locus")
    p1, p2 = x.c1, y.c1
    s1, c1 = math.sin(p1), math.cos(p1)
    s2, c2 = math.sin(p2), math.cos(p2)
    u = np.array([math.sin(p2 - p1) - c1 * s2 * two_sh2, -s2 * sin_dt])
    v = np.array([math.sin(p1 - p2) - s1 * c2 * two_sh2, s1 * sin_dt])
    w_mat = np.array([
        [math.cos(p1 - p2) - c1 * c2 * two_sh2, c1 * sin_dt],
        [-c2 * sin_dt, cos_dt],
    ])
    sd = math.sin(d)
    cd = math.cos(d)
    # d = acos(C) flips the sign of every chain-rule factor.
    grad_x = -u / sd
    grad_y = -v / sd
    mixed = -w_mat / sd - cd * np.outer(u, v) / sd ** 3
    return _PairDerivatives(d, grad_x, grad_y, mixed)


def distance_gradient(kind, x: Point, y: Point) -> OneFormValue:
    """The 1-form d_x d(x, y) at x; unit length away from coincidence."""
    data = _pair_derivatives(kind, x, y)
    return OneFormValue(float(data.grad_x[0]), float(data.grad_x[1]))


def mixed_distance_hessian(kind, x: Point, y: Point, F1: float,
                           F2: float) -> BiTensor1:
    """F2 * (d_x d tensor d_y d) + F1 * (d_x d_y d) in unit coframes.

    This is the chain-rule expansion of d_x d_y F(d) for a radial profile F
    with F'(d) = F1 and F''(d) = F2, the building block of the 1-form kernel.
    """
    data = _pair_derivatives(kind, x, y)
    mat = F2 * np.outer(data.grad_x, data.grad_y) + F1 * data.mixed
    return BiTensor1.from_array(mat)


def hodge_star_1(value: OneFormValue) -> OneFormValue:
    """Hodge star on 1-forms: (a, b) -> (-b, a); squares to minus one."""
    return OneFormValue(-value.b, value.a)


def apply_i_plus_star(m: BiTensor1) -> BiTensor1:
    """(I + star_x star_y) acting on both legs of a two-point tensor."""
    return BiTensor1(
        m.m11 + m.m22, m.m12 - m.m21,
        m.m21 - m.m12, m.m22 + m.m11,
    )


def _radial_truncation(kind: SurfaceKind, decay: DecayHint, tol: float) -> float:
    """Radius beyond which the integral of |f| dA is below tol.

    Uses area growth 2 pi r (plane) or 2 pi sinh r <= pi e^r (hyperbolic)
    against the declared envelope.
    """
    if decay.kind == "bounded":
        raise DecayHintError("integrals over a noncompact surface need decay")
    if decay.bound == 0.0:
        return 1.0
    a = decay.rate
    if kind is SurfaceKind.EUCLIDEAN:
        if decay.kind == "gaussian":
            # tail <= 2 pi C int_R r e^{-a r^2} = pi C e^{-a R^2} / a
            val = math.pi * decay.bound / a
            arg = math.log(max(val / tol, 1.0)) / a
            return max(1.0, math.sqrt(arg))
        # exp: tail <= 2 pi C (R + 1/a) e^{-aR} / a; solve by iteration
        R = max(1.0, 2.0 / a)
        for _ in range(200):
            tail = _TWO_PI * decay.bound * (R + 1.0 / a) * math.exp(-a * R) / a
            if tail <= tol:
                return R
            R *= 1.25
        raise NonconvergenceError("could not truncate the planar integral")
    # hyperbolic
    if decay.kind == "exp" and a <= 1.0:
        raise DecayHintError("exponential decay on the hyperbolic plane must "
                             "have rate > 1 to beat the area growth")
    R = max(2.0, (2.0 / a if decay.kind == "gaussian" else 2.0))
    for _ in range(400):
        if decay.kind == "gaussian":
            slope = 2.0 * a * R - 1.0
            tail = math.pi * decay.bound * math.exp(R - a * R * R) / max(slope, 1e-9)
        else:
            tail = math.pi * decay.bound * math.exp((1.0 - a) * R) / (a - 1.0)
        if tail <= tol:
            return R
        R *= 1.25
    raise NonconvergenceError("could not truncate the hyperbolic integral")


def _surface_grid(kind: SurfaceKind, n_rad: int, n_ang: int, radius: float = 0.0):
    """Product quadrature grid: (c1 nodes, c2 nodes, weight matrix).

    Sphere: Gauss-Legendre in cos(phi) times uniform theta (trapezoid on the
    periodic direction is spectrally accurate).  Planes: composite Gauss
    panels in r up to `radius` with the area factor folded into the weights.
    """
    ang = np.arange(n_ang) * (_TWO_PI / n_ang)
    w_ang = np.full(n_ang, _TWO_PI / n_ang)
    if kind is SurfaceKind.SPHERE:
        xs, ws = _gauss_rule(n_rad)
        c1 = np.arccos(xs)
        w_rad = ws  # d(cos phi) absorbs the sin(phi) area factor
    else:
        base_x, base_w = _gauss_rule(15)
        n_panels = max(1, n_rad // 15)
        edges = np.linspace(0.0, radius, n_panels + 1)
        half = 0.5 * (edges[1] - edges[0])
        mids = 0.5 * (edges[:-1] + edges[1:])
        c1 = (mids[:, None] + half * base_x[None, :]).ravel()
        w_flat = np.tile(half * base_w, n_panels)
        area = c1 if kind is SurfaceKind.EUCLIDEAN else np.sinh(c1)
        w_rad = w_flat * area
    return c1, ang, np.outer(w_rad, w_ang)


def integrate_surface(kind, f, budget: ToleranceBudget = DEFAULT_BUDGET,
                      decay: DecayHint | None = None, vectorized: bool = False) -> float:
    """Integrate a scalar field over the whole surface.

    Parameters
    ----------
    f : callable
        Point -> float, or with ``vectorized=True`` a callable taking
        (c1_grid, c2_grid) meshgrid arrays and returning values.
    decay : DecayHint, optional
        Required on the plane and hyperbolic plane to truncate the domain.

    The grid is refined until two successive refinements agree to within the
    budget; the sphere needs no decay hint.
    """
    kind = SurfaceKind.parse(kind)
    radius = 0.0
    if kind is not SurfaceKind.SPHERE:
        if decay is None:
            raise DecayHintError("integration over a noncompact surface needs "
                                 "a decay hint")
        radius = _radial_truncation(kind, decay, 0.25 * budget.abs_tol)

    def evaluate(n_rad: int, n_ang: int) -> float:
        c1, c2, wt = _surface_grid(kind, n_rad, n_ang, radius)
        g1, g2 = np.meshgrid(c1, c2, indexing="ij")
        if vectorized:
            vals = np.asarray(f(g1, g2), dtype=float)
        else:
            vals = np.array([[float(f(Point(kind, a, b))) for b in c2] for a in c1])
        return float(np.sum(vals * wt))

    n_rad, n_ang = 32, 64
    prev = evaluate(n_rad, n_ang)
    for _ in range(max(2, budget.max_quad_depth // 4)):
        n_rad = int(n_rad * 3 / 2)
        n_ang = int(n_ang * 3 / 2)
        cur = evaluate(n_rad, n_ang)
        if abs(cur - prev) <= 0.5 * budget.abs_tol:
            return cur
        prev = cur
    raise NonconvergenceError("surface integral did not stabilize",
                              achieved=abs(cur - prev), requested=budget.abs_tol)
