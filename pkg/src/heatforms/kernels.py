"""Heat kernels for 0-, 1-, and 2-forms on the three model surfaces.

The scalar kernel K0 is a closed form on the plane, a Legendre series on the
sphere, and a spectral integral over conical functions on the hyperbolic
plane (with an independent single-integral form kept as a cross-check).

The 1-form kernel is assembled from the scalar generator
G(d, t) = int_t^inf K0(d, tau) dtau (mean-zero part on the sphere): its radial
derivatives feed the mixed distance Hessian and the (I + star star)
symmetrizer.  On each surface G satisfies the radial identity
G_dd = -(L'/L)(d) G_d - K0 + 1/area, which supplies G_dd without a third
series or quadrature and is exact in the same sense the other two are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import exp1

from .errors import (CoincidentPointsError, CutLocusError, DecayHintError,
                     DomainError, NonconvergenceError)
from .geometry import (BiTensor1, OneFormValue, Point, SurfaceKind,
                       apply_i_plus_star, distance, _metric_profile,
                       _pair_derivatives)
from .quadrature import (DEFAULT_BUDGET, DecayHint, ToleranceBudget,
                         _gauss_rule, gaussian_tail_radius, integrate_adaptive)
from .specfun import _composite_gauss, _conical_many, _sinhc

__all__ = [
    "T_MIN",
    "HeatTime",
    "Kernel0Value",
    "Kernel1Value",
    "FormField",
    "k0",
    "k0_h2_mckean",
    "g1_scalar",
    "k1",
    "k2",
    "apply_k0",
    "apply_k1",
    "heat_residual",
]

# Below this time the sphere series needs hundreds of terms and finite
# difference residual checks drown in truncation error.
T_MIN = 1e-4

_FOUR_PI = 4.0 * math.pi
_GAMMA_14 = math.gamma(0.25)
_GAMMA_34 = math.gamma(0.75)
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class HeatTime:
    """Validated evolution time; the numerical floor is T_MIN."""

    t: float

    def __post_init__(self):
        t = float(self.t)
        if not math.isfinite(t) or t < T_MIN:
            raise DomainError(f"time must be finite and >= {T_MIN}")
        object.__setattr__(self, "t", t)


def _as_time(t) -> float:
    if isinstance(t, HeatTime):
        return t.t
    return HeatTime(float(t)).t


@dataclass(frozen=True)
class Kernel0Value:
    """Scalar kernel value with its error estimate and truncation metadata.

    terms counts series terms or integrand evaluations; radius is the series
    cutoff index or quadrature truncation radius (0 for closed forms).
    """

    value: float
    err_est: float
    terms: int
    radius: float


@dataclass(frozen=True)
class Kernel1Value:
    """2x2 frame-coupling matrix of the 1-form kernel plus diagnostics."""

    matrix: BiTensor1
    err_est: float
    terms: int
    radius: float


@dataclass(frozen=True)
class FormField:
    """A sampled form: degree 0/2 map Points to floats, degree 1 to
    OneFormValue.  Noncompact-surface integrations require the decay hint."""

    degree: int
    fn: object
    decay: DecayHint | None = None

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise DomainError("form degree must be 0, 1, or 2")

    def __call__(self, p: Point):
        return self.fn(p)


# ---------------------------------------------------------------------------
# sphere series

def _sphere_terms(t: float, tol_raw: float) -> int:
    """Smallest N with sum_{n>N} (2n+1) e^{-n(n+1)t} <= tol_raw.

    The summand is decreasing once (2s+1)^2 t >= 2, and there the sum is
    bounded by its integral, which is exactly e^{-N(N+1)t}/t.
    """
    monotone = int(math.ceil(0.5 * (math.sqrt(2.0 / t) - 1.0)))
    need = math.log(max(1.0, 1.0 / (t * tol_raw))) / t
    n_tail = int(math.ceil(0.5 * (-1.0 + math.sqrt(1.0 + 4.0 * need))))
    return max(1, monotone, n_tail)


def _sphere_k0_raw(x, t: float, tol_raw: float):
    """(sum_{n<=N} (2n+1) e^{-n(n+1)t} P_n(x), N, tail) without the 1/4pi."""
    x = np.asarray(x, dtype=float)
    n_max = _sphere_terms(t, tol_raw)
    total = np.ones_like(x)
    p_prev = np.ones_like(x)
    p_cur = x.copy()
    for n in range(1, n_max + 1):
        total = total + (2 * n + 1) * math.exp(-n * (n + 1) * t) * p_cur
        p_prev, p_cur = p_cur, ((2 * n + 1) * x * p_cur - n * p_prev) / (n + 1)
    tail = math.exp(-n_max * (n_max + 1) * t) / t
    return total, n_max, tail


def _sphere_g1_raw(x, t: float, tol: float):
    """Generator sums G = sum F(n,t) P_n and G_d = sum F(n,t) P1_n at cos d = x.

    F(n,t) = (2n+1) e^{-n(n+1)t} / (4 pi n (n+1)).  With |P_n| <= 1 and
    |P1_n| <= n(n+1)/2 both tails are <= e^{-N(N+1)t}/(8 pi t).
    """
    x = np.asarray(x, dtype=float)
    n_max = _sphere_terms(t, tol * 8.0 * math.pi)
    sin_d = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    g = np.zeros_like(x)
    gd = np.zeros_like(x)
    p_prev = np.ones_like(x)
    p_cur = x.copy()
    q_prev = np.zeros_like(x)
    q_cur = -sin_d
    for n in range(1, n_max + 1):
        f_n = (2 * n + 1) * math.exp(-n * (n + 1) * t) / (_FOUR_PI * n * (n + 1))
        g = g + f_n * p_cur
        gd = gd + f_n * q_cur
        p_prev, p_cur = p_cur, ((2 * n + 1) * x * p_cur - n * p_prev) / (n + 1)
        q_prev, q_cur = q_cur, ((2 * n + 1) * x * q_cur - (n + 1) * q_prev) / n
    tail = math.exp(-n_max * (n_max + 1) * t) / (8.0 * math.pi * t)
    return g, gd, n_max, tail


# ---------------------------------------------------------------------------
# hyperbolic plane: spectral route

def _h2_spectral(d: float, t: float, budget: ToleranceBudget, mode: str):
    """Common driver for the rho integrals behind K0, G, and G_d on H2.

    mode selects the spectral weight: "k0" uses rho tanh(pi rho) e^{-lam t},
    "g" divides by lam, "gd" additionally swaps the conical function for its
    radial derivative.  Returns (value, err_est, radius, evals).
    """
    tol = budget.abs_tol
    if mode == "gd":
        # |P1| grows at most linearly in rho with an O(1/sinh(d/2)) constant
        # from the boundary term of its integral representation.
        amp = 2.0 + d + 1.0 / math.sinh(0.5 * d)
    else:
        amp = 1.0
    bound = math.exp(-0.25 * t) * amp / (2.0 * math.pi)
    poly = 1 if mode == "k0" else (1 if mode == "gd" else 0)
    radius, tail = gaussian_tail_radius(t, 0.25 * tol, bound=bound,
                                        poly_degree=poly)
    radius = max(radius, 2.0 / math.sqrt(t))
    ctol = max(1e-13, 0.05 * tol / max(radius, 1.0))
    cb = ToleranceBudget(abs_tol=ctol, max_quad_depth=budget.max_quad_depth,
                         max_series_terms=budget.max_series_terms)
    evals = 0

    def integrand(rhos: np.ndarray) -> np.ndarray:
        nonlocal evals
        evals += rhos.size
        p, p1, _ = _conical_many(rhos, d, cb, need_p1=(mode == "gd"))
        lam = 0.25 + rhos * rhos
        w = rhos * np.tanh(np.pi * rhos) * np.exp(-lam * t)
        if mode != "k0":
            w = w / lam
        e = p1 if mode == "gd" else p
        return e * w / (2.0 * math.pi)

    value, qerr = integrate_adaptive(integrand, 0.0, radius, budget.part(0.5),
                                     vectorized=True)
    err = qerr + tail + radius * ctol / (2.0 * math.pi)
    return value, err, radius, evals


# ---------------------------------------------------------------------------
# hyperbolic plane: single-integral route and majorants

def _mckean_nodes(ds: np.ndarray, t: float, limit: float, n_panels: int):
    w, wt = _composite_gauss(limit, n_panels)
    half_wsq = 0.5 * w * w
    s = ds[:, None] + w[None, :] ** 2
    with np.errstate(over="ignore"):
        denom = np.sqrt(np.sinh(ds[:, None] + half_wsq[None, :])
                        * _sinhc(half_wsq)[None, :])
        core = 2.0 * s * np.exp(-s * s / (4.0 * t)) / denom
    core = np.where(np.isfinite(core), core, 0.0)
    return core @ wt


def _mckean_many(ds, t: float, tol: float, max_depth: int = 24):
    """Heat-kernel values on H2 at an array of distances, via the
    single-integral form with the substitution s = d + w^2.

    Shares one w grid across all distances; returns (values, err_bound).
    """
    ds = np.asarray(ds, dtype=float)
    if ds.size == 0:
        return ds.copy(), 0.0
    dmin = float(np.min(ds))
    c = math.sqrt(2.0) * math.exp(-0.25 * t) * (_FOUR_PI * t) ** -1.5
    limit = max(0.5, (4.0 * t * math.log(10.0)) ** 0.25)
    for _ in range(400):
        s_end = dmin + limit * limit
        sinhc_w = float(_sinhc(np.array([0.5 * limit * limit]))[0])
        with np.errstate(over="ignore"):
            denom = math.sqrt(min(math.sinh(dmin + 0.5 * limit * limit), 1e280)
                              * sinhc_w)
        tail = c * (2.0 * t / limit) * math.exp(-s_end * s_end / (4.0 * t)) / denom
        if tail <= 0.25 * tol:
            break
        limit *= 1.2
    else:
        raise NonconvergenceError("could not truncate the heat-kernel integral")
    step = max(min(0.5, (4.0 * t) ** 0.25), 1e-3)
    n_panels = max(6, int(math.ceil(limit / step)))
    prev = _mckean_nodes(ds, t, limit, n_panels)
    for _ in range(max_depth):
        n_panels *= 2
        cur = _mckean_nodes(ds, t, limit, n_panels)
        diff = c * float(np.max(np.abs(cur - prev)))
        prev = cur
        # the floor concedes what roundoff already spent
        floor = 64.0 * _EPS * c * (1.0 + float(np.max(np.abs(cur))))
        if diff <= max(0.25 * tol, floor):
            return c * cur, diff + tail
    raise NonconvergenceError("heat-kernel integral did not converge",
                              achieved=diff, requested=tol)


def _h2_gd_batch(s_nodes: np.ndarray, t: float, tol: float) -> np.ndarray:
    """Generator derivative G_d on H2 over an array of distances.

    Shares one rho grid across the batch (the spectral weight does not
    depend on the distance) and doubles it until the values stabilize.
    """
    s_nodes = np.asarray(s_nodes, dtype=float)
    s_min = float(np.min(s_nodes))
    amp = 2.0 + float(np.max(s_nodes)) + 1.0 / math.sinh(0.5 * max(s_min, 1e-12))
    bound = math.exp(-0.25 * t) * amp / (2.0 * math.pi)
    radius, tail = gaussian_tail_radius(t, 0.25 * tol, bound=bound,
                                        poly_degree=1)
    radius = max(radius, 2.0 / math.sqrt(t))
    ctol = max(1e-13, 0.05 * tol / max(radius, 1.0))
    cb = ToleranceBudget(abs_tol=ctol)

    def one_pass(n_panels: int) -> np.ndarray:
        rhos, wts = _composite_gauss(radius, n_panels)
        lam = 0.25 + rhos * rhos
        weight = wts * rhos * np.tanh(np.pi * rhos) * np.exp(-lam * t) / lam
        out = np.empty_like(s_nodes)
        for i, s in enumerate(s_nodes):
            _, p1, _ = _conical_many(rhos, float(s), cb, need_p1=True)
            out[i] = float(p1 @ weight) / (2.0 * math.pi)
        return out

    n_panels = max(8, int(math.ceil(radius * math.sqrt(max(t, 0.05)))))
    prev = one_pass(n_panels)
    for _ in range(12):
        n_panels *= 2
        cur = one_pass(n_panels)
        diff = float(np.max(np.abs(cur - prev)))
        prev = cur
        floor = 64.0 * _EPS * (1.0 + float(np.max(np.abs(cur))))
        if diff <= max(0.25 * tol, floor):
            return cur
    raise NonconvergenceError("generator batch did not converge",
                              achieved=diff, requested=tol)


def k0_h2_mckean(d: float, t, budget: ToleranceBudget = DEFAULT_BUDGET) -> float:
    """Hyperbolic scalar heat kernel by the single-integral form.

    Independent of the spectral route in k0; the two are cross-checked by the
    verification suite.
    """
    t = _as_time(t)
    d = float(d)
    if d < 0.0 or not math.isfinite(d):
        raise DomainError("distance must be finite and nonnegative")
    values, _ = _mckean_many(np.array([d]), t, budget.abs_tol)
    return float(values[0])


def _h2_k0_majorant(d: float, t: float) -> float:
    """Pointwise upper bound for the hyperbolic K0, valid for d > 0."""
    a = 0.5 * _GAMMA_14 * (4.0 * t) ** 0.25
    b = 0.5 * _GAMMA_34 * (4.0 * t) ** 0.75
    lead = math.sqrt(2.0) * math.exp(-0.25 * t) * (_FOUR_PI * t) ** -1.5
    with np.errstate(over="ignore"):
        sh = math.sinh(d) if d < 300.0 else 1e130
    return lead * math.exp(-d * d / (4.0 * t)) / math.sqrt(sh) * (a * d + b)


def _h2_mass_tail(radius: float, t: float) -> float:
    """Upper bound for int_{d > radius} K0 dA on the hyperbolic plane."""
    a = 0.5 * _GAMMA_14 * (4.0 * t) ** 0.25
    b = 0.5 * _GAMMA_34 * (4.0 * t) ** 0.75
    lead = 2.0 * math.pi * (_FOUR_PI * t) ** -1.5
    u = radius - t
    gauss = math.exp(-u * u / (4.0 * t))
    return lead * (2.0 * a * t * gauss
                   + (a * t + b) * math.sqrt(math.pi * t)
                   * math.erfc(u / (2.0 * math.sqrt(t))))


def _mass_tail(kind: SurfaceKind, radius: float, t: float) -> float:
    """Upper bound for the kernel mass beyond the given geodesic radius."""
    if kind is SurfaceKind.SPHERE:
        return 0.0
    if kind is SurfaceKind.EUCLIDEAN:
        return math.exp(-radius * radius / (4.0 * t))
    return _h2_mass_tail(radius, t)


def _mass_radius(kind: SurfaceKind, t: float, tol: float) -> float:
    radius = max(1.0, 3.0 * math.sqrt(t))
    for _ in range(200):
        if _mass_tail(kind, radius, t) <= tol:
            return radius
        radius *= 1.2
    raise NonconvergenceError("kernel mass tail would not fall below tolerance")


# ---------------------------------------------------------------------------
# scalar kernel

def _k0_dist(kind: SurfaceKind, d: float, t: float,
             budget: ToleranceBudget) -> Kernel0Value:
    if kind is SurfaceKind.EUCLIDEAN:
        value = math.exp(-d * d / (4.0 * t)) / (_FOUR_PI * t)
        return Kernel0Value(value, 8.0 * _EPS / (_FOUR_PI * t), 1, 0.0)
    if kind is SurfaceKind.SPHERE:
        raw, n_max, tail = _sphere_k0_raw(math.cos(d), t,
                                          budget.abs_tol * _FOUR_PI)
        return Kernel0Value(float(raw) / _FOUR_PI, tail / _FOUR_PI, n_max, 0.0)
    value, err, radius, evals = _h2_spectral(d, t, budget, "k0")
    return Kernel0Value(value, err, evals, radius)


def k0(kind, x: Point, y: Point, t,
       budget: ToleranceBudget = DEFAULT_BUDGET) -> Kernel0Value:
    """Scalar (0-form) heat kernel at a point pair."""
    kind = SurfaceKind.parse(kind)
    t = _as_time(t)
    d = distance(kind, x, y)
    return _k0_dist(kind, d, t, budget)


def _k0_radial_batch(kind: SurfaceKind, ds: np.ndarray, t: float, tol: float):
    """Kernel values over an array of distances; (values, err_bound)."""
    ds = np.asarray(ds, dtype=float)
    if kind is SurfaceKind.EUCLIDEAN:
        return np.exp(-ds * ds / (4.0 * t)) / (_FOUR_PI * t), 8.0 * _EPS / (_FOUR_PI * t)
    if kind is SurfaceKind.SPHERE:
        raw, _, tail = _sphere_k0_raw(np.cos(ds), t, tol * _FOUR_PI)
        return raw / _FOUR_PI, tail / _FOUR_PI
    return _mckean_many(ds, t, tol)


# ---------------------------------------------------------------------------
# 1-form generator

def _euclid_g1(d: float, t: float):
    z = d * d / (4.0 * t)
    kern = math.exp(-z) / (_FOUR_PI * t)
    g_val = -(2.0 * math.log(d) + float(exp1(z))) / _FOUR_PI if z < 700.0 \
        else -math.log(d) / (2.0 * math.pi)
    g_d = math.expm1(-z) / (2.0 * math.pi * d)
    g_dd = -g_d / d - kern
    return g_val, g_d, g_dd


def _g1_full(kind: SurfaceKind, d: float, t: float, budget: ToleranceBudget):
    """(G, G_d, G_dd, err_d1, err_d2, terms, radius) behind g1_scalar and k1."""
    if not math.isfinite(d) or d <= 0.0:
        raise CoincidentPointsError(
            "the 1-form generator is singular at zero separation; use the "
            "kernel's coincidence form instead")
    if kind is SurfaceKind.SPHERE and d >= math.pi:
        raise CutLocusError("generator derivatives are undefined at the cut locus")
    tol = budget.abs_tol
    if kind is SurfaceKind.EUCLIDEAN:
        g_val, g_d, g_dd = _euclid_g1(d, t)
        eps = 8.0 * _EPS * (abs(g_d) + 1.0 / (_FOUR_PI * t))
        return g_val, g_d, g_dd, eps, eps, 1, 0.0
    if kind is SurfaceKind.SPHERE:
        g_arr, gd_arr, n_max, tail = _sphere_g1_raw(math.cos(d), t, 0.25 * tol)
        k0_raw, _, k0_tail = _sphere_k0_raw(math.cos(d), t, 0.25 * tol * _FOUR_PI)
        kern = float(k0_raw) / _FOUR_PI
        g_d = float(gd_arr)
        g_dd = -g_d / math.tan(d) - kern + 1.0 / _FOUR_PI
        err1 = tail
        err2 = tail * abs(1.0 / math.tan(d)) + k0_tail / _FOUR_PI
        return float(g_arr), g_d, g_dd, err1, err2, n_max, 0.0
    g_val, err_g, radius, ev1 = _h2_spectral(d, t, budget.part(0.3), "g")
    g_d, err_d, _, ev2 = _h2_spectral(d, t, budget.part(0.3), "gd")
    kval = _k0_dist(kind, d, t, budget.part(0.3))
    g_dd = -g_d / math.tanh(d) - kval.value
    err2 = err_d / math.tanh(d) + kval.err_est
    return g_val, g_d, g_dd, err_d, err2, ev1 + ev2 + kval.terms, radius


def g1_scalar(kind, d: float, t, budget: ToleranceBudget = DEFAULT_BUDGET):
    """Scalar generator G(d, t) = int_t^inf K0(d, tau) dtau and its first two
    radial derivatives, as a (G, G_d, G_dd) triple.

    On the sphere the constant mode is removed (the tail integral of the full
    kernel diverges; only the mean-zero part decays), and on the plane G is
    the log-regularized antiderivative of G_d: both choices leave the 1-form
    kernel unchanged, which depends on G only through d-derivatives.
    """
    kind = SurfaceKind.parse(kind)
    t = _as_time(t)
    g_val, g_d, g_dd, _, _, _, _ = _g1_full(kind, float(d), t, budget)
    return g_val, g_d, g_dd


def _k1_coincidence(kind: SurfaceKind, t: float, budget: ToleranceBudget):
    """Diagonal value c(t) with K1(x, x, t) = c(t) I, from the d -> 0 limit
    of -(G_dd + G_d/L(d)), which the radial identity collapses to the
    coincidence kernel value (minus 1/4pi on the sphere)."""
    if kind is SurfaceKind.EUCLIDEAN:
        return 1.0 / (_FOUR_PI * t), 2.0 * _EPS / t, 1, 0.0
    if kind is SurfaceKind.SPHERE:
        raw, n_max, tail = _sphere_k0_raw(1.0, t, budget.abs_tol * _FOUR_PI)
        return (float(raw) - 1.0) / _FOUR_PI, tail / _FOUR_PI, n_max, 0.0
    value, err, radius, evals = _h2_spectral(0.0, t, budget, "k0")
    return value, err, evals, radius


def k1(kind, x: Point, y: Point, t,
       budget: ToleranceBudget = DEFAULT_BUDGET) -> Kernel1Value:
    """1-form heat kernel as a frame-coupling matrix in unit coframes.

    Away from coincidence this is (I + star_x star_y) applied to the mixed
    Hessian of G; at exact coincidence it is the isotropic limit c(t) I.
    """
    kind = SurfaceKind.parse(kind)
    t = _as_time(t)
    d = distance(kind, x, y)
    if d == 0.0:
        c, err, terms, radius = _k1_coincidence(kind, t, budget)
        return Kernel1Value(BiTensor1(c, 0.0, 0.0, c), 2.0 * err, terms, radius)
    _, g_d, g_dd, err1, err2, terms, radius = _g1_full(kind, d, t, budget)
    data = _pair_derivatives(kind, x, y)
    core = g_dd * np.outer(data.grad_x, data.grad_y) + g_d * data.mixed
    mat = apply_i_plus_star(BiTensor1.from_array(core))
    frame_scale = float(np.max(np.abs(data.mixed)))
    err = 2.0 * (err2 + err1 * frame_scale)
    return Kernel1Value(mat, err, terms, radius)


def k2(kind, x: Point, y: Point, t,
       budget: ToleranceBudget = DEFAULT_BUDGET) -> Kernel0Value:
    """2-form heat kernel as a density against unit volume forms at x and y.

    Both stars act as unit-density pairings, so the density coincides with
    the scalar kernel; the same value object is returned.
    """
    return k0(kind, x, y, t, budget)


# ---------------------------------------------------------------------------
# geodesic-chart quadrature for applying the kernels

def _base_frames(kind: SurfaceKind, x: Point):
    """Embedded position and polar frame vectors at x (3-vectors; the plane
    embeds in the z = 0 slice)."""
    c, s = math.cos(x.c2), math.sin(x.c2)
    if kind is SurfaceKind.EUCLIDEAN:
        pos = np.array([x.c1 * c, x.c1 * s, 0.0])
        e1 = np.array([c, s, 0.0])
        e2 = np.array([-s, c, 0.0])
    elif kind is SurfaceKind.SPHERE:
        sp, cp = math.sin(x.c1), math.cos(x.c1)
        pos = np.array([sp * c, sp * s, cp])
        e1 = np.array([cp * c, cp * s, -sp])
        e2 = np.array([-s, c, 0.0])
    else:
        sh, ch = math.sinh(x.c1), math.cosh(x.c1)
        pos = np.array([ch, sh * c, sh * s])
        e1 = np.array([sh, ch * c, ch * s])
        e2 = np.array([0.0, -s, c])
    return pos, e1, e2


def _chart_points(kind: SurfaceKind, x: Point, s_grid: np.ndarray,
                  psi_grid: np.ndarray, need_frames: bool):
    """Map the geodesic polar chart at x to global coordinates.

    Returns (c1, c2) meshes over (s, psi) and, when requested, the components
    (p, q) of the outgoing geodesic covector at the target in the target's
    polar coframe.
    """
    pos, e1, e2 = _base_frames(kind, x)
    ss = s_grid[:, None]
    cpsi = np.cos(psi_grid)[None, :]
    spsi = np.sin(psi_grid)[None, :]
    w_vec = (e1[None, None, :] * cpsi[..., None]
             + e2[None, None, :] * spsi[..., None])
    if kind is SurfaceKind.EUCLIDEAN:
        y_vec = pos[None, None, :] + ss[..., None] * w_vec
        c1 = np.hypot(y_vec[..., 0], y_vec[..., 1])
        c2 = np.arctan2(y_vec[..., 1], y_vec[..., 0])
        if not need_frames:
            return c1, c2, None, None
        ct, st = np.cos(c2), np.sin(c2)
        p = w_vec[..., 0] * ct + w_vec[..., 1] * st
        q = -w_vec[..., 0] * st + w_vec[..., 1] * ct
        return c1, c2, p, q
    if kind is SurfaceKind.SPHERE:
        y_vec = (np.cos(ss)[..., None] * pos[None, None, :]
                 + np.sin(ss)[..., None] * w_vec)
        c1 = np.arccos(np.clip(y_vec[..., 2], -1.0, 1.0))
        c2 = np.arctan2(y_vec[..., 1], y_vec[..., 0])
        if not need_frames:
            return c1, c2, None, None
        t_vec = (-np.sin(ss)[..., None] * pos[None, None, :]
                 + np.cos(ss)[..., None] * w_vec)
        ct, st = np.cos(c2), np.sin(c2)
        cp, sp = np.cos(c1), np.sin(c1)
        p = (t_vec[..., 0] * cp * ct + t_vec[..., 1] * cp * st
             - t_vec[..., 2] * sp)
        q = -t_vec[..., 0] * st + t_vec[..., 1] * ct
        return c1, c2, p, q
    y_vec = (np.cosh(ss)[..., None] * pos[None, None, :]
             + np.sinh(ss)[..., None] * w_vec)
    c1 = np.arccosh(np.maximum(1.0, y_vec[..., 0]))
    c2 = np.arctan2(y_vec[..., 2], y_vec[..., 1])
    if not need_frames:
        return c1, c2, None, None
    t_vec = (np.sinh(ss)[..., None] * pos[None, None, :]
             + np.cosh(ss)[..., None] * w_vec)
    ct, st = np.cos(c2), np.sin(c2)
    sh, ch = np.sinh(c1), np.cosh(c1)
    # Lorentz pairing <A, B> = -A0 B0 + A1 B1 + A2 B2 against the unit
    # radial and angular frame vectors at the target.
    p = (-t_vec[..., 0] * sh + t_vec[..., 1] * ch * ct
         + t_vec[..., 2] * ch * st)
    q = -t_vec[..., 1] * st + t_vec[..., 2] * ct
    return c1, c2, p, q


def _radial_rule(kind: SurfaceKind, t: float, tol: float,
                 n_rad: int, radius: float):
    """Radial nodes and weights with the area factor absorbed."""
    if kind is SurfaceKind.SPHERE:
        xs, ws = _gauss_rule(n_rad)
        return np.arccos(xs), ws
    n_panels = max(4, n_rad // 15)
    nodes, wts = _composite_gauss(radius, n_panels)
    area = nodes if kind is SurfaceKind.EUCLIDEAN else np.sinh(nodes)
    return nodes, wts * area


def _field_bound(field: FormField, kind: SurfaceKind) -> float:
    if kind is SurfaceKind.SPHERE:
        return 1.0
    if field.decay is None:
        raise DecayHintError("applying the kernel on a noncompact surface "
                             "needs the field's decay hint")
    return field.decay.bound


def _evolved_hint(decay: DecayHint | None, t: float) -> DecayHint | None:
    """Decay hint for an evolved field: heat flow widens a Gaussian envelope
    (variance grows by 4t), scales an exponential one, and preserves sup
    bounds by the maximum principle."""
    if decay is None:
        return None
    if decay.kind == "gaussian":
        return DecayHint("gaussian", rate=decay.rate / (1.0 + 4.0 * decay.rate * t),
                         bound=decay.bound)
    if decay.kind == "exp":
        return DecayHint("exp", rate=decay.rate,
                         bound=2.0 * decay.bound * math.exp(decay.rate ** 2 * t))
    return decay


def apply_k0(kind, field: FormField, t,
             budget: ToleranceBudget = DEFAULT_BUDGET) -> FormField:
    """Heat evolution of a scalar field: x -> int K0(x, y, t) f(y) dA_y.

    The integral runs in the geodesic polar chart centered at each evaluation
    point, where the kernel is purely radial; the grid is Gauss in cos s by
    uniform angle on the sphere and Gauss panels to the kernel-mass radius on
    the planes.  The returned field evaluates lazily.
    """
    kind = SurfaceKind.parse(kind)
    t = _as_time(t)
    if field.degree != 0:
        raise DomainError("apply_k0 expects a degree-0 field")
    sup = _field_bound(field, kind)
    tol = budget.abs_tol
    radius = 0.0 if kind is SurfaceKind.SPHERE else \
        _mass_radius(kind, t, 0.25 * tol / max(sup, 1e-300))

    def evaluate(x: Point) -> float:
        def one_pass(n_rad: int, n_ang: int) -> float:
            s_nodes, s_wts = _radial_rule(kind, t, tol, n_rad, radius)
            psi = np.arange(n_ang) * (2.0 * math.pi / n_ang)
            kern, _ = _k0_radial_batch(kind, s_nodes, t,
                                       max(1e-14, 0.1 * tol / max(sup, 1e-300)
                                           / max(1.0, radius * radius)))
            c1, c2, _, _ = _chart_points(kind, x, s_nodes, psi, False)
            vals = np.empty_like(c1)
            for i in range(c1.shape[0]):
                for j in range(c1.shape[1]):
                    vals[i, j] = float(field.fn(Point(kind, c1[i, j], c2[i, j])))
            ang_w = 2.0 * math.pi / n_ang
            return float(np.sum((kern * s_wts) @ (vals * ang_w)))

        n_rad, n_ang = (64, 128) if kind is SurfaceKind.SPHERE else (90, 96)
        prev = one_pass(n_rad, n_ang)
        for _ in range(3):
            n_rad = int(n_rad * 3 / 2)
            n_ang = int(n_ang * 3 / 2)
            cur = one_pass(n_rad, n_ang)
            if abs(cur - prev) <= 0.5 * tol:
                return cur
            prev = cur
        raise NonconvergenceError("kernel application did not stabilize",
                                  achieved=abs(cur - prev), requested=tol)

    return FormField(0, evaluate, _evolved_hint(field.decay, t))


def _kappa_batch(kind: SurfaceKind, s_nodes: np.ndarray, t: float, tol: float,
                 budget: ToleranceBudget) -> np.ndarray:
    """Radial profile kappa(s) with K1 = kappa(d) I in geodesic-adapted
    frames at both points; kappa = G_dd + G_d / L(d), reduced through the
    radial identity so only K0 and G_d are ever evaluated."""
    kern, _ = _k0_radial_batch(kind, s_nodes, t, tol)
    if kind is SurfaceKind.EUCLIDEAN:
        return -kern
    if kind is SurfaceKind.SPHERE:
        _, gd, _, _ = _sphere_g1_raw(np.cos(s_nodes), t, tol)
        return -kern + 1.0 / _FOUR_PI + np.tan(0.5 * s_nodes) * gd
    gd = _h2_gd_batch(s_nodes, t, max(tol, 0.01 * budget.abs_tol))
    return -kern - np.tanh(0.5 * s_nodes) * gd


def apply_k1(kind, field: FormField, t,
             budget: ToleranceBudget = DEFAULT_BUDGET) -> FormField:
    """Heat evolution of a 1-form: x -> int K1(x, y, t) wedge star_y nu(y).

    In frames adapted to the geodesic between the points the kernel matrix is
    kappa(d) I, so the integrand needs only the radial profile kappa, the
    direction of departure at x, and the direction of arrival at y.
    """
    kind = SurfaceKind.parse(kind)
    t = _as_time(t)
    if field.degree != 1:
        raise DomainError("apply_k1 expects a degree-1 field")
    sup = _field_bound(field, kind)
    tol = budget.abs_tol
    radius = 0.0 if kind is SurfaceKind.SPHERE else \
        _mass_radius(kind, t, 0.125 * tol / max(sup, 1e-300))

    def evaluate(x: Point) -> OneFormValue:
        def one_pass(n_rad: int, n_ang: int):
            s_nodes, s_wts = _radial_rule(kind, t, tol, n_rad, radius)
            psi = np.arange(n_ang) * (2.0 * math.pi / n_ang)
            kap = _kappa_batch(kind, s_nodes, t,
                               max(1e-14, 0.1 * tol / max(sup, 1e-300)
                                   / max(1.0, radius * radius)),
                               budget.part(0.25))
            c1, c2, p, q = _chart_points(kind, x, s_nodes, psi, True)
            na = np.empty_like(c1)
            nb = np.empty_like(c1)
            for i in range(c1.shape[0]):
                for j in range(c1.shape[1]):
                    v = field.fn(Point(kind, c1[i, j], c2[i, j]))
                    na[i, j] = v.a
                    nb[i, j] = v.b
            # Adapted components of nu at the target; the arrival coframe is
            # (p, q) and its star is (-q, p).
            nu1 = na * p + nb * q
            nu2 = -na * q + nb * p
            cpsi = np.cos(psi)[None, :]
            spsi = np.sin(psi)[None, :]
            integ_a = nu1 * (-cpsi) + nu2 * spsi
            integ_b = nu1 * (-spsi) + nu2 * (-cpsi)
            ang_w = 2.0 * math.pi / n_ang
            out_a = float(np.sum((kap * s_wts) @ (integ_a * ang_w)))
            out_b = float(np.sum((kap * s_wts) @ (integ_b * ang_w)))
            return out_a, out_b

        n_rad, n_ang = (64, 128) if kind is SurfaceKind.SPHERE else (90, 96)
        pa, pb = one_pass(n_rad, n_ang)
        for _ in range(3):
            n_rad = int(n_rad * 3 / 2)
            n_ang = int(n_ang * 3 / 2)
            ca, cb = one_pass(n_rad, n_ang)
            if max(abs(ca - pa), abs(cb - pb)) <= 0.5 * tol:
                return OneFormValue(ca, cb)
            pa, pb = ca, cb
        raise NonconvergenceError("kernel application did not stabilize",
                                  achieved=max(abs(ca - pa), abs(cb - pb)),
                                  requested=tol)

    return FormField(1, evaluate, _evolved_hint(field.decay, t))


# ---------------------------------------------------------------------------
# residual of the componentwise heat operator

def heat_residual(kind, fields, x: Point, h_t: float = 1e-3,
                  h_space: float = 1e-2) -> float:
    """Finite-difference residual of (partial_t + Delta) on a sampled form.

    fields is a (before, at, after) triple of FormField snapshots at times
    (t - h_t, t, t + h_t).  The spatial part uses the componentwise operator
    in geodesic polar coordinates: scalar rows -u_rr - (L'/L) u_r - u_tt/L^2,
    and for 1-forms the coupled rows that additionally carry the zeroth-order
    term u/L^2 and the cross terms +-2 (L'/L^2) partial_theta of the other
    component.  Returns the largest component magnitude.
    """
    kind = SurfaceKind.parse(kind)
    before, mid, after = fields
    if not (before.degree == mid.degree == after.degree):
        raise DomainError("field history must have a single degree")
    if h_t <= 0.0 or h_space <= 0.0:
        raise DomainError("step sizes must be positive")
    r, th = x.c1, x.c2
    top = math.pi if kind is SurfaceKind.SPHERE else math.inf
    if r - h_space <= 0.0 or r + h_space >= top:
        raise DomainError("stencil too close to a coordinate pole")
    metric, metric_d = _metric_profile(kind)
    lam = metric(r)
    lam_ratio = metric_d(r) / lam

    stencil = [Point(kind, r, th), Point(kind, r + h_space, th),
               Point(kind, r - h_space, th), Point(kind, r, th + h_space),
               Point(kind, r, th - h_space)]

    if mid.degree != 1:
        u = [float(mid.fn(p)) for p in stencil]
        u_t = (float(after.fn(stencil[0])) - float(before.fn(stencil[0]))) / (2.0 * h_t)
        u_r = (u[1] - u[2]) / (2.0 * h_space)
        u_rr = (u[1] - 2.0 * u[0] + u[2]) / h_space ** 2
        u_tt = (u[3] - 2.0 * u[0] + u[4]) / h_space ** 2
        return abs(u_t - u_rr - lam_ratio * u_r - u_tt / lam ** 2)

    vals = [mid.fn(p) for p in stencil]
    b = [v.a for v in vals]
    c = [v.b for v in vals]
    b_t = (after.fn(stencil[0]).a - before.fn(stencil[0]).a) / (2.0 * h_t)
    c_t = (after.fn(stencil[0]).b - before.fn(stencil[0]).b) / (2.0 * h_t)
    b_r = (b[1] - b[2]) / (2.0 * h_space)
    c_r = (c[1] - c[2]) / (2.0 * h_space)
    b_rr = (b[1] - 2.0 * b[0] + b[2]) / h_space ** 2
    c_rr = (c[1] - 2.0 * c[0] + c[2]) / h_space ** 2
    b_th = (b[3] - b[4]) / (2.0 * h_space)
    c_th = (c[3] - c[4]) / (2.0 * h_space)
    b_tt = (b[3] - 2.0 * b[0] + b[4]) / h_space ** 2
    c_tt = (c[3] - 2.0 * c[0] + c[4]) / h_space ** 2
    inv2 = 1.0 / lam ** 2
    coup = 2.0 * metric_d(r) * inv2
    row_b = (b_t - b_rr - lam_ratio * b_r + b[0] * inv2 - b_tt * inv2
             + coup * c_th)
    row_c = (c_t - c_rr - lam_ratio * c_r + c[0] * inv2 - c_tt * inv2
             - coup * b_th)
    return max(abs(row_b), abs(row_c))
