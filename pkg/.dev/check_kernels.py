"""Validation battery for kernels.py, run before freezing test values."""

import math
import time

import numpy as np

import sys
sys.path.insert(0, "/root/pkg/src")

from heatforms.geometry import (BiTensor1, OneFormValue, Point, SurfaceKind,
                                apply_i_plus_star, distance)
from heatforms.kernels import (FormField, apply_k0, apply_k1, g1_scalar,
                               heat_residual, k0, k0_h2_mckean, k1, k2,
                               _g1_full, _k1_coincidence, _mckean_many,
                               _sphere_g1_raw, _h2_mass_tail, _h2_k0_majorant)
from heatforms.quadrature import DecayHint, ToleranceBudget

TIGHT = ToleranceBudget(abs_tol=1e-12)
MID = ToleranceBudget(abs_tol=1e-10)

rng = np.random.default_rng(20250819)


def sect(name):
    print(f"\n=== {name} ===")


# ---------------------------------------------------------------- euclid K1 vs closed form
sect("euclid K1 vs K0 * rotation(dtheta)")
worst = 0.0
for _ in range(40):
    r1, r2 = rng.uniform(0.2, 3.0, 2)
    t1, t2 = rng.uniform(0.0, 2 * math.pi, 2)
    t = rng.uniform(0.05, 2.0)
    x = Point("plane", r1, t1)
    y = Point("plane", r2, t2)
    val = k1("plane", x, y, t, TIGHT)
    d = distance("plane", x, y)
    kern = math.exp(-d * d / (4 * t)) / (4 * math.pi * t)
    dth = t1 - t2
    ref = kern * np.array([[math.cos(dth), math.sin(dth)],
                           [-math.sin(dth), math.cos(dth)]])
    worst = max(worst, float(np.max(np.abs(val.matrix.as_array() - ref))))
print(f"worst entry diff over 40 pairs: {worst:.3e}")
assert worst < 1e-13

# ---------------------------------------------------------------- -dG/dt = K0 (mean-zero on sphere)
sect("-dG/dt == K0 (minus 1/4pi on sphere)")
h = 1e-5
for kind, dd, tt in [("plane", 0.7, 0.4), ("sphere", 1.1, 0.5),
                     ("hyperbolic", 0.9, 0.6)]:
    gp = g1_scalar(kind, dd, tt + h, TIGHT)[0]
    gm = g1_scalar(kind, dd, tt - h, TIGHT)[0]
    lhs = -(gp - gm) / (2 * h)
    x = Point(kind, 0.3, 0.0)
    y = Point(kind, 0.3 + dd, 0.0)
    rhs = k0(kind, x, y, tt, TIGHT).value
    if kind == "sphere":
        rhs -= 1.0 / (4 * math.pi)
    print(f"{kind:10s} d={dd} t={tt}  diff={abs(lhs - rhs):.3e}")
    assert abs(lhs - rhs) < 1e-8

# ---------------------------------------------------------------- G_d and G_dd vs FD
sect("G_d vs FD of G, G_dd vs FD of G_d")
h = 1e-5
for kind, dd, tt in [("plane", 0.8, 0.3), ("sphere", 1.3, 0.4),
                     ("hyperbolic", 1.0, 0.5)]:
    g0, gd0, gdd0 = g1_scalar(kind, dd, tt, TIGHT)
    gp = g1_scalar(kind, dd + h, tt, TIGHT)
    gm = g1_scalar(kind, dd - h, tt, TIGHT)
    fd1 = (gp[0] - gm[0]) / (2 * h)
    fd2 = (gp[1] - gm[1]) / (2 * h)
    print(f"{kind:10s} |G_d-FD|={abs(gd0 - fd1):.3e}  |G_dd-FD|={abs(gdd0 - fd2):.3e}")
    assert abs(gd0 - fd1) < 1e-6 and abs(gdd0 - fd2) < 1e-6

# ---------------------------------------------------------------- G vs tau integral of K0
sect("G vs explicit tau integral")
from heatforms.quadrature import integrate_adaptive
for kind, dd, tt in [("sphere", 1.0, 0.3), ("hyperbolic", 0.8, 0.3)]:
    x = Point(kind, 0.2, 0.0)
    y = Point(kind, 0.2 + dd, 0.0)
    sub = 1.0 / (4 * math.pi) if kind == "sphere" else 0.0
    big = tt + (12.0 if kind == "sphere" else 90.0)
    val, _ = integrate_adaptive(
        lambda tau: k0(kind, x, y, tau, MID).value - sub, tt, big,
        ToleranceBudget(abs_tol=1e-9))
    g0 = g1_scalar(kind, dd, tt, TIGHT)[0]
    print(f"{kind:10s} |G - int| = {abs(g0 - val):.3e}")
    assert abs(g0 - val) < 2e-6

# ---------------------------------------------------------------- H2 dual routes
sect("H2 spectral vs single-integral")
worst = 0.0
for dd in [0.1, 0.5, 1.0, 2.0, 3.0]:
    for tt in [0.1, 0.5, 1.0, 2.0]:
        x = Point("hyperbolic", 0.0, 0.0)
        y = Point("hyperbolic", dd, 0.0)
        a = k0("hyperbolic", x, y, tt, TIGHT).value
        b = k0_h2_mckean(dd, tt, TIGHT)
        worst = max(worst, abs(a - b))
print(f"worst diff on 5x4 grid: {worst:.3e}")
assert worst < 1e-9

# ---------------------------------------------------------------- coincidence continuity
sect("K1 coincidence vs small-separation limit")
for kind in ["plane", "sphere", "hyperbolic"]:
    tt = 0.4
    c, _, _, _ = _k1_coincidence(SurfaceKind.parse(kind), tt, TIGHT)
    x = Point(kind, 0.7, 0.2)
    y = Point(kind, 0.7 + 1e-6, 0.2)
    near = k1(kind, x, y, tt, TIGHT).matrix.as_array()
    diff = float(np.max(np.abs(near - c * np.eye(2))))
    print(f"{kind:10s} c={c:.12f}  |K1(d=1e-6) - cI|={diff:.3e}")
    assert diff < 1e-4

# ---------------------------------------------------------------- sphere K1 oracle (freeze)
sect("sphere K1 by double FD of the generator series (oracle to freeze)")
t_or = 0.5
px, thx = 0.7, 0.0
py, thy = 1.2, 0.9


def g_of_coords(a, b, c, d):
    dist = distance("sphere", Point("sphere", a, b), Point("sphere", c, d))
    g, _, _, _ = _sphere_g1_raw(math.cos(dist), t_or, 1e-16)
    return float(g)


hh = 1e-4
mat = np.zeros((2, 2))
for i, (du1, du2) in enumerate([(hh, 0.0), (0.0, hh)]):
    for j, (dv1, dv2) in enumerate([(hh, 0.0), (0.0, hh)]):
        pp = g_of_coords(px + du1, thx + du2, py + dv1, thy + dv2)
        pm = g_of_coords(px + du1, thx + du2, py - dv1, thy - dv2)
        mp = g_of_coords(px - du1, thx - du2, py + dv1, thy + dv2)
        mm = g_of_coords(px - du1, thx - du2, py - dv1, thy - dv2)
        mat[i, j] = (pp - pm - mp + mm) / (4 * hh * hh)
mat[0, 1] /= math.sin(py)
mat[1, 0] /= math.sin(px)
mat[1, 1] /= math.sin(px) * math.sin(py)
oracle = apply_i_plus_star(BiTensor1.from_array(mat)).as_array()
print("oracle matrix entries:")
for row in oracle:
    print("  ", ", ".join(f"{v:.17g}" for v in row))
pipe = k1("sphere", Point("sphere", px, thx), Point("sphere", py, thy),
          t_or, TIGHT).matrix.as_array()
print("pipeline matrix entries:")
for row in pipe:
    print("  ", ", ".join(f"{v:.17g}" for v in row))
print(f"max |pipeline - oracle| = {np.max(np.abs(pipe - oracle)):.3e}")
assert np.max(np.abs(pipe - oracle)) < 1e-6

# ---------------------------------------------------------------- sphere gradient oracle (freeze)
sect("sphere distance gradient vs FD (oracle to freeze)")
from heatforms.geometry import distance_gradient
xs = Point("sphere", 0.7, 0.2)
ys = Point("sphere", 1.1, 1.0)
grad = distance_gradient("sphere", xs, ys)
hh = 1e-6
fd_a = (distance("sphere", Point("sphere", 0.7 + hh, 0.2), ys)
        - distance("sphere", Point("sphere", 0.7 - hh, 0.2), ys)) / (2 * hh)
fd_b = (distance("sphere", Point("sphere", 0.7, 0.2 + hh), ys)
        - distance("sphere", Point("sphere", 0.7, 0.2 - hh), ys)) / (2 * hh) / math.sin(0.7)
print(f"grad = ({grad.a:.17g}, {grad.b:.17g})")
print(f"FD   = ({fd_a:.17g}, {fd_b:.17g})  diff=({abs(grad.a-fd_a):.2e},{abs(grad.b-fd_b):.2e})")
assert abs(grad.a - fd_a) < 1e-9 and abs(grad.b - fd_b) < 1e-9

# ---------------------------------------------------------------- apply_k0 eigen decay (sphere)
sect("apply_k0 sphere: P_n(cos phi) decays by e^{-n(n+1)t}")
from heatforms.specfun import legendre_p
t_ap = 0.3
for n in (1, 2, 3):
    field = FormField(0, lambda p, n=n: float(legendre_p(n, math.cos(p.c1))))
    out = apply_k0("sphere", field, t_ap)
    worst = 0.0
    for phi in (0.5, 1.1, 2.0):
        got = out.fn(Point("sphere", phi, 0.3))
        want = math.exp(-n * (n + 1) * t_ap) * float(legendre_p(n, math.cos(phi)))
        worst = max(worst, abs(got - want))
    print(f"n={n}: worst pointwise error {worst:.3e}")
    assert worst < 1e-6

# ---------------------------------------------------------------- apply_k0 planes
sect("apply_k0 plane: Gaussian evolves in closed form; mass check on H2")
s0 = 0.2
t_ap = 0.35
field = FormField(0, lambda p: math.exp(-p.c1 ** 2 / (4 * s0)),
                  DecayHint("gaussian", 1.0 / (4 * s0), 1.0))
out = apply_k0("plane", field, t_ap)
worst = 0.0
for (rr, th) in [(0.0, 0.0), (0.9, 1.0)]:
    got = out.fn(Point("plane", rr, th))
    want = (s0 / (s0 + t_ap)) * math.exp(-rr ** 2 / (4 * (s0 + t_ap)))
    worst = max(worst, abs(got - want))
print(f"plane gaussian evolution: worst {worst:.3e}")
assert worst < 1e-7

ones = FormField(0, lambda p: 1.0, DecayHint("bounded", 0.0, 1.0))
for kind in ("plane", "hyperbolic"):
    got = apply_k0(kind, ones, 0.5).fn(Point(kind, 0.7, 0.1))
    print(f"{kind}: evolve constant 1 -> {got:.12f} (err {abs(got-1):.3e})")
    assert abs(got - 1.0) < 1e-7

# ---------------------------------------------------------------- apply_k1 sanity
sect("apply_k1: parallel field on the plane, eigenforms on the sphere")
const_dx = FormField(1, lambda p: OneFormValue(math.cos(p.c2), -math.sin(p.c2)),
                     DecayHint("bounded", 0.0, 1.0))
got = apply_k1("plane", const_dx, 0.4).fn(Point("plane", 1.1, 0.7))
want = OneFormValue(math.cos(0.7), -math.sin(0.7))
err = max(abs(got.a - want.a), abs(got.b - want.b))
print(f"plane dx invariance: err {err:.3e}")
assert err < 1e-7

t_ap = 0.3
df1 = FormField(1, lambda p: OneFormValue(-math.sin(p.c1), 0.0))
out = apply_k1("sphere", df1, t_ap)
worst = 0.0
for phi in (0.6, 1.2, 2.1):
    got = out.fn(Point("sphere", phi, 0.5))
    want = math.exp(-2 * t_ap) * -math.sin(phi)
    worst = max(worst, abs(got.a - want), abs(got.b))
print(f"sphere d(cos phi) eigen decay: worst {worst:.3e}")
assert worst < 1e-5

df2 = FormField(1, lambda p: OneFormValue(math.cos(p.c1) * math.cos(p.c2),
                                          -math.sin(p.c2)))
out2 = apply_k1("sphere", df2, t_ap)
worst = 0.0
for (phi, th) in [(0.7, 0.3), (1.4, 2.0)]:
    got = out2.fn(Point("sphere", phi, th))
    wa = math.exp(-2 * t_ap) * math.cos(phi) * math.cos(th)
    wb = math.exp(-2 * t_ap) * -math.sin(th)
    worst = max(worst, abs(got.a - wa), abs(got.b - wb))
print(f"sphere d(sin phi cos th) eigen decay: worst {worst:.3e}")
assert worst < 1e-5

# ---------------------------------------------------------------- intertwining
sect("d commutes with evolution (sphere, FD differential of the evolved scalar)")
t_ap = 0.5
f0 = FormField(0, lambda p: math.cos(p.c1))
ev0 = apply_k0("sphere", f0, t_ap)
ev1 = apply_k1("sphere", FormField(1, lambda p: OneFormValue(-math.sin(p.c1), 0.0)), t_ap)
hh = 1e-4
worst = 0.0
for (phi, th) in [(0.8, 0.2), (1.5, 1.1)]:
    da = (ev0.fn(Point("sphere", phi + hh, th)) - ev0.fn(Point("sphere", phi - hh, th))) / (2 * hh)
    db = (ev0.fn(Point("sphere", phi, th + hh)) - ev0.fn(Point("sphere", phi, th - hh))) / (2 * hh) / math.sin(phi)
    v = ev1.fn(Point("sphere", phi, th))
    worst = max(worst, abs(da - v.a), abs(db - v.b))
print(f"worst component diff: {worst:.3e}")
assert worst < 1e-4

# ---------------------------------------------------------------- heat residual
sect("finite-difference heat residual of the kernels themselves")
B = ToleranceBudget(abs_tol=1e-11)
for kind, x0, xp in [("plane", Point("plane", 0.3, 0.1), Point("plane", 1.1, 0.9)),
                     ("sphere", Point("sphere", 0.5, 0.2), Point("sphere", 1.3, 1.0)),
                     ("hyperbolic", Point("hyperbolic", 0.4, 0.3), Point("hyperbolic", 1.2, 1.1))]:
    tt = 0.45
    fields = [FormField(0, lambda p, T=T: k0(kind, x0, p, T, B).value)
              for T in (tt - 1e-3, tt, tt + 1e-3)]
    res0 = heat_residual(kind, fields, xp, 1e-3, 1e-2)

    v = np.array([0.6, 0.8])

    def omega(p, T):
        m = k1(kind, x0, p, T, B).matrix.as_array()
        out = v @ m
        return OneFormValue(float(out[0]), float(out[1]))

    fields1 = [FormField(1, lambda p, T=T: omega(p, T))
               for T in (tt - 1e-3, tt, tt + 1e-3)]
    t0 = time.time()
    res1 = heat_residual(kind, fields1, xp, 1e-3, 1e-2)
    print(f"{kind:10s} residual K0={res0:.3e}  K1={res1:.3e}  (K1 took {time.time()-t0:.1f}s)")
    assert res0 < 1e-3 and res1 < 1e-3

# ---------------------------------------------------------------- k2 and frozen basics
sect("k2 equals k0; plane coincidence value")
x = Point("plane", 0.5, 0.1)
y = Point("plane", 1.2, 2.0)
assert k2("plane", x, y, 0.7).value == k0("plane", x, y, 0.7).value
v = k0("plane", x, x, 0.25).value
print(f"plane K0(x,x,0.25) = {v!r}  vs 1/pi = {1/math.pi!r}")
assert abs(v - 1 / math.pi) < 1e-15

# ---------------------------------------------------------------- mass tail sanity
sect("H2 mass tail majorant sanity")
print(f"tail(R=0, t=0.5) = {_h2_mass_tail(0.0, 0.5):.4f} (must be >= 1)")
assert _h2_mass_tail(0.0, 0.5) >= 1.0
vals, _ = _mckean_many(np.array([1.0, 2.0]), 0.5, 1e-12)
for dd, vv in zip((1.0, 2.0), vals):
    assert vv <= _h2_k0_majorant(dd, 0.5)
print("pointwise majorant dominates sampled kernel values")

print("\nALL KERNEL CHECKS PASSED")
