"""Dev check: Mehler-Fock forward value oracle + roundtrip constant."""
import math

import mpmath as mp
import numpy as np

from heatforms.quadrature import DecayHint, ToleranceBudget
from heatforms.specfun import (RadialProfile, mehler_fock_forward,
                               mehler_fock_inverse)

mp.mp.dps = 30


def oracle_forward(rho, f):
    # 2*pi*int E_rho(r) f(r) sinh r dr with E via mpmath legenp order 1.
    rho = mp.mpf(rho)

    def g(r):
        nu = mp.mpf("-0.5") + 1j * rho
        e = mp.legenp(nu, 1, mp.cosh(r), type=3)
        return e.real * f(r) * mp.sinh(r)

    return float(2 * mp.pi * mp.quad(g, [0, 12]))


def oracle_forward_fd(rho, f):
    # Same but E from an FD derivative of legenp order 0 (convention-free).
    rho = mp.mpf(rho)
    h = mp.mpf("1e-10")

    def e(r):
        nu = mp.mpf("-0.5") + 1j * rho
        up = mp.legenp(nu, 0, mp.cosh(r + h)).real
        dn = mp.legenp(nu, 0, mp.cosh(r - h)).real
        return (up - dn) / (2 * h)

    return float(2 * mp.pi * mp.quad(lambda r: e(r) * f(r) * mp.sinh(r), [0, 12]))


f = lambda r: r * mp.exp(-r * r)
print("oracle forward (legenp m=1, type 3):", oracle_forward(0.5, f))
print("oracle forward (FD of m=0)        :", oracle_forward_fd(0.5, f))

profile = RadialProfile(fn=lambda r: r * math.exp(-r * r),
                        decay=DecayHint("gaussian", rate=0.9, bound=1.4),
                        name="gaussian")
budget = ToleranceBudget(abs_tol=1e-9)
mine = mehler_fock_forward(profile, 0.5, budget)
print("mine                              :", mine)

print("\nroundtrip f -> fhat -> f at a few radii:")
cache = {}


def fhat(rho):
    key = float(rho)
    if key not in cache:
        cache[key] = mehler_fock_forward(profile, key, budget)
    return cache[key]


for r in (0.3, 0.8, 1.5, 2.2):
    back = mehler_fock_inverse(fhat, r, budget, gaussian_rate=0.2, bound=10.0)
    print(f"  r={r}: f={profile(r):.10f} back={back:.10f} diff={back - profile(r):.2e}")
print("fhat evaluations:", len(cache))
