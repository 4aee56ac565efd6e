"""Dev check: conical functions vs mpmath high-precision oracles."""
import mpmath as mp
import numpy as np

from heatforms.quadrature import ToleranceBudget
from heatforms.specfun import conical_p, conical_p1

mp.mp.dps = 40


def oracle_p(rho, r):
    # Mehler-Dirichlet with the same substitution, in 40-digit arithmetic.
    rho = mp.mpf(rho)
    r = mp.mpf(r)

    def g(w):
        s = r - w * w
        a = r - w * w / 2
        x = w * w / 2
        shc = mp.sinh(x) / x if x > 0 else mp.mpf(1)
        return mp.cos(rho * s) / mp.sqrt(mp.sinh(a) * shc)

    return (2 * mp.sqrt(2) / mp.pi) * mp.quad(g, [0, mp.sqrt(r)])


def oracle_p_legenp(rho, r):
    # Independent route: mpmath's Legendre function of complex degree.
    val = mp.legenp(mp.mpf("-0.5") + 1j * mp.mpf(rho), 0, mp.cosh(mp.mpf(r)))
    return val.real


tight = ToleranceBudget(abs_tol=1e-12)
print("rho     r      mine                 md-oracle            legenp-oracle")
for rho, r in [(0.5, 1.0), (0.0, 0.5), (2.0, 2.5), (10.0, 1.5), (25.0, 3.0),
               (40.0, 0.4), (1.0, 1e-5), (3.0, 9.0)]:
    mine = conical_p(rho, r, tight)
    o1 = float(oracle_p(rho, r))
    o2 = float(oracle_p_legenp(rho, r))
    print(f"{rho:5.1f} {r:6.4g} {mine:.16e} {o1 - mine: .2e} {o2 - mine: .2e}")

print("\nconical_p1 vs Richardson FD of the md oracle:")
for rho, r in [(0.5, 1.0), (2.0, 2.5), (10.0, 1.5), (0.0, 0.3), (25.0, 2.0)]:
    mine = conical_p1(rho, r, tight)
    h = mp.mpf("1e-8")
    rr = mp.mpf(r)
    d1 = (oracle_p(rho, rr + h) - oracle_p(rho, rr - h)) / (2 * h)
    d2 = (oracle_p(rho, rr + 2 * h) - oracle_p(rho, rr - 2 * h)) / (4 * h)
    fd = float((4 * d1 - d2) / 3)
    print(f"{rho:5.1f} {r:6.3g} {mine:.16e} {fd - mine: .2e}")
