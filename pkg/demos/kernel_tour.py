"""Tour of the point-pair kernels on the three constant-curvature surfaces.

Prints the scalar kernel, the 1-form frame matrix, and a few structural
facts: coincidence isotropy, the long-time limits, and unit mass.
"""

import math

from heatforms import Point, ToleranceBudget, k0, k1, k2, run_suite

BUDGET = ToleranceBudget(abs_tol=1e-10)


def main():
    x = Point("plane", 0.5, 0.2)
    t = 0.4

    print("scalar kernel at distance ~1, t = 0.4")
    for kind in ("plane", "sphere", "hyperbolic"):
        xa = Point(kind, 0.5, 0.2)
        ya = Point(kind, 1.2, 1.0)
        v = k0(kind, xa, ya, t, BUDGET)
        print(f"  {kind:11s} K0 = {v.value:.12f}  (err <= {v.err_est:.1e}, "
              f"{v.terms} terms)")

    print("\ncurvature orders the values at coincidence "
          "(heat spreads slowest where volume grows slowest):")
    for kind in ("hyperbolic", "plane", "sphere"):
        xa = Point(kind, 0.5, 0.2)
        print(f"  {kind:11s} K0(x,x) = {k0(kind, xa, xa, t, BUDGET).value:.12f}")

    print("\n1-form kernel: a 2x2 matrix pairing the polar coframes at x and y")
    for kind in ("plane", "sphere", "hyperbolic"):
        xa = Point(kind, 0.5, 0.2)
        ya = Point(kind, 1.2, 1.0)
        m = k1(kind, xa, ya, t, BUDGET).matrix.as_array()
        rows = "; ".join(" ".join(f"{v: .6f}" for v in row) for row in m)
        print(f"  {kind:11s} [{rows}]")

    print("\nat x = y the matrix collapses to c(t) I:")
    for kind in ("plane", "sphere", "hyperbolic"):
        xa = Point(kind, 0.5, 0.2)
        m = k1(kind, xa, xa, t, BUDGET).matrix
        print(f"  {kind:11s} c = {m.m11:.12f}, off-diagonal = {m.m12}")

    print("\nthe 2-form kernel is the scalar kernel read as a density:")
    y = Point("plane", 1.2, 1.0)
    print(f"  k2 - k0 on the plane: "
          f"{k2('plane', x, y, t).value - k0('plane', x, y, t).value!r}")

    print("\ntotal mass is 1 on every surface (checked with the kernel "
          "radially\nsymmetric about x, so the area integral is one "
          "dimensional):")
    for row in run_suite("normalization"):
        mark = "ok" if row.passed else "FAILED"
        print(f"  {row.name:32s} |mass - 1| = {row.measured:.1e}  {mark}")

    print("\nlong-time limits: sphere flattens to 1/(4 pi), the open "
          "surfaces decay to zero:")
    for kind, ref in (("sphere", 1.0 / (4 * math.pi)), ("plane", 0.0),
                      ("hyperbolic", 0.0)):
        xa = Point(kind, 0.5, 0.2)
        ya = Point(kind, 1.2, 1.0)
        v = k0(kind, xa, ya, 25.0, BUDGET).value
        print(f"  {kind:11s} K0(t=25) = {v:.3e}   (limit {ref:.3e})")


if __name__ == "__main__":
    main()
