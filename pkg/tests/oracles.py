"""Independent reference values: power series and plain bisection, no scipy."""

import math


def bessel_series(n: int, x: float, terms: int = 60) -> float:
    """``J_n(x)`` from its Maclaurin series (fine for ``|x| < 20``)."""
    half = 0.5 * x
    total, term = 0.0, half ** n / math.factorial(n)
    for k in range(terms):
        total += term
        term *= -half * half / ((k + 1) * (k + 1 + n))
    return total


def bessel_series_prime(n: int, x: float) -> float:
    if n == 0:
        return -bessel_series(1, x)
    return 0.5 * (bessel_series(n - 1, x) - bessel_series(n + 1, x))


def bisect(f, lo: float, hi: float, tol: float = 1e-15) -> float:
    flo = f(lo)
    assert flo * f(hi) < 0, "bracket has no sign change"
    while hi - lo > tol * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


J01 = bisect(lambda x: bessel_series(0, x), 2.0, 3.0)
J11 = bisect(lambda x: bessel_series(1, x), 3.0, 4.5)
J1P1 = bisect(lambda x: bessel_series_prime(1, x), 1.0, 2.5)


def robin_disk_kappas(beta: float, radius: float = 1.0):
    """``κ`` for the first ``ℓ = 0`` and ``ℓ = 1`` Robin modes of a disk.

    Conditions ``κ J_ℓ'(κR) + β J_ℓ(κR) = 0`` with the series for ``J_ℓ``.
    """
    out = []
    # ℓ = 0 roots lie in (0, j_{0,1}); ℓ = 1 roots in (j'_{1,1}, j_{1,1})
    for ell, lo, hi in ((0, 1e-9, J01), (1, J1P1, J11)):
        def f(x, ell=ell):
            return x * bessel_series_prime(ell, x) + beta * radius * bessel_series(ell, x)
        out.append(bisect(f, lo, hi) / radius)
    return tuple(out)


def robin_ball3d_kappa(beta: float, radius: float = 1.0) -> float:
    """``ℓ = 0`` Robin root of the unit 3-ball from ``z = sin(κr)/(κr)``."""
    def f(x):
        return x * math.cos(x) - math.sin(x) + beta * radius * math.sin(x)
    return bisect(f, 1e-6, math.pi) / radius
