"""Bessel functions of real nonnegative order and bracketed root finding.

Values of :math:`J_\\nu` come from :func:`scipy.special.jv` (Amos/Cephes),
which meets the 1e-12 relative accuracy the ball solvers need on the
desk-scale range (order <= 10, argument <= 200).  The normalized form
``bessel_j_normalized`` removes the ``x**nu`` factor so that radial
eigenfunctions can be evaluated at the origin without a 0/0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize, special

from .errors import ConvergenceError, DomainError, NoSignChangeError

__all__ = [
    "Bracket",
    "bessel_j",
    "bessel_j_prime",
    "bessel_j_normalized",
    "find_root",
    "scan_brackets",
]

DEFAULT_ROOT_TOL = 1e-12
DEFAULT_MAXITER = 200
DEFAULT_SCAN_STEP = 0.05


def _check_order(order):
    order = np.asarray(order, dtype=float)
    if not np.all(np.isfinite(order)) or np.any(order < 0):
        raise DomainError(f"Bessel order must be finite and >= 0, got {order}")
    return order


def _check_arg(x, strict=False):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("Bessel argument must be finite")
    if np.any(x < 0) or (strict and np.any(x <= 0)):
        raise DomainError(f"Bessel argument out of range: {x}")
    return x


def _scalar_or_array(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def bessel_j(order, x):
    """Bessel function of the first kind ``J_order(x)``.

    Parameters
    ----------
    order : float or array_like
        Nonnegative order.
    x : float or array_like
        Nonnegative argument.

    Returns
    -------
    float or ndarray
    """
    order = _check_order(order)
    x = _check_arg(x)
    return _scalar_or_array(special.jv(order, x))


def bessel_j_prime(order, x):
    """Derivative ``J'_order(x)`` from ``J'_v = (J_{v-1} - J_{v+1}) / 2``.

    The half-difference form is the same recurrence as
    ``J_{v-1} - (v/x) J_v`` after eliminating ``J_v`` and avoids the
    division by ``x`` near the origin.
    """
    order = _check_order(order)
    x = _check_arg(x)
    if np.any((x == 0) & (order < 1)):
        raise DomainError("J' at x = 0 is not evaluated for order < 1")
    return _scalar_or_array(0.5 * (special.jv(order - 1.0, x) - special.jv(order + 1.0, x)))


def bessel_j_normalized(order, x):
    """Entire function ``Gamma(v+1) (2/x)**v J_v(x)``, equal to 1 at ``x = 0``.

    Its derivative is ``-x * bessel_j_normalized(v + 1, x) / (2 (v + 1))``.
    """
    nu = float(_check_order(order))
    x = _check_arg(x)
    out = np.empty_like(x)
    small = x < 1e-4
    xs = x[small]
    x2 = xs * xs
    out[small] = 1.0 - x2 / (4.0 * (nu + 1.0)) + x2 * x2 / (32.0 * (nu + 1.0) * (nu + 2.0))
    xl = x[~small]
    if xl.size:
        scale = np.exp(special.gammaln(nu + 1.0) + nu * np.log(2.0 / xl))
        out[~small] = scale * special.jv(nu, xl)
    return _scalar_or_array(out)


@dataclass(frozen=True)
class Bracket:
    """Interval ``[lo, hi]`` on which a function changes sign."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise NoSignChangeError(f"empty bracket [{self.lo}, {self.hi}]")
        if not self.f_lo * self.f_hi < 0:
            raise NoSignChangeError(
                f"no sign change on [{self.lo}, {self.hi}]: f = {self.f_lo}, {self.f_hi}"
            )

    @classmethod
    def from_function(cls, f: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        return cls(float(lo), float(hi), float(f(lo)), float(f(hi)))


def find_root(f: Callable[[float], float], bracket: Bracket, tol: float = DEFAULT_ROOT_TOL,
              maxiter: int = DEFAULT_MAXITER) -> float:
    """Root of ``f`` inside ``bracket`` by Brent's bisection/secant hybrid.

    Raises
    ------
    NoSignChangeError
        If the bracket does not enclose a sign change.
    ConvergenceError
        If ``maxiter`` iterations do not shrink the bracket below ``tol``.
    """
    if not isinstance(bracket, Bracket):
        raise TypeError("bracket must be a Bracket")
    if not bracket.f_lo * bracket.f_hi < 0:
        raise NoSignChangeError("bracket invariant violated")
    try:
        root = optimize.brentq(f, bracket.lo, bracket.hi, xtol=tol, rtol=4 * np.finfo(float).eps,
                               maxiter=maxiter)
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc
    except ValueError as exc:
        raise NoSignChangeError(str(exc)) from exc
    return float(root)


def scan_brackets(f: Callable[[float], float], lo: float, hi: float,
                  step: float = DEFAULT_SCAN_STEP, count: int | None = None) -> list[Bracket]:
    """Brackets of the sign changes of ``f`` on ``(lo, hi]`` found by a uniform scan.

    Stops early once ``count`` brackets are collected.  A sample that is an
    exact zero is nudged by ``step / 1000`` so the zero ends up strictly
    inside a bracket.
    """
    n = max(1, int(math.ceil((hi - lo) / step)))
    nudge = 1e-3 * (hi - lo) / n
    brackets = []
    x_prev, f_prev = lo, float(f(lo))
    if f_prev == 0.0:
        x_prev += nudge
        f_prev = float(f(x_prev))
    for i in range(1, n + 1):
        x = lo + (hi - lo) * i / n
        fx = float(f(x))
        if fx == 0.0:
            x += nudge
            fx = float(f(x))
        if f_prev * fx < 0:
            brackets.append(Bracket(x_prev, x, f_prev, fx))
            if count is not None and len(brackets) >= count:
                break
        x_prev, f_prev = x, fx
    return brackets
