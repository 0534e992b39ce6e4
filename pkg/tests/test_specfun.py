import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from oracles import J01, J11, bessel_series, bessel_series_prime
from robinspec.errors import DomainError, NoSignChangeError
from robinspec.specfun import (
    Bracket,
    bessel_j,
    bessel_j_normalized,
    bessel_j_prime,
    find_root,
    scan_brackets,
)


@pytest.mark.parametrize("order", [0, 1, 2, 3])
def test_bessel_j_matches_series(order):
    x = np.linspace(0.0, 12.0, 49)
    expected = [bessel_series(order, t) for t in x]
    assert_allclose(bessel_j(order, x), expected, atol=1e-13)


@pytest.mark.parametrize("order", [0, 1, 2])
def test_bessel_j_prime_matches_series(order):
    x = np.linspace(0.1, 10.0, 25)
    expected = [bessel_series_prime(order, t) for t in x]
    assert_allclose(bessel_j_prime(order, x), expected, atol=1e-13)


def test_bessel_j_scalar_in_scalar_out():
    assert isinstance(bessel_j(0, 1.0), float)
    assert bessel_j(0, 0.0) == 1.0


def test_bessel_j_rejects_bad_input():
    with pytest.raises(DomainError):
        bessel_j(-1, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0, math.nan)


@pytest.mark.parametrize("order", [0.0, 0.5, 1.0, 2.5])
def test_normalized_bessel_near_and_away_from_zero(order):
    # Γ(v+1)(2/x)^v J_v(x) = Σ (-x²/4)^k Γ(v+1) / (k! Γ(v+k+1))
    def series(x):
        return sum((-x * x / 4) ** k * math.gamma(order + 1)
                   / (math.factorial(k) * math.gamma(order + k + 1)) for k in range(40))
    x = np.array([0.0, 1e-8, 1e-5, 1e-3, 0.5, 3.0, 7.0])
    assert_allclose(bessel_j_normalized(order, x), [series(t) for t in x], rtol=1e-12, atol=1e-14)


def test_find_root_first_zero_of_j0():
    j0 = lambda x: bessel_j(0, x)  # noqa: E731
    root = find_root(j0, Bracket.from_function(j0, 2.0, 3.0))
    assert abs(root - J01) < 1e-10


def test_bracket_requires_sign_change():
    with pytest.raises(NoSignChangeError):
        Bracket.from_function(lambda x: x * x + 1, -1.0, 1.0)
    with pytest.raises(NoSignChangeError):
        Bracket(2.0, 1.0, -1.0, 1.0)


def test_find_root_rejects_plain_tuples():
    with pytest.raises(TypeError):
        find_root(np.sin, (3.0, 3.5))


def test_scan_brackets_finds_consecutive_zeros():
    brackets = scan_brackets(lambda x: bessel_j(1, x), 0.5, 12.0)
    roots = [find_root(lambda x: bessel_j(1, x), b) for b in brackets]
    assert_allclose(roots[0], J11, atol=1e-10)
    assert len(roots) == 3
    assert np.all(np.diff(roots) > 0)


def test_scan_brackets_count_limit():
    brackets = scan_brackets(np.sin, 0.1, 20.0, count=2)
    assert len(brackets) == 2
    assert brackets[0].lo < math.pi < brackets[0].hi
