import mpmath as mp
import numpy as np
import pytest

from nfam.bessel import bessel_j, bessel_j_orders

mp.mp.dps = 50


def series_oracle(n, x):
    """Ascending power series sum_m (-1)^m (x/2)^(2m+n) / (m! (m+n)!) in 50 digits."""
    x = mp.mpf(x)
    term = (x / 2) ** n / mp.factorial(n)
    total = term
    m = 0
    while abs(term) > mp.mpf(10) ** -45 * max(abs(total), mp.mpf(10) ** -300) or m < 5:
        m += 1
        term *= -((x / 2) ** 2) / (m * (m + n))
        total += term
    return float(total)


def recurrence_oracle(nmax, x):
    """Independent high-precision Miller recurrence (different start and precision)."""
    x = mp.mpf(x)
    top = int(abs(x)) + nmax + 120
    j = [mp.mpf(0)] * (top + 2)
    j[top] = mp.mpf(10) ** -40
    for k in range(top, 0, -1):
        j[k - 1] = 2 * k / x * j[k] - j[k + 1]
    norm = j[0] + 2 * sum(j[2::2])
    return [float(v / norm) for v in j[: nmax + 1]]


def test_examples():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(-2, 1.3) == bessel_j(2, 1.3)
    assert bessel_j(1, 0.5) == pytest.approx(0.2422684577, abs=1e-10)


@pytest.mark.parametrize("x", [1e-6, 0.1, 0.5, 1.0, 2.5, 5.0, 7.3, 9.99, -3.7, -10.0])
def test_series_agreement(x):
    vals = bessel_j_orders(20, x)
    for n in range(21):
        ref = series_oracle(n, x)
        assert vals[n] == pytest.approx(ref, rel=1e-10, abs=1e-300)


@pytest.mark.parametrize("x", [10.5, 17.0, 33.3, 48.1, 59.9, -25.25])
def test_recurrence_agreement(x):
    vals = bessel_j_orders(40, x)
    ref = recurrence_oracle(40, x)
    for n in range(41):
        assert vals[n] == pytest.approx(ref[n], rel=1e-10)


def test_reflection_identities():
    for n in range(-8, 9):
        for x in (0.3, 2.0, -4.1):
            assert bessel_j(-n, x) == (-1) ** (n % 2) * bessel_j(n, x)
            assert bessel_j(n, -x) == pytest.approx((-1) ** (n % 2) * bessel_j(n, x), rel=1e-15)


@pytest.mark.parametrize("x", [0.1, 0.5, 2.0, 5.0])
def test_sum_of_squares(x):
    j = bessel_j_orders(60, x)
    assert j[0] ** 2 + 2 * np.sum(j[1:] ** 2) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("x", [0.1, 0.5, 2.0, 5.0, 12.0])
def test_three_term_recurrence(x):
    j = bessel_j_orders(30, x)
    n = np.arange(1, 30)
    np.testing.assert_allclose(j[n - 1] + j[n + 1], 2 * n / x * j[n], atol=1e-10)


def test_range_rejected():
    with pytest.raises(ValueError):
        bessel_j(1, 60.5)
    with pytest.raises(ValueError):
        bessel_j(0, float("nan"))
