"""Integer-order Bessel functions of the first kind.

Values come from Miller's backward recurrence normalised with
``J_0 + 2 sum_k J_2k = 1``. The recurrence is stable for the minimal
solution, so small high-order values keep full relative accuracy.
"""
from __future__ import annotations

import numpy as np

__all__ = ["bessel_j", "bessel_j_orders", "MAX_ARGUMENT"]

MAX_ARGUMENT = 60.0


def _start_order(nmax: int, x: float) -> int:
    # Start well past both nmax and the turning point |x|; tail then
    # contributes below double precision.
    n = max(nmax, int(abs(x))) + 30 + int(2.0 * np.sqrt(nmax + abs(x) + 1.0) * 4)
    return n + (n % 2)


def bessel_j_orders(nmax: int, x: float) -> np.ndarray:
    """Return ``[J_0(x), J_1(x), ..., J_nmax(x)]``."""
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    x = float(x)
    if not np.isfinite(x) or abs(x) > MAX_ARGUMENT:
        raise ValueError(f"|x| must be <= {MAX_ARGUMENT}, got {x}")
    out = np.zeros(nmax + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    ax = abs(x)
    top = _start_order(nmax, ax)
    vals = np.zeros(top + 2)
    vals[top] = 1e-300
    norm = 0.0
    for k in range(top, 0, -1):
        vals[k - 1] = (2.0 * k / ax) * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > 1e250:
            # rescale to avoid overflow
            vals[k - 1 :] *= 1e-250
            norm *= 1e-250
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * vals[k - 1]
    norm += vals[0]
    out[:] = vals[: nmax + 1] / norm
    if x < 0:
        out[1::2] *= -1.0
    return out


def bessel_j(n: int, x: float) -> float:
    """Bessel function ``J_n(x)`` for integer ``n`` and real ``|x| <= 60``.

    Negative orders use ``J_{-n}(x) = (-1)**n J_n(x)``.
    """
    n = int(n)
    v = bessel_j_orders(abs(n), x)[abs(n)]
    if n < 0 and n % 2:
        v = -v
    return float(v)
