"""Adaptive Dormand-Prince 5(4) integrator with output on a fixed grid."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

__all__ = ["Tolerances", "IntegrationError", "dopri54", "dopri54_compiled"]


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Tolerances:
    rtol: float = 1e-11
    atol: float = 1e-13
    h_init: float = 1e-3
    h_min: float = 1e-14
    max_steps: int = 10_000_000
    safety: float = 0.9


# Butcher tableau (Hairer, Norsett & Wanner, table 5.2)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4
_CA = np.array(_C)
_AM = np.zeros((7, 7))
for _i, _row in enumerate(_A):
    _AM[_i, : len(_row)] = _row


def dopri54(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0,
    t_out,
    tol: Tolerances | None = None,
    post_step: Callable[[np.ndarray], np.ndarray] | None = None,
) -> np.ndarray:
    """Integrate ``y' = rhs(t, y)`` and return the state at each time in ``t_out``.

    Steps are clipped so that every output time is hit exactly. ``post_step``
    is applied to each accepted state (e.g. renormalisation onto a manifold).
    """
    tol = tol or Tolerances()
    t_out = np.asarray(t_out, dtype=float)
    y = np.array(y0, dtype=float)
    out = np.empty((t_out.size, y.size))
    t = float(t_out[0])
    out[0] = y
    h = tol.h_init
    k = np.empty((7, y.size))
    k[0] = rhs(t, y)
    steps = 0
    for i in range(1, t_out.size):
        target = float(t_out[i])
        while t < target:
            steps += 1
            if steps > tol.max_steps:
                raise IntegrationError("step limit exceeded")
            clipped = t + h >= target
            hh = target - t if clipped else h
            for s in range(1, 7):
                ys = y + hh * (_AM[s, :s] @ k[:s])
                k[s] = rhs(t + _C[s] * hh, ys)
            y_new = ys  # stage 7 sits at t + hh with the 5th-order weights (FSAL)
            err_vec = hh * (_E @ k)
            scale = tol.atol + tol.rtol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
            if not np.isfinite(err) or not np.all(np.isfinite(y_new)):
                if hh <= tol.h_min:
                    raise IntegrationError("non-finite state")
                h = 0.25 * hh
                continue
            if err <= 1.0:
                t = target if clipped else t + hh
                y = post_step(y_new) if post_step is not None else y_new
                k[0] = rhs(t, y) if post_step is not None else k[6]
                fac = tol.safety * err ** -0.2 if err > 0 else 5.0
                grown = hh * min(5.0, max(0.2, fac))
                # a clipped step says nothing about the natural step size
                h = max(h, grown) if clipped else grown
            else:
                h = hh * max(0.2, tol.safety * err ** -0.2)
                if h < tol.h_min:
                    raise IntegrationError(f"step size underflow at t={t}")
        out[i] = y
    return out


@njit(cache=True)
def _dopri54_core(rhs, args, y0, t_out, rtol, atol, h_init, h_min, max_steps, safety, renormalize):
    # Same scheme as ``dopri54``, compiled; rhs(t, y, args) must be an njit function.
    # Returns (out, status): status 0 ok, 1 step limit, 2 underflow, 3 non-finite.
    n = y0.size
    out = np.empty((t_out.size, n))
    y = y0.copy()
    out[0] = y
    t = t_out[0]
    h = h_init
    k = np.empty((7, n))
    k[0] = rhs(t, y, args)
    ys = np.empty(n)
    steps = 0
    for i in range(1, t_out.size):
        target = t_out[i]
        while t < target:
            steps += 1
            if steps > max_steps:
                return out, 1
            clipped = t + h >= target
            hh = target - t if clipped else h
            for s in range(1, 7):
                for q in range(n):
                    acc = 0.0
                    for r in range(s):
                        acc += _AM[s, r] * k[r, q]
                    ys[q] = y[q] + hh * acc
                k[s] = rhs(t + _CA[s] * hh, ys, args)
            err = 0.0
            finite = True
            for q in range(n):
                e = 0.0
                for r in range(7):
                    e += _E[r] * k[r, q]
                e *= hh
                sc = atol + rtol * max(abs(y[q]), abs(ys[q]))
                err += (e / sc) ** 2
                if not np.isfinite(ys[q]):
                    finite = False
            err = np.sqrt(err / n)
            if not finite or not np.isfinite(err):
                if hh <= h_min:
                    return out, 3
                h = 0.25 * hh
                continue
            if err <= 1.0:
                t = target if clipped else t + hh
                y[:] = ys
                if renormalize:
                    nrm = np.sqrt(np.sum(y * y))
                    y /= nrm
                    k[0] = rhs(t, y, args)
                else:
                    k[0] = k[6]
                fac = safety * err ** -0.2 if err > 0 else 5.0
                grown = hh * min(5.0, max(0.2, fac))
                h = max(h, grown) if clipped else grown
            else:
                h = hh * max(0.2, safety * err ** -0.2)
                if h < h_min:
                    return out, 2
        out[i] = y
    return out, 0


def dopri54_compiled(rhs, args, y0, t_out, tol: Tolerances | None = None, renormalize: bool = False) -> np.ndarray:
    """Compiled variant of :func:`dopri54` for an njit ``rhs(t, y, args)``."""
    tol = tol or Tolerances()
    out, status = _dopri54_core(
        rhs,
        np.asarray(args, dtype=float),
        np.array(y0, dtype=float),
        np.asarray(t_out, dtype=float),
        tol.rtol,
        tol.atol,
        tol.h_init,
        tol.h_min,
        tol.max_steps,
        tol.safety,
        renormalize,
    )
    if status:
        raise IntegrationError(
            {1: "step limit exceeded", 2: "step size underflow", 3: "non-finite state"}[status]
        )
    return out
