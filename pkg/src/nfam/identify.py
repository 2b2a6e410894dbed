"""Identification of the frequency and amplitude laws from a dc bias sweep."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .modindex import AmplitudeLaw, FrequencyLaw
from .synth import PeakNotFoundError, TimeSeries, line_projection, periodogram, refine_peak

__all__ = [
    "BiasSweep",
    "PolynomialFit",
    "InsufficientDataError",
    "fit_polynomial_law",
    "build_laws",
    "operating_point_from_trace",
]

DEFAULT_WINDOW = 1.5  # mA


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class BiasSweep:
    """Operating points ``(I, f, A)`` measured around the bias ``I_dc0``.

    Every current must satisfy ``|I - I_dc0| <= window``.
    """

    bias: float
    points: tuple = field(default=())
    window: float = DEFAULT_WINDOW

    def __post_init__(self):
        pts = tuple((float(i), float(f), float(a)) for i, f, a in self.points)
        for i, _, _ in pts:
            if abs(i - self.bias) > self.window * (1 + 1e-12):
                raise ValueError(
                    f"current {i} mA is outside the +/-{self.window} mA window around {self.bias} mA"
                )
        object.__setattr__(self, "points", pts)

    @property
    def currents(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([p[2] for p in self.points])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["I_mA", "f_GHz", "A_arb"])
        for p in self.points:
            w.writerow([repr(x) for x in p])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, bias: float, window: float = DEFAULT_WINDOW) -> "BiasSweep":
        rows = list(csv.reader(io.StringIO(text)))
        if rows[0] != ["I_mA", "f_GHz", "A_arb"]:
            raise ValueError(f"unexpected header {rows[0]}")
        return cls(bias, tuple(tuple(float(x) for x in r) for r in rows[1:] if r), window)


@dataclass(frozen=True)
class PolynomialFit:
    coeffs: np.ndarray
    residuals: np.ndarray
    condition: float


def fit_polynomial_law(x, y, x0: float, degree: int, scale: float | None = None) -> PolynomialFit:
    """Least-squares polynomial in ``x - x0``.

    The abscissa is centred and divided by ``scale`` (default: half the data
    span) before a QR solve; coefficients are mapped back to powers of
    ``x - x0``.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D arrays of equal length")
    if np.unique(x).size < degree + 1:
        raise InsufficientDataError(
            f"insufficient distinct abscissae: {np.unique(x).size} for degree {degree}"
        )
    u = x - x0
    if scale is None:
        scale = float(np.max(np.abs(u))) or 1.0
    V = np.vander(u / scale, degree + 1, increasing=True)
    Q, R = np.linalg.qr(V)
    c = np.linalg.solve(R, Q.T @ y)
    coeffs = c / scale ** np.arange(degree + 1)
    return PolynomialFit(coeffs, y - V @ c, float(np.linalg.cond(V)))


def build_laws(sweep: BiasSweep, v: int = 4, u: int = 3) -> tuple[FrequencyLaw, AmplitudeLaw]:
    """Fit ``f_i(m)`` (order ``v``) and ``A_c(m)`` (order ``u``) with ``m = I - I_dc0``."""
    x = sweep.currents
    ff = fit_polynomial_law(x, sweep.frequencies, sweep.bias, v, scale=sweep.window)
    fa = fit_polynomial_law(x, sweep.amplitudes, sweep.bias, u, scale=sweep.window)
    return FrequencyLaw(sweep.bias, tuple(ff.coeffs)), AmplitudeLaw(sweep.bias, tuple(fa.coeffs))


def operating_point_from_trace(ts: TimeSeries, transient: float = 0.2) -> tuple[float, float]:
    """Carrier frequency and line amplitude of a free-running (dc-driven) trace."""
    ts = ts.tail(transient) if transient else ts
    f0, _ = periodogram(ts).dominant_peak()
    if f0 * ts.duration < 64:
        raise PeakNotFoundError("trace shorter than 64 carrier periods")
    f = refine_peak(ts, f0)
    return f, float(line_projection(ts, [f])[0])
