"""Analytic line spectra of nonlinear FM and combined FM-AM signals.

A single-tone drive turns the phase into ``sum_h beta_h sin(h w_m t)`` and the
envelope into ``sum_k gamma_k cos(k w_m t)``. Expanding each phase harmonic with
the Jacobi-Anger identity gives lines at ``f_cI + n f_m``.

Spectra are single-sided: a cosine of amplitude ``a`` is one line of height
``a``. The negative-frequency images are folded away; cross-talk between the
``+f_cI`` and ``-f_cI`` images is neglected (their separation is ~2 f_c).
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .bessel import bessel_j_orders
from .modindex import ModulationIndexes

__all__ = [
    "Truncation",
    "LineSpectrum",
    "UndefinedRatioError",
    "phase_line_coefficients",
    "nfm_spectrum",
    "nfam_spectrum",
    "sideband_ratio",
]

# aggregated lines below this magnitude are dropped
LINE_FLOOR = 1e-16


class UndefinedRatioError(ValueError):
    """Raised when a sideband ratio has no (or a zero) lower sideband."""


@dataclass(frozen=True)
class Truncation:
    bessel_tail_eps: float = 1e-14
    min_order: int = 2

    def __post_init__(self):
        if not self.bessel_tail_eps > 0:
            raise ValueError("bessel_tail_eps must be > 0")
        if self.min_order < 1:
            raise ValueError("min_order must be >= 1")

    def order_for(self, beta: float) -> int:
        """Smallest order past ``|beta|`` whose Bessel value is below the tail bound."""
        n = self.min_order
        while True:
            vals = bessel_j_orders(n, beta)
            if n > abs(beta) and abs(vals[n]) < self.bessel_tail_eps:
                return n
            n += 1


@dataclass(frozen=True)
class LineSpectrum:
    """Discrete spectrum: line ``n`` sits at ``fcI + n * fm``."""

    fcI: float
    fm: float
    signed_coeffs: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        coeffs = {int(n): float(c) for n, c in sorted(self.signed_coeffs.items())}
        for n in coeffs:
            if self.fcI + n * self.fm <= 0:
                raise ValueError(
                    f"line {n} falls at non-positive frequency {self.fcI + n * self.fm}"
                )
        object.__setattr__(self, "signed_coeffs", coeffs)

    @property
    def lines(self) -> dict[int, float]:
        return {n: abs(c) for n, c in self.signed_coeffs.items()}

    def amplitude(self, n: int) -> float:
        return abs(self.signed_coeffs.get(n, 0.0))

    def frequency(self, n: int) -> float:
        return self.fcI + n * self.fm

    @property
    def orders(self) -> np.ndarray:
        return np.array(sorted(self.signed_coeffs), dtype=int)

    def power(self) -> float:
        """Sum of squared line amplitudes."""
        return float(sum(c * c for c in self.signed_coeffs.values()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["f_GHz", "amplitude", "n"])
        for n in self.orders:
            w.writerow([repr(float(self.frequency(n))), repr(self.amplitude(n)), int(n)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "fcI_GHz": self.fcI,
            "fm_GHz": self.fm,
            "lines": [{"n": int(n), "amp": self.amplitude(n)} for n in self.orders],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "LineSpectrum":
        # magnitudes only; signs are not part of the wire format
        return cls(
            float(d["fcI_GHz"]),
            float(d["fm_GHz"]),
            {int(x["n"]): float(x["amp"]) for x in d["lines"]},
        )


def _harmonic_kernel(beta: float, h: int, trunc: Truncation) -> tuple[int, np.ndarray]:
    """Bessel weights for one phase harmonic, placed on the ``n`` grid.

    Returns ``(half_width, kernel)`` where ``kernel[half_width + h*z] = J_z(beta)``.
    """
    N = trunc.order_for(beta)
    j = bessel_j_orders(N, beta)
    kernel = np.zeros(2 * h * N + 1)
    z = np.arange(-N, N + 1)
    vals = np.concatenate([j[:0:-1] * (-1.0) ** np.arange(N, 0, -1), j])
    kernel[h * N + h * z] = vals
    return h * N, kernel


def phase_line_coefficients(
    beta: Sequence[float], fm: float | None = None, trunc: Truncation | None = None
) -> dict[int, float]:
    """Signed line weights ``B_n`` of ``exp(i sum_h beta_h sin(h x))``.

    ``B_n`` sums ``prod_h J_{z_h}(beta_h)`` over all multi-indices with
    ``sum_h h z_h = n``; it is evaluated as a chain of discrete convolutions.
    ``beta[0]`` is ignored. ``fm`` is accepted for interface symmetry only.
    """
    trunc = trunc or Truncation()
    beta = list(beta)
    if len(beta) == 0:
        raise ValueError("beta must not be empty")
    offset = 0
    acc = np.ones(1)
    for h, b in enumerate(beta[1:], start=1):
        if b == 0.0:
            continue
        half, kernel = _harmonic_kernel(float(b), h, trunc)
        acc = np.convolve(acc, kernel)
        offset += half
    out = {}
    for i, c in enumerate(acc):
        if abs(c) > LINE_FLOOR:
            out[i - offset] = float(c)
    return out


def _positive_lines(coeffs: Mapping[int, float], fcI: float, fm: float) -> dict[int, float]:
    # Lines past f = 0 belong to the neglected image cross-talk.
    return {n: c for n, c in coeffs.items() if fcI + n * fm > 0}


def nfm_spectrum(
    Ac: float, idx: ModulationIndexes, trunc: Truncation | None = None
) -> LineSpectrum:
    """Constant-envelope nonlinear FM: line ``n`` has amplitude ``Ac |B_n|``."""
    if not Ac > 0:
        raise ValueError("Ac must be positive")
    B = phase_line_coefficients(idx.beta, idx.fm, trunc)
    lines = _positive_lines({n: Ac * b for n, b in B.items()}, idx.fcI, idx.fm)
    return LineSpectrum(idx.fcI, idx.fm, lines)


def _envelope_mix(B: Mapping[int, float], gamma: Sequence[float]) -> dict[int, float]:
    out: dict[int, float] = {}
    for n, b in B.items():
        out[n] = out.get(n, 0.0) + gamma[0] * b
        for k in range(1, len(gamma)):
            g = 0.5 * gamma[k] * b
            if g == 0.0:
                continue
            out[n + k] = out.get(n + k, 0.0) + g
            out[n - k] = out.get(n - k, 0.0) + g
    return out


def nfam_spectrum(idx: ModulationIndexes, trunc: Truncation | None = None) -> LineSpectrum:
    """Combined nonlinear FM-AM spectrum.

    The signed coefficient at ``n`` is
    ``gamma_0 B_n + sum_{k>=1} gamma_k/2 (B_{n-k} + B_{n+k})``.
    """
    if len(idx.gamma) == 0:
        raise ValueError("nfam_spectrum needs amplitude indexes (gamma)")
    B = phase_line_coefficients(idx.beta, idx.fm, trunc)
    mixed = {n: c for n, c in _envelope_mix(B, idx.gamma).items() if abs(c) > LINE_FLOOR}
    lines = _positive_lines(mixed, idx.fcI, idx.fm)
    return LineSpectrum(idx.fcI, idx.fm, lines)


def sideband_ratio(spec: LineSpectrum, l: int) -> float:
    """Upper-to-lower amplitude ratio of the ``l``-th sideband pair."""
    if l < 1:
        raise ValueError("sideband order must be >= 1")
    lower = spec.amplitude(-l)
    if -l not in spec.signed_coeffs or lower == 0.0:
        raise UndefinedRatioError(f"lower sideband {-l} is missing or zero")
    return spec.amplitude(l) / lower
