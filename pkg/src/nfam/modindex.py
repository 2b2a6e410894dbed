"""Modulation indexes from polynomial frequency/amplitude laws.

Units are fixed package-wide: GHz, ns, mA. Amplitudes are dimensionless
(arbitrary units), so ``GHz * ns == 1`` and phases need no conversion factor.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

__all__ = [
    "Tone",
    "FrequencyLaw",
    "AmplitudeLaw",
    "ModulationIndexes",
    "power_reduction",
    "beta_indexes",
    "gamma_indexes",
    "central_frequency",
    "modulation_indexes",
    "NANOCONTACT_FREQUENCY_LAW",
    "NANOCONTACT_AMPLITUDE_LAW",
]


@dataclass(frozen=True)
class Tone:
    """Single-tone modulating signal ``m(t) = Am cos(2 pi fm t)``."""

    Am: float
    fm: float

    def __post_init__(self):
        if not self.Am >= 0:
            raise ValueError(f"tone amplitude must be >= 0, got {self.Am}")
        if not self.fm > 0:
            raise ValueError(f"tone frequency must be > 0, got {self.fm}")

    @property
    def omega(self) -> float:
        return 2 * np.pi * self.fm

    def to_dict(self) -> dict:
        return {"Am_mA": self.Am, "fm_GHz": self.fm}

    @classmethod
    def from_dict(cls, d: dict) -> "Tone":
        return cls(float(d["Am_mA"]), float(d["fm_GHz"]))


@dataclass(frozen=True)
class _PolynomialLaw:
    bias: float
    coeffs: tuple = field(default=())

    def __post_init__(self):
        c = tuple(float(x) for x in self.coeffs)
        if not c:
            raise ValueError("a law needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, m):
        """Evaluate the polynomial at modulating value(s) ``m`` (Horner)."""
        m = np.asarray(m, dtype=float)
        out = np.zeros_like(m)
        for c in reversed(self.coeffs):
            out = out * m + c
        return out if out.ndim else float(out)

    def to_dict(self) -> dict:
        return {"bias_mA": self.bias, "coeffs": list(self.coeffs)}

    @classmethod
    def from_dict(cls, d: dict):
        return cls(float(d["bias_mA"]), tuple(d["coeffs"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class FrequencyLaw(_PolynomialLaw):
    """Instantaneous frequency ``f_i(m) = sum_h k_h m**h`` in GHz.

    ``coeffs[0]`` is the un-modulated carrier frequency and ``coeffs[h]`` the
    h-th order frequency sensitivity in GHz/mA**h.
    """

    def __post_init__(self):
        super().__post_init__()
        if not self.coeffs[0] > 0:
            raise ValueError("carrier frequency k[0] must be positive")

    @property
    def fc(self) -> float:
        return self.coeffs[0]


@dataclass(frozen=True)
class AmplitudeLaw(_PolynomialLaw):
    """Carrier envelope ``A_c(m) = sum_k lambda_k m**k``."""

    def __post_init__(self):
        super().__post_init__()
        if not self.coeffs[0] > 0:
            raise ValueError("carrier amplitude lambda[0] must be positive")

    @property
    def Ac(self) -> float:
        return self.coeffs[0]


@dataclass(frozen=True)
class ModulationIndexes:
    """Phase indexes ``beta``, envelope indexes ``gamma`` and shifted carrier.

    ``beta[0]`` is always zero. ``gamma`` may be empty when only a frequency
    law was supplied (pure nonlinear FM).
    """

    beta: tuple
    gamma: tuple
    fcI: float
    fm: float

    def to_dict(self) -> dict:
        return {
            "beta": list(self.beta),
            "gamma": list(self.gamma),
            "fcI_GHz": self.fcI,
            "fm_GHz": self.fm,
        }


# Coefficient set identified at the 18 mA bias point of the nanocontact device.
NANOCONTACT_FREQUENCY_LAW = FrequencyLaw(18.0, (17.725, 0.155, -0.013, 0.00883, -0.0016))
NANOCONTACT_AMPLITUDE_LAW = AmplitudeLaw(18.0, (0.34341, 0.0535, -0.014, 0.0007))


def power_reduction(h: int) -> np.ndarray:
    """Coefficients ``c`` with ``cos(x)**h == sum_j c[j] cos(j x)``.

    >>> power_reduction(4)
    array([0.375, 0.   , 0.5  , 0.   , 0.125])
    """
    if h < 0:
        raise ValueError("power must be >= 0")
    c = np.zeros(h + 1)
    scale = 2.0 ** (1 - h)
    for j in range(h % 2, h + 1, 2):
        c[j] = scale * comb(h, (h - j) // 2)
    if h % 2 == 0:
        c[0] = 2.0 ** (-h) * comb(h, h // 2)
    return c


def _harmonic_sums(coeffs: Sequence[float], Am: float) -> np.ndarray:
    """``s[j] = sum_h coeffs[h] Am**h c_{h,j}``: harmonic content of ``P(Am cos x)``."""
    n = len(coeffs)
    s = np.zeros(n)
    for h, k in enumerate(coeffs):
        if k == 0.0:
            continue
        s[: h + 1] += k * Am**h * power_reduction(h)
    return s


def beta_indexes(law: FrequencyLaw, tone: Tone) -> np.ndarray:
    """Frequency modulation indexes ``beta[0..v]`` (dimensionless, signed)."""
    s = _harmonic_sums(law.coeffs, tone.Am)
    beta = np.zeros_like(s)
    j = np.arange(1, len(s))
    beta[1:] = s[1:] / (j * tone.fm)
    return beta


def gamma_indexes(law: AmplitudeLaw, tone: Tone) -> np.ndarray:
    """Amplitude modulation indexes ``gamma[0..u]``: cosine-series envelope."""
    return _harmonic_sums(law.coeffs, tone.Am)


def central_frequency(law: FrequencyLaw, Am: float) -> float:
    """Shifted carrier ``f_cI``: the mean instantaneous frequency over a tone period.

    Only even-order coefficients contribute.
    """
    if Am < 0:
        raise ValueError("Am must be >= 0")
    fcI = 0.0
    for h in range(0, law.order + 1, 2):
        fcI += law.coeffs[h] * Am**h * power_reduction(h)[0]
    return fcI


def modulation_indexes(
    flaw: FrequencyLaw, tone: Tone, alaw: AmplitudeLaw | None = None
) -> ModulationIndexes:
    beta = beta_indexes(flaw, tone)
    gamma = gamma_indexes(alaw, tone) if alaw is not None else np.zeros(0)
    return ModulationIndexes(
        tuple(beta), tuple(gamma), central_frequency(flaw, tone.Am), tone.fm
    )
