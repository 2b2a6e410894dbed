"""Time-domain synthesis and numerical spectral estimation.

Waveforms are sampled on ``t_i = i * dt`` with zero initial phase. Line
amplitudes are measured by coherent single-frequency projection over an
integer number of tone periods; the Hann periodogram is only used to locate
peaks.
"""
from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .modindex import AmplitudeLaw, FrequencyLaw, Tone, modulation_indexes

__all__ = [
    "TimeSeries",
    "SamplingPlan",
    "NyquistError",
    "PeakNotFoundError",
    "Periodogram",
    "tone_eval",
    "instantaneous_frequency",
    "closed_form_phase",
    "nfm_waveform",
    "nfam_waveform",
    "phase_from_samples",
    "line_projection",
    "periodogram",
    "refine_peak",
    "image_leakage_bound",
    "measure_modulation",
]

NOISE_FLOOR = 1e-6
LOWER_LINE_FLOOR = 1e-12


class NyquistError(ValueError):
    pass


class PeakNotFoundError(RuntimeError):
    pass


@dataclass(frozen=True)
class TimeSeries:
    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if s.ndim != 1 or s.size < 2:
            raise ValueError("a time series needs at least 2 samples")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)

    @property
    def duration(self) -> float:
        """Window length ``N * dt``."""
        return self.samples.size * self.dt

    def tail(self, fraction: float) -> "TimeSeries":
        """Drop the leading ``fraction`` of samples (transient cut)."""
        start = int(round(fraction * len(self)))
        return TimeSeries(self.t0 + start * self.dt, self.dt, self.samples[start:])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t_ns", "value"])
        for t, v in zip(self.t, self.samples):
            w.writerow([repr(float(t)), repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TimeSeries":
        rows = list(csv.reader(io.StringIO(text)))
        if rows[0] != ["t_ns", "value"]:
            raise ValueError(f"unexpected header {rows[0]}")
        t = np.array([float(r[0]) for r in rows[1:]])
        v = np.array([float(r[1]) for r in rows[1:]])
        if t.size < 2:
            raise ValueError("a time series needs at least 2 samples")
        dt = (t[-1] - t[0]) / (t.size - 1)
        if not np.allclose(np.diff(t), dt, rtol=1e-6, atol=1e-12):
            raise ValueError("time samples are not uniform")
        return cls(float(t[0]), float(dt), v)


@dataclass(frozen=True)
class SamplingPlan:
    """Uniform grid spanning ``tone_periods`` periods of the modulating tone."""

    samples_per_tone_period: int = 128
    tone_periods: int = 1024

    def __post_init__(self):
        n = self.samples_per_tone_period
        if n < 2 or n & (n - 1):
            raise ValueError("samples_per_tone_period must be a power of two")
        if self.tone_periods < 1:
            raise ValueError("tone_periods must be >= 1")

    def check(self, fm: float, fmax: float) -> None:
        nyq = 0.5 * self.samples_per_tone_period * fm
        if not nyq > fmax:
            raise NyquistError(
                f"Nyquist {nyq:g} GHz does not exceed highest line {fmax:g} GHz"
            )

    def grid(self, fm: float, fmax: float | None = None) -> tuple[float, int]:
        """Return ``(dt, n_samples)``; validates Nyquist when ``fmax`` is given."""
        if fmax is not None:
            self.check(fm, fmax)
        dt = 1.0 / (fm * self.samples_per_tone_period)
        return dt, self.samples_per_tone_period * self.tone_periods


def tone_eval(tone: Tone, t):
    return tone.Am * np.cos(2 * np.pi * tone.fm * np.asarray(t, dtype=float))


def instantaneous_frequency(law: FrequencyLaw, m):
    return law(m)


def _highest_line(flaw: FrequencyLaw, tone: Tone, extra_harmonics: int) -> float:
    m = np.linspace(-tone.Am, tone.Am, 257)
    return float(np.max(flaw(m))) + (extra_harmonics + 4) * tone.fm


def closed_form_phase(flaw: FrequencyLaw, tone: Tone, t) -> np.ndarray:
    """``2 pi f_cI t + sum_h beta_h sin(h w_m t)``."""
    t = np.asarray(t, dtype=float)
    idx = modulation_indexes(flaw, tone)
    phase = 2 * np.pi * idx.fcI * t
    for h, b in enumerate(idx.beta):
        if h and b:
            phase = phase + b * np.sin(h * tone.omega * t)
    return phase


def nfm_waveform(Ac: float, law: FrequencyLaw, tone: Tone, plan: SamplingPlan | None = None) -> TimeSeries:
    plan = plan or SamplingPlan()
    dt, n = plan.grid(tone.fm, _highest_line(law, tone, law.order))
    t = dt * np.arange(n)
    return TimeSeries(0.0, dt, Ac * np.cos(closed_form_phase(law, tone, t)))


def nfam_waveform(
    flaw: FrequencyLaw, alaw: AmplitudeLaw, tone: Tone, plan: SamplingPlan | None = None
) -> TimeSeries:
    plan = plan or SamplingPlan()
    dt, n = plan.grid(tone.fm, _highest_line(flaw, tone, flaw.order + alaw.order))
    t = dt * np.arange(n)
    envelope = alaw(tone_eval(tone, t))
    return TimeSeries(0.0, dt, envelope * np.cos(closed_form_phase(flaw, tone, t)))


def phase_from_samples(law: FrequencyLaw, m_samples: TimeSeries) -> TimeSeries:
    """Phase ``2 pi int_0^t f_i(m(tau)) dtau`` for an arbitrary sampled drive.

    Cumulative trapezoid with the Euler-Maclaurin end correction, which lifts
    the error from O(dt^2) to O(dt^4). The constant carrier term is added
    analytically so the running sum stays small.
    """
    if len(m_samples) < 2:
        raise ValueError("need at least 2 samples")
    dt = m_samples.dt
    g = law(m_samples.samples) - law.fc
    cum = np.concatenate([[0.0], np.cumsum(0.5 * dt * (g[1:] + g[:-1]))])
    if g.size >= 3:
        dg = np.gradient(g, dt, edge_order=2)
        cum -= dt * dt / 12.0 * (dg - dg[0])
    tau = dt * np.arange(g.size)
    phase = 2 * np.pi * (law.fc * tau + cum)
    return TimeSeries(m_samples.t0, dt, phase)


def line_projection(ts: TimeSeries, freqs, fm: float | None = None) -> np.ndarray:
    """Coherent line amplitudes ``|(2/T) sum_i s_i exp(-2j pi f t_i) dt|``.

    When ``fm`` is given, a window that is not an integer number of tone
    periods triggers a warning.
    """
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    if freqs.size == 0:
        raise ValueError("no frequencies to project")
    T = ts.duration
    if fm is not None:
        periods = T * fm
        if abs(periods - round(periods)) > 1e-6:
            warnings.warn(
                f"window holds {periods:.6f} tone periods; projection is not coherent",
                stacklevel=2,
            )
    t = ts.t - ts.t0
    s = ts.samples
    out = np.empty(freqs.size)
    for i, f in enumerate(freqs):
        # reference at the window start keeps the phase argument small
        z = np.dot(s, np.exp(-2j * np.pi * f * t))
        out[i] = 2.0 * abs(z) / s.size
    return out


@dataclass(frozen=True)
class Periodogram:
    freqs: np.ndarray
    amplitude: np.ndarray

    @property
    def df(self) -> float:
        return float(self.freqs[1] - self.freqs[0])

    def peaks(self, threshold: float = NOISE_FLOOR, min_bin: int = 3) -> list[tuple[float, float]]:
        """Peak ``(frequency, amplitude)`` pairs with parabolic bin interpolation."""
        a = self.amplitude
        idx, _ = find_peaks(a, height=threshold)
        out = []
        for k in idx:
            if k < min_bin or k >= a.size - 1:
                continue
            y0, y1, y2 = a[k - 1], a[k], a[k + 1]
            denom = y0 - 2 * y1 + y2
            p = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
            out.append((float(self.freqs[k] + p * self.df), float(y1 - 0.25 * (y0 - y2) * p)))
        return out

    def dominant_peak(self, threshold: float = NOISE_FLOOR) -> tuple[float, float]:
        pk = self.peaks(threshold)
        if not pk:
            raise PeakNotFoundError("no dominant peak above the noise floor")
        return max(pk, key=lambda x: x[1])


def periodogram(ts: TimeSeries, detrend: bool = True) -> Periodogram:
    """Single-sided Hann-windowed magnitude spectrum.

    A pure cosine of amplitude ``a`` on a bin centre reads ``a``.
    """
    s = ts.samples
    if s.size < 256:
        raise ValueError("periodogram needs at least 256 samples")
    if detrend:
        s = s - s.mean()
    w = np.hanning(s.size)
    spec = np.abs(np.fft.rfft(s * w)) * 2.0 / w.sum()
    freqs = np.fft.rfftfreq(s.size, ts.dt)
    return Periodogram(freqs, spec)


def refine_peak(ts: TimeSeries, f0: float, width: float | None = None, tol: float = 1e-10) -> float:
    """Sharpen a peak frequency by repeated 3-point quadratic fits of the projection.

    ``width`` is the initial half spacing (default one bin, ``1/T``); it shrinks
    geometrically until below ``tol`` GHz.
    """
    h = width if width is not None else 1.0 / ts.duration
    f = f0
    while h > tol:
        y0, y1, y2 = line_projection(ts, [f - h, f, f + h])
        denom = y0 - 2 * y1 + y2
        if denom < 0:
            step = 0.5 * h * (y0 - y2) / denom
            f += float(np.clip(step, -h, h))
        elif y0 > y1 or y2 > y1:
            f += h if y2 > y0 else -h
            continue
        h *= 0.25
    return f


def image_leakage_bound(ts: TimeSeries, f_probe: float, f_line: float, amplitude: float) -> float:
    """Worst-case projection at ``f_probe`` caused by the negative-frequency image of a line."""
    sin = abs(np.sin(np.pi * (f_probe + f_line) * ts.dt))
    return amplitude / (len(ts) * max(sin, 1e-300))


@dataclass(frozen=True)
class Measurement:
    fcI: float
    psi: dict

    def to_dict(self) -> dict:
        return {"fcI_GHz": self.fcI, "psi": {str(k): v for k, v in self.psi.items()}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def measure_modulation(ts: TimeSeries, fm: float, l_max: int = 2) -> Measurement:
    """Estimate the shifted carrier and the sideband ratios of a waveform.

    A ratio is left out of ``psi`` when its lower line is below ``1e-12`` or
    below three times the carrier image leakage at that frequency.
    """
    periods = ts.duration * fm
    if abs(periods - round(periods)) > 1e-6:
        warnings.warn("window is not an integer number of tone periods", stacklevel=2)
    f0, _ = periodogram(ts).dominant_peak()
    fc = refine_peak(ts, f0)
    carrier = float(line_projection(ts, [fc])[0])
    psi = {}
    for l in range(1, l_max + 1):
        up, lo = line_projection(ts, [fc + l * fm, fc - l * fm])
        floor = max(LOWER_LINE_FLOOR, 3 * image_leakage_bound(ts, fc - l * fm, fc, carrier))
        if lo < floor:
            continue
        psi[l] = float(up / lo)
    return Measurement(fc, psi)
