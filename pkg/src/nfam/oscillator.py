"""Synthetic oscillators: an exact polynomial-law device and a macrospin STO.

The macrospin model integrates the Landau-Lifshitz-Gilbert equation with a
Slonczewski torque for a single free-layer moment. Fields are expressed as
``mu0 H`` in tesla and the gyromagnetic ratio as ``gamma / 2 pi`` in GHz/T,
so angular rates come out in rad/ns.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields
from math import cos, radians, sin

import numpy as np
from numba import njit
from scipy.optimize import brentq

from .integrate import IntegrationError, Tolerances, dopri54_compiled
from .modindex import AmplitudeLaw, FrequencyLaw, Tone
from .synth import SamplingPlan, TimeSeries, closed_form_phase, phase_from_samples, tone_eval

__all__ = [
    "DriveCurrent",
    "DriveWindowError",
    "MacrospinConfig",
    "MacrospinTrace",
    "polynomial_oscillator",
    "slonczewski_sigma",
    "pl_equilibrium",
    "field_vector",
    "magnetic_energy",
    "llgs_rhs",
    "macrospin_run",
]

MU0 = 4e-7 * np.pi
MU_B = 9.2740100783e-24  # J/T
E_CHARGE = 1.602176634e-19  # C


class DriveWindowError(ValueError):
    pass


@dataclass(frozen=True)
class DriveCurrent:
    """``I(t) = I_dc + Am cos(2 pi fm t)``; ``tone`` is ``None`` for pure dc."""

    I_dc: float
    tone: Tone | None = None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        base = np.full_like(t, self.I_dc)
        return base + tone_eval(self.tone, t) if self.tone is not None else base


def polynomial_oscillator(
    flaw: FrequencyLaw,
    alaw: AmplitudeLaw,
    drive: DriveCurrent,
    plan: SamplingPlan | None = None,
    window: float = 1.5,
    f_ref: float = 0.5,
) -> TimeSeries:
    """Device whose frequency and amplitude follow the two laws exactly.

    The grid is set by the drive tone, or by ``f_ref`` for a dc drive. The
    phase uses the closed form when the drive is a tone centred on the law
    bias, and quadrature of the sampled drive otherwise.
    """
    plan = plan or SamplingPlan()
    fm = drive.tone.fm if drive.tone is not None else f_ref
    Am = drive.tone.Am if drive.tone is not None else 0.0
    offset = drive.I_dc - flaw.bias
    mm = np.linspace(offset - Am, offset + Am, 257)
    dt, n = plan.grid(fm, float(np.max(flaw(mm))) + (flaw.order + alaw.order + 4) * fm)
    t = dt * np.arange(n)
    m = drive(t) - flaw.bias
    bad = np.flatnonzero(np.abs(m) > window * (1 + 1e-12))
    if bad.size:
        i = bad[0]
        raise DriveWindowError(
            f"drive leaves the +/-{window} mA law window at t={t[i]:.6g} ns (I={m[i] + flaw.bias:.6g} mA)"
        )
    if drive.tone is not None and offset == 0.0:
        phase = closed_form_phase(flaw, drive.tone, t)
    else:
        phase = phase_from_samples(flaw, TimeSeries(0.0, dt, m)).samples
    return TimeSeries(0.0, dt, alaw(m) * np.cos(phase))


@dataclass(frozen=True)
class MacrospinConfig:
    mu0_Ms: float = 0.7  # T
    d_FL: float = 5.0  # nm
    R_c: float = 20.0  # nm
    epsilon: float = 0.25
    g_lande: float = 2.0
    alpha: float = 0.01
    H_ext: float = 0.8  # T
    H_angle: float = 80.0  # degrees out of plane
    gamma_GHz_per_T: float = 28.024
    mu0_Ms_PL: float = 1.88  # T
    demag: bool = True

    def __post_init__(self):
        for name in ("mu0_Ms", "d_FL", "R_c", "g_lande", "gamma_GHz_per_T", "mu0_Ms_PL"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("epsilon", "alpha", "H_ext"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0.0 <= self.H_angle <= 90.0:
            raise ValueError("H_angle must lie in [0, 90] degrees")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "MacrospinConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


def field_vector(cfg: MacrospinConfig) -> np.ndarray:
    """External field (T) in the x-z plane, ``H_angle`` above the film plane."""
    a = radians(cfg.H_angle)
    return cfg.H_ext * np.array([cos(a), 0.0, sin(a)])


def slonczewski_sigma(cfg: MacrospinConfig) -> float:
    """Spin-torque prefactor ``eps g mu_B / (2 e M0 S d_FL)`` in SI, 1/(A s)."""
    M0 = cfg.mu0_Ms / MU0
    S = np.pi * (cfg.R_c * 1e-9) ** 2
    return cfg.epsilon * cfg.g_lande * MU_B / (2 * E_CHARGE * M0 * S * cfg.d_FL * 1e-9)


def pl_equilibrium(H_ext, mu0_Ms_PL: float, xtol: float = 1e-15) -> np.ndarray:
    """Pinned-layer direction solving ``p x H_eff = 0`` with thin-film demag.

    ``H_eff = H_ext - mu0_Ms_PL p_z z``. The minimum lies between the film
    plane and the field direction, found by bracketing the energy derivative
    in the elevation angle.
    """
    H = np.asarray(H_ext, dtype=float)
    B = float(np.linalg.norm(H))
    if not B > 0:
        raise ValueError("|H_ext| must be > 0")
    h_ip = float(np.hypot(H[0], H[1]))
    theta_h = float(np.arctan2(abs(H[2]), h_ip))
    sign_z = 1.0 if H[2] >= 0 else -1.0
    azim = np.array([H[0], H[1], 0.0]) / h_ip if h_ip > 0 else np.array([1.0, 0.0, 0.0])

    def energy(psi):
        return -B * (np.cos(psi) * cos(theta_h) + np.sin(psi) * sin(theta_h)) + 0.5 * mu0_Ms_PL * np.sin(psi) ** 2

    def dE(psi):
        return -B * (-sin(psi) * cos(theta_h) + cos(psi) * sin(theta_h)) + mu0_Ms_PL * sin(psi) * cos(psi)

    # coarse scan picks the minimising basin, brentq polishes the stationary point
    grid = np.linspace(0.0, theta_h, 2049)
    i = int(np.argmin(energy(grid)))
    psi = float(grid[i])
    for lo, hi in ((i - 1, i), (i, i + 1)):
        if lo < 0 or hi >= grid.size:
            continue
        a, b = grid[lo], grid[hi]
        if dE(a) < 0 < dE(b):
            psi = brentq(dE, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
            break
    if abs(psi - np.pi / 2) < 1e-12:
        return np.array([0.0, 0.0, sign_z])
    return cos(psi) * azim + np.array([0.0, 0.0, sign_z * sin(psi)])


def magnetic_energy(m, cfg: MacrospinConfig) -> np.ndarray:
    """Zeeman plus thin-film demag energy density in units of ``M0 * tesla``."""
    m = np.atleast_2d(m)
    e = -m @ field_vector(cfg)
    if cfg.demag:
        e = e + 0.5 * cfg.mu0_Ms * m[:, 2] ** 2
    return e


@dataclass(frozen=True)
class MacrospinTrace:
    t: np.ndarray
    m: np.ndarray
    p: np.ndarray

    @property
    def gmr(self) -> TimeSeries:
        """Read-out ``(1 - cos phi) / 2`` with ``cos phi = m . p``."""
        return TimeSeries(float(self.t[0]), float(self.t[1] - self.t[0]), 0.5 * (1.0 - self.m @ self.p))

    def component(self, i: int) -> TimeSeries:
        return TimeSeries(float(self.t[0]), float(self.t[1] - self.t[0]), self.m[:, i])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t_ns", "mx", "my", "mz", "gmr"])
        g = self.gmr.samples
        for i in range(self.t.size):
            w.writerow([repr(float(self.t[i]))] + [repr(float(x)) for x in self.m[i]] + [repr(float(g[i]))])
        return buf.getvalue()


@njit(cache=True)
def _llgs_rhs(t, y, args):
    gam, hx, hy, hz, ms, a, stt, px, py, pz, I_dc, Am, fm = args
    mx, my, mz = y[0], y[1], y[2]
    Hz = hz - ms * mz
    # precession gam * (H x m)
    ax = gam * (hy * mz - Hz * my)
    ay = gam * (Hz * mx - hx * mz)
    az = gam * (hx * my - hy * mx)
    I = I_dc + Am * np.cos(2 * np.pi * fm * t)
    if I != 0.0:
        # m x (m x p) = (m.p) m - p
        s = stt * I
        mp = mx * px + my * py + mz * pz
        ax += s * (mp * mx - px)
        ay += s * (mp * my - py)
        az += s * (mp * mz - pz)
    # Gilbert form solved explicitly: (A + alpha m x A) / (1 + alpha^2)
    norm = 1.0 / (1.0 + a * a)
    out = np.empty(3)
    out[0] = norm * (ax + a * (my * az - mz * ay))
    out[1] = norm * (ay + a * (mz * ax - mx * az))
    out[2] = norm * (az + a * (mx * ay - my * ax))
    return out


def _llgs_args(cfg: MacrospinConfig, p, drive: DriveCurrent) -> np.ndarray:
    hx, hy, hz = field_vector(cfg)
    Am, fm = (drive.tone.Am, drive.tone.fm) if drive.tone is not None else (0.0, 0.0)
    return np.array(
        [
            2 * np.pi * cfg.gamma_GHz_per_T,  # rad/(ns T)
            hx,
            hy,
            hz,
            cfg.mu0_Ms if cfg.demag else 0.0,
            cfg.alpha,
            # sigma [1/(A s)] * I [mA] -> rate in 1/ns
            slonczewski_sigma(cfg) * 1e-12,
            *np.asarray(p, dtype=float),
            drive.I_dc,
            Am,
            fm,
        ]
    )


def llgs_rhs(cfg: MacrospinConfig, p, drive: DriveCurrent | None = None):
    """Right-hand side ``dm/dt`` as a plain Python callable ``f(t, m)``."""
    args = _llgs_args(cfg, p, drive or DriveCurrent(0.0))
    return lambda t, y: _llgs_rhs(t, np.asarray(y, dtype=float), args)


def macrospin_run(
    cfg: MacrospinConfig,
    p=None,
    drive: DriveCurrent | None = None,
    duration: float = 20.0,
    tol: Tolerances | None = None,
    dt_out: float = 1 / 128,
    m0=None,
    renormalize: bool = True,
) -> MacrospinTrace:
    """Integrate the macrospin LLGS equation and sample it every ``dt_out`` ns.

    ``p`` defaults to the pinned-layer equilibrium in the external field and
    ``m0`` to the field direction tilted 10 degrees toward the film plane.
    """
    if p is None:
        p = pl_equilibrium(field_vector(cfg), cfg.mu0_Ms_PL)
    p = np.asarray(p, dtype=float)
    drive = drive or DriveCurrent(0.0)
    if m0 is None:
        a = radians(max(cfg.H_angle - 10.0, 0.0))
        m0 = np.array([cos(a), 0.0, sin(a)])
    m0 = np.asarray(m0, dtype=float)
    if abs(np.linalg.norm(m0) - 1.0) > 1e-9:
        raise ValueError("initial magnetization must be a unit vector")
    n = int(round(duration / dt_out)) + 1
    t = dt_out * np.arange(n)
    m = dopri54_compiled(_llgs_rhs, _llgs_args(cfg, p, drive), m0, t, tol, renormalize)
    if not np.all(np.isfinite(m)):
        raise IntegrationError("non-finite magnetization")
    return MacrospinTrace(t, m, p)
