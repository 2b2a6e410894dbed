"""Figure workflows: modulation sweeps and a small deterministic SVG plotter."""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .modindex import AmplitudeLaw, FrequencyLaw, Tone, modulation_indexes
from .spectrum import Truncation, UndefinedRatioError, nfam_spectrum, nfm_spectrum, sideband_ratio
from .synth import SamplingPlan, measure_modulation, nfam_waveform

__all__ = ["SweepRow", "sweep_modulation", "sweep_to_csv", "render_plot", "MODES"]

MODES = ("NFM", "NFAM", "numeric")
SWEEP_HEADER = ["Am_mA", "fcI_GHz", "psi1", "psi2"]


@dataclass(frozen=True)
class SweepRow:
    Am: float
    fcI: float
    psi1: float | None
    psi2: float | None


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("NFAM_THREADS", "")))
    except ValueError:
        return min(4, os.cpu_count() or 1)


def _ratio(spec, l):
    try:
        return sideband_ratio(spec, l)
    except UndefinedRatioError:
        return None


def _sweep_point(flaw, alaw, fm, Am, mode, trunc, plan) -> SweepRow:
    tone = Tone(Am, fm)
    if mode == "numeric":
        meas = measure_modulation(nfam_waveform(flaw, alaw, tone, plan), fm, 2)
        return SweepRow(Am, meas.fcI, meas.psi.get(1), meas.psi.get(2))
    idx = modulation_indexes(flaw, tone, alaw)
    spec = nfm_spectrum(alaw.Ac, idx, trunc) if mode == "NFM" else nfam_spectrum(idx, trunc)
    if Am == 0:
        return SweepRow(Am, idx.fcI, None, None)
    return SweepRow(Am, idx.fcI, _ratio(spec, 1), _ratio(spec, 2))


def sweep_modulation(
    flaw: FrequencyLaw,
    alaw: AmplitudeLaw,
    fm: float,
    Am_list: Sequence[float],
    mode: str = "NFAM",
    trunc: Truncation | None = None,
    plan: SamplingPlan | None = None,
    window: float = 1.5,
) -> list[SweepRow]:
    """Carrier shift and first/second sideband ratios against tone amplitude.

    ``numeric`` synthesises the combined FM-AM waveform and measures it;
    the other modes use the analytic engines. Rows follow ``Am_list`` order.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    for Am in Am_list:
        if Am < 0:
            raise ValueError("tone amplitudes must be >= 0")
        if Am > window:
            raise ValueError(f"Am={Am} mA exceeds the {window} mA law window")
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(
            pool.map(lambda a: _sweep_point(flaw, alaw, fm, float(a), mode, trunc, plan), Am_list)
        )


def _cell(x) -> str:
    return "" if x is None else repr(float(x))


def sweep_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([_cell(r.Am), _cell(r.fcI), _cell(r.psi1), _cell(r.psi2)])
    return buf.getvalue()


# plotting ---------------------------------------------------------------

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 150, 30, 50
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    if hi == lo:
        return np.array([lo])
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = np.ceil(lo / step) * step
    return np.arange(start, hi + 0.5 * step, step)


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def render_plot(
    table_csv: str,
    x: str,
    y: Sequence[str],
    labels: Sequence[str] | None = None,
    title: str = "",
    xlabel: str | None = None,
    ylabel: str = "",
) -> str:
    """Line chart of CSV columns as an SVG document.

    Empty cells are skipped; any other non-numeric cell is an error.
    """
    rows = list(csv.DictReader(io.StringIO(table_csv)))
    if not rows:
        raise ValueError("no data rows")
    for col in [x, *y]:
        if col not in rows[0]:
            raise KeyError(f"missing column {col!r}")
    labels = list(labels) if labels else list(y)

    def num(v, col):
        if v is None or v.strip() == "":
            return None
        try:
            return float(v)
        except ValueError:
            raise ValueError(f"non-numeric cell {v!r} in column {col!r}") from None

    series = []
    for col in y:
        pts = []
        for r in rows:
            xv, yv = num(r[x], x), num(r[col], col)
            if xv is not None and yv is not None:
                pts.append((xv, yv))
        series.append(pts)
    allx = [p[0] for s in series for p in s] or [0.0]
    ally = [p[1] for s in series for p in s] or [0.0]
    x0, x1 = min(allx), max(allx)
    y0, y1 = min(ally), max(ally)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def sx(v):
        return _ML + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return _MT + (y1 - v) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        px = sx(t)
        out.append(f'<line x1="{px:.2f}" y1="{_MT + ph}" x2="{px:.2f}" y2="{_MT + ph + 5}" stroke="black"/>')
        out.append(
            f'<text x="{px:.2f}" y="{_MT + ph + 18}" font-size="11" text-anchor="middle">{_fmt(t)}</text>'
        )
    for t in _ticks(y0, y1):
        py = sy(t)
        out.append(f'<line x1="{_ML - 5}" y1="{py:.2f}" x2="{_ML}" y2="{py:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{_ML - 8}" y="{py + 4:.2f}" font-size="11" text-anchor="end">{_fmt(t)}</text>'
        )
    out.append(
        f'<text x="{_ML + pw / 2:.1f}" y="{_H - 10}" font-size="12" text-anchor="middle">{escape(xlabel or x)}</text>'
    )
    if ylabel:
        out.append(
            f'<text x="15" y="{_MT + ph / 2:.1f}" font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 15 {_MT + ph / 2:.1f})">{escape(ylabel)}</text>'
        )
    if title:
        out.append(f'<text x="{_W / 2:.1f}" y="18" font-size="14" text-anchor="middle">{escape(title)}</text>')
    for i, (pts, label) in enumerate(zip(series, labels)):
        color = _COLORS[i % len(_COLORS)]
        if pts:
            coords = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in pts)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        ly = _MT + 15 + 18 * i
        out.append(
            f'<line x1="{_W - _MR + 10}" y1="{ly}" x2="{_W - _MR + 35}" y2="{ly}" stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="{_W - _MR + 40}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
