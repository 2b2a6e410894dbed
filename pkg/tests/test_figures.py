import json
import re

import numpy as np
import pytest

from nfam import cli
from nfam.figures import render_plot, sweep_modulation, sweep_to_csv
from nfam.identify import BiasSweep
from nfam.modindex import Tone, modulation_indexes
from nfam.spectrum import nfam_spectrum
from nfam.synth import SamplingPlan, TimeSeries, nfam_waveform


def test_sweep_nfm_vs_nfam(flaw, alaw):
    nfm = sweep_modulation(flaw, alaw, 0.5, [0.0, 1.5], "NFM")
    nfam = sweep_modulation(flaw, alaw, 0.5, [0.0, 1.5], "NFAM")
    assert [r.fcI for r in nfm] == [r.fcI for r in nfam]
    assert nfm[0].fcI == 17.725 and nfm[0].psi1 is None and nfm[0].psi2 is None
    assert abs(nfm[1].psi1 - nfam[1].psi1) > 1.0
    assert abs(nfm[1].psi2 - nfam[1].psi2) > 1.0


def test_sweep_numeric_agrees_with_nfam(flaw, alaw):
    num = sweep_modulation(flaw, alaw, 0.5, [0.0, 1.0], "numeric")
    ana = sweep_modulation(flaw, alaw, 0.5, [1.0], "NFAM")[0]
    assert num[0].fcI == pytest.approx(17.725, abs=1e-6)
    assert num[0].psi1 is None
    assert num[1].psi1 == pytest.approx(ana.psi1, rel=0.025)


def test_sweep_rows_follow_input_order(flaw, alaw, monkeypatch):
    monkeypatch.setenv("NFAM_THREADS", "3")
    amps = [1.5, 0.0, 0.75, 0.25]
    rows = sweep_modulation(flaw, alaw, 0.5, amps, "NFAM")
    assert [r.Am for r in rows] == amps


def test_sweep_validation(flaw, alaw):
    with pytest.raises(ValueError):
        sweep_modulation(flaw, alaw, 0.5, [2.0], "NFAM")
    with pytest.raises(ValueError):
        sweep_modulation(flaw, alaw, 0.5, [-0.1], "NFAM")
    with pytest.raises(ValueError):
        sweep_modulation(flaw, alaw, 0.5, [0.1], "AM")


def test_sweep_csv(flaw, alaw):
    text = sweep_to_csv(sweep_modulation(flaw, alaw, 0.5, [0.0, 0.5], "NFAM"))
    lines = text.splitlines()
    assert lines[0] == "Am_mA,fcI_GHz,psi1,psi2"
    assert lines[1] == "0.0,17.725,,"


def _polylines(svg):
    return [p.split() for p in re.findall(r'points="([^"]*)"', svg)]


def test_plot_two_rows():
    svg = render_plot("a,b,c\n0,1,2\n1,3,5\n", "a", ["b", "c"])
    lines = _polylines(svg)
    assert len(lines) == 2
    assert all(len(pts) == 2 for pts in lines)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_plot_one_column_one_polyline():
    assert len(_polylines(render_plot("a,b\n0,1\n1,3\n", "a", ["b"]))) == 1


def test_plot_red_shift_is_monotone(flaw, alaw):
    table = sweep_to_csv(sweep_modulation(flaw, alaw, 0.5, list(np.linspace(0, 1.5, 7)), "NFAM"))
    (pts,) = _polylines(render_plot(table, "Am_mA", ["fcI_GHz"]))
    xs = [float(p.split(",")[0]) for p in pts]
    ys = [float(p.split(",")[1]) for p in pts]
    assert xs == sorted(xs)
    # SVG y grows downward: a decreasing frequency means increasing y
    assert all(b > a for a, b in zip(ys, ys[1:]))


def test_plot_errors():
    with pytest.raises(ValueError, match="no data rows"):
        render_plot("a,b\n", "a", ["b"])
    with pytest.raises(KeyError):
        render_plot("a,b\n0,1\n", "a", ["z"])
    with pytest.raises(ValueError, match="non-numeric"):
        render_plot("a,b\n0,x\n", "a", ["b"])


def test_plot_deterministic():
    text = "a,b\n0,1\n1,3\n2,\n"
    assert render_plot(text, "a", ["b"], title="t") == render_plot(text, "a", ["b"], title="t")


# CLI -------------------------------------------------------------------------


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_indexes_golden(capsys, flaw, alaw):
    code, out, _ = run(capsys, "indexes", "--set", "tone.Am_mA=1.5")
    assert code == 0
    assert json.loads(out) == modulation_indexes(flaw, Tone(1.5, 0.5), alaw).to_dict()


def test_cli_spectrum_golden(capsys, flaw, alaw):
    code, out, _ = run(capsys, "spectrum")
    assert code == 0
    assert out == nfam_spectrum(modulation_indexes(flaw, Tone(1.0, 0.5), alaw)).to_csv()
    code, out, _ = run(capsys, "spectrum", "--set", "format=json", "--set", "mode=NFM")
    assert code == 0 and set(json.loads(out)) == {"fcI_GHz", "fm_GHz", "lines"}


def test_cli_sweep_and_plot(capsys, tmp_path, flaw, alaw):
    table = tmp_path / "sweep.csv"
    assert cli.main(["sweep", "--out", str(table)]) == 0
    expected = sweep_to_csv(sweep_modulation(flaw, alaw, 0.5, [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5], "NFAM"))
    assert table.read_text() == expected
    cfg = tmp_path / "plot.json"
    cfg.write_text(json.dumps({"table": str(table), "x": "Am_mA", "y": ["psi1", "psi2"]}))
    svg1, svg2 = tmp_path / "a.svg", tmp_path / "b.svg"
    assert cli.main(["plot", "--config", str(cfg), "--out", str(svg1)]) == 0
    assert cli.main(["plot", "--config", str(cfg), "--out", str(svg2)]) == 0
    assert svg1.read_bytes() == svg2.read_bytes()


def test_cli_synth_and_project(capsys, tmp_path, flaw, alaw):
    trace = tmp_path / "trace.csv"
    plan = ["--set", "plan.tone_periods=64"]
    assert cli.main(["synth", *plan, "--out", str(trace)]) == 0
    ts = TimeSeries.from_csv(trace.read_text())
    ref = nfam_waveform(flaw, alaw, Tone(1.0, 0.5), SamplingPlan(128, 64))
    np.testing.assert_allclose(ts.samples, ref.samples, rtol=0, atol=0)
    code, out, _ = run(capsys, "project", "--set", f"trace={trace}")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"fcI_GHz", "psi"} and set(doc["psi"]) == {"1", "2"}
    code, out, _ = run(capsys, "project", "--set", f"trace={trace}", "--set", "freqs_GHz=[17.7179]")
    assert code == 0 and out.splitlines()[0] == "f_GHz,amplitude"


def test_cli_identify(capsys, tmp_path, flaw, alaw):
    cur = np.linspace(16.5, 19.5, 13)
    sweep = BiasSweep(18.0, tuple(zip(cur, flaw(cur - 18), alaw(cur - 18))))
    path = tmp_path / "sweep.csv"
    path.write_text(sweep.to_csv())
    code, out, _ = run(capsys, "identify", "--set", f"sweep={path}")
    assert code == 0
    doc = json.loads(out)
    np.testing.assert_allclose(doc["frequency_law"]["coeffs"], flaw.coeffs, atol=1e-8)
    np.testing.assert_allclose(doc["amplitude_law"]["coeffs"], alaw.coeffs, atol=1e-8)


def test_cli_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--set", "device=macrospin", "--set", "duration_ns=1")
    assert code == 0
    assert out.splitlines()[0] == "t_ns,mx,my,mz,gmr"
    code, out, _ = run(capsys, "simulate", "--set", "plan.tone_periods=4")
    assert code == 0 and out.splitlines()[0] == "t_ns,value"


def test_cli_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--set", "bogus=1")
    assert code == 2 and "bogus" in err
    code, _, _ = run(capsys, "sweep", "--set", "Am_mA=[3.0]")
    assert code == 2
    code, _, _ = run(capsys, "simulate", "--set", "I_dc_mA=25")
    assert code == 2
    flat = tmp_path / "flat.csv"
    flat.write_text(TimeSeries(0.0, 1 / 64, np.full(4096, 0.2)).to_csv())
    code, _, err = run(capsys, "project", "--set", f"trace={flat}")
    assert code == 3 and "numerical" in err


def test_cli_determinism(capsys):
    _, a, _ = run(capsys, "spectrum", "--set", "tone.Am_mA=0.75")
    _, b, _ = run(capsys, "spectrum", "--set", "tone.Am_mA=0.75")
    assert a == b
