"""``nfam`` command line: thin wrappers that read a JSON config and emit CSV/JSON/SVG.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import copy
import json
import sys
from pathlib import Path

import jsonschema

from . import figures, identify, oscillator, spectrum, synth
from .integrate import IntegrationError, Tolerances
from .modindex import (
    NANOCONTACT_AMPLITUDE_LAW,
    NANOCONTACT_FREQUENCY_LAW,
    AmplitudeLaw,
    FrequencyLaw,
    Tone,
    modulation_indexes,
)

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3

_num = {"type": "number"}
_int = {"type": "integer"}
_str = {"type": "string"}


def _obj(props: dict, required=()) -> dict:
    return {"type": "object", "properties": props, "required": list(required), "additionalProperties": False}


LAW = _obj({"bias_mA": _num, "coeffs": {"type": "array", "items": _num, "minItems": 1}}, ["bias_mA", "coeffs"])
TONE = _obj({"Am_mA": _num, "fm_GHz": _num}, ["Am_mA", "fm_GHz"])
PLAN = _obj({"samples_per_tone_period": _int, "tone_periods": _int})
TRUNC = _obj({"bessel_tail_eps": _num, "min_order": _int})
MODE2 = {"enum": ["NFM", "NFAM"]}

_laws = {"frequency_law": LAW, "amplitude_law": LAW}
_default_laws = {"frequency_law": NANOCONTACT_FREQUENCY_LAW.to_dict(), "amplitude_law": NANOCONTACT_AMPLITUDE_LAW.to_dict()}

SCHEMAS = {
    "indexes": _obj({**_laws, "tone": TONE}),
    "spectrum": _obj({**_laws, "tone": TONE, "mode": MODE2, "Ac": _num, "truncation": TRUNC, "format": {"enum": ["csv", "json"]}}),
    "synth": _obj({**_laws, "tone": TONE, "mode": MODE2, "Ac": _num, "plan": PLAN}),
    "project": _obj(
        {"trace": _str, "fm_GHz": _num, "freqs_GHz": {"type": "array", "items": _num}, "l_max": _int, "transient": _num},
        ["trace"],
    ),
    "identify": _obj({"sweep": _str, "bias_mA": _num, "window_mA": _num, "v": _int, "u": _int}, ["sweep"]),
    "simulate": _obj(
        {
            "device": {"enum": ["polynomial", "macrospin"]},
            **_laws,
            "I_dc_mA": _num,
            "tone": {"oneOf": [TONE, {"type": "null"}]},
            "plan": PLAN,
            "window_mA": _num,
            "macrospin": {"type": "object"},
            "duration_ns": _num,
            "dt_ns": _num,
            "rtol": _num,
            "atol": _num,
        }
    ),
    "sweep": _obj(
        {
            **_laws,
            "fm_GHz": _num,
            "Am_mA": {"type": "array", "items": _num, "minItems": 1},
            "mode": {"enum": list(figures.MODES)},
            "plan": PLAN,
            "truncation": TRUNC,
        }
    ),
    "plot": _obj(
        {
            "table": _str,
            "x": _str,
            "y": {"type": "array", "items": _str, "minItems": 1},
            "labels": {"type": "array", "items": _str},
            "title": _str,
            "xlabel": _str,
            "ylabel": _str,
        },
        ["table", "x", "y"],
    ),
}

DEFAULTS = {
    "indexes": {**_default_laws, "tone": {"Am_mA": 1.0, "fm_GHz": 0.5}},
    "spectrum": {**_default_laws, "tone": {"Am_mA": 1.0, "fm_GHz": 0.5}, "mode": "NFAM", "format": "csv"},
    "synth": {**_default_laws, "tone": {"Am_mA": 1.0, "fm_GHz": 0.5}, "mode": "NFAM"},
    "project": {"fm_GHz": 0.5, "l_max": 2, "transient": 0.0},
    "identify": {"bias_mA": 18.0, "window_mA": 1.5, "v": 4, "u": 3},
    "simulate": {**_default_laws, "device": "polynomial", "I_dc_mA": 18.0, "tone": None, "window_mA": 1.5,
                 "duration_ns": 20.0, "dt_ns": 1 / 128},
    "sweep": {**_default_laws, "fm_GHz": 0.5, "Am_mA": [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5], "mode": "NFAM"},
    "plot": {},
}


class ConfigError(ValueError):
    pass


def _set_dotted(d: dict, key: str, value) -> None:
    parts = key.split(".")
    for p in parts[:-1]:
        d = d.setdefault(p, {})
    d[parts[-1]] = value


def load_config(command: str, path: str | None, overrides=()) -> dict:
    """Merge defaults, the JSON file and ``KEY=VALUE`` overrides, then validate."""
    cfg = copy.deepcopy(DEFAULTS[command])
    if path:
        user = json.loads(Path(path).read_text())
        if not isinstance(user, dict):
            raise ConfigError("config must be a JSON object")
        cfg.update(user)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not KEY=VALUE")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        _set_dotted(cfg, key, value)
    try:
        jsonschema.validate(cfg, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid {command} config: {exc.message}") from None
    return cfg


def _laws(cfg):
    return FrequencyLaw.from_dict(cfg["frequency_law"]), AmplitudeLaw.from_dict(cfg["amplitude_law"])


def _plan(cfg):
    return synth.SamplingPlan(**cfg.get("plan", {}))


def _trunc(cfg):
    return spectrum.Truncation(**cfg.get("truncation", {}))


def run_indexes(cfg) -> str:
    flaw, alaw = _laws(cfg)
    return json.dumps(modulation_indexes(flaw, Tone.from_dict(cfg["tone"]), alaw).to_dict(), indent=2) + "\n"


def run_spectrum(cfg) -> str:
    flaw, alaw = _laws(cfg)
    idx = modulation_indexes(flaw, Tone.from_dict(cfg["tone"]), alaw)
    if cfg["mode"] == "NFM":
        spec = spectrum.nfm_spectrum(cfg.get("Ac", alaw.Ac), idx, _trunc(cfg))
    else:
        spec = spectrum.nfam_spectrum(idx, _trunc(cfg))
    return spec.to_csv() if cfg["format"] == "csv" else spec.to_json() + "\n"


def run_synth(cfg) -> str:
    flaw, alaw = _laws(cfg)
    tone = Tone.from_dict(cfg["tone"])
    if cfg["mode"] == "NFM":
        ts = synth.nfm_waveform(cfg.get("Ac", alaw.Ac), flaw, tone, _plan(cfg))
    else:
        ts = synth.nfam_waveform(flaw, alaw, tone, _plan(cfg))
    return ts.to_csv()


def run_project(cfg) -> str:
    ts = synth.TimeSeries.from_csv(Path(cfg["trace"]).read_text())
    if cfg["transient"]:
        ts = ts.tail(cfg["transient"])
    if "freqs_GHz" in cfg:
        amps = synth.line_projection(ts, cfg["freqs_GHz"], cfg["fm_GHz"])
        lines = ["f_GHz,amplitude"] + [f"{f!r},{float(a)!r}" for f, a in zip(cfg["freqs_GHz"], amps)]
        return "\n".join(lines) + "\n"
    return synth.measure_modulation(ts, cfg["fm_GHz"], cfg["l_max"]).to_json() + "\n"


def run_identify(cfg) -> str:
    sweep = identify.BiasSweep.from_csv(Path(cfg["sweep"]).read_text(), cfg["bias_mA"], cfg["window_mA"])
    flaw, alaw = identify.build_laws(sweep, cfg["v"], cfg["u"])
    return json.dumps({"frequency_law": flaw.to_dict(), "amplitude_law": alaw.to_dict()}, indent=2) + "\n"


def run_simulate(cfg) -> str:
    tone = Tone.from_dict(cfg["tone"]) if cfg.get("tone") else None
    drive = oscillator.DriveCurrent(cfg["I_dc_mA"], tone)
    if cfg["device"] == "polynomial":
        flaw, alaw = _laws(cfg)
        return oscillator.polynomial_oscillator(flaw, alaw, drive, _plan(cfg), cfg["window_mA"]).to_csv()
    mcfg = oscillator.MacrospinConfig.from_dict(cfg.get("macrospin", {}))
    tol = Tolerances(**{k: cfg[k] for k in ("rtol", "atol") if k in cfg})
    trace = oscillator.macrospin_run(mcfg, None, drive, cfg["duration_ns"], tol, cfg["dt_ns"])
    return trace.to_csv()


def run_sweep(cfg) -> str:
    flaw, alaw = _laws(cfg)
    rows = figures.sweep_modulation(
        flaw, alaw, cfg["fm_GHz"], cfg["Am_mA"], cfg["mode"], _trunc(cfg), _plan(cfg)
    )
    return figures.sweep_to_csv(rows)


def run_plot(cfg) -> str:
    return figures.render_plot(
        Path(cfg["table"]).read_text(),
        cfg["x"],
        cfg["y"],
        cfg.get("labels"),
        cfg.get("title", ""),
        cfg.get("xlabel"),
        cfg.get("ylabel", ""),
    )


COMMANDS = {
    "indexes": (run_indexes, "modulation indexes and shifted carrier (JSON)"),
    "spectrum": (run_spectrum, "analytic NFM/NFAM line spectrum (CSV or JSON)"),
    "synth": (run_synth, "synthesised modulated waveform (CSV)"),
    "project": (run_project, "line projection / modulation measurement of a trace"),
    "identify": (run_identify, "fit frequency and amplitude laws from a bias sweep"),
    "simulate": (run_simulate, "polynomial or macrospin oscillator trace (CSV)"),
    "sweep": (run_sweep, "carrier shift and sideband ratios versus Am (CSV)"),
    "plot": (run_plot, "render a CSV table as an SVG line chart"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nfam", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", metavar="PATH", help="JSON parameter document")
        p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                       help="override a config entry (dotted key, JSON value)")
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    func = COMMANDS[args.command][0]
    try:
        cfg = load_config(args.command, args.config, args.set)
        text = func(cfg)
    except (IntegrationError, synth.PeakNotFoundError, FloatingPointError, RuntimeError) as exc:
        print(f"nfam: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError, TypeError, OSError) as exc:
        print(f"nfam: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
