"""Synthesize modulated waveforms and measure them like a simulation trace.

The time-domain NFAM signal is projected onto its own line frequencies and
the sideband ratios are compared with both analytic models. Pass an output
path to also write an SVG of the sweep.
"""

import sys

from nfam import NANOCONTACT_AMPLITUDE_LAW, NANOCONTACT_FREQUENCY_LAW
from nfam.figures import render_plot, sweep_modulation, sweep_to_csv

amps = [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5]
tables = {
    mode: sweep_modulation(NANOCONTACT_FREQUENCY_LAW, NANOCONTACT_AMPLITUDE_LAW, 0.5, amps, mode)
    for mode in ("NFM", "NFAM", "numeric")
}

print(f"{'Am':>5} {'psi1 NFM':>9} {'psi1 NFAM':>10} {'psi1 num':>9} {'psi2 NFM':>9} {'psi2 NFAM':>10} {'psi2 num':>9}")
for i, Am in enumerate(amps):
    r = {m: t[i] for m, t in tables.items()}
    if r["NFM"].psi1 is None:
        print(f"{Am:5.2f}  (unmodulated)")
        continue
    print(
        f"{Am:5.2f} {r['NFM'].psi1:9.4f} {r['NFAM'].psi1:10.4f} {r['numeric'].psi1:9.4f}"
        f" {r['NFM'].psi2:9.4f} {r['NFAM'].psi2:10.4f} {r['numeric'].psi2:9.4f}"
    )

if len(sys.argv) > 1:
    rows = ["Am_mA,NFM,NFAM,numeric"]
    for i, Am in enumerate(amps[1:], start=1):
        rows.append(f"{Am},{tables['NFM'][i].psi1},{tables['NFAM'][i].psi1},{tables['numeric'][i].psi1}")
    svg = render_plot("\n".join(rows) + "\n", "Am_mA", ["NFM", "NFAM", "numeric"],
                      title="first-order sideband ratio", xlabel="Am (mA)", ylabel="psi1")
    with open(sys.argv[1], "w") as fh:
        fh.write(svg)
    print(f"wrote {sys.argv[1]}")
    print(sweep_to_csv(tables["numeric"]), end="")
