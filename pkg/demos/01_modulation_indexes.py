"""Modulation indexes and the carrier red shift for the nanocontact laws.

Prints the phase and envelope indexes over the drive range and the shifted
carrier frequency, which falls as the drive grows because both even
frequency coefficients are negative.
"""

import numpy as np

from nfam import NANOCONTACT_AMPLITUDE_LAW, NANOCONTACT_FREQUENCY_LAW, Tone, modulation_indexes

fm = 0.5
print(f"{'Am':>5} {'fcI (GHz)':>12} {'shift (MHz)':>12}  beta1..beta4 / gamma0..gamma3")
for Am in np.linspace(0.0, 1.5, 7):
    idx = modulation_indexes(NANOCONTACT_FREQUENCY_LAW, Tone(float(Am), fm), NANOCONTACT_AMPLITUDE_LAW)
    shift = (idx.fcI - NANOCONTACT_FREQUENCY_LAW.fc) * 1e3
    betas = " ".join(f"{b:+.5f}" for b in idx.beta[1:])
    gammas = " ".join(f"{g:+.5f}" for g in idx.gamma)
    print(f"{Am:5.2f} {idx.fcI:12.6f} {shift:12.4f}  {betas} / {gammas}")
